from .dask_computations import *
