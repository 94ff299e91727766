from .dask_manager import DaskManager
