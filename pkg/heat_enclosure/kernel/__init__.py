from .bessel import bessel_surface_kernel, bessel_surface_kernel_derivative, j0, j1
from .heat_kernel import (
    DEFAULT_CONFIG,
    KernelSamples,
    eval_G_z,
    eval_K_z,
    eval_K_z_exterior,
    eval_K_z_split,
    eval_w_z,
    grad_K_z,
    kernel_samples,
)
from .checks import run_kernel_checks
