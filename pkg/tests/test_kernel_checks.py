from heat_enclosure.kernel import DEFAULT_CONFIG, run_kernel_checks
from heat_enclosure.kernel.checks import (
    bessel_reduction_check,
    branch_check,
    cancellation_check,
    residual_check,
    scaling_check,
    translation_check,
)
import numpy as np
import pytest


@pytest.mark.parametrize("n", [1, 2])
def test_backward_heat_residual(n):
    rng = np.random.default_rng(11)
    assert residual_check(n, 10, rng, DEFAULT_CONFIG) < 1e-4


@pytest.mark.parametrize("n", [1, 2])
def test_translation_and_scaling_laws(n):
    rng = np.random.default_rng(12)
    assert translation_check(n, 10, rng, DEFAULT_CONFIG) < 1e-9
    assert scaling_check(n, 10, rng, DEFAULT_CONFIG) < 1e-9


@pytest.mark.parametrize("n", [1, 2])
def test_branches_agree(n):
    rng = np.random.default_rng(13)
    assert branch_check(n, 10, rng, DEFAULT_CONFIG) < 10 * DEFAULT_CONFIG.quad_tol
    assert cancellation_check(n, 10, rng, DEFAULT_CONFIG) < 1e-8


def test_bessel_reduction():
    assert bessel_reduction_check(10, np.random.default_rng(14), DEFAULT_CONFIG) < 1e-8


def test_run_kernel_checks():
    checks = run_kernel_checks(count=6, seed=2)
    assert list(checks.columns) == ["check", "n", "samples", "max_error", "tolerance", "passed"]
    assert set(checks.check) == {
        "residual",
        "translation",
        "scaling",
        "branch_consistency",
        "cancellation_guard",
        "bessel_reduction",
        "w_z_real",
    }
    assert checks.passed.all()
