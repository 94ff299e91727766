from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class ConfigMargins:
    m_T: float
    m_U: float
    m_Gamma: float

    @property
    def minimum(self) -> float:
        return min(self.m_T, self.m_U, self.m_Gamma)

    def as_tuple(self) -> tuple[float, float, float]:
        return self.m_T, self.m_U, self.m_Gamma


@dataclass(frozen=True)
class ReconstructionEstimate:
    tau: float
    estimate: complex
    phase_scale: float
    quad_error: float
    method: str = "carleman"

    def __post_init__(self):
        if not np.isfinite(self.estimate):
            raise ValueError(f"Non-finite estimate at tau={self.tau}")
        if not self.quad_error >= 0:
            raise ValueError(f"Quadrature error must be non-negative, got {self.quad_error}")


@dataclass(frozen=True)
class SweepRow:
    tau: float
    estimate: complex
    reference: Optional[float]
    rel_error: float
    quad_error: float
    wall_ms: float = np.nan


@dataclass
class SweepReport:
    rows: list[SweepRow] = field(default_factory=list)
    trend_slope: float = np.nan
    trend_defined: bool = False
    best_row: int = -1
    terminated_early: bool = False

    def __post_init__(self):
        taus = [row.tau for row in self.rows]
        if np.any(np.diff(taus) <= 0):
            raise ValueError(f"Sweep taus must be strictly increasing, got {taus}")

    @property
    def best(self) -> SweepRow:
        return self.rows[self.best_row]

    def extrapolated(self) -> tuple[complex, float]:
        """Richardson estimate assuming an O(1/tau) bias, with an error bar.

        Uses the best row and its predecessor."""
        k = self.best_row % len(self.rows)
        if k == 0:
            return self.rows[0].estimate, np.inf
        r1, r2 = self.rows[k - 1], self.rows[k]
        limit = (r2.tau * r2.estimate - r1.tau * r1.estimate) / (r2.tau - r1.tau)
        return complex(limit), float(abs(limit - r2.estimate))

    def to_dataframe(self, timings: bool = False) -> pd.DataFrame:
        df = pd.DataFrame(
            {
                "tau": [row.tau for row in self.rows],
                "re_estimate": [complex(row.estimate).real for row in self.rows],
                "im_estimate": [complex(row.estimate).imag for row in self.rows],
                "reference": [np.nan if row.reference is None else row.reference for row in self.rows],
                "rel_error": [row.rel_error for row in self.rows],
                "quad_error": [row.quad_error for row in self.rows],
                "wall_ms": [row.wall_ms if timings else np.nan for row in self.rows],
            }
        )
        return df

    def to_csv(self, path, timings: bool = False) -> None:
        self.to_dataframe(timings=timings).to_csv(path, index=False, float_format="%.17g")


@dataclass(frozen=True)
class VisibilityFit:
    mu_fit: float
    C_fit: complex
    per_tau: list[tuple[float, complex]]
    residual: float
    mu_used: float = np.nan
    moments: list[complex] = field(default_factory=list)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "tau": [tau for tau, __ in self.per_tau],
                "re_moment": [np.real(m) for m in self.moments],
                "im_moment": [np.imag(m) for m in self.moments],
                "re_scaled": [np.real(v) for __, v in self.per_tau],
                "im_scaled": [np.imag(v) for __, v in self.per_tau],
            }
        )
