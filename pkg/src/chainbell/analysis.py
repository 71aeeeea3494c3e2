"""Non-signaling distance bound and the self-contradiction check for covariant extensions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chainedbell import InequalityReport, chained_I, minimize_I_over_N


def cr_bound(I_value: float) -> float:
    """Largest variational distance compatible with non-signaling: 3 I / 2."""
    if I_value < 0:
        raise ValueError(f"I must be non-negative, got {I_value}")
    return 1.5 * I_value


@dataclass(frozen=True)
class ExtensionClaim:
    claimed_D: float
    V: float
    Theta: float = math.pi
    N_max: int = 1000

    def __post_init__(self):
        if not 0.0 <= self.claimed_D <= 0.5:
            raise ValueError(f"claimed_D must lie in [0, 0.5], got {self.claimed_D}")
        if not 0.0 <= self.V <= 1.0:
            raise ValueError(f"V must lie in [0, 1], got {self.V}")


@dataclass(frozen=True)
class Verdict:
    claimed_D: float
    V: float
    N_star: int
    I_min: float
    bound: float
    contradictory: bool

    @property
    def margin(self) -> float:
        return self.claimed_D - self.bound

    def to_text(self) -> str:
        head = (
            f"CONTRADICTORY: bound {self.bound:.3f} < claimed {self.claimed_D:g}"
            if self.contradictory
            else f"consistent: claimed {self.claimed_D:g} <= bound {self.bound:.3f}"
        )
        return (
            f"{head}\n"
            f"N_star = {self.N_star}\n"
            f"I_min = {self.I_min:.6f}\n"
            f"bound = {self.bound:.6f}\n"
            f"margin = {self.margin:.6f}\n"
        )

    def csv_row(self) -> tuple:
        return (self.claimed_D, self.V, self.N_star, self.I_min, self.bound, self.contradictory)


VERDICT_CSV_HEADER = ("claimed_D", "V", "N_star", "I_min", "bound", "contradictory")


def check_extension(claim: ExtensionClaim) -> Verdict:
    """Compare a claimed N-independent distance against the tightest bound over N."""
    m = minimize_I_over_N(claim.V, claim.Theta, claim.N_max)
    bound = cr_bound(m.I_min)
    return Verdict(
        claimed_D=claim.claimed_D,
        V=claim.V,
        N_star=m.N_star,
        I_min=m.I_min,
        bound=bound,
        contradictory=claim.claimed_D > bound,
    )


def check_extension_empirical(claimed_D: float, report: InequalityReport, k_sigma: float = 4.0) -> Verdict:
    """Verdict from a measured I: contradiction only when D exceeds the bound by k sigma."""
    bound = cr_bound(report.value_I)
    sigma = 1.5 * report.std_error
    return Verdict(
        claimed_D=claimed_D,
        V=report.V,
        N_star=report.N,
        I_min=report.value_I,
        bound=bound,
        contradictory=claimed_D > bound + k_sigma * sigma,
    )


def admissible_envelope(V: float, Theta: float = math.pi, N_range=range(2, 1001)) -> list[tuple[int, float]]:
    """(N, 3 I(N, Theta) / 2): the ceiling any N-dependent distance must stay under."""
    Ns = np.asarray(list(N_range), dtype=int)
    if Ns.size == 0 or Ns.min() < 2:
        raise ValueError("N_range must be non-empty with N >= 2")
    values = chained_I(Ns, Theta, V)
    return [(int(n), float(1.5 * i)) for n, i in zip(Ns, values)]
