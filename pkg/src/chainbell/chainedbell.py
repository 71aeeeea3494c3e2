"""Interferometer phases, equipartitioned chained settings and closed-form I(N, Theta)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

C_LIGHT = 299_792_458.0  # m/s
TWO_PI = 2.0 * math.pi


def wrap_phase(phi):
    """Reduce a phase (scalar or array) into [0, 2*pi)."""
    out = np.mod(phi, TWO_PI)
    # np.mod can round tiny negatives up to exactly 2*pi
    out = np.where(out >= TWO_PI, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class InterferometerParams:
    omega_A: float
    omega_B: float
    s_A: float = 0.0
    s_B: float = 0.0

    def __post_init__(self):
        if not (self.omega_A > 0 and self.omega_B > 0):
            raise ValueError("angular frequencies must be positive")
        if self.s_A < 0 or self.s_B < 0:
            raise ValueError("short-arm lengths must be non-negative")

    @classmethod
    def from_wavelength(cls, wavelength: float = 1550e-9, s_A: float = 0.1, s_B: float = 0.1):
        omega = TWO_PI * C_LIGHT / wavelength
        return cls(omega, omega, s_A, s_B)


DEFAULT_INTERFEROMETER = InterferometerParams.from_wavelength()


def phase(l_A, l_B, p: InterferometerParams = DEFAULT_INTERFEROMETER):
    """Two-photon interference phase for long arms ``l_A``, ``l_B`` (meters)."""
    raw = p.omega_A * (np.asarray(l_A) - p.s_A) / C_LIGHT + p.omega_B * (np.asarray(l_B) - p.s_B) / C_LIGHT
    return wrap_phase(raw)


def _check_visibility(V):
    if np.any((np.asarray(V) < 0) | (np.asarray(V) > 1)):
        raise ValueError(f"visibility must lie in [0, 1], got {V}")


def prob_equal(phi, V):
    """P(a = b | phi) = (1 + V cos phi) / 2."""
    _check_visibility(V)
    return 0.5 * (1.0 + V * np.cos(phi))


def prob_different(phi, V):
    _check_visibility(V)
    return 0.5 * (1.0 - V * np.cos(phi))


def effective_visibility(V: float, accidental: float = 0.0) -> float:
    """Fold a flat accidental-coincidence fraction into the fringe contrast."""
    if not 0.0 <= accidental < 1.0:
        raise ValueError("accidental fraction must lie in [0, 1)")
    _check_visibility(V)
    return V * (1.0 - accidental)


@dataclass(frozen=True)
class ChainedConfig:
    N: int
    Theta: float = math.pi
    V: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        _check_visibility(self.V)
        if not math.isfinite(self.Theta):
            raise ValueError("Theta must be finite")


@dataclass(frozen=True)
class ChainedSettings:
    """The N Alice and N Bob phase settings of a chained experiment.

    Setting ``l_{2j}`` of the chain is Alice's ``j``-th setting and
    ``l_{2j+1}`` is Bob's ``j``-th setting.
    """

    N: int
    Theta: float
    alice_phases: np.ndarray
    bob_phases: np.ndarray
    alice_long_arms: np.ndarray
    bob_long_arms: np.ndarray

    def pair_phase(self, i: int, j: int) -> float:
        return wrap_phase(self.alice_phases[i] + self.bob_phases[j])

    @property
    def extreme_pair(self) -> tuple[int, int]:
        return (0, self.N - 1)

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """(alice, bob) index pairs for (l_m, l_{m+1}), m = 0 .. 2N-2, in chain order."""
        pairs = []
        for m in range(2 * self.N - 1):
            if m % 2 == 0:
                pairs.append((m // 2, m // 2))
            else:
                pairs.append(((m + 1) // 2, (m - 1) // 2))
        return pairs

    def chain_pairs(self) -> list[tuple[int, int]]:
        """All 2N pairs entering I(N): the extreme pair first, then the adjacent ones."""
        return [self.extreme_pair, *self.adjacent_pairs()]


def equipartition_settings(
    cfg: ChainedConfig, p: InterferometerParams = DEFAULT_INTERFEROMETER
) -> ChainedSettings:
    """Settings with every adjacent pair at phase step Theta/2N.

    Alice's phases step backwards so the phase *sum* of each adjacent pair
    has cosine cos(Theta/2N); the extreme pair lands on (2N-1)Theta/2N.
    """
    if cfg.N < 2:
        raise ValueError("N must be >= 2")
    if not 0 < cfg.Theta <= math.pi:
        raise ValueError(f"Theta must lie in (0, pi], got {cfg.Theta}")
    step = cfg.Theta / (2 * cfg.N)
    j = np.arange(cfg.N)
    x = wrap_phase(-2 * j * step)
    y = wrap_phase((2 * j + 1) * step)
    return ChainedSettings(
        N=cfg.N,
        Theta=cfg.Theta,
        alice_phases=x,
        bob_phases=y,
        alice_long_arms=p.s_A + C_LIGHT * x / p.omega_A,
        bob_long_arms=p.s_B + C_LIGHT * y / p.omega_B,
    )


@dataclass
class InequalityReport:
    N: int
    Theta: float
    V: float
    value_I: float
    std_error: float = 0.0
    terms: dict = field(default_factory=dict)

    @property
    def is_violation(self) -> bool:
        return self.value_I < 1.0

    def violates_at(self, k: float = 4.0) -> bool:
        """I + k sigma < 1."""
        return self.value_I + k * self.std_error < 1.0

    def satisfies_at(self, k: float = 4.0) -> bool:
        """I - k sigma >= 1."""
        return self.value_I - k * self.std_error >= 1.0


def chained_I(N, Theta=math.pi, V=1.0):
    """Closed-form I(N, Theta) for equipartitioned settings; broadcasts over arrays."""
    N = np.asarray(N, dtype=float)
    step = Theta / (2 * N)
    return 0.5 * (1 + V * np.cos(Theta - step)) + (2 * N - 1) / 2 * (1 - V * np.cos(step))


def chained_I_pi(N, V=1.0):
    """I(N, pi) = N (1 - V cos(pi/2N))."""
    N = np.asarray(N, dtype=float)
    return N * (1 - V * np.cos(math.pi / (2 * N)))


def closed_form_I(cfg: ChainedConfig) -> InequalityReport:
    step = cfg.Theta / (2 * cfg.N)
    p_extreme = float(prob_equal((2 * cfg.N - 1) * step, cfg.V))
    p_adjacent = float(prob_different(step, cfg.V))
    value = float(chained_I(cfg.N, cfg.Theta, cfg.V))
    return InequalityReport(
        N=cfg.N,
        Theta=cfg.Theta,
        V=cfg.V,
        value_I=value,
        terms={"extreme_P_equal": p_extreme, "adjacent_P_different": p_adjacent},
    )


@dataclass(frozen=True)
class MinimumResult:
    N_star: int
    I_min: float
    monotone_flag: bool


def minimize_I_over_N(V: float, Theta: float = math.pi, N_max: int = 1000) -> MinimumResult:
    """Exhaustive scan of I(N, Theta) over N = 2 .. N_max; ties go to the smaller N.

    ``monotone_flag`` is set when the minimum sits at ``N_max``, i.e. no
    interior minimum was found in range.
    """
    _check_visibility(V)
    if not 2 <= N_max <= 10**6:
        raise ValueError(f"N_max must lie in [2, 1e6], got {N_max}")
    Ns = np.arange(2, N_max + 1)
    values = chained_I(Ns, Theta, V)
    k = int(np.argmin(values))
    N_star = int(Ns[k])
    return MinimumResult(N_star=N_star, I_min=float(values[k]), monotone_flag=N_star == N_max)


def figure3_curve(V: float, N_max: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """(N, I(N, pi)) for N = 2 .. N_max."""
    _check_visibility(V)
    Ns = np.arange(2, N_max + 1)
    return Ns, chained_I_pi(Ns, V)
