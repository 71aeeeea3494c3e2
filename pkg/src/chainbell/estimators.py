"""Estimators on simulated counts: empirical I(N), visibility, non-signaling, distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import _check_sample_weight, check_array, check_is_fitted

from .chainedbell import ChainedConfig, InequalityReport, equipartition_settings
from .montecarlo import CountsTable, InsufficientDataError


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    std_error: float
    n: int

    def __str__(self) -> str:
        return f"{self.value:.6g} +/- {self.std_error:.2g} (n={self.n})"


def _proportion(k: int, n: int) -> tuple[float, float]:
    p = k / n
    return p, math.sqrt(p * (1 - p) / n)


def estimate_I(counts: CountsTable, cfg: ChainedConfig, min_trials: int = 100) -> InequalityReport:
    """Plug empirical conditional proportions into the chained sum.

    The extreme pair contributes P(a=b), every adjacent pair P(a!=b);
    binomial standard errors are combined in quadrature.
    """
    settings = equipartition_settings(cfg)
    if counts.shape != (cfg.N, cfg.N):
        raise ValueError(f"counts table shape {counts.shape} does not match N={cfg.N}")
    value = 0.0
    var = 0.0
    terms = {}
    for idx, (i, j) in enumerate(settings.chain_pairs()):
        n = counts.n(i, j)
        if n < min_trials:
            raise InsufficientDataError(
                f"setting pair (alice={i}, bob={j}) has {n} trials, need >= {min_trials}"
            )
        k = counts.n_equal(i, j) if idx == 0 else n - counts.n_equal(i, j)
        p, se = _proportion(k, n)
        terms[(i, j)] = p
        value += p
        var += se * se
    return InequalityReport(N=cfg.N, Theta=cfg.Theta, V=cfg.V, value_I=value, std_error=math.sqrt(var), terms=terms)


class VisibilityRegressor(RegressorMixin, BaseEstimator):
    """Fringe-contrast fit of P(a=b) = (1 + V cos phi)/2 with the offset pinned at 1/2.

    Weighted least squares for the slope V/2 against cos(phi). Weights are
    binomial, with variances evaluated at a preliminary unweighted fit so
    points at P = 0 or 1 do not get infinite weight.

    Parameters
    ----------
    min_points : int
        Minimum number of phase points.
    max_gap : float
        Largest allowed circular gap between phase points (radians); the
        default requires a quarter-period sampling density over a full period.

    Attributes
    ----------
    visibility_ : float
    visibility_std_ : float
    """

    def __init__(self, min_points: int = 8, max_gap: float = math.pi / 2):
        self.min_points = min_points
        self.max_gap = max_gap

    def fit(self, X, y, sample_weight=None):
        """``X``: phases (n,) or (n, 1); ``y``: observed P(a=b); ``sample_weight``: trials per point."""
        phi = check_array(np.asarray(X, dtype=float).reshape(len(X), -1))[:, 0]
        p = check_array(np.asarray(y, dtype=float).reshape(-1, 1))[:, 0]
        n = _check_sample_weight(sample_weight, phi)
        if len(phi) != len(p):
            raise ValueError("X and y have different lengths")
        if len(phi) < self.min_points:
            raise ValueError(f"need >= {self.min_points} phase points, got {len(phi)}")
        c = np.cos(phi)
        if np.ptp(c) < 1e-12:
            raise ValueError("degenerate scan: cos(phi) is constant over all points")
        wrapped = np.sort(np.mod(phi, 2 * math.pi))
        gaps = np.diff(np.append(wrapped, wrapped[0] + 2 * math.pi))
        if gaps.max() > self.max_gap + 1e-12:
            raise ValueError("scan does not span a full period densely enough")

        resid = p - 0.5
        slope0 = np.dot(c, resid) / np.dot(c, c)
        p_model = np.clip(0.5 + slope0 * c, 0.5 / n, 1 - 0.5 / n)
        w = n / (p_model * (1 - p_model))
        info = np.dot(w * c, c)
        slope = np.dot(w * c, resid) / info
        self.visibility_ = float(2 * slope)
        self.visibility_std_ = float(2 / math.sqrt(info))
        self.n_trials_ = int(n.sum())
        return self

    def predict(self, X):
        check_is_fitted(self)
        phi = np.asarray(X, dtype=float).reshape(len(X), -1)[:, 0]
        return 0.5 * (1 + self.visibility_ * np.cos(phi))


def fit_visibility(scan) -> EstimateWithError:
    """Fit visibility from rows of (phi, P(a=b), n) or (phi, P(a=b), std_err, n)."""
    rows = [tuple(r) for r in scan]
    phi = np.array([r[0] for r in rows], dtype=float)
    p = np.array([r[1] for r in rows], dtype=float)
    n = np.array([r[-1] for r in rows], dtype=float)
    est = VisibilityRegressor().fit(phi, p, sample_weight=n)
    return EstimateWithError(est.visibility_, est.visibility_std_, est.n_trials_)


@dataclass(frozen=True)
class Comparison:
    side: str
    local_setting: int
    remote_1: int
    remote_2: int
    p_1: float
    p_2: float
    n_1: int
    n_2: int
    z: float


@dataclass
class NonSignalingResult:
    passed: bool
    z_threshold: float
    comparisons: list = field(default_factory=list)

    @property
    def max_abs_z(self) -> float:
        return max((abs(c.z) for c in self.comparisons), default=0.0)

    def failures(self) -> list:
        return [c for c in self.comparisons if abs(c.z) > self.z_threshold]

    def to_text(self) -> str:
        lines = [f"non-signaling: {'PASS' if self.passed else 'FAIL'} (|z| threshold {self.z_threshold:g})"]
        for c in self.comparisons:
            lines.append(
                f"{c.side} local={c.local_setting} remote {c.remote_1} vs {c.remote_2}: "
                f"P(+)={c.p_1:.6f} vs {c.p_2:.6f} n={c.n_1}/{c.n_2} z={c.z:.4f}"
            )
        lines.append(f"max |z| = {self.max_abs_z:.4f}")
        return "\n".join(lines) + "\n"


def _two_proportion_z(k1, n1, k2, n2) -> float:
    p1, p2 = k1 / n1, k2 / n2
    pooled = (k1 + k2) / (n1 + n2)
    var = pooled * (1 - pooled) * (1 / n1 + 1 / n2)
    if var == 0:
        return 0.0
    return (p1 - p2) / math.sqrt(var)


def nonsignaling_test(counts: CountsTable, z_threshold: float = 4.0, min_trials: int = 10_000) -> NonSignalingResult:
    """Two-proportion z-tests of each party's marginal across the other party's settings."""
    na, nb = counts.shape
    if na < 2 or nb < 2:
        raise InsufficientDataError("need >= 2 settings on each side")
    for i in range(na):
        for j in range(nb):
            if counts.n(i, j) < min_trials:
                raise InsufficientDataError(
                    f"setting pair (alice={i}, bob={j}) has {counts.n(i, j)} trials, need >= {min_trials}"
                )
    comps = []
    for i in range(na):
        for j1, j2 in combinations(range(nb), 2):
            k1, n1 = counts.n_alice_plus(i, j1), counts.n(i, j1)
            k2, n2 = counts.n_alice_plus(i, j2), counts.n(i, j2)
            comps.append(Comparison("alice", i, j1, j2, k1 / n1, k2 / n2, n1, n2, _two_proportion_z(k1, n1, k2, n2)))
    for j in range(nb):
        for i1, i2 in combinations(range(na), 2):
            k1, n1 = counts.n_bob_plus(i1, j), counts.n(i1, j)
            k2, n2 = counts.n_bob_plus(i2, j), counts.n(i2, j)
            comps.append(Comparison("bob", j, i1, i2, k1 / n1, k2 / n2, n1, n2, _two_proportion_z(k1, n1, k2, n2)))
    passed = all(abs(c.z) <= z_threshold for c in comps)
    return NonSignalingResult(passed=passed, z_threshold=z_threshold, comparisons=comps)


def estimate_distance(counts: CountsTable, side: str = "alice", min_trials: int = 1000) -> EstimateWithError:
    """Total-variation distance of one party's outcome marginal from uniform, |P(+1) - 1/2|."""
    if side == "alice":
        k = int(counts.counts[:, :, 0].sum() + counts.counts[:, :, 1].sum())
    elif side == "bob":
        k = int(counts.counts[:, :, 0].sum() + counts.counts[:, :, 2].sum())
    else:
        raise ValueError("side must be 'alice' or 'bob'")
    n = counts.total
    if n < min_trials:
        raise InsufficientDataError(f"{n} trials, need >= {min_trials}")
    p, se = _proportion(k, n)
    return EstimateWithError(abs(p - 0.5), se, n)


def joint_distance(counts: CountsTable, i: int, j: int) -> float:
    """Total-variation distance of the joint outcome distribution of pair (i, j) from uniform."""
    n = counts.n(i, j)
    if n == 0:
        raise InsufficientDataError(f"setting pair (alice={i}, bob={j}) has no trials")
    return float(0.5 * np.abs(counts.counts[i, j] / n - 0.25).sum())
