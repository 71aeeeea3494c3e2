"""Outcome models mapping a trial's phase, timing and hidden state to (a, b).

All samplers are deterministic in their input: randomness enters only
through :class:`~chainbell.rng.HiddenState`. Inputs may be scalars or
equal-length arrays, and outputs follow the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .chainedbell import wrap_phase
from .rng import HiddenState
from .spacetime import TimingClass, TimingKind


@dataclass(frozen=True)
class TrialInput:
    """One trial (or a batch of trials sharing a timing class).

    ``phi`` is the pair phase; ``alice_phase`` and ``bob_phase`` are the
    local contributions with ``phi == (alice_phase + bob_phase) mod 2pi``.
    """

    alice_phase: np.ndarray
    bob_phase: np.ndarray
    timing: TimingClass
    hidden: HiddenState
    setting_ids: tuple = (0, 0)

    @property
    def phi(self):
        return wrap_phase(np.asarray(self.alice_phase) + np.asarray(self.bob_phase))


@dataclass(frozen=True)
class JointOutcome:
    a: np.ndarray
    b: np.ndarray


def _sign(mask) -> np.ndarray:
    """+1 where mask holds, -1 elsewhere."""
    return np.where(mask, 1, -1).astype(np.int8)


def _check_visibility(V):
    if not 0.0 <= V <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {V}")


def _quantum_joint(phi, V, first, second):
    """Uniform sign from ``first``, then equal with probability (1 + V cos phi)/2 via ``second``."""
    a = _sign(np.asarray(first) < 0.5)
    same = np.asarray(second) < 0.5 * (1.0 + V * np.cos(phi))
    b = np.where(same, a, -a).astype(np.int8)
    return a, b


def _conditional_partner(local, phi, V, r):
    """Remote sign drawn from P(remote | local) = (1 + local*remote*V cos phi)/2."""
    same = np.asarray(r) < 0.5 * (1.0 + V * np.cos(phi))
    return np.where(same, local, -local).astype(np.int8)


class OutcomeModel(BaseEstimator):
    """Contract for outcome samplers.

    Subclasses set ``name`` and ``timing_sensitive`` and implement
    :meth:`sample`. Constructor arguments are the model parameters, so
    ``get_params``/``set_params``/``clone`` work as for any estimator.
    """

    name = "abstract"
    timing_sensitive = False

    def sample(self, trial: TrialInput) -> JointOutcome:
        raise NotImplementedError

    def validate(self):
        return self


class QuantumModel(OutcomeModel):
    """Interference correlations P(a=b|phi) = (1 + V cos phi)/2, timing ignored."""

    name = "quantum"

    def __init__(self, visibility: float = 1.0):
        self.visibility = visibility

    def validate(self):
        _check_visibility(self.visibility)
        return self

    def sample(self, trial: TrialInput) -> JointOutcome:
        return quantum_sample(trial, self.visibility)


def quantum_sample(trial: TrialInput, V: float) -> JointOutcome:
    _check_visibility(V)
    a, b = _quantum_joint(trial.phi, V, trial.hidden.u, trial.hidden.alpha)
    return JointOutcome(a, b)


LOCAL_STRATEGIES = ("product", "shared_randomness")


class SuarezScaraniModel(OutcomeModel):
    """Frame-dependent model: local outcomes for a party that is first in its own frame.

    A "before" party answers from local data only. A party that is not
    first answers nonlocally so the pair reproduces the interference
    correlations. In before-before timing both answer locally and the
    nonlocal correlations vanish.

    Parameters
    ----------
    visibility : float
        Fringe contrast used by the nonlocal branches.
    local_strategy : {"product", "shared_randomness"}
        ``product`` gives independent uniform signs from ``u`` and ``v``.
        ``shared_randomness`` uses a common hidden phase ``lam`` with
        ``a = sign(cos(x + lam))`` and ``b = sign(cos(lam - y))``, a
        classical model whose agreement depends on the phase sum ``x + y``.
    """

    name = "suarez-scarani"
    timing_sensitive = True

    def __init__(self, visibility: float = 1.0, local_strategy: str = "product"):
        self.visibility = visibility
        self.local_strategy = local_strategy

    def validate(self):
        _check_visibility(self.visibility)
        if self.local_strategy not in LOCAL_STRATEGIES:
            raise ValueError(f"unknown local_strategy {self.local_strategy!r}")
        return self

    def sample(self, trial: TrialInput) -> JointOutcome:
        return suarez_scarani_sample(trial, self.visibility, self.local_strategy)


def _local_alice(trial: TrialInput, strategy: str) -> np.ndarray:
    if strategy == "product":
        return _sign(np.asarray(trial.hidden.u) < 0.5)
    lam = 2 * np.pi * np.asarray(trial.hidden.lam)
    return _sign(np.cos(np.asarray(trial.alice_phase) + lam) >= 0)


def _local_bob(trial: TrialInput, strategy: str) -> np.ndarray:
    if strategy == "product":
        return _sign(np.asarray(trial.hidden.v) < 0.5)
    lam = 2 * np.pi * np.asarray(trial.hidden.lam)
    return _sign(np.cos(lam - np.asarray(trial.bob_phase)) >= 0)


def suarez_scarani_sample(trial: TrialInput, V: float, local_strategy: str = "product") -> JointOutcome:
    _check_visibility(V)
    if local_strategy not in LOCAL_STRATEGIES:
        raise ValueError(f"unknown local_strategy {local_strategy!r}")
    kind = trial.timing.kind
    phi = trial.phi
    if kind is TimingKind.BEFORE_BEFORE:
        return JointOutcome(_local_alice(trial, local_strategy), _local_bob(trial, local_strategy))
    if kind is TimingKind.ALICE_BEFORE_ONLY:
        a = _local_alice(trial, local_strategy)
        return JointOutcome(a, _conditional_partner(a, phi, V, trial.hidden.beta_nl))
    if kind is TimingKind.BOB_BEFORE_ONLY:
        b = _local_bob(trial, local_strategy)
        return JointOutcome(_conditional_partner(b, phi, V, trial.hidden.alpha), b)
    return quantum_sample(trial, V)


class LocalDeterministicModel(OutcomeModel):
    """a = sign(u - 1/2), b = sign(v - 1/2), independent of settings and timing."""

    name = "local"

    def sample(self, trial: TrialInput) -> JointOutcome:
        return local_deterministic_sample(trial)


def local_deterministic_sample(trial: TrialInput) -> JointOutcome:
    return JointOutcome(
        _sign(np.asarray(trial.hidden.u) >= 0.5),
        _sign(np.asarray(trial.hidden.v) >= 0.5),
    )


class SignalingToyModel(OutcomeModel):
    """Alice's marginal leans on Bob's setting: P(a=+1) = 1/2 + delta cos(bob_phase).

    Exists as a positive control for the non-signaling test.
    """

    name = "signaling-toy"

    def __init__(self, delta: float = 0.25):
        self.delta = delta

    def validate(self):
        _check_delta(self.delta)
        return self

    def sample(self, trial: TrialInput) -> JointOutcome:
        return signaling_toy_sample(trial, self.delta)


def _check_delta(delta):
    if not 0.0 <= delta <= 0.25:
        raise ValueError(f"delta must lie in [0, 0.25], got {delta}")


def signaling_toy_sample(trial: TrialInput, delta: float) -> JointOutcome:
    _check_delta(delta)
    p_plus = 0.5 + delta * np.cos(trial.bob_phase)
    return JointOutcome(
        _sign(np.asarray(trial.hidden.u) < p_plus),
        _sign(np.asarray(trial.hidden.v) >= 0.5),
    )


MODELS = {
    QuantumModel.name: QuantumModel,
    SuarezScaraniModel.name: SuarezScaraniModel,
    LocalDeterministicModel.name: LocalDeterministicModel,
    SignalingToyModel.name: SignalingToyModel,
}


def make_model(name: str, **params) -> OutcomeModel:
    """Build a model by name, passing only the parameters it accepts."""
    try:
        cls = MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    accepted = cls._get_param_names()
    return cls(**{k: v for k, v in params.items() if k in accepted}).validate()
