"""Counter-based hidden randomness.

Every trial owns a fixed block of Philox output addressed by
``(seed, trial index)``, so any subrange of trials can be regenerated
independently of execution order or chunking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Philox

# Philox4x64 yields four 64-bit words per counter increment; one increment per trial.
_WORDS = 4
_LOCAL_STREAM = 0  # u, v, alpha, beta_nl
_SHARED_STREAM = 1  # lam, alice choice, bob choice, spare

_TO_UNIT = 2.0**-53


def _words(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    if seed < 0 or start < 0 or count < 0:
        raise ValueError("seed, start and count must be non-negative")
    gen = Philox(key=[int(seed), stream], counter=int(start))
    raw = gen.random_raw(_WORDS * count)
    return raw.reshape(count, _WORDS)


def _unit(words: np.ndarray) -> np.ndarray:
    return (words >> np.uint64(11)).astype(np.float64) * _TO_UNIT


@dataclass(frozen=True)
class HiddenState:
    """Per-trial hidden variables, each uniform on [0, 1).

    ``u`` and ``v`` are Alice's and Bob's local variables, ``alpha`` and
    ``beta_nl`` feed the nonlocal branches, and ``lam`` is a shared slot used
    by classical shared-randomness strategies. Fields are scalars or arrays
    of equal length.
    """

    u: np.ndarray
    v: np.ndarray
    alpha: np.ndarray
    beta_nl: np.ndarray
    lam: np.ndarray

    def __len__(self) -> int:
        return int(np.size(self.u))


def hidden_block(seed: int, start: int, count: int) -> HiddenState:
    """Hidden state for trials ``start .. start + count - 1``."""
    local = _unit(_words(seed, _LOCAL_STREAM, start, count))
    shared = _unit(_words(seed, _SHARED_STREAM, start, count))
    return HiddenState(
        u=local[:, 0],
        v=local[:, 1],
        alpha=local[:, 2],
        beta_nl=local[:, 3],
        lam=shared[:, 0],
    )


def setting_choices(seed: int, start: int, count: int, n_settings: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform setting indices for Alice and Bob on trials ``start ..``."""
    shared = _unit(_words(seed, _SHARED_STREAM, start, count))
    alice = np.minimum((shared[:, 1] * n_settings).astype(np.int64), n_settings - 1)
    bob = np.minimum((shared[:, 2] * n_settings).astype(np.int64), n_settings - 1)
    return alice, bob
