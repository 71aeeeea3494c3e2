"""Trial engine: sample outcomes for chosen setting pairs and tally coincidence counts."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .models import OutcomeModel, TrialInput
from .rng import hidden_block, setting_choices
from .spacetime import TimingClass

CELLS = ("pp", "pm", "mp", "mm")
DEFAULT_CHUNK = 1 << 18
SETTING_CHOICES = ("random-uniform", "fixed-pair")


class InsufficientDataError(ValueError):
    """Raised when a setting pair has too few trials for an estimate."""


@dataclass
class CountsTable:
    """Coincidence counts per (alice setting, bob setting).

    ``counts[i, j]`` holds n(+,+), n(+,-), n(-,+), n(-,-) for Alice's
    setting ``i`` and Bob's setting ``j``.
    """

    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 3 or self.counts.shape[2] != 4:
            raise ValueError("counts must have shape (n_alice, n_bob, 4)")
        if (self.counts < 0).any():
            raise ValueError("counts must be non-negative")

    @classmethod
    def empty(cls, n_alice: int, n_bob: int) -> "CountsTable":
        return cls(np.zeros((n_alice, n_bob, 4), dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape[:2]

    def __add__(self, other: "CountsTable") -> "CountsTable":
        if self.shape != other.shape:
            raise ValueError("cannot merge counts tables of different shapes")
        return CountsTable(self.counts + other.counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, CountsTable) and np.array_equal(self.counts, other.counts)

    def n(self, i: int, j: int) -> int:
        return int(self.counts[i, j].sum())

    def n_equal(self, i: int, j: int) -> int:
        c = self.counts[i, j]
        return int(c[0] + c[3])

    def n_alice_plus(self, i: int, j: int) -> int:
        c = self.counts[i, j]
        return int(c[0] + c[1])

    def n_bob_plus(self, i: int, j: int) -> int:
        c = self.counts[i, j]
        return int(c[0] + c[2])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def rows(self):
        """(alice_setting, bob_setting, n_pp, n_pm, n_mp, n_mm, n) for every pair."""
        na, nb = self.shape
        for i in range(na):
            for j in range(nb):
                c = self.counts[i, j]
                yield (i, j, *(int(x) for x in c), int(c.sum()))


def _count_chunk(model, alice_phases, bob_phases, timing, seed, start, count, choice, pair):
    na, nb = len(alice_phases), len(bob_phases)
    hidden = hidden_block(seed, start, count)
    if choice == "fixed-pair":
        ai = np.full(count, pair[0], dtype=np.int64)
        bi = np.full(count, pair[1], dtype=np.int64)
    else:
        if na != nb:
            raise ValueError("random-uniform choice needs equal setting counts on both sides")
        ai, bi = setting_choices(seed, start, count, na)
    trial = TrialInput(
        alice_phase=alice_phases[ai],
        bob_phase=bob_phases[bi],
        timing=timing,
        hidden=hidden,
        setting_ids=(ai, bi),
    )
    out = model.sample(trial)
    cell = (np.asarray(out.a) < 0).astype(np.int64) * 2 + (np.asarray(out.b) < 0)
    flat = (ai * nb + bi) * 4 + cell
    return np.bincount(flat, minlength=na * nb * 4).reshape(na, nb, 4)


def run_trials(
    model: OutcomeModel,
    settings,
    timing: TimingClass,
    trials: int,
    seed: int,
    setting_choice: str = "random-uniform",
    pair: tuple[int, int] | None = None,
    start: int = 0,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> CountsTable:
    """Simulate ``trials`` trials and tally them per setting pair.

    ``settings`` is anything exposing ``alice_phases`` and ``bob_phases``.
    Trial ``k`` uses hidden randomness addressed by ``(seed, start + k)``,
    so the result does not depend on ``workers`` or ``chunk_size``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if setting_choice not in SETTING_CHOICES:
        raise ValueError(f"setting_choice must be one of {SETTING_CHOICES}")
    if setting_choice == "fixed-pair" and pair is None:
        raise ValueError("fixed-pair choice needs a pair")
    alice = np.asarray(settings.alice_phases, dtype=float)
    bob = np.asarray(settings.bob_phases, dtype=float)

    bounds = [(s, min(chunk_size, trials - (s - start))) for s in range(start, start + trials, chunk_size)]

    def job(b):
        return _count_chunk(model, alice, bob, timing, seed, b[0], b[1], setting_choice, pair)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    total = np.zeros((len(alice), len(bob), 4), dtype=np.int64)
    for part in parts:
        total += part
    return CountsTable(total)


def run_pairs(model, settings, timing, pairs, trials_per_pair, seed, workers=1, chunk_size=DEFAULT_CHUNK):
    """Run ``trials_per_pair`` fixed-pair trials on each listed pair.

    Pair ``k`` consumes trial indices ``k*trials_per_pair`` onwards, so
    streams never overlap.
    """
    table = CountsTable.empty(len(settings.alice_phases), len(settings.bob_phases))
    for k, pair in enumerate(pairs):
        table = table + run_trials(
            model,
            settings,
            timing,
            trials_per_pair,
            seed,
            setting_choice="fixed-pair",
            pair=pair,
            start=k * trials_per_pair,
            workers=workers,
            chunk_size=chunk_size,
        )
    return table


def run_chain(model, settings, timing, trials_per_pair, seed, workers=1):
    """Fixed-pair runs over the 2N pairs that enter I(N)."""
    return run_pairs(model, settings, timing, settings.chain_pairs(), trials_per_pair, seed, workers)


def run_all_pairs(model, settings, timing, trials_per_pair, seed, workers=1):
    """Fixed-pair runs over the full N x N grid of setting pairs."""
    na, nb = len(settings.alice_phases), len(settings.bob_phases)
    pairs = [(i, j) for i in range(na) for j in range(nb)]
    return run_pairs(model, settings, timing, pairs, trials_per_pair, seed, workers)


@dataclass(frozen=True)
class PhaseGrid:
    """Alice-side phase grid against a fixed Bob phase, for fringe scans."""

    alice_phases: np.ndarray
    bob_phases: np.ndarray = field(default_factory=lambda: np.zeros(1))


def scan_phase(model, phases, timing, trials_per_point, seed, workers=1):
    """Counts for each phase in ``phases`` (Alice's arm varied, Bob's fixed).

    Returns a list of (phi, p_equal, std_err, n) rows.
    """
    grid = PhaseGrid(np.asarray(phases, dtype=float))
    pairs = [(k, 0) for k in range(len(grid.alice_phases))]
    table = run_pairs(model, grid, timing, pairs, trials_per_point, seed, workers)
    rows = []
    for k, phi in enumerate(grid.alice_phases):
        n = table.n(k, 0)
        p = table.n_equal(k, 0) / n
        rows.append((float(phi), p, float(np.sqrt(p * (1 - p) / n)), n))
    return rows
