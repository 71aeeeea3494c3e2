"""1+1-dimensional events, boosts and measurement time-ordering.

Units are natural (c = 1): times in seconds, positions in light-seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

EPS_T = 1e-12
EPS_INTERVAL = 1e-12


@dataclass(frozen=True)
class Event:
    t: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError(f"event coordinates must be finite, got ({self.t}, {self.x})")


@dataclass(frozen=True)
class Boost:
    """Velocity of an inertial frame as a fraction of c."""

    beta: float

    def __post_init__(self):
        if not abs(self.beta) < 1:
            raise ValueError(f"|beta| must be < 1, got {self.beta}")

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.beta * self.beta)


def _as_boost(b) -> Boost:
    return b if isinstance(b, Boost) else Boost(float(b))


def time_in_frame(e: Event, b: Boost | float) -> float:
    """Time coordinate of ``e`` in the frame moving with velocity ``b``."""
    b = _as_boost(b)
    return b.gamma * (e.t - b.beta * e.x)


def transform(e: Event, b: Boost | float) -> Event:
    b = _as_boost(b)
    g = b.gamma
    return Event(g * (e.t - b.beta * e.x), g * (e.x - b.beta * e.t))


class Interval(str, Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def interval_class(e1: Event, e2: Event, eps: float = EPS_INTERVAL) -> Interval:
    dt = e2.t - e1.t
    dx = e2.x - e1.x
    s2 = dt * dt - dx * dx
    if abs(s2) <= eps:
        return Interval.LIGHTLIKE
    return Interval.TIMELIKE if s2 > 0 else Interval.SPACELIKE


class TimingKind(str, Enum):
    BEFORE_BEFORE = "BeforeBefore"
    AFTER_AFTER = "AfterAfter"
    ALICE_BEFORE_ONLY = "AliceBeforeOnly"
    BOB_BEFORE_ONLY = "BobBeforeOnly"


@dataclass(frozen=True)
class TimingClass:
    """Which party selects its outcome first in its own beam-splitter frame.

    ``alice_is_before`` means Alice's event precedes Bob's in the rest frame
    of Alice's device; ``bob_is_before`` likewise in Bob's device frame.
    A party that is not "before" (including exact simultaneity) takes the
    nonlocal branch.
    """

    alice_is_before: bool
    bob_is_before: bool

    @property
    def kind(self) -> TimingKind:
        if self.alice_is_before and self.bob_is_before:
            return TimingKind.BEFORE_BEFORE
        if self.alice_is_before:
            return TimingKind.ALICE_BEFORE_ONLY
        if self.bob_is_before:
            return TimingKind.BOB_BEFORE_ONLY
        return TimingKind.AFTER_AFTER

    @property
    def name(self) -> str:
        return self.kind.value

    @classmethod
    def from_name(cls, name: str | TimingKind) -> "TimingClass":
        kind = TimingKind(name)
        return cls(
            alice_is_before=kind in (TimingKind.BEFORE_BEFORE, TimingKind.ALICE_BEFORE_ONLY),
            bob_is_before=kind in (TimingKind.BEFORE_BEFORE, TimingKind.BOB_BEFORE_ONLY),
        )

    def __str__(self) -> str:
        return self.name


BEFORE_BEFORE = TimingClass(True, True)
AFTER_AFTER = TimingClass(False, False)
ALICE_BEFORE_ONLY = TimingClass(True, False)
BOB_BEFORE_ONLY = TimingClass(False, True)
ALL_TIMINGS = (BEFORE_BEFORE, AFTER_AFTER, ALICE_BEFORE_ONLY, BOB_BEFORE_ONLY)


@dataclass(frozen=True)
class ApparatusGeometry:
    """Alice's and Bob's outcome-selection events plus their device frames."""

    alice_event: Event
    bob_event: Event
    beta_A: Boost
    beta_B: Boost

    def __post_init__(self):
        object.__setattr__(self, "beta_A", _as_boost(self.beta_A))
        object.__setattr__(self, "beta_B", _as_boost(self.beta_B))
        kind = interval_class(self.alice_event, self.bob_event)
        if kind is not Interval.SPACELIKE:
            raise ValueError(f"measurement events must be spacelike separated, got {kind.value}")

    def frame_times(self) -> dict[str, float]:
        """Times of both events in both device frames."""
        return {
            "t_a(A)": time_in_frame(self.alice_event, self.beta_A),
            "t_b(A)": time_in_frame(self.bob_event, self.beta_A),
            "t_b(B)": time_in_frame(self.bob_event, self.beta_B),
            "t_a(B)": time_in_frame(self.alice_event, self.beta_B),
        }


def classify_timing(g: ApparatusGeometry, eps: float = EPS_T) -> TimingClass:
    kind = interval_class(g.alice_event, g.bob_event)
    if kind is not Interval.SPACELIKE:
        raise ValueError(f"timing is only defined for spacelike geometries, got {kind.value}")
    ft = g.frame_times()
    return TimingClass(
        alice_is_before=ft["t_a(A)"] < ft["t_b(A)"] - eps,
        bob_is_before=ft["t_b(B)"] < ft["t_a(B)"] - eps,
    )
