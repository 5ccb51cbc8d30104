"""
Value chains, the right-shift omega and symbolic final segments.

A chain is either a finite labelled chain, or the product Q x Z ordered so that
a larger Q-label gives a smaller point: (a, n) <= (b, m) iff b <_Q a, or a == b
and n <= m. The slice of the first Q-label is therefore the top of the chain.
The shift omega moves every point one step up inside its slice; on a finite
chain it is the successor map, and the top is sent to infinity.
"""

import logging
from enum import Enum, auto
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .config import DEFAULT_WINDOW_HI, DEFAULT_WINDOW_LO
from .errors import ChainMembershipError, ChainMismatchError, SegmentError, WindowError

logger = logging.getLogger(__name__)


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self):
        return self.name.lower()

    @classmethod
    def from_sign(cls, sign: int) -> "Ordering":
        if sign < 0:
            return cls.LESS
        if sign > 0:
            return cls.GREATER
        return cls.EQUAL


class _Infinity:
    """The extended point above every chain point (the valuation of zero)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("hahnfield.infinity")

    def __lt__(self, other):
        if isinstance(other, (ChainPoint, _Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (ChainPoint, _Infinity)):
            return other is self
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (ChainPoint, _Infinity)):
            return other is not self
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (ChainPoint, _Infinity)):
            return True
        return NotImplemented

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class ChainKind(Enum):
    FINITE = auto()
    PRODUCT = auto()

    def __str__(self):
        return self.name.lower()


class ChainPoint:
    """
    A point of a chain.

    For a finite chain ``label`` is the declared label and ``n`` its 0-based
    position. For ProductQZ ``label`` is the Q-label and ``n`` the integer
    coordinate. Points are created through :meth:`Chain.point`, which also
    fixes the sort key.
    """

    __slots__ = ("kind", "label", "n", "key")

    def __init__(self, kind: ChainKind, label: str, n: int, key: Tuple[int, int]):
        self.kind = kind
        self.label = label
        self.n = n
        self.key = key

    def __str__(self):
        if self.kind is ChainKind.FINITE:
            return f"g{self.n}"
        return f"({self.label},{self.n})"

    def __repr__(self):
        return f"ChainPoint({self.kind}, {self.label!r}, {self.n})"

    def __eq__(self, other):
        if not isinstance(other, ChainPoint):
            return NotImplemented
        return (
            self.kind is other.kind
            and self.label == other.label
            and self.n == other.n
        )

    def __hash__(self):
        return hash((self.kind, self.label, self.n))

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return True
        if not isinstance(other, ChainPoint):
            return NotImplemented
        return self.key < other.key

    def __le__(self, other):
        if isinstance(other, _Infinity):
            return True
        if not isinstance(other, ChainPoint):
            return NotImplemented
        return self.key <= other.key

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return False
        if not isinstance(other, ChainPoint):
            return NotImplemented
        return self.key > other.key

    def __ge__(self, other):
        if isinstance(other, _Infinity):
            return False
        if not isinstance(other, ChainPoint):
            return NotImplemented
        return self.key >= other.key

    def to_dict(self):
        return {"kind": str(self.kind), "label": self.label, "n": self.n, "text": str(self)}


ExtendedPoint = Union[ChainPoint, _Infinity]


class ZWindow:
    """A finite, nonempty integer range ``[lo, hi]`` used to bound enumerations."""

    def __init__(self, lo: int, hi: int):
        if not isinstance(lo, int) or not isinstance(hi, int):
            raise TypeError("window bounds must be integers")
        if lo > hi:
            raise WindowError(f"empty window [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return self.hi - self.lo + 1

    def __contains__(self, n) -> bool:
        return isinstance(n, int) and self.lo <= n <= self.hi

    def __eq__(self, other):
        if not isinstance(other, ZWindow):
            return NotImplemented
        return (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"ZWindow({self.lo}, {self.hi})"

    def __str__(self):
        return f"{self.lo}:{self.hi}"

    def widened(self, by: int = 1) -> "ZWindow":
        return ZWindow(self.lo - by, self.hi + by)


DEFAULT_WINDOW = ZWindow(DEFAULT_WINDOW_LO, DEFAULT_WINDOW_HI)


class Chain:
    """A value chain: a finite labelled chain or the product Q x Z."""

    def __init__(self, kind: ChainKind, labels: Sequence[str]):
        if not isinstance(kind, ChainKind):
            raise TypeError("kind must be a ChainKind")
        labels = tuple(labels)
        if not labels:
            raise ValueError("a chain needs at least one label")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise TypeError(f"labels must be nonempty strings, got {label!r}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {list(labels)}")
        self.kind = kind
        self.labels = labels
        self._index: Dict[str, int] = {label: i for i, label in enumerate(labels)}

    @classmethod
    def finite(cls, labels: Sequence[str]) -> "Chain":
        return cls(ChainKind.FINITE, labels)

    @classmethod
    def product(cls, q_labels: Sequence[str]) -> "Chain":
        return cls(ChainKind.PRODUCT, q_labels)

    @property
    def is_finite(self) -> bool:
        return self.kind is ChainKind.FINITE

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.kind is other.kind and self.labels == other.labels

    def __hash__(self):
        return hash((self.kind, self.labels))

    def __repr__(self):
        return f"Chain({self.kind}, {list(self.labels)!r})"

    def __str__(self):
        if self.is_finite:
            return f"FiniteChain[{','.join(self.labels)}]"
        return f"ProductQZ[{'<'.join(self.labels)}]"

    def __len__(self):
        return len(self.labels)

    def to_dict(self):
        return {"kind": str(self.kind), "labels": list(self.labels)}

    # -- points -----------------------------------------------------------

    def q_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ChainMembershipError(f"{label!r} is not a label of {self}") from None

    def point(self, where: Union[str, int], n: Optional[int] = None) -> ChainPoint:
        """
        Builds a point. Finite chains take an index (or a label); ProductQZ
        takes a Q-label and an integer coordinate (default 0).
        """
        if self.is_finite:
            if isinstance(where, str):
                index = self.q_index(where)
            elif isinstance(where, int) and not isinstance(where, bool):
                index = where
            else:
                raise TypeError(f"finite chain points are indexed by int, got {where!r}")
            if not 0 <= index < len(self.labels):
                raise ChainMembershipError(f"index {index} is outside {self}")
            return ChainPoint(ChainKind.FINITE, self.labels[index], index, (0, index))
        if not isinstance(where, str):
            raise TypeError(f"ProductQZ points need a Q-label, got {where!r}")
        if n is None:
            n = 0
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError(f"ProductQZ coordinate must be an int, got {n!r}")
        return ChainPoint(ChainKind.PRODUCT, where, n, (-self.q_index(where), n))

    def contains(self, x) -> bool:
        if not isinstance(x, ChainPoint) or x.kind is not self.kind:
            return False
        index = self._index.get(x.label)
        if index is None:
            return False
        if self.is_finite:
            return x.n == index
        return True

    def require(self, x, allow_infinity: bool = False) -> None:
        if allow_infinity and x is INFINITY:
            return
        if not self.contains(x):
            raise ChainMembershipError(f"{x!r} is not a point of {self}")

    def require_same(self, other: "Chain") -> None:
        if other is not self and self != other:
            raise ChainMismatchError(f"{self} and {other} are different chains")

    def top(self) -> ChainPoint:
        """The largest point of a finite chain."""
        if not self.is_finite:
            raise ValueError("ProductQZ has no largest point")
        return self.point(len(self.labels) - 1)

    def window_points(self, window: Optional[ZWindow] = None) -> List[ChainPoint]:
        """All points of a finite chain, or the windowed points of ProductQZ, ascending."""
        if self.is_finite:
            return [self.point(i) for i in range(len(self.labels))]
        if window is None:
            raise WindowError("ProductQZ enumeration needs a Z-window")
        points = [self.point(label, n) for label in self.labels for n in window]
        points.sort(key=lambda p: p.key)
        return points

    # -- order and shift --------------------------------------------------

    def cmp_points(self, x: ExtendedPoint, y: ExtendedPoint) -> Ordering:
        self.require(x, allow_infinity=True)
        self.require(y, allow_infinity=True)
        if x == y:
            return Ordering.EQUAL
        return Ordering.LESS if x < y else Ordering.GREATER

    def omega(self, gamma: ChainPoint) -> ExtendedPoint:
        self.require(gamma)
        if self.is_finite:
            if gamma.n + 1 >= len(self.labels):
                return INFINITY
            return self.point(gamma.n + 1)
        return self.point(gamma.label, gamma.n + 1)

    def omega_preimage(self, gamma: ChainPoint) -> Optional[ChainPoint]:
        """The point sent to ``gamma`` by omega, if any."""
        self.require(gamma)
        if self.is_finite:
            return self.point(gamma.n - 1) if gamma.n > 0 else None
        return self.point(gamma.label, gamma.n - 1)

    def orbit(self, gamma: ChainPoint, depth: int) -> List[ChainPoint]:
        """gamma, omega(gamma), ... up to ``depth`` steps, stopping at infinity."""
        orbit = [gamma]
        current: ExtendedPoint = gamma
        for _ in range(depth):
            current = self.omega(current)  # type: ignore[arg-type]
            if current is INFINITY:
                break
            orbit.append(current)  # type: ignore[arg-type]
        return orbit

    def qo_omega_leq(self, gamma: ChainPoint, delta: ChainPoint) -> bool:
        """
        Decides gamma <~ delta, i.e. omega^n(gamma) <= omega^k(delta) for some n, k.

        On ProductQZ orbits never leave their slice, so the answer only
        depends on the slices: delta's label must be <=_Q gamma's label.
        """
        self.require(gamma)
        self.require(delta)
        if self.is_finite:
            return self.qo_omega_leq_search(gamma, delta, len(self.labels))
        return self.q_index(delta.label) <= self.q_index(gamma.label)

    def qo_omega_leq_search(self, gamma: ChainPoint, delta: ChainPoint, depth: int) -> bool:
        """Bounded search for the quasi-order; exact on finite chains when depth >= length."""
        gamma_orbit = self.orbit(gamma, depth)
        delta_orbit = self.orbit(delta, depth)
        return any(a <= b for a in gamma_orbit for b in delta_orbit)

    def qo_verdict(self, gamma: ChainPoint, delta: ChainPoint) -> str:
        """"equivalent", "less" or "greater" for gamma against delta in the quasi-order."""
        forward, backward = self.qo_omega_leq(gamma, delta), self.qo_omega_leq(delta, gamma)
        if forward and backward:
            return "equivalent"
        return str(Ordering.LESS if forward else Ordering.GREATER)

    # -- final segments ---------------------------------------------------

    def enumerate_final_segments(self, window: Optional[ZWindow] = None) -> List["FinalSegment"]:
        """
        Every final segment representable with tail starts in ``window``,
        ascending by inclusion and starting with the empty segment.
        """
        if self.is_finite:
            return [
                FinalSegment.suffix(self, start)
                for start in range(len(self.labels), -1, -1)
            ]
        if window is None:
            raise WindowError("ProductQZ enumeration needs a Z-window")
        segments = [FinalSegment.empty(self)]
        count = len(self.labels)
        for k in range(count):
            head = [SliceState.all()] * k
            rest = [SliceState.none()] * (count - k - 1)
            for start in range(window.hi, window.lo - 1, -1):
                segments.append(FinalSegment(self, slices=head + [SliceState.tail(start)] + rest))
            segments.append(FinalSegment(self, slices=head + [SliceState.all()] + rest))
        logger.debug("enumerated %d final segments of %s over %s", len(segments), self, window)
        return segments


class SliceKind(Enum):
    NONE = auto()
    TAIL = auto()
    ALL = auto()


class SliceState:
    """The part of one Q-slice inside a final segment: nothing, a tail, or everything."""

    __slots__ = ("kind", "start")

    def __init__(self, kind: SliceKind, start: int = 0):
        if kind is not SliceKind.TAIL:
            start = 0
        self.kind = kind
        self.start = start

    @classmethod
    def none(cls) -> "SliceState":
        return cls(SliceKind.NONE)

    @classmethod
    def all(cls) -> "SliceState":
        return cls(SliceKind.ALL)

    @classmethod
    def tail(cls, start: int) -> "SliceState":
        return cls(SliceKind.TAIL, start)

    def contains(self, n: int) -> bool:
        if self.kind is SliceKind.ALL:
            return True
        if self.kind is SliceKind.TAIL:
            return n >= self.start
        return False

    def issubset(self, other: "SliceState") -> bool:
        if self.kind is SliceKind.NONE or other.kind is SliceKind.ALL:
            return True
        if self.kind is SliceKind.ALL or other.kind is SliceKind.NONE:
            return False
        return self.start >= other.start

    def __eq__(self, other):
        if not isinstance(other, SliceState):
            return NotImplemented
        return self.kind is other.kind and self.start == other.start

    def __hash__(self):
        return hash((self.kind, self.start))

    def __repr__(self):
        return f"SliceState.{str(self)}"

    def __str__(self):
        if self.kind is SliceKind.TAIL:
            return f"tail({self.start})"
        return self.kind.name.lower()


class FinalSegment:
    """
    An upward closed subset of a chain.

    Finite chains store the index where the suffix starts (``len(chain)`` for
    the empty segment). ProductQZ stores one :class:`SliceState` per Q-label;
    a slice may be nonempty only if every slice above it (smaller Q-label) is
    complete.
    """

    def __init__(
        self,
        chain: Chain,
        start: Optional[int] = None,
        slices: Optional[Sequence[SliceState]] = None,
    ):
        self.chain = chain
        if chain.is_finite:
            if start is None or slices is not None:
                raise SegmentError("finite chain segments are given by a start index")
            if not 0 <= start <= len(chain.labels):
                raise SegmentError(f"start {start} outside {chain}")
            self.start: Optional[int] = start
            self.slices: Tuple[SliceState, ...] = ()
        else:
            if slices is None or start is not None:
                raise SegmentError("ProductQZ segments are given by slice states")
            slices = tuple(slices)
            if len(slices) != len(chain.labels):
                raise SegmentError(
                    f"expected {len(chain.labels)} slice states, got {len(slices)}"
                )
            incomplete_above = False
            for label, state in zip(chain.labels, slices):
                if incomplete_above and state.kind is not SliceKind.NONE:
                    raise SegmentError(
                        f"slice {label} is nonempty below an incomplete slice; "
                        "the segment is not upward closed"
                    )
                if state.kind is not SliceKind.ALL:
                    incomplete_above = True
            self.start = None
            self.slices = slices

    @classmethod
    def full(cls, chain: Chain) -> "FinalSegment":
        if chain.is_finite:
            return cls(chain, start=0)
        return cls(chain, slices=[SliceState.all()] * len(chain.labels))

    @classmethod
    def empty(cls, chain: Chain) -> "FinalSegment":
        if chain.is_finite:
            return cls(chain, start=len(chain.labels))
        return cls(chain, slices=[SliceState.none()] * len(chain.labels))

    @classmethod
    def suffix(cls, chain: Chain, start: int) -> "FinalSegment":
        return cls(chain, start=start)

    @classmethod
    def from_slices(cls, chain: Chain, states: Dict[str, SliceState]) -> "FinalSegment":
        """Slices missing from ``states`` are empty."""
        for label in states:
            chain.q_index(label)
        return cls(chain, slices=[states.get(label, SliceState.none()) for label in chain.labels])

    @classmethod
    def through_label(cls, chain: Chain, label: str) -> "FinalSegment":
        """The union of the complete slices of every Q-label <=_Q ``label``."""
        cut = chain.q_index(label)
        return cls(
            chain,
            slices=[
                SliceState.all() if i <= cut else SliceState.none()
                for i in range(len(chain.labels))
            ],
        )

    @classmethod
    def from_points(
        cls, chain: Chain, points, window: Optional[ZWindow] = None
    ) -> "FinalSegment":
        """
        Rebuilds a segment from the windowed points it contains. A slice is
        complete when every windowed point of it is present.
        """
        points = set(points)
        if chain.is_finite:
            indices = [p.n for p in points]
            return cls(chain, start=min(indices) if indices else len(chain.labels))
        if window is None:
            raise WindowError("ProductQZ segments need a Z-window")
        states = []
        for label in chain.labels:
            present = sorted(p.n for p in points if p.label == label)
            if not present:
                states.append(SliceState.none())
                continue
            if present != list(range(present[0], window.hi + 1)):
                raise SegmentError(f"points of slice {label} do not form a tail")
            states.append(SliceState.all() if present[0] == window.lo else SliceState.tail(present[0]))
        return cls(chain, slices=states)

    def contains(self, gamma: ChainPoint) -> bool:
        self.chain.require(gamma)
        if self.chain.is_finite:
            return gamma.n >= self.start  # type: ignore[operator]
        return self.slices[self.chain.q_index(gamma.label)].contains(gamma.n)

    def __contains__(self, gamma) -> bool:
        return self.contains(gamma)

    @property
    def is_empty(self) -> bool:
        if self.chain.is_finite:
            return self.start == len(self.chain.labels)
        return all(s.kind is SliceKind.NONE for s in self.slices)

    @property
    def is_full(self) -> bool:
        if self.chain.is_finite:
            return self.start == 0
        return all(s.kind is SliceKind.ALL for s in self.slices)

    def slice_of(self, label: str) -> SliceState:
        if self.chain.is_finite:
            raise ValueError("finite chain segments have no slices")
        return self.slices[self.chain.q_index(label)]

    def issubset(self, other: "FinalSegment") -> bool:
        self.chain.require_same(other.chain)
        if self.chain.is_finite:
            return self.start >= other.start  # type: ignore[operator]
        return all(a.issubset(b) for a, b in zip(self.slices, other.slices))

    def inclusion_key(self) -> Tuple[int, ...]:
        """Sort key that orders segments of one chain by inclusion."""
        if self.chain.is_finite:
            return (-self.start,)  # type: ignore[operator]
        complete = sum(1 for s in self.slices if s.kind is SliceKind.ALL)
        tails = [s.start for s in self.slices if s.kind is SliceKind.TAIL]
        if tails:
            return (complete, 1, -tails[0])
        return (complete, 0, 0)

    def boundary_predecessors(self) -> List[ChainPoint]:
        """Points directly below the segment inside a partially covered slice."""
        if self.chain.is_finite:
            return [self.chain.point(self.start - 1)] if self.start else []  # type: ignore[operator]
        return [
            self.chain.point(label, state.start - 1)
            for label, state in zip(self.chain.labels, self.slices)
            if state.kind is SliceKind.TAIL
        ]

    def __eq__(self, other):
        if not isinstance(other, FinalSegment):
            return NotImplemented
        return self.chain == other.chain and self.start == other.start and self.slices == other.slices

    def __hash__(self):
        return hash((self.chain, self.start, self.slices))

    def __repr__(self):
        return f"FinalSegment({self.chain}, {self})"

    def __str__(self):
        if self.is_empty:
            return "empty"
        if self.is_full:
            return "all"
        if self.chain.is_finite:
            return f"suffix({self.start})"
        return "{" + ",".join(f"{label}:{state}" for label, state in zip(self.chain.labels, self.slices)) + "}"

    def to_dict(self):
        data = {"text": str(self)}
        if self.chain.is_finite:
            data["start"] = self.start
        else:
            data["slices"] = {label: str(state) for label, state in zip(self.chain.labels, self.slices)}
        return data


def cmp_points(chain: Chain, x: ExtendedPoint, y: ExtendedPoint) -> Ordering:
    return chain.cmp_points(x, y)


if __name__ == "__main__":
    q = Chain.product(["q1", "q2", "q3"])
    print(q)
    print(q.cmp_points(q.point("q2", 0), q.point("q1", 0)))  # less
    print(q.omega(q.point("q2", 7)))  # (q2,8)
    print(q.qo_omega_leq(q.point("q1", 0), q.point("q1", 100)))  # True
    for segment in q.enumerate_final_segments(ZWindow(0, 0)):
        print(segment)

    ab = Chain.finite(["a", "b"])
    print(ab.omega(ab.point(1)))  # inf
    print([str(s) for s in ab.enumerate_final_segments()])
