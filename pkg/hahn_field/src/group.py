"""
Finitely supported elements of the Hahn product of copies of Q over a chain.

An element is a finite sum of multiples of unit vectors e_gamma. The order is
lexicographic from the smallest support point, so the natural valuation of g
is the minimum of its support.
"""

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .chain import INFINITY, Chain, ChainPoint, ExtendedPoint, FinalSegment, Ordering
from .errors import SegmentError

Rational = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Converts an int or Fraction to a Fraction; floats are refused to keep arithmetic exact."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"coefficients must be int or Fraction, got {type(value).__name__}")


class GroupElement:
    """An element sum(c_gamma * e_gamma) with finitely many nonzero rational c_gamma."""

    __slots__ = ("chain", "_terms", "_hash")

    def __init__(
        self,
        chain: Chain,
        terms: Optional[Union[Mapping[ChainPoint, Rational], Iterable[Tuple[ChainPoint, Rational]]]] = None,
    ):
        if not isinstance(chain, Chain):
            raise TypeError("chain must be a Chain")
        collected: Dict[ChainPoint, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for point, coeff in items:
                chain.require(point)
                collected[point] = collected.get(point, Fraction(0)) + as_rational(coeff)
        self.chain = chain
        self._terms = _sorted_terms(collected)
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, chain: Chain, collected: Dict[ChainPoint, Fraction]) -> "GroupElement":
        element = cls.__new__(cls)
        element.chain = chain
        element._terms = _sorted_terms(collected)
        element._hash = None
        return element

    @classmethod
    def zero(cls, chain: Chain) -> "GroupElement":
        return cls(chain)

    @classmethod
    def unit(cls, chain: Chain, point: ChainPoint, coeff: Rational = 1) -> "GroupElement":
        return cls(chain, {point: coeff})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Tuple[Tuple[ChainPoint, Fraction], ...]:
        return self._terms

    @property
    def support(self) -> Tuple[ChainPoint, ...]:
        return tuple(point for point, _ in self._terms)

    def coefficient(self, point: ChainPoint) -> Fraction:
        for p, c in self._terms:
            if p == point:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def valuation(self) -> ExtendedPoint:
        """v_G: the smallest support point, or infinity for 0."""
        if not self._terms:
            return INFINITY
        return self._terms[0][0]

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[0][1]

    def sign(self) -> int:
        if not self._terms:
            return 0
        return 1 if self._terms[0][1] > 0 else -1

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"expected a GroupElement, got {type(other).__name__}")
        self.chain.require_same(other.chain)

    def __add__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        collected = dict(self._terms)
        for point, coeff in other._terms:
            collected[point] = collected.get(point, Fraction(0)) + coeff
        return GroupElement._raw(self.chain, collected)

    def __neg__(self):
        return GroupElement._raw(self.chain, {p: -c for p, c in self._terms})

    def __sub__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self + (-other)

    def scale(self, k: Rational) -> "GroupElement":
        k = as_rational(k)
        return GroupElement._raw(self.chain, {p: k * c for p, c in self._terms})

    def __mul__(self, k):
        if isinstance(k, (int, Fraction)) and not isinstance(k, bool):
            return self.scale(k)
        return NotImplemented

    __rmul__ = __mul__

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order ------------------------------------------------------------

    def _sign_against(self, other: "GroupElement") -> int:
        """Sign of self - other, read off the first support point where the coefficients differ."""
        self._check(other)
        left, right = self._terms, other._terms
        i = j = 0
        while i < len(left) and j < len(right):
            (p, a), (q, b) = left[i], right[j]
            if p.key < q.key:
                return 1 if a > 0 else -1
            if q.key < p.key:
                return -1 if b > 0 else 1
            if a != b:
                return 1 if a > b else -1
            i += 1
            j += 1
        if i < len(left):
            return 1 if left[i][1] > 0 else -1
        if j < len(right):
            return -1 if right[j][1] > 0 else 1
        return 0

    def compare(self, other: "GroupElement") -> Ordering:
        return Ordering.from_sign(self._sign_against(other))

    def __lt__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._sign_against(other) < 0

    def __le__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._sign_against(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._sign_against(other) > 0

    def __ge__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._sign_against(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.chain == other.chain and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chain, self._terms))
        return self._hash

    def arch_equiv(self, other: "GroupElement") -> bool:
        """Archimedean equivalence: both nonzero with the same natural valuation."""
        self._check(other)
        if self.is_zero() or other.is_zero():
            return False
        return self.valuation() == other.valuation()

    # -- output -----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}@{p}" for p, c in self._terms)

    def __repr__(self):
        return f"GroupElement({str(self)!r})"

    def to_dict(self):
        return {
            "text": str(self),
            "terms": [[str(p), str(c)] for p, c in self._terms],
        }


def _sorted_terms(collected: Dict[ChainPoint, Fraction]) -> Tuple[Tuple[ChainPoint, Fraction], ...]:
    return tuple(sorted(((p, c) for p, c in collected.items() if c), key=lambda pc: pc[0].key))


def v_nat(g: GroupElement) -> ExtendedPoint:
    return g.valuation()


def cmp_group(g: GroupElement, h: GroupElement) -> Ordering:
    return g.compare(h)


def arch_equiv(g: GroupElement, h: GroupElement) -> bool:
    return g.arch_equiv(h)


class ConvexSubgroup:
    """The convex subgroup H_F of elements whose support lies in the final segment F."""

    def __init__(self, segment: FinalSegment):
        if not isinstance(segment, FinalSegment):
            raise SegmentError("a convex subgroup is lifted from a FinalSegment")
        self.segment = segment
        self.chain = segment.chain

    def contains(self, g: GroupElement) -> bool:
        self.chain.require_same(g.chain)
        return all(self.segment.contains(p) for p in g.support)

    def __contains__(self, g) -> bool:
        return self.contains(g)

    @property
    def is_trivial(self) -> bool:
        return self.segment.is_empty

    def __eq__(self, other):
        if not isinstance(other, ConvexSubgroup):
            return NotImplemented
        return self.segment == other.segment

    def __hash__(self):
        return hash(("H", self.segment))

    def __repr__(self):
        return f"ConvexSubgroup({self.segment})"

    def __str__(self):
        return f"H{self.segment}"


def subgroup_contains(subgroup: ConvexSubgroup, g: GroupElement) -> bool:
    return subgroup.contains(g)
