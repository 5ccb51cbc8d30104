"""
Finite-support elements of the Hahn series field Q((G)).

A series is a finite sum of terms c * t^g with rational c and exponents g in
the group. The valuation is the least exponent and the field order is decided
by the leading coefficient of a difference. Division is only available in
truncated form, see :meth:`Series.invert_truncated`.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from .chain import INFINITY, Chain, Ordering
from .errors import TruncationUnreachableError
from .group import GroupElement, Rational, as_rational

logger = logging.getLogger(__name__)


class Series:
    """A finite sum of monomials c * t^g, stored in ascending exponent order."""

    __slots__ = ("chain", "_terms", "_hash")

    def __init__(
        self,
        chain: Chain,
        terms: Optional[Union[Mapping[GroupElement, Rational], Iterable[Tuple[GroupElement, Rational]]]] = None,
    ):
        if not isinstance(chain, Chain):
            raise TypeError("chain must be a Chain")
        collected: Dict[GroupElement, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exponent, coeff in items:
                if not isinstance(exponent, GroupElement):
                    raise TypeError(f"exponents must be GroupElements, got {type(exponent).__name__}")
                chain.require_same(exponent.chain)
                collected[exponent] = collected.get(exponent, Fraction(0)) + as_rational(coeff)
        self.chain = chain
        self._terms = _sorted_terms(collected)
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, chain: Chain, collected: Dict[GroupElement, Fraction]) -> "Series":
        series = cls.__new__(cls)
        series.chain = chain
        series._terms = _sorted_terms(collected)
        series._hash = None
        return series

    @classmethod
    def zero(cls, chain: Chain) -> "Series":
        return cls(chain)

    @classmethod
    def constant(cls, chain: Chain, value: Rational) -> "Series":
        return cls(chain, {GroupElement.zero(chain): value})

    @classmethod
    def one(cls, chain: Chain) -> "Series":
        return cls.constant(chain, 1)

    @classmethod
    def monomial(cls, exponent: GroupElement, coeff: Rational = 1) -> "Series":
        return cls(exponent.chain, {exponent: coeff})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Tuple[Tuple[GroupElement, Fraction], ...]:
        return self._terms

    @property
    def exponents(self) -> Tuple[GroupElement, ...]:
        return tuple(g for g, _ in self._terms)

    def coefficient(self, exponent: GroupElement) -> Fraction:
        for g, c in self._terms:
            if g == exponent:
                return c
        return Fraction(0)

    def constant_term(self) -> Fraction:
        return self.coefficient(GroupElement.zero(self.chain))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def valuation(self):
        """The least exponent, or INFINITY for 0."""
        if not self._terms:
            return INFINITY
        return self._terms[0][0]

    def leading_term(self) -> Optional[Tuple[GroupElement, Fraction]]:
        if not self._terms:
            return None
        return self._terms[0]

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[0][1]

    def sign(self) -> int:
        if not self._terms:
            return 0
        return 1 if self._terms[0][1] > 0 else -1

    def in_valuation_ring(self) -> bool:
        """Membership in O_v: zero or nonnegative valuation."""
        return not self._terms or self._terms[0][0].sign() >= 0

    def in_maximal_ideal(self) -> bool:
        """Membership in M_v: zero or positive valuation."""
        return not self._terms or self._terms[0][0].sign() > 0

    def is_unit(self) -> bool:
        """Membership in U_v: valuation exactly 0."""
        return bool(self._terms) and self._terms[0][0].is_zero()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Optional["Series"]:
        if isinstance(other, Series):
            self.chain.require_same(other.chain)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Series.constant(self.chain, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        collected = dict(self._terms)
        for g, c in other._terms:
            collected[g] = collected.get(g, Fraction(0)) + c
        return Series._raw(self.chain, collected)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.chain, {g: -c for g, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        collected: Dict[GroupElement, Fraction] = {}
        for g, a in self._terms:
            for h, b in other._terms:
                exponent = g + h
                collected[exponent] = collected.get(exponent, Fraction(0)) + a * b
        return Series._raw(self.chain, collected)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are exact")
        result = Series.one(self.chain)
        for _ in range(n):
            result = result * self
        return result

    def shifted(self, exponent: GroupElement) -> "Series":
        """Multiplication by t^exponent."""
        return Series._raw(self.chain, {g + exponent: c for g, c in self._terms})

    def restrict(self, keep: Callable[[GroupElement], bool]) -> "Series":
        return Series._raw(self.chain, {g: c for g, c in self._terms if keep(g)})

    def truncated(self, bound: GroupElement) -> "TruncatedSeries":
        return TruncatedSeries(self.restrict(lambda g: g < bound), bound)

    def invert_truncated(self, bound: GroupElement) -> "TruncatedSeries":
        """
        The inverse of this series modulo terms with exponent >= ``bound``.

        Writing a = c t^g (1 + eps) with v(eps) > 0, the inverse is
        c^-1 t^-g sum((-eps)^i). The sum stops at the first power of eps that
        lies at or beyond ``bound + g``.
        """
        if not self._terms:
            raise ZeroDivisionError("0 has no inverse")
        g, c = self._terms[0]
        if bound <= -g:
            raise ValueError(f"bound {bound} must exceed the valuation {-g} of the inverse")
        head = Series.monomial(-g, 1 / c)
        if self.is_monomial():
            return head.truncated(bound)
        eps = self * head - 1
        e = eps.valuation()
        target = bound + g
        powers = _powers_needed(e, target)  # type: ignore[arg-type]
        logger.debug("inverting %s below %s with %d powers of %s", self, bound, powers, e)
        total = Series.zero(self.chain)
        term = Series.one(self.chain)
        for _ in range(powers):
            total = total + term
            term = (term * -eps).restrict(lambda x: x < target)
        return (total * head).truncated(bound)

    # -- order ------------------------------------------------------------

    def compare(self, other: "Series") -> Ordering:
        other = self._coerce(other)
        if other is None:
            raise TypeError("can only compare series with series or rationals")
        return Ordering.from_sign((self - other).sign())

    def __lt__(self, other):
        return self.compare(other) is Ordering.LESS

    def __le__(self, other):
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other):
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other):
        return self.compare(other) is not Ordering.LESS

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.chain == other.chain and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("series", self.chain, self._terms))
        return self._hash

    # -- output -----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*t{{{g}}}" for g, c in self._terms)

    def __repr__(self):
        return f"Series({str(self)!r})"

    def to_dict(self):
        return {
            "text": str(self),
            "valuation": str(self.valuation()),
            "terms": [[str(g), str(c)] for g, c in self._terms],
        }


class TruncatedSeries:
    """A series known exactly below ``bound``; every stored exponent is < bound."""

    def __init__(self, series: Series, bound: GroupElement):
        for g in series.exponents:
            if not g < bound:
                raise ValueError(f"exponent {g} is not below the bound {bound}")
        self.series = series
        self.bound = bound
        self.chain = series.chain

    def agrees_with(self, other: Series) -> bool:
        """True when ``other`` has the same terms below the bound."""
        return (other - self.series).restrict(lambda g: g < self.bound).is_zero()

    def times(self, factor: Series) -> "TruncatedSeries":
        """Product with an exact nonzero series; the bound moves by its valuation."""
        if factor.is_zero():
            raise ZeroDivisionError("multiplying a truncation by 0 loses the bound")
        bound = self.bound + factor.valuation()  # type: ignore[operator]
        return (self.series * factor).truncated(bound)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.series == other.series and self.bound == other.bound

    def __hash__(self):
        return hash((self.series, self.bound))

    def __str__(self):
        return f"{self.series} + O(t{{{self.bound}}})"

    def __repr__(self):
        return f"TruncatedSeries({str(self)!r})"

    def to_dict(self):
        return {"series": self.series.to_dict(), "bound": str(self.bound)}


def _sorted_terms(collected: Dict[GroupElement, Fraction]) -> Tuple[Tuple[GroupElement, Fraction], ...]:
    return tuple(sorted(((g, c) for g, c in collected.items() if c), key=lambda gc: gc[0]))


def _powers_needed(e: GroupElement, target: GroupElement) -> int:
    """
    Smallest N + 1 with (N + 1) * e >= target, for e > 0 and target > 0.
    Unreachable when e lies in a higher archimedean class than target.
    """
    ve, vt = e.valuation(), target.valuation()
    if ve > vt:
        raise TruncationUnreachableError(
            f"multiples of {e} never reach {target}: the bound lies in a lower archimedean class"
        )
    k = 1
    while k * e < target:
        k += 1
    return k


def cmp_series(a: Series, b: Series) -> Ordering:
    return a.compare(b)


if __name__ == "__main__":
    chain = Chain.product(["q1"])
    g = GroupElement.unit(chain, chain.point("q1", 0))
    a = Series.one(chain) - Series.monomial(g)
    print(a)
    print(a.invert_truncated(g.scale(3)))  # 1 + t^g + t^2g below 3g
    print((Series.one(chain) + Series.monomial(g)) * a)
