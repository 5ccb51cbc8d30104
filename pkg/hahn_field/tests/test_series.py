import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hahn_field.src.chain import INFINITY, Chain
from hahn_field.src.errors import TruncationUnreachableError
from hahn_field.src.group import GroupElement
from hahn_field.src.series import Series, TruncatedSeries

Q1 = Chain.product(["q1"])
Q2 = Chain.product(["q1", "q2"])


def e(label="q1", n=0, coeff=1, chain=Q1):
    return GroupElement.unit(chain, chain.point(label, n), coeff)


def t(exponent, coeff=1):
    return Series.monomial(exponent, coeff)


exponents = st.lists(
    st.tuples(st.sampled_from(["q1", "q2"]), st.integers(-2, 2), st.integers(-2, 2)),
    max_size=2,
).map(lambda terms: GroupElement(Q2, [(Q2.point(label, n), c) for label, n, c in terms]))

series = st.lists(
    st.tuples(exponents, st.fractions(min_value=-3, max_value=3, max_denominator=3)),
    max_size=3,
).map(lambda terms: Series(Q2, terms))


class TestSeriesBasics(unittest.TestCase):
    def test_string_form_is_ascending(self):
        a = Series(Q1, {e(coeff=2): 3, GroupElement.zero(Q1): Fraction(-1, 2)})
        self.assertEqual(str(a), "-1/2*t{0} + 3*t{2@(q1,0)}")
        self.assertEqual(str(Series.zero(Q1)), "0")
        self.assertEqual(a.constant_term(), Fraction(-1, 2))
        self.assertEqual(a.valuation(), GroupElement.zero(Q1))
        self.assertIs(Series.zero(Q1).valuation(), INFINITY)

    def test_positive_exponents_are_infinitesimal(self):
        g = e()
        self.assertLess(Series.zero(Q1), t(g))
        self.assertLess(t(g), Series.one(Q1))
        self.assertGreater(t(-g), 1000)
        self.assertLess(t(g, -1), 0)

    def test_valuation_ring_membership(self):
        g = e()
        self.assertTrue(t(g).in_maximal_ideal())
        self.assertTrue(t(g).in_valuation_ring())
        self.assertFalse(t(g).is_unit())
        self.assertTrue((Series.one(Q1) + t(g)).is_unit())
        self.assertFalse(t(-g).in_valuation_ring())
        self.assertTrue(Series.zero(Q1).in_maximal_ideal())

    def test_arithmetic(self):
        g = e()
        a = Series.one(Q1) - t(g)
        b = Series.one(Q1) + t(g)
        self.assertEqual(a * b, Series.one(Q1) - t(g.scale(2)))
        self.assertEqual(a ** 2, Series.one(Q1) - t(g, 2) + t(g.scale(2)))
        self.assertEqual(2 - a, Series.one(Q1) + t(g))
        self.assertEqual(a.shifted(g), t(g) - t(g.scale(2)))
        self.assertEqual(a.leading_term(), (GroupElement.zero(Q1), Fraction(1)))
        with self.assertRaises(ValueError):
            a ** -1

    @settings(max_examples=100, deadline=None)
    @given(series, series, series)
    def test_ring_laws(self, a, b, c):
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual((a * b) * c, a * (b * c))
        self.assertEqual(a * b, b * a)

    @settings(max_examples=100, deadline=None)
    @given(series, series)
    def test_valuation_is_multiplicative(self, a, b):
        if a and b:
            self.assertEqual((a * b).valuation(), a.valuation() + b.valuation())
            self.assertEqual((a * b).sign(), a.sign() * b.sign())


class TestTruncatedInverse(unittest.TestCase):
    def test_geometric_series(self):
        g = e()
        a = Series.one(Q1) - t(g)
        inverse = a.invert_truncated(g.scale(3))
        self.assertEqual(inverse.series, Series.one(Q1) + t(g) + t(g.scale(2)))
        self.assertEqual(inverse.bound, g.scale(3))
        self.assertTrue(inverse.times(a).agrees_with(Series.one(Q1)))

    def test_monomial_inverse(self):
        g = e()
        inverse = t(g, 4).invert_truncated(GroupElement.zero(Q1))
        self.assertEqual(inverse.series, t(-g, Fraction(1, 4)))

    def test_inverse_with_leading_term_away_from_zero(self):
        g = e()
        a = t(-g, 2) + t(GroupElement.zero(Q1), 6)  # 2t^-g (1 + 3t^g)
        inverse = a.invert_truncated(g.scale(3))
        self.assertTrue(inverse.times(a).agrees_with(Series.one(Q1)))
        self.assertEqual(inverse.series.leading_term(), (g, Fraction(1, 2)))

    def test_bound_must_exceed_the_inverse_valuation(self):
        with self.assertRaises(ValueError):
            (Series.one(Q1) - t(e())).invert_truncated(GroupElement.zero(Q1))
        with self.assertRaises(ZeroDivisionError):
            Series.zero(Q1).invert_truncated(e())

    def test_unreachable_bound(self):
        a = Series.one(Q1) + t(e(n=5))
        with self.assertRaises(TruncationUnreachableError):
            a.invert_truncated(e(n=0))

    def test_truncation_rejects_terms_past_the_bound(self):
        with self.assertRaises(ValueError):
            TruncatedSeries(t(e()), GroupElement.zero(Q1))
        truncated = (Series.one(Q1) + t(e())).truncated(e())
        self.assertEqual(truncated.series, Series.one(Q1))
        self.assertEqual(str(truncated), "1*t{0} + O(t{1@(q1,0)})")


if __name__ == "__main__":
    unittest.main()
