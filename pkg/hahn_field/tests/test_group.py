import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hahn_field.src.chain import INFINITY, Chain, FinalSegment, Ordering
from hahn_field.src.errors import ChainMembershipError, ChainMismatchError, SegmentError
from hahn_field.src.group import ConvexSubgroup, GroupElement, as_rational

Q2 = Chain.product(["q1", "q2"])


def e(label, n=0, coeff=1, chain=Q2):
    return GroupElement.unit(chain, chain.point(label, n), coeff)


elements = st.lists(
    st.tuples(
        st.sampled_from(["q1", "q2"]),
        st.integers(-3, 3),
        st.fractions(min_value=-5, max_value=5, max_denominator=4),
    ),
    max_size=4,
).map(lambda terms: GroupElement(Q2, [(Q2.point(label, n), c) for label, n, c in terms]))


class TestGroupElement(unittest.TestCase):
    def test_terms_are_sorted_and_merged(self):
        g = GroupElement(Q2, [(Q2.point("q1", 0), 2), (Q2.point("q2", 3), -1), (Q2.point("q1", 0), 0)])
        self.assertEqual(str(g), "-1@(q2,3) + 2@(q1,0)")
        self.assertEqual(g.support, (Q2.point("q2", 3), Q2.point("q1", 0)))
        self.assertEqual(g.coefficient(Q2.point("q1", 0)), 2)
        self.assertEqual(g.coefficient(Q2.point("q1", 5)), 0)

    def test_valuation_is_the_smallest_support_point(self):
        g = e("q1", 0, 2) - e("q2", 3)
        self.assertEqual(g.valuation(), Q2.point("q2", 3))
        self.assertEqual(g.sign(), -1)
        self.assertIs(GroupElement.zero(Q2).valuation(), INFINITY)
        self.assertEqual(str(GroupElement.zero(Q2)), "0")

    def test_order_is_lexicographic_from_the_bottom(self):
        self.assertGreater(e("q2", 0), e("q1", 0, 1000))  # lower class dominates
        self.assertLess(-e("q2", 0), e("q1", 0, -1000))
        self.assertGreater(e("q1", 0), e("q1", 1, 50))
        self.assertIs(e("q1", 0).compare(e("q1", 0)), Ordering.EQUAL)
        self.assertEqual(abs(-e("q1", 2)), e("q1", 2))

    def test_scalar_multiples(self):
        g = e("q1", 0) + e("q2", 1, Fraction(1, 2))
        self.assertEqual(3 * g, g.scale(3))
        self.assertEqual(g * Fraction(2), e("q1", 0, 2) + e("q2", 1))
        self.assertTrue((g - g).is_zero())

    def test_archimedean_equivalence(self):
        g = e("q1", 0)
        self.assertTrue(g.arch_equiv(e("q1", 0, 5) + e("q1", 3)))
        self.assertFalse(g.arch_equiv(e("q1", 1)))
        self.assertFalse(g.arch_equiv(GroupElement.zero(Q2)))

    def test_exact_coefficients_only(self):
        self.assertEqual(as_rational(3), Fraction(3))
        with self.assertRaises(TypeError):
            as_rational(1.5)
        with self.assertRaises(TypeError):
            as_rational(True)

    def test_mixing_chains_is_refused(self):
        other = Chain.product(["q1"])
        with self.assertRaises(ChainMismatchError):
            e("q1") + e("q1", chain=other)
        with self.assertRaises(ChainMembershipError):
            GroupElement(other, {Q2.point("q2", 0): 1})

    @settings(max_examples=150, deadline=None)
    @given(elements, elements, elements)
    def test_ordered_group_laws(self, g, h, k):
        self.assertEqual((g + h) + k, g + (h + k))
        self.assertEqual(g + h, h + g)
        self.assertTrue(g < h or g == h or g > h)
        if g < h:
            self.assertLess(g + k, h + k)
            self.assertGreater(-g, -h)

    @settings(max_examples=200, deadline=None)
    @given(elements, elements)
    def test_comparison_reads_the_sign_of_the_difference(self, g, h):
        self.assertEqual(g.compare(h), Ordering.from_sign((g - h).sign()))
        self.assertEqual(g <= h, (g - h).sign() <= 0)
        self.assertEqual(g > h, (g - h).sign() > 0)

    @settings(max_examples=150, deadline=None)
    @given(elements, elements)
    def test_valuation_of_a_sum(self, g, h):
        total = g + h
        if not total.is_zero():
            self.assertGreaterEqual(total.valuation(), min(g.valuation(), h.valuation()))


class TestConvexSubgroup(unittest.TestCase):
    def test_membership_follows_the_support(self):
        h = ConvexSubgroup(FinalSegment.through_label(Q2, "q1"))
        self.assertIn(e("q1", -5) + e("q1", 4), h)
        self.assertNotIn(e("q2", 0), h)
        self.assertNotIn(e("q1", 0) + e("q2", 7, Fraction(1, 9)), h)
        self.assertIn(GroupElement.zero(Q2), h)
        self.assertEqual(str(h), "H{q1:all,q2:none}")

    def test_trivial_subgroup(self):
        self.assertTrue(ConvexSubgroup(FinalSegment.empty(Q2)).is_trivial)
        self.assertFalse(ConvexSubgroup(FinalSegment.full(Q2)).is_trivial)

    def test_needs_a_segment(self):
        with self.assertRaises(SegmentError):
            ConvexSubgroup("q1")

    @settings(max_examples=100, deadline=None)
    @given(elements, elements)
    def test_is_convex(self, g, h):
        subgroup = ConvexSubgroup(FinalSegment.through_label(Q2, "q1"))
        # 0 <= |g| <= |h| with h inside forces g inside
        if h in subgroup and abs(g) <= abs(h):
            self.assertIn(g, subgroup)


if __name__ == "__main__":
    unittest.main()
