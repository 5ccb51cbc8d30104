import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hahn_field.src.chain import DEFAULT_WINDOW, INFINITY, Chain, ZWindow
from hahn_field.src.couple import TrichotomyKind, couple_from_shift, couple_from_table
from hahn_field.src.errors import NotIntegrableError, PsiDomainError
from hahn_field.src.group import GroupElement

Q3 = Chain.product(["q1", "q2", "q3"])
AB = Chain.finite(["a", "b"])
ABC = Chain.finite(["a", "b", "c"])
SMALL = ZWindow(-3, 3)


def e(label, n=0, coeff=1, chain=Q3):
    return GroupElement.unit(chain, chain.point(label, n), coeff)


ZERO_CUT = couple_from_shift(Q3)
GAP_AT_Q2 = couple_from_shift(Q3, e("q2", 0, -1))
ABOVE_Q2 = couple_from_shift(Q3, e("q2", 1, 2))

COUPLES = [
    ZERO_CUT,
    GAP_AT_Q2,
    couple_from_shift(Q3, e("q3", 2, 3)),
    couple_from_shift(AB),
    couple_from_shift(ABC, GroupElement.unit(ABC, ABC.point(1), -1)),
]

elements = st.lists(
    st.tuples(st.sampled_from(["q1", "q2", "q3"]), st.integers(-3, 3), st.integers(-3, 3)),
    min_size=1,
    max_size=3,
).map(lambda terms: GroupElement(Q3, [(Q3.point(label, n), c) for label, n, c in terms]))

negative_units = st.builds(
    lambda label, n, c: e(label, n, -c),
    st.sampled_from(["q1", "q2", "q3"]),
    st.integers(-6, 6),
    st.fractions(min_value=Fraction(1, 4), max_value=4),
)


def points_of(chain):
    if chain.is_finite:
        return st.integers(0, len(chain.labels) - 1).map(chain.point)
    return st.builds(chain.point, st.sampled_from(list(chain.labels)), st.integers(-4, 4))


def elements_of(chain):
    return st.lists(st.tuples(points_of(chain), st.integers(-3, 3)), min_size=1, max_size=3).map(
        lambda terms: GroupElement(chain, terms)
    )


@st.composite
def couple_and_pair(draw):
    couple = draw(st.sampled_from(COUPLES))
    return couple, draw(elements_of(couple.chain)), draw(elements_of(couple.chain))


class TestShiftCouple(unittest.TestCase):
    def test_class_map(self):
        self.assertEqual(ZERO_CUT.psi_hat(Q3.point("q1", 0)), e("q1", 1, -1))
        self.assertEqual(ZERO_CUT.psi_apply(e("q2", 0) + e("q1", 0)), e("q2", 1, -1))
        self.assertEqual(GAP_AT_Q2.psi_hat(Q3.point("q3", 4)), e("q3", 5, -1) - e("q2", 0))
        self.assertEqual(ZERO_CUT.induced_omega(Q3.point("q2", 2)), Q3.point("q2", 3))
        with self.assertRaises(PsiDomainError):
            ZERO_CUT.psi_apply(GroupElement.zero(Q3))

    def test_top_of_a_finite_chain_maps_to_zero(self):
        couple = couple_from_shift(AB)
        self.assertEqual(couple.psi_hat(AB.point(0)), GroupElement.unit(AB, AB.point(1), -1))
        self.assertTrue(couple.psi_hat(AB.point(1)).is_zero())

    def test_axioms_hold_on_the_default_window(self):
        for labels in (["q1"], ["q1", "q2"], ["q1", "q2", "q3"]):
            chain = Chain.product(labels)
            for offset in (None, GroupElement.unit(chain, chain.point(labels[-1], 0), -1)):
                suite = couple_from_shift(chain, offset).check_axioms(DEFAULT_WINDOW, samples=200, seed=3)
                self.assertTrue(suite.passed, suite.to_dict())

    def test_axioms_with_a_middle_or_positive_offset(self):
        for couple in (GAP_AT_Q2, ABOVE_Q2, couple_from_shift(Q3, e("q2", -2, -3) + e("q3", 1))):
            suite = couple.check_axioms(SMALL, samples=100, seed=11)
            self.assertTrue(suite.passed, suite.to_dict())

    def test_axioms_on_finite_chains(self):
        suite = couple_from_shift(Chain.finite(["a", "b", "c"])).check_axioms(samples=100)
        self.assertTrue(suite.passed, suite.to_dict())

    def test_axiom_failure_is_reported(self):
        bad = couple_from_table(
            AB, {AB.point(0): GroupElement.unit(AB, AB.point(0)), AB.point(1): GroupElement.unit(AB, AB.point(1))}
        )
        suite = bad.check_axioms(samples=20)
        self.assertFalse(suite.passed)
        self.assertFalse(suite["AC3"].passed)
        self.assertIsNotNone(suite["AC3"].counterexample)

    def test_hardy_type(self):
        self.assertTrue(ZERO_CUT.is_hardy_type(SMALL))
        self.assertTrue(GAP_AT_Q2.is_hardy_type(SMALL))


class TestCutPointsAndTrichotomy(unittest.TestCase):
    def test_cut_points(self):
        self.assertTrue(ZERO_CUT.find_cut_point().is_zero)
        self.assertIs(ZERO_CUT.find_cut_point().cut_class, INFINITY)
        report = GAP_AT_Q2.find_cut_point()
        self.assertEqual(report.cut_class, Q3.point("q2", 0))
        self.assertEqual(report.witness, e("q2", 0, -1))

    def test_scan_agrees_with_the_closed_form(self):
        self.assertEqual(GAP_AT_Q2.scan_cut_class(SMALL), Q3.point("q2", 0))
        self.assertIs(ZERO_CUT.scan_cut_class(SMALL), INFINITY)

    def test_classification(self):
        self.assertEqual(ZERO_CUT.classify().kind, TrichotomyKind.GAP)
        self.assertTrue(ZERO_CUT.classify().witness.is_zero())
        self.assertEqual(GAP_AT_Q2.classify().kind, TrichotomyKind.GAP)
        self.assertEqual(GAP_AT_Q2.classify().witness, e("q2", 0, -1))
        finite = couple_from_shift(AB).classify()
        self.assertEqual(finite.kind, TrichotomyKind.MAX_PSI)
        self.assertEqual(str(finite), "max_psi(0)")

    def test_classifications_are_certified(self):
        for couple, window in ((ZERO_CUT, SMALL), (GAP_AT_Q2, SMALL), (couple_from_shift(AB), None)):
            report = couple.certify_trichotomy(couple.classify(), window, samples=50)
            self.assertTrue(report.passed, report.to_dict())

    def test_psi_membership(self):
        self.assertTrue(ZERO_CUT.in_psi(e("q1", 3, -1)))
        self.assertFalse(ZERO_CUT.in_psi(GroupElement.zero(Q3)))
        self.assertFalse(ZERO_CUT.in_psi(e("q1", 0)))
        self.assertFalse(ZERO_CUT.in_psi(e("q1", 3, -2)))
        self.assertTrue(couple_from_shift(AB).in_psi(GroupElement.zero(AB)))


class TestIntegration(unittest.TestCase):
    def test_closed_form(self):
        h = e("q1", 0)
        g = ZERO_CUT.integral(h)
        self.assertEqual(g, e("q1", 0) + e("q1", 1))
        self.assertEqual(ZERO_CUT.dg(g), h)
        self.assertEqual(ZERO_CUT.integral_search(h), g)

    def test_offset_is_not_integrable(self):
        with self.assertRaises(NotIntegrableError):
            GAP_AT_Q2.integral(e("q2", 0, -1))
        with self.assertRaises(NotIntegrableError):
            ZERO_CUT.integral(GroupElement.zero(Q3))

    def test_integral_against_search(self):
        for h in (e("q3", -2, 5), e("q1", 1) - e("q2", 0), e("q2", 0, -1) + e("q1", 2)):
            self.assertEqual(GAP_AT_Q2.integral(h), GAP_AT_Q2.integral_search(h), h)


class TestContraction(unittest.TestCase):
    def test_values(self):
        self.assertTrue(ZERO_CUT.chi(GroupElement.zero(Q3)).is_zero())
        self.assertEqual(ZERO_CUT.chi(e("q1", 0, -1)), e("q1", 1, -1) + e("q1", 2))
        self.assertEqual(ZERO_CUT.chi(e("q1", 0)), e("q1", 1) - e("q1", 2))

    @settings(max_examples=100, deadline=None)
    @given(elements, elements)
    def test_precontraction_laws(self, g, h):
        chi = ZERO_CUT.chi
        self.assertEqual(chi(-g), -chi(g))
        if g:
            self.assertLess(abs(chi(g)), abs(g))
        if g <= h:
            self.assertLessEqual(chi(g), chi(h))


class TestNegativeTranslation(unittest.TestCase):
    def test_already_negative(self):
        result = ZERO_CUT.translate_to_negative()
        self.assertTrue(result.x.is_zero())
        self.assertIs(result.alpha, INFINITY)
        self.assertTrue(result.verify(ZERO_CUT, SMALL).passed)

    def test_positive_values(self):
        couple = couple_from_shift(Q3, e("q2", 0))
        result = couple.translate_to_negative()
        self.assertEqual(result.x, e("q2", 0, -2) + e("q2", 1, 2))
        self.assertEqual(result.alpha, Q3.point("q2", 0))
        self.assertTrue(result.couple.psi_is_negative())
        suite = result.verify(couple, SMALL)
        self.assertTrue(suite.passed, suite.to_dict())

    def test_zero_is_the_maximum(self):
        couple = couple_from_shift(AB)
        result = couple.translate_to_negative()
        self.assertEqual(result.x, GroupElement.unit(AB, AB.point(1), -1))
        self.assertTrue(result.verify(couple).passed)


class TestPsiQuasiOrder(unittest.TestCase):
    def test_matches_search(self):
        g, h = e("q1", 0, -1), e("q2", 3, -1)
        self.assertFalse(ZERO_CUT.qo_psi_leq(g, h))
        self.assertTrue(ZERO_CUT.qo_psi_leq(h, g))
        self.assertFalse(ZERO_CUT.qo_psi_leq_search(g, h, depth=10))
        self.assertTrue(ZERO_CUT.qo_psi_leq_search(h, g, depth=10))

    def test_defined_on_negatives_only(self):
        with self.assertRaises(PsiDomainError):
            ZERO_CUT.qo_psi_leq(e("q1", 0), e("q1", 0, -1))

    def test_class_quasiorder_with_a_cut(self):
        # q1 classes fall into the cut class, which sits in the q2 slice
        self.assertTrue(GAP_AT_Q2.qo_class_leq(Q3.point("q1", 0), Q3.point("q2", 4)))
        self.assertTrue(GAP_AT_Q2.qo_class_leq(Q3.point("q2", 4), Q3.point("q1", 0)))
        self.assertFalse(GAP_AT_Q2.qo_class_leq(Q3.point("q2", 0), Q3.point("q3", 0)))

    def test_same_slice_below_the_cut_is_equivalent_at_any_distance(self):
        g, h = e("q3", 0, -1), e("q3", -100, -1)
        self.assertTrue(GAP_AT_Q2.qo_psi_leq(g, h))
        self.assertTrue(GAP_AT_Q2.qo_psi_leq(h, g))
        self.assertTrue(GAP_AT_Q2.qo_psi_leq_search(g, h, depth=200))
        self.assertTrue(ABOVE_Q2.qo_psi_leq(e("q3", 500, -1), e("q3", -500, -1)))
        self.assertFalse(ABOVE_Q2.qo_psi_leq(e("q2", 0, -1), e("q3", -500, -1)))

    def test_orbit_depth_grows_with_the_points(self):
        near = GAP_AT_Q2.orbit_depth(Q3.point("q2", 0))
        far = GAP_AT_Q2.orbit_depth(Q3.point("q2", -40))
        self.assertEqual(far - near, 40)
        self.assertEqual(couple_from_shift(ABC).orbit_depth(ABC.point(0)), 3)

    def test_climbing_slices(self):
        self.assertTrue(ZERO_CUT.climbs_slice(Q3.point("q1", 0)))
        self.assertTrue(GAP_AT_Q2.climbs_slice(Q3.point("q3", 0)))
        self.assertFalse(GAP_AT_Q2.climbs_slice(Q3.point("q2", -5)))
        self.assertFalse(GAP_AT_Q2.climbs_slice(Q3.point("q1", 0)))
        self.assertFalse(couple_from_shift(AB).climbs_slice(AB.point(0)))

    @settings(max_examples=150, deadline=None)
    @given(st.sampled_from([GAP_AT_Q2, ABOVE_Q2]), negative_units, negative_units)
    def test_closed_form_matches_search_with_an_offset(self, couple, g, h):
        self.assertEqual(couple.qo_psi_leq(g, h), couple.qo_psi_leq_search(g, h, depth=20), (g, h))


class TestCoupleLaws(unittest.TestCase):
    @settings(max_examples=200, deadline=None)
    @given(couple_and_pair())
    def test_psi_differences_are_smaller(self, drawn):
        couple, g, h = drawn
        if not g or not h or g == h:
            return
        difference = couple.psi_apply(g) - couple.psi_apply(h)
        self.assertGreater(difference.valuation(), (g - h).valuation(), (couple, g, h))

    @settings(max_examples=200, deadline=None)
    @given(couple_and_pair())
    def test_dg_is_strictly_increasing(self, drawn):
        couple, g, h = drawn
        if not g or not h or g == h:
            return
        if h < g:
            g, h = h, g
        self.assertLess(couple.dg(g), couple.dg(h), (couple, g, h))

    @settings(max_examples=100, deadline=None)
    @given(couple_and_pair())
    def test_integral_inverts_dg(self, drawn):
        couple, g, _ = drawn
        if not g:
            return
        self.assertEqual(couple.integral(couple.dg(g)), g)
        self.assertEqual(couple.integral_search(couple.dg(g)), g)

    @settings(max_examples=100, deadline=None)
    @given(couple_and_pair())
    def test_small_elements(self, drawn):
        couple, g, _ = drawn
        if not g:
            return
        # D_G(g) - c is as small as g
        self.assertEqual((couple.dg(g) - couple.offset).valuation(), g.valuation())
        # the cut point of the translate psi_g is at least as small as g
        cut = couple.translate_by_value(g).find_cut_point().cut_class
        self.assertGreaterEqual(cut, g.valuation())


if __name__ == "__main__":
    unittest.main()
