import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from hahn_field.src.chain import Chain, FinalSegment, SliceState, ZWindow
from hahn_field.src.errors import ParseError
from hahn_field.src.grammar import (
    chain_from_dict,
    couple_from_dict,
    load_chain,
    load_couple,
    parse_group_element,
    parse_labels,
    parse_point,
    parse_segment,
    parse_series,
    parse_window,
)
from hahn_field.src.group import GroupElement

Q3 = Chain.product(["q1", "q2", "q3"])
AB = Chain.finite(["a", "b"])


class TestPoints(unittest.TestCase):
    def test_product_points(self):
        self.assertEqual(parse_point("(q1,-3)", Q3), Q3.point("q1", -3))
        self.assertEqual(parse_point(" ( q2 , 2 ) ", Q3), Q3.point("q2", 2))

    def test_finite_points(self):
        self.assertEqual(parse_point("g1", AB), AB.point(1))
        self.assertEqual(parse_point("b", AB), AB.point(1))

    def test_errors_carry_positions(self):
        with self.assertRaises(ParseError) as ctx:
            parse_point("(q9,0)", Q3)
        self.assertEqual(ctx.exception.position, 1)
        with self.assertRaises(ParseError) as ctx:
            parse_point("(q1,0) x", Q3)
        self.assertEqual(ctx.exception.position, 7)
        with self.assertRaises(ParseError) as ctx:
            parse_point("g2", AB)
        self.assertEqual(ctx.exception.position, 0)

    def test_message_points_at_the_error(self):
        with self.assertRaises(ParseError) as ctx:
            parse_point("(q1;0)", Q3)
        self.assertEqual(ctx.exception.position, 3)
        self.assertIn("(q1;0)\n     ^", str(ctx.exception))


class TestGroupAndSeries(unittest.TestCase):
    def test_group_elements(self):
        g = parse_group_element("2@(q1,0) + -1@(q2,3)", Q3)
        self.assertEqual(str(g), "-1@(q2,3) + 2@(q1,0)")
        self.assertEqual(parse_group_element(str(g), Q3), g)
        self.assertTrue(parse_group_element("0", Q3).is_zero())
        self.assertEqual(parse_group_element("1/2@g0 + 1/2@g0", AB), GroupElement.unit(AB, AB.point(0)))

    def test_series(self):
        a = parse_series("3*t{2@(q1,0)} + -1/2*t{0}", Q3)
        self.assertEqual(a.constant_term(), Fraction(-1, 2))
        self.assertEqual(a.coefficient(GroupElement.unit(Q3, Q3.point("q1", 0), 2)), 3)
        self.assertEqual(parse_series("t{1@(q1,0)}", Q3).leading_coefficient(), 1)
        self.assertTrue(parse_series("0", Q3).is_zero())
        self.assertEqual(parse_series(str(a), Q3), a)

    def test_zero_denominator(self):
        with self.assertRaises(ParseError) as ctx:
            parse_series("1/0*t{0}", Q3)
        self.assertEqual(ctx.exception.position, 0)

    def test_unclosed_exponent(self):
        with self.assertRaises(ParseError) as ctx:
            parse_series("1*t{", Q3)
        self.assertEqual(ctx.exception.position, 4)


class TestSegmentsWindowsLabels(unittest.TestCase):
    def test_segments(self):
        self.assertEqual(
            parse_segment("{q1:all,q2:tail(3)}", Q3),
            FinalSegment.from_slices(Q3, {"q1": SliceState.all(), "q2": SliceState.tail(3)}),
        )
        self.assertTrue(parse_segment("all", Q3).is_full)
        self.assertTrue(parse_segment("empty", Q3).is_empty)
        self.assertEqual(parse_segment("suffix(1)", AB), FinalSegment.suffix(AB, 1))

    def test_segment_must_be_upward_closed(self):
        with self.assertRaises(ParseError) as ctx:
            parse_segment("{q1:none,q2:all}", Q3)
        self.assertEqual(ctx.exception.position, 0)
        with self.assertRaises(ParseError) as ctx:
            parse_segment("{q1:all,q1:all}", Q3)
        self.assertEqual(ctx.exception.position, 8)

    def test_windows(self):
        self.assertEqual(parse_window("-4:4"), ZWindow(-4, 4))
        self.assertEqual(parse_window(" 0 : 2 "), ZWindow(0, 2))
        with self.assertRaises(ParseError):
            parse_window("4:-4")
        with self.assertRaises(ParseError) as ctx:
            parse_window("4")
        self.assertEqual(ctx.exception.position, 1)

    def test_labels(self):
        self.assertEqual(parse_labels("q1, q2,q3"), ["q1", "q2", "q3"])
        with self.assertRaises(ParseError) as ctx:
            parse_labels("q1,q1")
        self.assertEqual(ctx.exception.position, 3)


class TestDescriptors(unittest.TestCase):
    def test_shift_couple(self):
        couple = couple_from_dict(
            {"chain": {"kind": "product", "labels": ["q1", "q2", "q3"]}, "offset": "-1@(q2,0)"}
        )
        self.assertEqual(couple.offset, GroupElement.unit(Q3, Q3.point("q2", 0), -1))
        self.assertEqual(couple.chain, Q3)

    def test_table_couple(self):
        couple = couple_from_dict({"chain": {"kind": "finite", "labels": ["a", "b"]}, "table": {"a": "1@a", "g1": "0"}})
        self.assertEqual(couple.psi_hat(AB.point(0)), GroupElement.unit(AB, AB.point(0)))
        self.assertTrue(couple.psi_hat(AB.point(1)).is_zero())

    def test_bad_descriptors(self):
        with self.assertRaises(ParseError):
            chain_from_dict({"kind": "tree", "labels": ["a"]})
        with self.assertRaises(ParseError):
            chain_from_dict({"labels": ["a", "a"]})
        with self.assertRaises(ParseError):
            chain_from_dict(["q1"])
        with self.assertRaises(ParseError):
            couple_from_dict({"chain": {"kind": "product", "labels": ["q1"]}, "table": {"(q1,0)": "0"}})

    def test_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "couple.json"
            path.write_text(json.dumps({"chain": {"labels": ["q1", "q2"]}, "offset": "-1@(q2,0)"}))
            self.assertEqual(load_couple(path).chain, Chain.product(["q1", "q2"]))
            self.assertEqual(load_chain(path), Chain.product(["q1", "q2"]))
            broken = Path(tmp) / "broken.json"
            broken.write_text('{"chain": ')
            with self.assertRaises(ParseError) as ctx:
                load_couple(broken)
            self.assertEqual(ctx.exception.position, 10)


if __name__ == "__main__":
    unittest.main()
