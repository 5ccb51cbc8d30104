import unittest
from unittest.mock import patch

from hahn_field.src.chain import DEFAULT_WINDOW, Chain, FinalSegment, ZWindow
from hahn_field.src.errors import RealizationError
from hahn_field.src.ranks import RankReport
from hahn_field.src.realization import RealizationSpec, realize

WINDOW = ZWindow(-2, 2)


def segments(spec, labels):
    chain = spec.chain()
    return [FinalSegment.through_label(chain, label) for label in labels]


class TestRealizationSpec(unittest.TestCase):
    def test_p_defaults_to_q(self):
        spec = RealizationSpec.from_labels(["q1", "q2", "q3"])
        self.assertEqual(spec.p_labels, ("q1", "q2", "q3"))
        self.assertTrue(spec.offset(spec.chain()).is_zero())

    def test_p_is_the_final_segment_of_its_generator(self):
        spec = RealizationSpec.from_labels(["q1", "q2", "q3"], "q2")
        self.assertEqual(spec.p_labels, ("q2", "q3"))
        chain = spec.chain()
        self.assertEqual(str(spec.offset(chain)), "-1@(q2,0)")
        self.assertEqual(spec.to_dict(), {"Q": ["q1", "q2", "q3"], "P": ["q2", "q3"], "generator": "q2"})

    def test_validation(self):
        with self.assertRaises(ValueError):
            RealizationSpec.from_labels([])
        with self.assertRaises(ValueError):
            RealizationSpec.from_labels([f"q{i}" for i in range(13)])
        with self.assertRaises(ValueError):
            RealizationSpec.from_labels(["q1", "q1"])
        with self.assertRaises(ValueError):
            RealizationSpec.from_labels(["q1", "2q"])
        with self.assertRaises(ValueError):
            RealizationSpec.from_labels(["q1", "q2"], "q3")


class TestRealize(unittest.TestCase):
    def test_single_label(self):
        spec = RealizationSpec.from_labels(["q1"])
        certificate = realize(spec, WINDOW, seed=1, samples=50)
        self.assertTrue(certificate.passed)
        self.assertEqual(certificate.rank.principal, segments(spec, ["q1"]))
        self.assertEqual(certificate.unfolded.principal, segments(spec, ["q1"]))

    def test_every_generator_up_to_four_labels(self):
        for size in range(1, 5):
            labels = [f"q{i + 1}" for i in range(size)]
            for generator in [None] + labels:
                spec = RealizationSpec.from_labels(labels, generator)
                certificate = realize(spec, WINDOW, seed=0, samples=30)
                self.assertTrue(certificate.passed, (labels, generator))
                self.assertEqual(certificate.rank.principal, segments(spec, spec.p_labels))
                self.assertEqual(certificate.unfolded.principal, segments(spec, spec.q_labels))
                self.assertEqual(certificate.failures(), [])

    def test_zero_samples_is_honoured(self):
        certificate = realize(RealizationSpec.from_labels(["q1"]), WINDOW, samples=0)
        self.assertTrue(certificate.passed)
        suites = {suite.name: suite for suite in certificate.suites}
        self.assertEqual(suites["derivation"]["Leibniz"].samples, 0)
        self.assertEqual(suites["asymptotic-couple"]["AC2"].samples, 30)  # 10 windowed units, 3 scalings each

    def test_every_generator_at_the_default_window(self):
        for size in range(1, 5):
            labels = [f"q{i + 1}" for i in range(size)]
            for generator in [None] + labels:
                spec = RealizationSpec.from_labels(labels, generator)
                certificate = realize(spec)
                self.assertTrue(certificate.passed, (labels, generator))
                self.assertEqual(certificate.window, DEFAULT_WINDOW)
                self.assertEqual(certificate.rank.principal, segments(spec, spec.p_labels))
                self.assertEqual(certificate.unfolded.principal, segments(spec, spec.q_labels))

    def test_certificate_json(self):
        spec = RealizationSpec.from_labels(["q1", "q2", "q3"], "q2")
        data = realize(spec, WINDOW, seed=4, samples=30).to_dict()
        self.assertEqual(data["schema"], "hahnfield/1")
        self.assertTrue(data["pass"])
        self.assertEqual(data["window"], "-2:2")
        self.assertEqual(data["witnesses"]["P"], {"q2": "{q1:all,q2:all,q3:none}", "q3": "all"})
        self.assertEqual(data["rank"]["principal"], ["{q1:all,q2:all,q3:none}", "all"])
        self.assertEqual(data["couple"]["cut_class"], "(q2,0)")
        self.assertEqual(
            [suite["suite"] for suite in data["checks"]],
            [
                "asymptotic-couple",
                "trichotomy",
                "unfolded-rank",
                "ranks",
                "derivation",
                "differential-valued",
                "H-field",
            ],
        )

    def test_same_seed_same_certificate(self):
        spec = RealizationSpec.from_labels(["q1", "q2"], "q2")
        first = realize(spec, WINDOW, seed=9, samples=20).to_dict()
        second = realize(spec, WINDOW, seed=9, samples=20).to_dict()
        self.assertEqual(first, second)

    def test_failed_check_stops_the_pipeline(self):
        spec = RealizationSpec.from_labels(["q1", "q2"])
        empty = RankReport(Chain.product(["q1", "q2"]), [], [], {})
        with patch("hahn_field.src.realization.psi_rank", return_value=empty):
            with self.assertRaises(RealizationError) as ctx:
                realize(spec, WINDOW, samples=20)
        self.assertEqual(ctx.exception.report["suite"], "ranks")
        self.assertIn("principal rank ~ P", str(ctx.exception))


if __name__ == "__main__":
    unittest.main()
