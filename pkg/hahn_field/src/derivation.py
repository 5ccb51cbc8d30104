"""
The derivation on Q((G)) defined by

    D(t^g) = sum over gamma in supp(g) of lambda_gamma * g_gamma * t^(g + psi_hat(gamma))

extended linearly, together with its axiom checks and the coarsenings of the
valuation it does or does not pass to.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .chain import DEFAULT_WINDOW, ChainPoint, ExtendedPoint, FinalSegment, ZWindow
from .config import DEFAULT_MULTIPLIER, DEFAULT_SEED, DV_SAMPLES, LEIBNIZ_SAMPLES, RESIDUE_SAMPLES
from .couple import AsymptoticCouple
from .errors import PsiDomainError, SegmentError
from .group import ConvexSubgroup, GroupElement, Rational, as_rational
from .ranks import is_compatible_fast
from .reports import AxiomReport, ReportSuite
from .sampling import Sampler
from .series import Series, TruncatedSeries

logger = logging.getLogger(__name__)


class CoarseningClass(Enum):
    IN_DIFFERENTIAL_RANK = auto()
    IN_UNFOLDED_RANK_ONLY = auto()
    RESIDUE_DERIVATION_ONLY = auto()
    NO_INDUCED_DERIVATION = auto()

    def __str__(self):
        return self.name.lower()


class ResidueContext:
    """
    The coarsening w of v whose value group is G / H_F for a final segment F.
    The residue field Kw is represented by the series with exponents in H_F.
    """

    def __init__(self, segment: FinalSegment):
        if segment.is_empty:
            raise SegmentError("the empty segment does not define a coarsening")
        self.segment = segment
        self.chain = segment.chain
        self.subgroup = ConvexSubgroup(segment)

    @property
    def is_trivial_valuation(self) -> bool:
        """F = Gamma makes w trivial (O_w is the whole field)."""
        return self.segment.is_full

    def in_ring(self, a: Series) -> bool:
        """O_w: v(a) in H_F or v(a) > 0."""
        if a.is_zero():
            return True
        g = a.valuation()
        return g in self.subgroup or g.sign() > 0

    def in_ideal(self, a: Series) -> bool:
        """M_w: v(a) > 0 and v(a) not in H_F."""
        if a.is_zero():
            return True
        g = a.valuation()
        return g.sign() > 0 and g not in self.subgroup

    def is_unit(self, a: Series) -> bool:
        """U_w: v(a) in H_F."""
        return not a.is_zero() and a.valuation() in self.subgroup

    def w_greater(self, g: GroupElement, h: GroupElement) -> bool:
        """w-values compare through G / H_F: g > h there iff g - h > 0 and g - h is not in H_F."""
        difference = g - h
        return difference.sign() > 0 and difference not in self.subgroup

    def residue(self, a: Series) -> Series:
        if not self.in_ring(a):
            raise ValueError(f"{a} is not in the valuation ring of w")
        return a.restrict(lambda g: g in self.subgroup)

    def residue_derivation(self, config: "DerivationConfig", a: Series) -> Series:
        """D restricted to series supported in H_F; the result must stay in H_F."""
        if any(g not in self.subgroup for g in a.exponents):
            raise ValueError(f"{a} is not supported in {self.subgroup}")
        image = config.derive(a)
        if any(g not in self.subgroup for g in image.exponents):
            raise ValueError(f"D({a}) leaves {self.subgroup}")
        return image

    def to_dict(self):
        return {"segment": str(self.segment), "trivial": self.is_trivial_valuation}


@dataclass
class CoarseningReport:
    context: ResidueContext
    classification: CoarseningClass
    checks: ReportSuite
    witness: Dict[str, str] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.checks.passed

    def to_dict(self):
        return {
            "segment": str(self.context.segment),
            "classification": str(self.classification),
            "trivial_valuation": self.context.is_trivial_valuation,
            "certified": self.certified,
            "witness": self.witness,
            "checks": self.checks.to_dict(),
        }


@dataclass
class InducedCoupleReport:
    """gamma -> v(phi(t^e_gamma)) read off the derivation, compared with psi_hat."""

    fingerprint: Dict[ChainPoint, ExtendedPoint]
    report: AxiomReport

    @property
    def matches(self) -> bool:
        return self.report.passed

    def to_dict(self):
        return {
            "fingerprint": {str(k): str(v) for k, v in sorted(self.fingerprint.items(), key=lambda kv: kv[0].key)},
            "check": self.report.to_dict(),
        }


class DerivationConfig:
    """
    A couple together with the per-class multipliers lambda_gamma < 0
    (default -1) that scale the derivation.
    """

    def __init__(
        self,
        couple: AsymptoticCouple,
        multipliers: Optional[Mapping[ChainPoint, Rational]] = None,
        default: Rational = DEFAULT_MULTIPLIER,
    ):
        self.couple = couple
        self.chain = couple.chain
        self.default = as_rational(default)
        self.multipliers: Dict[ChainPoint, Fraction] = {}
        for point, value in (multipliers or {}).items():
            self.chain.require(point)
            self.multipliers[point] = as_rational(value)
        for value in [self.default, *self.multipliers.values()]:
            if value >= 0:
                raise ValueError(f"multipliers must be negative, got {value}")
        self._monomials: Dict[GroupElement, Series] = {}

    def multiplier(self, gamma: ChainPoint) -> Fraction:
        return self.multipliers.get(gamma, self.default)

    def to_dict(self):
        return {
            "default_multiplier": str(self.default),
            "multipliers": {str(p): str(v) for p, v in self.multipliers.items()},
        }

    # -- the derivation ---------------------------------------------------

    def derive_monomial(self, g: GroupElement) -> Series:
        cached = self._monomials.get(g)
        if cached is not None:
            return cached
        terms: Dict[GroupElement, Fraction] = {}
        for gamma, coeff in g.terms:
            exponent = g + self.couple.psi_hat(gamma)
            terms[exponent] = terms.get(exponent, Fraction(0)) + self.multiplier(gamma) * coeff
        result = Series(self.chain, terms)
        self._monomials[g] = result
        return result

    def derive(self, a: Series) -> Series:
        total = Series.zero(self.chain)
        for g, coeff in a.terms:
            if not g.is_zero():
                total = total + self.derive_monomial(g) * coeff
        return total

    def log_derivative(self, a: Series, bound: GroupElement) -> TruncatedSeries:
        """D(a)/a below ``bound``; needs v(a) != 0 and bound > psi(v(a))."""
        if a.is_zero() or a.valuation().is_zero():
            raise PsiDomainError("the logarithmic derivative needs an element of nonzero valuation")
        da = self.derive(a)
        if bound <= da.valuation() - a.valuation():
            raise ValueError(f"bound {bound} must exceed psi(v(a)) = {da.valuation() - a.valuation()}")
        inverse = a.invert_truncated(bound - da.valuation())
        return (da * inverse.series).truncated(bound)

    # -- checks -----------------------------------------------------------

    def check_leibniz(
        self, window: Optional[ZWindow] = DEFAULT_WINDOW, samples: int = LEIBNIZ_SAMPLES, seed: int = DEFAULT_SEED
    ) -> AxiomReport:
        sampler = Sampler(self.chain, _window_for(self, window), seed)
        report = AxiomReport("Leibniz", seed=seed)
        for _ in range(samples):
            a, b = sampler.series(), sampler.series()
            report.record(self.derive(a * b) == a * self.derive(b) + b * self.derive(a), a=a, b=b)
        return report

    def check_valuation_law(
        self, window: Optional[ZWindow] = DEFAULT_WINDOW, samples: int = DV_SAMPLES, seed: int = DEFAULT_SEED
    ) -> AxiomReport:
        """v(D(a)) = g + psi(g) with coefficient a_g * lambda_gamma * g_gamma, for g = v(a) != 0."""
        sampler = Sampler(self.chain, _window_for(self, window), seed)
        report = AxiomReport("valuation-law", seed=seed)
        while report.samples < samples:
            a = sampler.series()
            g, a_g = a.leading_term()  # type: ignore[misc]
            if g.is_zero():
                continue
            gamma = g.valuation()
            da = self.derive(a)
            expected_exponent = g + self.couple.psi_apply(g)
            expected_coeff = a_g * self.multiplier(gamma) * g.coefficient(gamma)
            report.record(
                da.leading_term() == (expected_exponent, expected_coeff),
                a=a,
                got=da.leading_term(),
                expected=(expected_exponent, expected_coeff),
            )
        return report

    def check_dv_axioms(
        self, window: Optional[ZWindow] = DEFAULT_WINDOW, samples: int = DV_SAMPLES, seed: int = DEFAULT_SEED
    ) -> ReportSuite:
        window = _window_for(self, window)
        sampler = Sampler(self.chain, window, seed)
        suite = ReportSuite("differential-valued")
        dv1 = suite.add(AxiomReport("DV1", seed=seed))
        decomposition = suite.add(AxiomReport("O_v = C + M_v", seed=seed))
        dv2 = suite.add(AxiomReport("DV2", seed=seed))

        for _ in range(samples):
            a = sampler.series()
            constant = all(g.is_zero() for g in a.exponents)
            dv1.record(self.derive(a).is_zero() == constant, a=a)
            if a.in_valuation_ring():
                rest = a - a.constant_term()
                decomposition.record(rest.in_maximal_ideal(), a=a)

        ring = [self._ring_sample(sampler) for _ in range(samples)]
        ideal = [sampler.series_with_valuation_sign(1) for _ in range(samples)]
        for a, b in zip(ring, ideal):
            dv2.record(self._dv2_holds(a, b), a=a, b=b)
        units = [GroupElement.unit(self.chain, p) for p in self.chain.window_points(window)]
        for a_exp in units:
            for b_exp in units:
                a, b = Series.monomial(a_exp), Series.monomial(b_exp)
                dv2.record(self._dv2_holds(a, b), a=a, b=b)
        logger.info("DV suite: %s", "pass" if suite.passed else "FAIL")
        return suite

    def _ring_sample(self, sampler: Sampler) -> Series:
        if sampler.rng.random() < 0.5:
            return Series.constant(self.chain, sampler.rational()) + sampler.series_with_valuation_sign(1)
        return sampler.series_with_valuation_sign(1)

    def _dv2_holds(self, a: Series, b: Series) -> bool:
        """v(D(a)) > psi(v(b)), read through valuations only."""
        da = self.derive(a)
        if da.is_zero():
            return True
        return da.valuation() > self.couple.psi_apply(b.valuation())

    def check_h_axioms(
        self, window: Optional[ZWindow] = DEFAULT_WINDOW, samples: int = DV_SAMPLES, seed: int = DEFAULT_SEED
    ) -> ReportSuite:
        window = _window_for(self, window)
        sampler = Sampler(self.chain, window, seed)
        suite = ReportSuite("H-field")
        ph2 = suite.add(AxiomReport("PH2", seed=seed))
        ph3 = suite.add(AxiomReport("PH3", seed=seed))
        ph3_negative = suite.add(AxiomReport("PH3-negative", seed=seed))
        h2 = suite.add(AxiomReport("H2", seed=seed))
        hardy = suite.add(AxiomReport("Hardy-type", seed=seed))

        large = [Series.monomial(GroupElement.unit(self.chain, p, -1)) for p in self.chain.window_points(window)]
        for _ in range(samples):
            a = sampler.series_with_valuation_sign(-1)
            large.append(a if a.sign() > 0 else -a)
        for a in large:
            ph3.record(self.derive(a).sign() > 0, a=a)
            ph3_negative.record(self.derive(-a).sign() < 0, a=-a)

        for _ in range(samples):
            x, y = sorted([sampler.series(), sampler.series()])
            if x.sign() >= 0 and y.in_valuation_ring():
                ph2.record(x.in_valuation_ring(), x=x, y=y)
            if y.in_valuation_ring():
                h2.record((y - y.constant_term()).in_maximal_ideal(), a=y)
        hardy.record(self.couple.is_hardy_type(window), couple=repr(self.couple))
        logger.info("H-field suite: %s", "pass" if suite.passed else "FAIL")
        return suite

    def induced_couple(self, window: Optional[ZWindow] = DEFAULT_WINDOW) -> InducedCoupleReport:
        """Reads psi back from phi(t^e_gamma) = D(t^e_gamma) / t^e_gamma on every windowed class."""
        window = _window_for(self, window)
        fingerprint: Dict[ChainPoint, ExtendedPoint] = {}
        report = AxiomReport("induced-couple")
        for gamma in self.chain.window_points(window):
            e = GroupElement.unit(self.chain, gamma)
            phi = self.derive_monomial(e).shifted(-e)
            extracted = phi.valuation()
            fingerprint[gamma] = extracted.valuation()
            report.record(
                extracted == self.couple.psi_hat(gamma)
                and fingerprint[gamma] == self.couple.induced_omega(gamma),
                gamma=gamma,
                extracted=extracted,
                psi_hat=self.couple.psi_hat(gamma),
            )
        return InducedCoupleReport(fingerprint, report)

    # -- coarsenings ------------------------------------------------------

    def coarsen_residue(
        self,
        segment: FinalSegment,
        window: Optional[ZWindow] = DEFAULT_WINDOW,
        samples: int = RESIDUE_SAMPLES,
        seed: int = DEFAULT_SEED,
    ) -> CoarseningReport:
        """
        Classifies the coarsening defined by ``segment`` and certifies the
        verdict with sampled checks and explicit witnesses.
        """
        window = _window_for(self, window)
        context = ResidueContext(segment)
        couple = self.couple
        cut = couple.find_cut_point()
        cut_inside = cut.is_zero or segment.contains(cut.cut_class)  # type: ignore[arg-type]
        classes = self.chain.window_points(window)
        if is_compatible_fast(couple, segment):
            classification = CoarseningClass.IN_DIFFERENTIAL_RANK
        elif any(
            is_compatible_fast(couple.translate_by_value(GroupElement.unit(self.chain, gamma)), segment)
            for gamma in classes
        ):
            classification = CoarseningClass.IN_UNFOLDED_RANK_ONLY
        elif cut_inside:
            classification = CoarseningClass.RESIDUE_DERIVATION_ONLY
        else:
            classification = CoarseningClass.NO_INDUCED_DERIVATION
        logger.debug("coarsening %s classified as %s", segment, classification)

        ring, ideal = self._coarsening_samples(context, window, samples, seed)
        suite = ReportSuite(f"coarsening:{classification}")
        witness: Dict[str, str] = {}

        if classification in (CoarseningClass.IN_DIFFERENTIAL_RANK, CoarseningClass.RESIDUE_DERIVATION_ONLY):
            stable_ring = suite.add(AxiomReport("D(O_w) in O_w", seed=seed))
            for a in ring:
                stable_ring.record(context.in_ring(self.derive(a)), a=a)
            stable_ideal = suite.add(AxiomReport("D(M_w) in M_w", seed=seed))
            for b in ideal:
                stable_ideal.record(context.in_ideal(self.derive(b)), b=b)
            nontrivial = suite.add(AxiomReport("nontrivial residue derivation"))
            found = self._nontrivial_witness(context, classes)
            if found is not None:
                witness["nontrivial"] = str(found)
            nontrivial.record(found is not None, segment=segment)

        violation = self._dv2_for_w_violation(context, ring, ideal)
        if classification in (CoarseningClass.IN_DIFFERENTIAL_RANK, CoarseningClass.IN_UNFOLDED_RANK_ONLY):
            dv2 = suite.add(AxiomReport("DV2 for w", seed=seed))
            dv2.samples = len(ring) * len(ideal)
            if violation is not None:
                dv2.record(False, a=violation[0], b=violation[1])
        if classification is CoarseningClass.RESIDUE_DERIVATION_ONLY:
            fails = suite.add(AxiomReport("DV2 for w fails"))
            if violation is not None:
                witness["a"], witness["b"] = str(violation[0]), str(violation[1])
            fails.record(violation is not None, segment=segment)

        if classification in (CoarseningClass.NO_INDUCED_DERIVATION, CoarseningClass.IN_UNFOLDED_RANK_ONLY):
            escape = suite.add(AxiomReport("escape witness"))
            found = self._escape_witness(context, classes)
            if found is not None:
                witness["escape"] = str(found)
            escape.record(found is not None, segment=segment)
        return CoarseningReport(context, classification, suite, witness)

    def _coarsening_samples(
        self, context: ResidueContext, window: Optional[ZWindow], samples: int, seed: int
    ) -> Tuple[List[Series], List[Series]]:
        """Monomials t^(+-e_gamma) and random series, sorted into O_w and M_w."""
        sampler = Sampler(self.chain, window, seed)
        classes = sampler.points
        candidates = [Series.one(self.chain)]
        for gamma in classes:
            candidates.append(Series.monomial(GroupElement.unit(self.chain, gamma)))
            candidates.append(Series.monomial(GroupElement.unit(self.chain, gamma, -1)))
        candidates += [sampler.series() for _ in range(samples)]
        ring = [a for a in candidates if context.in_ring(a)]
        ideal = [b for b in candidates if not b.is_zero() and context.in_ideal(b)]
        return ring, ideal

    def _dv2_for_w_violation(
        self, context: ResidueContext, ring: List[Series], ideal: List[Series]
    ) -> Optional[Tuple[Series, Series]]:
        """A pair a in O_w, b in M_w with w(D(a)) <= w(phi(b)), if the samples contain one."""
        derived = [(a, self.derive(a)) for a in ring]
        psi_values = [(b, self.couple.psi_apply(b.valuation())) for b in ideal]
        for a, da in derived:
            if da.is_zero():
                continue
            for b, psi_b in psi_values:
                if not context.w_greater(da.valuation(), psi_b):
                    return a, b
        return None

    def _nontrivial_witness(self, context: ResidueContext, classes: List[ChainPoint]) -> Optional[Series]:
        """a in U_w \\ U_v with D(a) in U_w."""
        for gamma in classes:
            if context.segment.contains(gamma):
                a = Series.monomial(GroupElement.unit(self.chain, gamma))
                if context.is_unit(self.derive(a)):
                    return a
        return None

    def _escape_witness(self, context: ResidueContext, classes: List[ChainPoint]) -> Optional[Series]:
        """a in U_w with D(a) outside O_w."""
        for gamma in classes:
            if context.segment.contains(gamma):
                for sign in (1, -1):
                    a = Series.monomial(GroupElement.unit(self.chain, gamma, sign))
                    if not context.in_ring(self.derive(a)):
                        return a
        return None


def _window_for(config: DerivationConfig, window: Optional[ZWindow]) -> Optional[ZWindow]:
    if config.chain.is_finite:
        return None
    return window if window is not None else DEFAULT_WINDOW
