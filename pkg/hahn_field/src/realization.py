"""
From a finite chain Q and a principal final segment P of Q to a certified
H-field whose principal differential rank is P and whose principal unfolded
differential rank is Q.

The field is Q((G)) over G = Hahn product of Q x Z with the shift couple,
translated by c = -e_(a_P, 0) when P is generated by a_P.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .chain import DEFAULT_WINDOW, Chain, FinalSegment, ZWindow
from .config import AXIOM_SAMPLES, DEFAULT_SEED, DV_SAMPLES, LEIBNIZ_SAMPLES, MAX_Q
from .couple import AsymptoticCouple, couple_from_shift
from .derivation import DerivationConfig
from .errors import RealizationError
from .grammar import LABEL_PATTERN
from .group import GroupElement
from .ranks import (
    RankReport,
    UnfoldedRankReport,
    chi_rank,
    is_compatible_fast,
    is_compatible_oracle,
    psi_rank,
    unfolded_rank,
)
from .reports import AxiomReport, ReportSuite, with_schema

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RealizationSpec:
    """Q as a list of labels in increasing order, and the generator a_P of P (None for P = Q)."""

    q_labels: Tuple[str, ...]
    p_generator: Optional[str] = None

    def __post_init__(self):
        labels = tuple(self.q_labels)
        object.__setattr__(self, "q_labels", labels)
        if not 1 <= len(labels) <= MAX_Q:
            raise ValueError(f"Q must have between 1 and {MAX_Q} labels, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise ValueError("Q labels must be distinct")
        for label in labels:
            if not isinstance(label, str) or LABEL_PATTERN.fullmatch(label) is None:
                raise ValueError(f"{label!r} is not a valid label")
        if self.p_generator is not None and self.p_generator not in labels:
            raise ValueError(f"generator {self.p_generator!r} is not a label of Q")

    @classmethod
    def from_labels(cls, labels: Sequence[str], p_generator: Optional[str] = None) -> "RealizationSpec":
        return cls(tuple(labels), p_generator)

    @property
    def p_labels(self) -> Tuple[str, ...]:
        """P = {q in Q : q >= a_P}."""
        if self.p_generator is None:
            return self.q_labels
        return self.q_labels[self.q_labels.index(self.p_generator):]

    def chain(self) -> Chain:
        return Chain.product(self.q_labels)

    def offset(self, chain: Chain) -> GroupElement:
        if self.p_generator is None:
            return GroupElement.zero(chain)
        return GroupElement.unit(chain, chain.point(self.p_generator, 0), -1)

    def to_dict(self):
        return {"Q": list(self.q_labels), "P": list(self.p_labels), "generator": self.p_generator}


@dataclass
class RealizationCertificate:
    spec: RealizationSpec
    window: ZWindow
    seed: int
    couple: AsymptoticCouple
    derivation: DerivationConfig
    rank: RankReport
    unfolded: UnfoldedRankReport
    p_witness: Dict[str, FinalSegment]
    q_witness: Dict[str, FinalSegment]
    suites: List[ReportSuite] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)

    def failures(self) -> List[AxiomReport]:
        return [report for suite in self.suites for report in suite.failures()]

    def to_dict(self) -> Dict[str, Any]:
        return with_schema(
            {
                "spec": self.spec.to_dict(),
                "window": str(self.window),
                "seed": self.seed,
                "couple": self.couple.to_dict(),
                "derivation": self.derivation.to_dict(),
                "rank": self.rank.to_dict(),
                "unfolded_rank": self.unfolded.to_dict(),
                "witnesses": {
                    "P": {label: str(s) for label, s in self.p_witness.items()},
                    "Q": {label: str(s) for label, s in self.q_witness.items()},
                },
                "pass": self.passed,
                "checks": [suite.to_dict() for suite in self.suites],
            }
        )


def _order_isomorphism(
    name: str, chain: Chain, labels: Sequence[str], principal: List[FinalSegment]
) -> Tuple[AxiomReport, Dict[str, FinalSegment]]:
    """label q -> seg(q) must list ``principal`` exactly, in inclusion order."""
    witness = {label: FinalSegment.through_label(chain, label) for label in labels}
    report = AxiomReport(name)
    report.record(
        list(witness.values()) == principal,
        expected=[str(s) for s in witness.values()],
        got=[str(s) for s in principal],
    )
    return report, witness


def _require(suite: ReportSuite) -> ReportSuite:
    if not suite.passed:
        failed = suite.failures()[0]
        raise RealizationError(f"{suite.name}: {failed.axiom} failed", report=suite.to_dict())
    return suite


def realize(
    spec: RealizationSpec,
    window: ZWindow = DEFAULT_WINDOW,
    seed: int = DEFAULT_SEED,
    samples: Optional[int] = None,
) -> RealizationCertificate:
    """
    Builds the couple and the derivation for ``spec`` and certifies every
    property on the way. ``samples`` overrides the per-check sample budgets.
    Raises RealizationError carrying the first failing suite.
    """
    chain = spec.chain()
    couple = couple_from_shift(chain, spec.offset(chain))
    logger.info("realizing P=%s inside Q=%s with %r", list(spec.p_labels), list(spec.q_labels), couple)
    suites: List[ReportSuite] = []
    axiom_samples, leibniz_samples, dv_samples = (
        (AXIOM_SAMPLES, LEIBNIZ_SAMPLES, DV_SAMPLES) if samples is None else (samples, samples, samples)
    )

    suites.append(_require(couple.check_axioms(window, axiom_samples, seed)))
    trichotomy = ReportSuite("trichotomy")
    trichotomy.add(couple.certify_trichotomy(couple.classify(), window, seed=seed))
    suites.append(_require(trichotomy))

    logger.info("computing ranks over window %s", window)
    rank = psi_rank(couple, window, certify=True)
    unfolded = unfolded_rank(couple, window)
    suites.append(_require(unfolded.verify(couple)))

    ranks = ReportSuite("ranks")
    p_report, p_witness = _order_isomorphism("principal rank ~ P", chain, spec.p_labels, rank.principal)
    q_report, q_witness = _order_isomorphism("principal unfolded rank ~ Q", chain, spec.q_labels, unfolded.principal)
    ranks.add(p_report)
    ranks.add(q_report)
    both = ranks.add(AxiomReport("rank segments pass both checkers"))
    for segment in rank.segments:
        both.record(
            is_compatible_fast(couple, segment) and is_compatible_oracle(couple, segment, window),
            segment=segment,
        )
    nested = ranks.add(AxiomReport("P subset Q"))
    for label in spec.p_labels:
        nested.record(label in q_witness, label=label)
    if couple.find_cut_point().is_zero:
        chi = ranks.add(AxiomReport("chi-rank = unfolded rank"))
        chi.record(chi_rank(couple, window).segments == unfolded.segments)
    suites.append(_require(ranks))

    logger.info("checking the derivation")
    derivation = DerivationConfig(couple)
    field_checks = ReportSuite("derivation")
    field_checks.add(derivation.check_leibniz(window, leibniz_samples, seed))
    field_checks.add(derivation.check_valuation_law(window, dv_samples, seed))
    field_checks.add(derivation.induced_couple(window).report)
    suites.append(_require(field_checks))
    suites.append(_require(derivation.check_dv_axioms(window, dv_samples, seed)))
    suites.append(_require(derivation.check_h_axioms(window, dv_samples, seed)))

    certificate = RealizationCertificate(
        spec, window, seed, couple, derivation, rank, unfolded, p_witness, q_witness, suites
    )
    logger.info("realization certified: %d checks passed", sum(len(s.reports) for s in suites))
    return certificate
