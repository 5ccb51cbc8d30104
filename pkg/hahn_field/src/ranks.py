"""
Compatible final segments, the psi-rank and its unfolded and chi variants.

A nonempty final segment F is compatible with psi when, for every class
gamma, gamma lies in F exactly when psi_hat(gamma) lies in the convex subgroup
H_F. The closed-form test :func:`is_compatible_fast` is always paired with the
class-by-class oracle :func:`is_compatible_oracle` on a Z-window.
"""

import logging
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Callable, Dict, List, Optional, Set, Tuple

from .chain import DEFAULT_WINDOW, INFINITY, Chain, ChainPoint, FinalSegment, SliceKind, ZWindow
from .couple import AsymptoticCouple
from .errors import RankCertificationError, SegmentError, WindowError
from .group import ConvexSubgroup, GroupElement
from .reports import AxiomReport, ReportSuite

logger = logging.getLogger(__name__)


@dataclass
class RankReport:
    """Compatible segments in inclusion order, and the principal ones with a generator each."""

    chain: Chain
    segments: List[FinalSegment]
    principal: List[FinalSegment]
    generators: Dict[FinalSegment, ChainPoint] = field(default_factory=dict)

    def __len__(self):
        return len(self.segments)

    def to_dict(self):
        return {
            "segments": [str(s) for s in self.segments],
            "principal": [str(s) for s in self.principal],
            "generators": {str(s): str(self.generators[s]) for s in self.principal},
        }


@dataclass
class UnfoldedRankReport:
    """
    S (union of the ranks of all translates psi_g), its principal part Q, and
    the psi-rank R with principal part P marked inside them.
    """

    chain: Chain
    segments: List[FinalSegment]
    principal: List[FinalSegment]
    rank: RankReport
    translates: Dict[ChainPoint, List[FinalSegment]] = field(default_factory=dict)

    @property
    def diff_rank_subset(self) -> List[FinalSegment]:
        return self.rank.segments

    @property
    def principal_diff_rank_subset(self) -> List[FinalSegment]:
        return self.rank.principal

    def verify(self, couple: AsymptoticCouple) -> ReportSuite:
        suite = ReportSuite("unfolded-rank")
        contained = suite.add(AxiomReport("R subset S"))
        for s in self.diff_rank_subset:
            contained.record(s in self.segments, segment=s)
        principal_contained = suite.add(AxiomReport("P subset Q"))
        for s in self.principal_diff_rank_subset:
            principal_contained.record(s in self.principal, segment=s)
        suite.add(_final_in(self.diff_rank_subset, self.segments, "R final in S"))
        suite.add(_final_in(self.principal_diff_rank_subset, self.principal, "P final in Q"))

        translate_law = suite.add(AxiomReport("S_g = {H in S : g in H}"))
        for gamma, segments in self.translates.items():
            expected = [s for s in self.segments if s.contains(gamma)]
            translate_law.record(segments == expected, gamma=gamma, got=[str(s) for s in segments])

        cut = couple.find_cut_point()
        if not cut.is_zero:
            generated = suite.add(AxiomReport("R generated by G_c"))
            g_c = _smallest_containing(self.rank.segments, cut.cut_class)  # type: ignore[arg-type]
            expected = [s for s in self.segments if g_c is not None and g_c.issubset(s)]
            generated.record(expected == self.rank.segments, cut_class=cut.cut_class)
        return suite

    def to_dict(self):
        return {
            "segments": [str(s) for s in self.segments],
            "principal": [str(s) for s in self.principal],
            "R": [str(s) for s in self.diff_rank_subset],
            "P": [str(s) for s in self.principal_diff_rank_subset],
        }


def _final_in(part: List[FinalSegment], whole: List[FinalSegment], name: str) -> AxiomReport:
    report = AxiomReport(name)
    inside = [s in part for s in whole]
    for i in range(len(whole) - 1):
        report.record(not inside[i] or inside[i + 1], below=whole[i], above=whole[i + 1])
    return report


def _smallest_containing(segments: List[FinalSegment], gamma: ChainPoint) -> Optional[FinalSegment]:
    for segment in segments:
        if segment.contains(gamma):
            return segment
    return None


def _require_nonempty(segment: FinalSegment) -> None:
    if segment.is_empty:
        raise SegmentError("compatibility is only defined for nontrivial subgroups")


def _oracle_classes(chain: Chain, window: Optional[ZWindow]) -> List[ChainPoint]:
    if chain.is_finite:
        return chain.window_points()
    if window is None:
        raise WindowError("ProductQZ compatibility needs a Z-window")
    return chain.window_points(window.widened(1))


def is_compatible_oracle(
    couple: AsymptoticCouple, segment: FinalSegment, window: Optional[ZWindow] = DEFAULT_WINDOW
) -> bool:
    """Definitional test on every class of the window widened by one step."""
    _require_nonempty(segment)
    subgroup = ConvexSubgroup(segment)
    for gamma in _oracle_classes(couple.chain, window):
        if segment.contains(gamma) != subgroup.contains(couple.psi_hat(gamma)):
            return False
    return True


def is_compatible_fast(couple: AsymptoticCouple, segment: FinalSegment) -> bool:
    """
    F is compatible iff the cut class lies in F and every class gamma below the
    cut class with psi_hat(gamma) in H_F lies in F. For shift-built couples the
    second condition can only fail directly below a partially covered slice or
    at an omega-preimage of the offset's support.
    """
    _require_nonempty(segment)
    chain = couple.chain
    cut = couple.find_cut_point().cut_class
    if cut is not INFINITY and not segment.contains(cut):  # type: ignore[arg-type]
        return False
    subgroup = ConvexSubgroup(segment)
    if couple.psi.table is not None:
        candidates: Set[ChainPoint] = set(chain.window_points())
    else:
        candidates = set(segment.boundary_predecessors())
        for point in couple.offset.support:
            preimage = chain.omega_preimage(point)
            if preimage is not None:
                candidates.add(preimage)
    for gamma in candidates:
        if cut is not INFINITY and not gamma < cut:
            continue
        if not segment.contains(gamma) and subgroup.contains(couple.psi_hat(gamma)):
            return False
    return True


def _check_cut_in_window(couple: AsymptoticCouple, window: Optional[ZWindow]) -> None:
    if couple.chain.is_finite:
        return
    cut = couple.find_cut_point().cut_class
    if cut is not INFINITY and cut.n not in window.widened(1):  # type: ignore[union-attr]
        raise WindowError(f"cut class {cut} lies outside the window {window}")


def compatible_segments(
    couple: AsymptoticCouple, window: Optional[ZWindow] = DEFAULT_WINDOW, certify: bool = True
) -> List[FinalSegment]:
    """Every nonempty compatible segment with tails in the window, ascending by inclusion."""
    chain = couple.chain
    if not chain.is_finite and window is None:
        raise WindowError("ProductQZ ranks need a Z-window")
    _check_cut_in_window(couple, window)
    found = []
    for segment in chain.enumerate_final_segments(window):
        if segment.is_empty:
            continue
        fast = is_compatible_fast(couple, segment)
        if certify:
            oracle = is_compatible_oracle(couple, segment, window)
            if fast != oracle:
                raise RankCertificationError(
                    f"fast test says {fast}, oracle says {oracle} for {segment} under {couple!r}"
                )
        if fast:
            found.append(segment)
    if not chain.is_finite:
        for segment in found:
            if any(s.kind is SliceKind.TAIL for s in segment.slices):
                raise WindowError(
                    f"compatible segment {segment} is not a union of slices; "
                    f"window {window} cannot certify slice-saturation"
                )
    return found


def _principal(
    segments: List[FinalSegment], classes: List[ChainPoint]
) -> Tuple[List[FinalSegment], Dict[FinalSegment, ChainPoint]]:
    generators: Dict[FinalSegment, ChainPoint] = {}
    for gamma in classes:
        smallest = _smallest_containing(segments, gamma)
        if smallest is not None and smallest not in generators:
            generators[smallest] = gamma
    principal = [s for s in segments if s in generators]
    return principal, generators


def psi_rank(
    couple: AsymptoticCouple, window: Optional[ZWindow] = DEFAULT_WINDOW, certify: bool = True
) -> RankReport:
    segments = compatible_segments(couple, window, certify)
    classes = couple.chain.window_points(None if couple.chain.is_finite else window)
    principal, generators = _principal(segments, classes)
    logger.debug("psi-rank of %r: %s", couple, [str(s) for s in segments])
    return RankReport(couple.chain, segments, principal, generators)


def principal_segment(
    couple: AsymptoticCouple, gamma: ChainPoint, window: Optional[ZWindow] = DEFAULT_WINDOW
) -> FinalSegment:
    """The smallest compatible segment containing gamma."""
    couple.chain.require(gamma)
    smallest = _smallest_containing(compatible_segments(couple, window, certify=False), gamma)
    if smallest is None:
        # G itself is always compatible, so this only happens for points beyond the window
        raise WindowError(f"{gamma} is not covered by the segments of window {window}")
    return smallest


def unfolded_rank(
    couple: AsymptoticCouple,
    window: Optional[ZWindow] = DEFAULT_WINDOW,
    certify: bool = False,
) -> UnfoldedRankReport:
    """
    S is the union of the psi_g-ranks over one representative g = e_gamma per
    windowed class; Q collects the smallest element of S containing each class.
    ``certify`` runs the oracle on every translate as well as on psi itself.
    """
    chain = couple.chain
    rank = psi_rank(couple, window, certify=True)
    classes = chain.window_points(None if chain.is_finite else window)
    union: Set[FinalSegment] = set(rank.segments)
    translates: Dict[ChainPoint, List[FinalSegment]] = {}
    for gamma in classes:
        translated = couple.translate_by_value(GroupElement.unit(chain, gamma))
        segments = compatible_segments(translated, window, certify)
        translates[gamma] = segments
        union.update(segments)
    segments = sorted(union, key=FinalSegment.inclusion_key)
    principal, _ = _principal(segments, classes)
    logger.debug("unfolded rank of %r: %d segments, %d principal", couple, len(segments), len(principal))
    return UnfoldedRankReport(chain, segments, principal, rank, translates)


def chi_rank(couple: AsymptoticCouple, window: Optional[ZWindow] = DEFAULT_WINDOW) -> RankReport:
    """
    Segments compatible with the contraction chi. chi is constant on the
    negative elements of a class, so the test runs on chi(-e_gamma).
    Raises NotIntegrableError when some windowed psi value is not integrable.
    """
    chain = couple.chain
    oracle_classes = _oracle_classes(chain, window)
    chi_values = {gamma: couple.chi(GroupElement.unit(chain, gamma, -1)) for gamma in oracle_classes}
    segments = []
    for segment in chain.enumerate_final_segments(None if chain.is_finite else window):
        if segment.is_empty:
            continue
        subgroup = ConvexSubgroup(segment)
        if all(segment.contains(g) == subgroup.contains(chi_values[g]) for g in oracle_classes):
            segments.append(segment)
    classes = chain.window_points(None if chain.is_finite else window)
    principal, generators = _principal(segments, classes)
    return RankReport(chain, segments, principal, generators)


def rank_of_quasiorder(couple: AsymptoticCouple, window: Optional[ZWindow] = DEFAULT_WINDOW) -> RankReport:
    """
    Final segments of the windowed classes under the quasi-order induced by
    the couple's class map, read back as symbolic segments.
    """
    chain = couple.chain
    classes = chain.window_points(None if chain.is_finite else window)
    leq = _class_quasiorder(couple, 2 * len(classes) + 2)

    def compare(a: ChainPoint, b: ChainPoint) -> int:
        forward, backward = leq(a, b), leq(b, a)
        if forward and backward:
            return 0
        return -1 if forward else 1

    ordered = sorted(classes, key=cmp_to_key(compare))
    blocks: List[List[ChainPoint]] = []
    for gamma in ordered:
        if blocks and compare(blocks[-1][0], gamma) == 0:
            blocks[-1].append(gamma)
        else:
            blocks.append([gamma])
    segments: List[FinalSegment] = []
    generators: Dict[FinalSegment, ChainPoint] = {}
    for i in range(len(blocks) - 1, -1, -1):
        members = [gamma for block in blocks[i:] for gamma in block]
        segment = FinalSegment.from_points(chain, members, window)
        segments.append(segment)
        generators[segment] = blocks[i][0]
    return RankReport(chain, segments, list(segments), generators)


def _class_quasiorder(couple: AsymptoticCouple, depth: int) -> Callable[[ChainPoint, ChainPoint], bool]:
    if couple.psi.is_shift_built and couple.offset.is_zero():
        return couple.chain.qo_omega_leq
    # orbits are reused across all pairs
    lows: Dict[ChainPoint, ChainPoint] = {}
    highs: Dict[ChainPoint, ChainPoint] = {}

    def bounds(gamma: ChainPoint) -> Tuple[ChainPoint, ChainPoint]:
        if gamma not in lows:
            orbit = couple.class_orbit(gamma, depth)
            lows[gamma], highs[gamma] = min(orbit), max(orbit)
        return lows[gamma], highs[gamma]

    def leq(gamma: ChainPoint, delta: ChainPoint) -> bool:
        if couple.climbs_slice(delta):
            return couple.qo_class_leq(gamma, delta)
        return bounds(gamma)[0] <= bounds(delta)[1]

    return leq
