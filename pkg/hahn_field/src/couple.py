"""
Asymptotic couples of H-type, represented at the level of archimedean classes.

psi(g) only depends on the class v_G(g), so a couple is given by its class
map psi_hat. Couples built from a right-shift use

    psi_hat(gamma) = sigma_0(gamma) + c,   sigma_0(gamma) = -e_{omega(gamma)}

(sigma_0 = 0 when omega(gamma) is infinite) for a fixed offset c. On finite
chains an explicit table gamma -> psi_hat(gamma) may replace sigma_0.
"""

import logging
from dataclasses import dataclass
from enum import Enum, auto
from typing import Dict, List, Mapping, Optional

from .chain import INFINITY, Chain, ChainPoint, ExtendedPoint, ZWindow
from .config import AXIOM_SAMPLES, DEFAULT_SEED
from .errors import ChainMismatchError, NotIntegrableError, PsiDomainError
from .group import GroupElement
from .reports import AxiomReport, ReportSuite
from .sampling import Sampler

logger = logging.getLogger(__name__)


class PsiMap:
    """
    The class map psi_hat of a couple: a base map (sigma_0, or a table on a
    finite chain) plus a constant offset.
    """

    def __init__(
        self,
        chain: Chain,
        offset: Optional[GroupElement] = None,
        table: Optional[Mapping[ChainPoint, GroupElement]] = None,
    ):
        if offset is None:
            offset = GroupElement.zero(chain)
        if offset.chain != chain:
            raise ChainMismatchError(f"offset lives over {offset.chain}, not {chain}")
        if table is not None:
            if not chain.is_finite:
                raise ValueError("class tables are only supported on finite chains")
            table = dict(table)
            for point, value in table.items():
                chain.require(point)
                chain.require_same(value.chain)
            missing = [str(p) for p in chain.window_points() if p not in table]
            if missing:
                raise ValueError(f"class table has no value for {', '.join(missing)}")
        self.chain = chain
        self.offset = offset
        self.table: Optional[Dict[ChainPoint, GroupElement]] = table
        self._cache: Dict[ChainPoint, GroupElement] = {}

    @property
    def is_shift_built(self) -> bool:
        return self.table is None

    def sigma0(self, gamma: ChainPoint) -> GroupElement:
        successor = self.chain.omega(gamma)
        if successor is INFINITY:
            return GroupElement.zero(self.chain)
        return GroupElement.unit(self.chain, successor, -1)  # type: ignore[arg-type]

    def base(self, gamma: ChainPoint) -> GroupElement:
        if self.table is not None:
            return self.table[gamma]
        return self.sigma0(gamma)

    def class_value(self, gamma: ChainPoint) -> GroupElement:
        value = self._cache.get(gamma)
        if value is None:
            value = self.base(gamma) + self.offset
            self._cache[gamma] = value
        return value

    def __call__(self, g: GroupElement) -> GroupElement:
        if g.is_zero():
            raise PsiDomainError("psi is not defined at 0")
        self.chain.require_same(g.chain)
        return self.class_value(g.valuation())  # type: ignore[arg-type]

    def translate(self, x: GroupElement) -> "PsiMap":
        """psi + x."""
        return PsiMap(self.chain, self.offset + x, self.table)

    def to_dict(self):
        data = {"chain": self.chain.to_dict(), "offset": str(self.offset)}
        if self.table is not None:
            data["table"] = {str(p): str(v) for p, v in sorted(self.table.items(), key=lambda kv: kv[0].key)}
        return data


class TrichotomyKind(Enum):
    GAP = auto()
    MAX_PSI = auto()
    ASYMPTOTIC_INTEGRATION = auto()

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class TrichotomyClass:
    kind: TrichotomyKind
    witness: Optional[GroupElement] = None

    def __str__(self):
        if self.witness is None:
            return str(self.kind)
        return f"{self.kind}({self.witness})"

    def to_dict(self):
        return {
            "kind": str(self.kind),
            "witness": None if self.witness is None else str(self.witness),
        }


@dataclass(frozen=True)
class CutPointReport:
    """The archimedean class of the cut points (INFINITY for cut point 0) and one witness."""

    cut_class: ExtendedPoint
    witness: GroupElement

    @property
    def is_zero(self) -> bool:
        return self.cut_class is INFINITY

    def to_dict(self):
        return {"cut_class": str(self.cut_class), "witness": str(self.witness)}


@dataclass(frozen=True)
class NegativeTranslation:
    """Result of translating a couple so that every psi value is negative."""

    couple: "AsymptoticCouple"
    x: GroupElement
    alpha: ExtendedPoint

    def verify(self, original: "AsymptoticCouple", window: Optional[ZWindow] = None) -> ReportSuite:
        suite = ReportSuite("translate_to_negative")
        negative = suite.add(AxiomReport("psi-negative"))
        omega_law = suite.add(AxiomReport("omega-min"))
        constant_above = suite.add(AxiomReport("omega-constant-above-alpha"))
        for gamma in original.chain.window_points(window):
            value = self.couple.psi_hat(gamma)
            negative.record(value.sign() < 0, gamma=gamma, psi_hat=value)
            translated = self.couple.induced_omega(gamma)
            expected = min(self.alpha, original.induced_omega(gamma))  # type: ignore[type-var]
            omega_law.record(translated == expected, gamma=gamma, got=translated, expected=expected)
            if self.alpha is not INFINITY and gamma >= self.alpha:
                constant_above.record(translated == self.alpha, gamma=gamma, got=translated)
        return suite

    def to_dict(self):
        return {"x": str(self.x), "alpha": str(self.alpha), "couple": self.couple.to_dict()}


class AsymptoticCouple:
    """An H-type asymptotic couple (G, psi) over a chain."""

    def __init__(self, psi: PsiMap):
        self.psi = psi
        self.chain = psi.chain

    @property
    def offset(self) -> GroupElement:
        return self.psi.offset

    def __repr__(self):
        return f"AsymptoticCouple({self.chain}, offset={self.offset})"

    def to_dict(self):
        data = self.psi.to_dict()
        data["cut_class"] = str(self.find_cut_point().cut_class)
        data["trichotomy"] = self.classify().to_dict()
        return data

    # -- the maps ---------------------------------------------------------

    def psi_apply(self, g: GroupElement) -> GroupElement:
        return self.psi(g)

    def psi_hat(self, gamma: ChainPoint) -> GroupElement:
        return self.psi.class_value(gamma)

    def induced_omega(self, gamma: ChainPoint) -> ExtendedPoint:
        """The class map gamma -> v_G(psi_hat(gamma))."""
        return self.psi_hat(gamma).valuation()

    def dg(self, g: GroupElement) -> GroupElement:
        """D_G(g) = psi(g) + g."""
        return self.psi(g) + g

    def translate(self, x: GroupElement) -> "AsymptoticCouple":
        return AsymptoticCouple(self.psi.translate(x))

    def translate_by_value(self, g: GroupElement) -> "AsymptoticCouple":
        """The translate psi_g = psi - psi(g)."""
        return self.translate(-self.psi(g))

    def psi_values(self, window: Optional[ZWindow] = None) -> Dict[ChainPoint, GroupElement]:
        return {gamma: self.psi_hat(gamma) for gamma in self.chain.window_points(window)}

    def is_hardy_type(self, window: Optional[ZWindow] = None) -> bool:
        """psi_hat is injective on the (windowed) classes."""
        values = list(self.psi_values(window).values())
        return len(set(values)) == len(values)

    # -- cut points and trichotomy ----------------------------------------

    def find_cut_point(self) -> CutPointReport:
        """
        For shift-built couples the cut class is v_G(c) of the offset c, with
        c itself as regular witness; offset 0 gives cut point 0. Table couples
        are scanned class by class.
        """
        if self.psi.is_shift_built:
            if self.offset.is_zero():
                return CutPointReport(INFINITY, self.offset)
            return CutPointReport(self.offset.valuation(), self.offset)
        cut = self.scan_cut_class()
        if cut is INFINITY:
            return CutPointReport(INFINITY, GroupElement.zero(self.chain))
        return CutPointReport(cut, self.psi_hat(cut))  # type: ignore[arg-type]

    def scan_cut_class(self, window: Optional[ZWindow] = None) -> ExtendedPoint:
        """The least windowed class gamma with v_G(psi_hat(gamma)) <= gamma, else INFINITY."""
        for gamma in self.chain.window_points(window):
            if self.induced_omega(gamma) <= gamma:  # type: ignore[operator]
                return gamma
        return INFINITY

    def in_psi(self, g: GroupElement) -> bool:
        """Whether g is a value of psi."""
        if self.psi.table is not None:
            return any(v == g for v in self.psi_values().values())
        difference = g - self.offset
        if difference.is_zero():
            return self.chain.is_finite
        if len(difference.terms) != 1 or difference.leading_coefficient() != -1:
            return False
        return self.chain.omega_preimage(difference.valuation()) is not None  # type: ignore[arg-type]

    def non_integrable_element(self) -> Optional[GroupElement]:
        """
        The element missing from the image of D_G, if any. For shift-built
        couples this is the offset; for table couples on a finite chain it is
        the maximum of Psi.
        """
        if self.psi.is_shift_built:
            return self.offset
        values = list(self.psi_values().values())
        candidate = max(values)
        try:
            self.integral_search(candidate)
        except NotIntegrableError:
            return candidate
        return None

    def classify(self) -> TrichotomyClass:
        g = self.non_integrable_element()
        if g is None:
            return TrichotomyClass(TrichotomyKind.ASYMPTOTIC_INTEGRATION)
        if self.in_psi(g):
            return TrichotomyClass(TrichotomyKind.MAX_PSI, g)
        return TrichotomyClass(TrichotomyKind.GAP, g)

    def certify_trichotomy(
        self,
        result: TrichotomyClass,
        window: Optional[ZWindow] = None,
        samples: int = 100,
        seed: int = DEFAULT_SEED,
    ) -> AxiomReport:
        """Independent witness checks for a classification."""
        report = AxiomReport(f"trichotomy:{result.kind}", seed=seed)
        sampler = Sampler(self.chain, window, seed)
        classes = self.chain.window_points(window)
        if result.kind is TrichotomyKind.ASYMPTOTIC_INTEGRATION:
            for _ in range(samples):
                h = sampler.group_element()
                try:
                    g = self.integral(h)
                except NotIntegrableError:
                    report.record(False, target=h, reason="not integrable")
                    continue
                report.record(self.dg(g) == h, target=h, integral=g)
            return report
        g = result.witness
        for gamma in classes:
            value = self.psi_hat(gamma)
            if result.kind is TrichotomyKind.GAP:
                report.record(value < g, gamma=gamma, psi_hat=value, reason="Psi < g")
            else:
                report.record(value <= g, gamma=gamma, psi_hat=value, reason="Psi <= g")
        if result.kind is TrichotomyKind.GAP:
            positives = [GroupElement.unit(self.chain, p) for p in classes]
            positives += [sampler.group_element(sign=1) for _ in range(samples)]
            for h in positives:
                report.record(g < self.dg(h), h=h, dg=self.dg(h), reason="g < D_G(h) for h > 0")
        else:
            report.record(self.in_psi(g), witness=g, reason="g is a value of psi")
        try:
            integral = self.integral(g)
            report.record(False, witness=g, integral=integral, reason="witness is integrable")
        except NotIntegrableError:
            report.record(True)
        return report

    # -- integration ------------------------------------------------------

    def integral(self, h: GroupElement) -> GroupElement:
        """The unique g with D_G(g) = h; raises NotIntegrableError otherwise."""
        if self.psi.is_shift_built:
            return self.integral_closed_form(h)
        return self.integral_search(h)

    def integral_closed_form(self, h: GroupElement) -> GroupElement:
        """
        For shift-built couples, with d = h - c: g = d - sigma_0(v_G(d)).
        sigma_0(v_G(d)) lives strictly above v_G(d), so v_G(g) = v_G(d).
        """
        if not self.psi.is_shift_built:
            raise ValueError("the closed form needs a shift-built couple")
        self.chain.require_same(h.chain)
        d = h - self.offset
        if d.is_zero():
            raise NotIntegrableError(h)
        g = d - self.psi.sigma0(d.valuation())  # type: ignore[arg-type]
        if self.dg(g) != h:
            raise ArithmeticError(f"closed-form integral of {h} failed to verify")
        return g

    def integral_search(self, h: GroupElement) -> GroupElement:
        """Solves D_G(g) = h by trying g = h - psi_hat(gamma) for each candidate class."""
        self.chain.require_same(h.chain)
        if self.psi.table is not None:
            candidates: List[ChainPoint] = self.chain.window_points()
        else:
            candidates = list((h - self.offset).support)
        for gamma in candidates:
            g = h - self.psi_hat(gamma)
            if not g.is_zero() and g.valuation() == gamma:
                return g
        raise NotIntegrableError(h)

    def chi(self, g: GroupElement) -> GroupElement:
        """The contraction: integral of psi(g) on negatives, extended oddly with chi(0) = 0."""
        if g.is_zero():
            return g
        if g.sign() < 0:
            return self.integral(self.psi(g))
        return -self.chi(-g)

    # -- translation to negative values -----------------------------------

    def _psi_has_positive(self) -> bool:
        if self.psi.is_shift_built and not self.chain.is_finite:
            return self.offset.sign() > 0
        return any(v.sign() > 0 for v in self.psi_values().values())

    def psi_is_negative(self) -> bool:
        """Whether every value of psi is negative."""
        if self.psi.is_shift_built and not self.chain.is_finite:
            return self.offset.sign() <= 0
        return all(v.sign() < 0 for v in self.psi_values().values())

    def translate_to_negative(self) -> NegativeTranslation:
        """
        Picks x with psi + x < 0 everywhere: x = 0 when psi is already negative;
        x = -2f for the fixpoint f of psi when some value is positive; otherwise
        0 is the maximum of Psi and x is a negative element with psi(x) = 0.
        """
        zero = GroupElement.zero(self.chain)
        if self.psi_is_negative():
            x = zero
        elif self._psi_has_positive():
            cut = self.find_cut_point()
            fixpoint = self.psi_hat(cut.cut_class)  # type: ignore[arg-type]
            x = fixpoint.scale(-2)
        else:
            gamma = self._class_with_value(zero)
            x = GroupElement.unit(self.chain, gamma, -1)
        logger.debug("translating %r by %s", self, x)
        return NegativeTranslation(self.translate(x), x, x.valuation())

    def _class_with_value(self, value: GroupElement) -> ChainPoint:
        if self.psi.table is None and not self.chain.is_finite:
            difference = value - self.offset
            if len(difference.terms) == 1:
                preimage = self.chain.omega_preimage(difference.valuation())  # type: ignore[arg-type]
                if preimage is not None and self.psi_hat(preimage) == value:
                    return preimage
        else:
            for gamma, psi_value in self.psi_values().items():
                if psi_value == value:
                    return gamma
        raise ValueError(f"{value} is not a value of psi")

    # -- the quasi-order --------------------------------------------------

    def qo_psi_leq(self, g: GroupElement, h: GroupElement) -> bool:
        """g <~_psi h for negative g, h, decided on the classes v_G(g), v_G(h)."""
        if g.sign() >= 0 or h.sign() >= 0:
            raise PsiDomainError("the psi quasi-order is defined on negative elements")
        gamma, delta = g.valuation(), h.valuation()
        if self.psi.is_shift_built and self.offset.is_zero():
            return self.chain.qo_omega_leq(gamma, delta)  # type: ignore[arg-type]
        return self.qo_class_leq(gamma, delta)  # type: ignore[arg-type]

    def climbs_slice(self, gamma: ChainPoint) -> bool:
        """
        Whether the class orbit of gamma never settles: on ProductQZ shift
        couples, the slices strictly below the cut class, where the induced
        map is the successor (a,n) -> (a,n+1).
        """
        if self.chain.is_finite or not self.psi.is_shift_built:
            return False
        cut = self.find_cut_point().cut_class
        if cut is INFINITY:
            return True
        return self.chain.q_index(gamma.label) > self.chain.q_index(cut.label)  # type: ignore[union-attr]

    def orbit_depth(self, *points: ChainPoint) -> int:
        """Steps after which every class orbit from ``points`` outside a climbing slice has settled."""
        if self.chain.is_finite:
            return len(self.chain.labels)
        cut = self.find_cut_point().cut_class
        anchor = 0 if cut is INFINITY else cut.n  # type: ignore[union-attr]
        return sum(abs(p.n - anchor) for p in points) + 2 * len(self.chain.labels) + 2

    def class_orbit(self, gamma: ChainPoint, depth: int) -> List[ChainPoint]:
        """gamma and its images under the induced class map, stopping at infinity or a repeat."""
        orbit = [gamma]
        current = gamma
        for _ in range(depth):
            image = self.induced_omega(current)
            if image is INFINITY or image == current:
                break
            orbit.append(image)  # type: ignore[arg-type]
            current = image  # type: ignore[assignment]
        return orbit

    def qo_class_leq(self, gamma: ChainPoint, delta: ChainPoint) -> bool:
        if self.climbs_slice(delta):
            # the orbit of delta is cofinal in its slice; the orbit of gamma
            # reaches that slice only if gamma starts in it or below it
            return self.chain.q_index(gamma.label) >= self.chain.q_index(delta.label)
        depth = self.orbit_depth(gamma, delta)
        # some a in one orbit lies below some b in the other iff min <= max
        return min(self.class_orbit(gamma, depth)) <= max(self.class_orbit(delta, depth))

    def qo_psi_leq_search(self, g: GroupElement, h: GroupElement, depth: int) -> bool:
        """Direct search over psi^n(g) <= psi^k(h) in G."""
        if g.sign() >= 0 or h.sign() >= 0:
            raise PsiDomainError("the psi quasi-order is defined on negative elements")
        return any(a <= b for a in self._psi_orbit(g, depth) for b in self._psi_orbit(h, depth))

    def _psi_orbit(self, g: GroupElement, depth: int) -> List[GroupElement]:
        orbit = [g]
        for _ in range(depth):
            if orbit[-1].is_zero():
                break
            orbit.append(self.psi(orbit[-1]))
        return orbit

    # -- axioms -----------------------------------------------------------

    def check_axioms(
        self,
        window: Optional[ZWindow] = None,
        samples: int = AXIOM_SAMPLES,
        seed: int = DEFAULT_SEED,
    ) -> ReportSuite:
        """
        (AC1)-(AC3) and (ACH) over every pair of windowed class
        representatives +-e_gamma, plus ``samples`` random pairs.
        """
        sampler = Sampler(self.chain, window, seed)
        reps = []
        for gamma in self.chain.window_points(window):
            reps.append(GroupElement.unit(self.chain, gamma))
            reps.append(GroupElement.unit(self.chain, gamma, -1))
        pairs = [(g, h) for g in reps for h in reps]
        pairs += [(sampler.group_element(), sampler.group_element()) for _ in range(samples)]

        suite = ReportSuite("asymptotic-couple")
        ac1 = suite.add(AxiomReport("AC1", seed=seed))
        ac2 = suite.add(AxiomReport("AC2", seed=seed))
        ac3 = suite.add(AxiomReport("AC3", seed=seed))
        ach = suite.add(AxiomReport("ACH", seed=seed))
        psi = self.psi
        for g, h in pairs:
            psi_g, psi_h = psi(g), psi(h)
            total = g + h
            if not total.is_zero():
                ac1.record(psi(total) >= min(psi_g, psi_h), g=g, h=h)
            ac3.record(psi_g < psi_h + abs(h), g=g, h=h)
            if g <= h and h.sign() < 0:
                ach.record(psi_g <= psi_h, g=g, h=h)
        for g in reps + [g for g, _ in pairs[len(reps) ** 2:]]:
            for n in (-1, 2, 7):
                ac2.record(psi(g.scale(n)) == psi(g), g=g, n=n)
        logger.info("axiom suite for %r: %s", self, "pass" if suite.passed else "FAIL")
        return suite


def couple_from_shift(chain: Chain, offset: Optional[GroupElement] = None) -> AsymptoticCouple:
    return AsymptoticCouple(PsiMap(chain, offset))


def couple_from_table(
    chain: Chain, table: Mapping[ChainPoint, GroupElement], offset: Optional[GroupElement] = None
) -> AsymptoticCouple:
    return AsymptoticCouple(PsiMap(chain, offset, table))
