"""Seeded random elements for the sampled property checks."""

import random
from fractions import Fraction
from typing import List, Optional

from .chain import Chain, ChainPoint, ZWindow
from .group import GroupElement
from .series import Series


class Sampler:
    """
    Draws group elements and series supported on the windowed points of a chain.
    The same seed always yields the same sequence.
    """

    def __init__(self, chain: Chain, window: Optional[ZWindow], seed: int = 0):
        self.chain = chain
        self.window = window
        self.seed = seed
        self.rng = random.Random(seed)
        self.points: List[ChainPoint] = chain.window_points(window)

    def rational(self) -> Fraction:
        numerator = self.rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])
        return Fraction(numerator, self.rng.randint(1, 3))

    def point(self) -> ChainPoint:
        return self.rng.choice(self.points)

    def group_element(self, max_terms: int = 3, sign: int = 0) -> GroupElement:
        """A nonzero element; ``sign`` forces the sign when it is +1 or -1."""
        count = self.rng.randint(1, min(max_terms, len(self.points)))
        support = self.rng.sample(self.points, count)
        g = GroupElement(self.chain, {p: self.rational() for p in support})
        if sign and g.sign() != sign:
            g = -g
        return g

    def series(self, max_terms: int = 3, max_exponent_terms: int = 2) -> Series:
        """A nonzero series whose exponents are small random group elements or 0."""
        count = self.rng.randint(1, max_terms)
        terms = {}
        for _ in range(count):
            if self.rng.random() < 0.2:
                exponent = GroupElement.zero(self.chain)
            else:
                exponent = self.group_element(max_exponent_terms)
            terms[exponent] = self.rational()
        return Series(self.chain, terms)

    def series_with_valuation_sign(self, sign: int, max_terms: int = 3) -> Series:
        """A series whose valuation is negative (sign=-1) or positive (sign=+1)."""
        lead = self.group_element(2, sign=sign)
        terms = {lead: self.rational()}
        for _ in range(self.rng.randint(0, max_terms - 1)):
            exponent = self.group_element(2)
            if exponent > lead:
                terms[exponent] = self.rational()
        return Series(self.chain, terms)
