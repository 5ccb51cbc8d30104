"""
hahnfield core package.

Chains and final segments, the Hahn group and series field, asymptotic
couples, differential ranks, the derivation and the realization pipeline.
"""

# Make the main types available when importing the src package directly.
from .chain import INFINITY, Chain, ChainPoint, FinalSegment, Ordering, SliceState, ZWindow
from .couple import AsymptoticCouple, PsiMap, TrichotomyKind, couple_from_shift, couple_from_table
from .derivation import CoarseningClass, DerivationConfig, ResidueContext
from .errors import CheckFailure, HahnFieldError, ParseError, RealizationError
from .group import ConvexSubgroup, GroupElement
from .ranks import chi_rank, psi_rank, rank_of_quasiorder, unfolded_rank
from .realization import RealizationCertificate, RealizationSpec, realize
from .series import Series, TruncatedSeries

__all__ = [
    "INFINITY",
    "Chain",
    "ChainPoint",
    "FinalSegment",
    "Ordering",
    "SliceState",
    "ZWindow",
    "AsymptoticCouple",
    "PsiMap",
    "TrichotomyKind",
    "couple_from_shift",
    "couple_from_table",
    "CoarseningClass",
    "DerivationConfig",
    "ResidueContext",
    "CheckFailure",
    "HahnFieldError",
    "ParseError",
    "RealizationError",
    "ConvexSubgroup",
    "GroupElement",
    "chi_rank",
    "psi_rank",
    "rank_of_quasiorder",
    "unfolded_rank",
    "RealizationCertificate",
    "RealizationSpec",
    "realize",
    "Series",
    "TruncatedSeries",
]
