"""Connectedness of planar self-affine fractals with a collinear jump digit set."""

from .classify import Classification, Method, Verdict, classify_search, classify_theorem, sweep
from .errors import (
    BadDigit,
    BadJump,
    BoxTooLarge,
    DeterminantTooSmall,
    JumptileError,
    NotExpanding,
    PointBudgetExceeded,
    TheoremOutOfScope,
)
from .neighbors import (
    ExpansionWord,
    LatticePoint,
    MembershipTable,
    is_member,
    membership_table,
    step,
    verify_expansion,
)
from .params import (
    CompanionRealization,
    DigitSet,
    FractalParams,
    companion,
    digit_set,
    expanding_crosscheck,
    validate_params,
)
from .sequences import AlphaBetaSequence, BoundsBox, alpha_beta, coefficient_box, tilde_bounds

__version__ = "0.1.0"
