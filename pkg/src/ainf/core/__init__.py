"""Quivers, A-infinity categories, functors and coderivations."""

from .quiver import Quiver
from .families import (
    AInfCategory,
    AInfFunctor,
    Coderivation,
    TruncationError,
    combine,
    identity_functor,
    zero_coderivation,
)
from .engine import Theta, schedules
from .report import Failure, Report
from .checks import (
    b_theta,
    check_functor,
    check_stasheff,
    compose_functors,
    expand_b,
    expand_f,
    expand_r,
    f_theta,
    r_theta,
)
from .convert import b_to_m, check_m_identities, m_to_b
from .dg import complexes_category, dg_category, scaling_functor, strict_functor
