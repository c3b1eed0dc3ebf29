"""Normed Omega-groups, their completions, and representations."""

from .completion import (
    CompletedElement,
    Completion,
    Verdict,
    approx,
    comp_add,
    comp_apply_op,
    comp_neg,
    comp_sub,
    embed,
    is_within,
    norm_approx,
)
from .constructions import babylonian_sqrt, bisection_sqrt, geometric_series, hensel_sqrt
from .core import (
    Ball,
    InvalidParameter,
    NoValidSample,
    OmegaGroup,
    OperationDescriptor,
    Report,
    bound_op_difference,
    check_group_axioms,
    check_norm_axioms,
    check_polyadditivity,
    invert_epsilon_bound,
    op_norm_estimate,
    reverse_triangle_check,
)
from .instances import make_instance, parse_instance_spec, rational_abs, rational_padic
from .representation import Representation, complete_representation
from .sequences import CauchySequence, Modulus, check_limit, equivalent_upto

__version__ = "0.1.0"
