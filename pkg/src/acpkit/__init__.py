"""acpkit: an executable toolkit for ACP with guarded recursion.

Terms, recursive specifications, head normal forms with axiom traces,
linearization, operational semantics, and strong bisimilarity checking.
"""

from .bisim import (
    BoundExceeded,
    InconclusiveTruncated,
    Partition,
    bisimilar,
    bisimilar_naive,
    holds,
    render_witness,
)
from .comm import DELTA, CommFn, NotAssociative, UnknownAction, gamma, validate_comm
from .linearize import LinearizationResult, StateBudgetExceeded, linearize
from .rewrite import (
    AxiomStep,
    FuelExhausted,
    HeadNormalForm,
    UnguardedTerm,
    head_normal_form,
    hnf_to_term,
    render_trace,
    replay,
)
from .sos import Lts, UnguardedRecursionDepth, export_aut, export_lts, generate_lts, step_relation
from .syntax import (
    MixedMergeWithoutParens,
    ParseError,
    SpecFile,
    UndeclaredAction,
    parse,
    parse_term,
    pretty_spec,
    pretty_spec_file,
    pretty_term,
)
from .terms import (
    Action,
    Alt,
    CommMerge,
    DuplicateLhs,
    Encap,
    Inaction,
    LeftMerge,
    Par,
    Rec,
    RecSpec,
    Seq,
    Term,
    UnboundVariable,
    UnguardedAfterBudget,
    ValidatedSpec,
    Var,
    free_vars,
    is_closed,
    is_guarded,
    is_linear_spec,
    is_linear_term,
    subst_spec,
    sum_terms,
    validate_spec,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
