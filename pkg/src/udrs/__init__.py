"""Underspecified discourse representation structures.

A sentence is stored as labelled box fragments plus a partial order saying
which fragment may end up inside which — scope relations the sentence has
not yet fixed.  The package validates such structures, tightens them
monotonically (scope constraints, plural construals, pronoun resolution,
coindexing), enumerates the fully specified boxes they still admit,
evaluates those boxes in finite models, and decides bounded consequence
between ambiguous sentences.

The usual entry points:

* build structures with the types in :mod:`udrs.structure`, or parse them
  from text with :func:`parse_database` / :func:`parse_udrs`;
* :func:`validate` reports well-formedness violations;
* :func:`add_constraint` adds one ordering fact, rejecting anything that
  would break well-formedness — no enumeration involved;
* the :mod:`udrs.plural` transforms pick construals for plural boxes;
* :func:`enumerate_readings` + :func:`apply_reading` turn a structure into
  its fully specified boxes;
* :func:`verify_drs` / :func:`check_consistency` evaluate boxes in models;
* :func:`entails` / :func:`tautology` decide consequence up to a model-size
  bound, honouring coindexing marks placed by :func:`coindex`.
"""

from .drs import (
    DAtom,
    DCum,
    DEq,
    DIn,
    DImpl,
    DNeg,
    DQuant,
    DSum,
    Drs,
    DrsCond,
    DTerm,
    EMPTY_DRS,
)
from .entail import (
    ClauseIso,
    EntailmentReport,
    clause_isomorphism,
    coindex,
    entails,
    tautology,
)
from .errors import (
    ClauseEscape,
    CoindexViolation,
    ConstraintError,
    DuplicateLabel,
    EmptyAbstraction,
    Inaccessible,
    LowerBoundViolation,
    NoGroupReferent,
    NoIsomorphism,
    NoLicensingCondition,
    NotAClause,
    NotAPronoun,
    NotLowerBound,
    NotPotentiallyScopeBearing,
    NotSameClause,
    ParseError,
    PartialMapping,
    ReadingMismatch,
    SemilatticeViolation,
    SharedResponsibilityUnsupported,
    SourceSpan,
    TagMismatch,
    UdrsError,
    UnboundReferent,
    UnknownLabel,
    UnknownReferent,
    UnknownSort,
    UnresolvedLabel,
    WrongClause,
)
from .order import add_constraint, close, linear_extensions, Ord
from .plural import (
    abstract_antecedent,
    collectivize,
    cumulate,
    distribute,
    genericize,
    mark_dependent,
    resolve_pronoun,
)
from .readings import (
    Reading,
    apply_reading,
    drs_equivalent,
    enumerate_readings,
)
from .semantics import (
    ConsistentWitness,
    Model,
    NoModelUpTo,
    QUANTIFIER_REGISTRY,
    SyntacticClash,
    box_drs,
    check_consistency,
    denote,
    dependent_sense_verdicts,
    drs_true,
    entity,
    join,
    restrict_dependent,
    sweep_models,
    truth,
    verify_cumulative,
    verify_drs,
    verify_embeddings,
    verify_sum,
)
from .structure import (
    Atom,
    Clause,
    ClauseRef,
    Component,
    Condition,
    CumDuplex,
    Database,
    Dependency,
    Eq,
    GROUP,
    Impl,
    INDIVIDUAL,
    Label,
    Neg,
    NEUTRAL,
    Not,
    Quant,
    Referent,
    SELF,
    Sense,
    Slot,
    SumEq,
    Term,
    Udrs,
    Unresolved,
    Violation,
    as_database,
    free_vars,
    referent_sort,
    validate,
)
from .textio import (
    model_to_dict,
    parse_database,
    parse_drs,
    parse_model,
    parse_term,
    parse_udrs,
    print_database,
    print_drs,
    print_model,
    print_udrs,
    reading_to_dict,
)

__version__ = "0.1.0"
