"""Epistemic probability structures, ambiguous signalling, and correlated
equilibrium coordination, all in exact rational arithmetic.

The package provides a formula language with player-relative interpretation
(parser, printer, expansion to a core calculus), a memoizing model checker,
validators for the structural assumptions coordination rests on, induced
distribution and equilibrium verification, an exact-LP correlated-equilibrium
solver, and the two constructions turning equilibria into structures.
"""

from .construct import ConstructionResult, from_objective_ce, from_subjective_ce
from .coordination import (
    CoordinationStrategy,
    EnforcementIssue,
    ValidityIssue,
    VerifyResult,
    as_formulas,
    check_self_enforcing,
    check_strategy_valid,
    induce,
    verify_induced_equilibrium,
)
from .errors import PreconditionError, SchemaError
from .formulas import (
    And,
    Belief,
    CommonBelief,
    Formula,
    Implies,
    MutualBelief,
    Not,
    Optimal,
    Play,
    Prim,
    ProbGe,
    Rationality,
    Receive,
    conj,
    expand,
    optimality_core,
)
from .games import (
    DeviationIssue,
    Distribution,
    Game,
    check_objective_ce,
    check_subjective_ce,
    deviation_slack,
    load_objective,
    parse_profile_key,
    profile_key,
    solve_ce,
    validate_game,
)
from .parser import ParseError, UnknownIdentifierError, parse_formula, parse_instance
from .rationals import format_rational, parse_rational
from .reports import Report
from .semantics import Evaluator, cb_intension, holds, intension, posterior, valid
from .structures import (
    ActionIssue,
    CellIssue,
    EpistemicStructure,
    PartitionIssue,
    RationalityIssue,
    SignalDefIssue,
    SignalIssue,
    check_action_uniqueness,
    check_cell_positivity,
    check_partition_consistency,
    check_rationality,
    check_signal_definitions,
    check_signal_uniqueness,
    is_common_interpretation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
