"""Coordination strategies: signal-contingent playbooks and their evaluation.

A strategy is a total table (player, signal) -> action.  Rendered as formulas
it reads "if i received sigma then i plays a"; validity means every player
deems every such instruction true at every state.  Self-enforcement adds that
each player, at each state, actually plays her recommended action and deems
it optimal.  Induced distributions collect the prior mass of the full action
profiles a viewer sees across states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import PreconditionError, SchemaError
from .formulas import Formula, Implies, Optimal, Play, Receive
from .games import Distribution, Game, check_objective_ce, check_subjective_ce
from .reports import Report
from .semantics import holds
from .structures import (
    EpistemicStructure,
    check_action_uniqueness,
    check_cell_positivity,
    check_partition_consistency,
    check_rationality,
    check_signal_uniqueness,
    is_common_interpretation,
)


class CoordinationStrategy:
    """Total single-valued map from (player, signal) to that player's actions."""

    def __init__(self, players: Sequence[str], signals: Sequence[str], table: Mapping[str, Mapping[str, str]]):
        self.players = tuple(players)
        self.signals = tuple(signals)
        self.table = {p: dict(table.get(p, {})) for p in self.players}
        for p in self.players:
            missing = [s for s in self.signals if s not in self.table[p]]
            if missing:
                raise SchemaError(f"strategy: player {p!r} has no action for signals {missing}")

    def action(self, player: str, signal: str) -> str:
        try:
            return self.table[player][signal]
        except KeyError:
            raise KeyError(f"strategy has no entry for ({player!r}, {signal!r})") from None

    def __eq__(self, other):
        if not isinstance(other, CoordinationStrategy):
            return NotImplemented
        return (
            self.players == other.players
            and self.signals == other.signals
            and self.table == other.table
        )

    def __repr__(self):
        return f"CoordinationStrategy(players={self.players!r}, signals={self.signals!r})"

    @classmethod
    def from_dict(cls, data: dict, game: Game, signals: Sequence[str]) -> "CoordinationStrategy":
        if not isinstance(data, dict):
            raise SchemaError("strategy: expected an object")
        if set(data) != set(game.players):
            raise SchemaError("strategy: keys must be exactly the players")
        for p, row in data.items():
            if not isinstance(row, dict):
                raise SchemaError(f"strategy: entry for player {p!r} must be an object")
            if set(row) != set(signals):
                raise SchemaError(f"strategy: player {p!r} must map exactly the declared signals")
            for s, a in row.items():
                if a not in game.actions_of(p):
                    raise SchemaError(f"strategy: {a!r} is not an action of player {p!r}")
        return cls(game.players, signals, data)

    def to_dict(self) -> dict:
        return {p: {s: self.table[p][s] for s in self.signals} for p in self.players}


def as_formulas(c: CoordinationStrategy) -> tuple[Formula, ...]:
    """The strategy's instructions, player-major then signal order."""
    return tuple(
        Implies(Receive(p, s), Play(p, c.action(p, s))) for p in c.players for s in c.signals
    )


@dataclass(frozen=True)
class ValidityIssue:
    formula: Formula
    viewer: str
    state: str


def check_strategy_valid(m: EpistemicStructure, c: CoordinationStrategy) -> Report:
    """Every instruction formula is valid: true for every viewer at every state."""
    ev = m.evaluator()
    failures = []
    for f in as_formulas(c):
        for viewer in m.game.players:
            mask = ev.intension_mask(viewer, f)
            if mask != ev.full:
                for state in ev.states_of(ev.full ^ mask):
                    failures.append(ValidityIssue(f, viewer, state))
    return Report(not failures, tuple(failures))


@dataclass(frozen=True)
class EnforcementIssue:
    """Why a recommendation fails at (player, state): which conjunct broke."""

    player: str
    state: str
    signal: Optional[str]
    action: Optional[str]
    conjunct: str  # "signal" | "plays" | "optimal"


def check_self_enforcing(m: EpistemicStructure, c: CoordinationStrategy) -> Report:
    """At each state every player follows her recommendation and deems it optimal."""
    failures = []
    for p in m.game.players:
        for state in m.states:
            try:
                signal = m.received_signal(p, state)
            except PreconditionError:
                failures.append(EnforcementIssue(p, state, None, None, "signal"))
                continue
            action = c.action(p, signal)
            if not holds(m, state, p, Play(p, action)):
                failures.append(EnforcementIssue(p, state, signal, action, "plays"))
            elif not holds(m, state, p, Optimal(p, action)):
                failures.append(EnforcementIssue(p, state, signal, action, "optimal"))
    return Report(not failures, tuple(failures))


def induce(m: EpistemicStructure, viewer: str) -> Distribution:
    """Distribution of full action profiles as the viewer interprets play.

    Each state contributes its prior mass to the unique profile the viewer
    sees there; a state with no unique seen profile is an error.
    """
    weights: dict[tuple[str, ...], Fraction] = {}
    for state in m.states:
        profile = m.seen_profile(viewer, state)
        weights[profile] = weights.get(profile, Fraction(0)) + m.prior_of(state)
    return Distribution(weights)


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of verify_induced_equilibrium.

    `kind` is "objective" for common-interpretation structures (one shared
    distribution) and "subjective" otherwise (one per player).  Precondition
    problems are reported, not raised; `ok` requires a clean run and a true
    equilibrium verdict.  `ce_ok` is None when distributions could not be
    computed at all.
    """

    ok: bool
    ce_ok: Optional[bool]
    kind: Optional[str]
    distributions: dict[str, Distribution]
    problems: tuple[str, ...]
    ce_report: Optional[Report]


def verify_induced_equilibrium(m: EpistemicStructure, c: CoordinationStrategy) -> VerifyResult:
    """Induce per-player distributions and check the matching CE notion."""
    problems = []
    named_checks = (
        ("signal uniqueness", check_signal_uniqueness),
        ("partition consistency", check_partition_consistency),
        ("action uniqueness", check_action_uniqueness),
        ("cell positivity", check_cell_positivity),
    )
    clean = True
    for label, check in named_checks:
        report = check(m)
        if not report.ok:
            clean = False
            problems.append(f"{label} fails ({len(report.failures) or 1} issue(s))")
    if clean:
        rat = check_rationality(m)
        if not rat.ok:
            problems.append(f"rationality fails ({len(rat.failures)} issue(s))")
        strat = check_strategy_valid(m, c)
        if not strat.ok:
            problems.append(f"strategy validity fails ({len(strat.failures)} issue(s))")
    else:
        problems.append("rationality and strategy checks skipped")

    try:
        distributions = {p: induce(m, p) for p in m.game.players}
    except PreconditionError as exc:
        problems.append(str(exc))
        return VerifyResult(False, None, None, {}, tuple(problems), None)

    if is_common_interpretation(m):
        kind = "objective"
        first = distributions[m.game.players[0]]
        if any(d != first for d in distributions.values()):
            raise RuntimeError("common interpretation must induce one shared distribution")
        ce_report = check_objective_ce(m.game, first)
    else:
        kind = "subjective"
        ce_report = check_subjective_ce(m.game, [distributions[p] for p in m.game.players])
    ok = ce_report.ok and not problems
    return VerifyResult(ok, ce_report.ok, kind, distributions, tuple(problems), ce_report)
