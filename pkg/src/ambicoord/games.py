"""Finite strategic games, distributions over action profiles, and the
objective/subjective correlated-equilibrium checks and solver.

All payoffs and probabilities are exact rationals.  Profiles are tuples of
action names in player order; their JSON key form joins the names with ",".
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import lp
from .errors import PreconditionError, SchemaError
from .rationals import format_rational, parse_rational
from .reports import Report

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Profile = tuple[str, ...]


def profile_key(profile: Sequence[str]) -> str:
    return ",".join(profile)


class Game:
    """n-player normal-form game with named players and actions."""

    def __init__(
        self,
        players: Sequence[str],
        actions: Mapping[str, Sequence[str]],
        payoffs: Mapping[Sequence[str], Sequence[Fraction | int]],
    ):
        self.players = tuple(players)
        self.actions = {p: tuple(actions[p]) for p in self.players if p in actions}
        self.payoffs = {
            tuple(profile): tuple(Fraction(v) for v in values)
            for profile, values in payoffs.items()
        }
        self._index = {p: k for k, p in enumerate(self.players)}

    @property
    def n(self) -> int:
        return len(self.players)

    def player_index(self, player: str) -> int:
        try:
            return self._index[player]
        except KeyError:
            raise KeyError(f"unknown player {player!r}") from None

    def actions_of(self, player: str) -> tuple[str, ...]:
        self.player_index(player)
        return self.actions.get(player, ())

    def profiles(self) -> Iterable[Profile]:
        """All full action profiles, in declared (player-major) order."""
        return itertools.product(*(self.actions_of(p) for p in self.players))

    def opponent_profiles(self, player: str) -> Iterable[tuple[str, ...]]:
        """Action combinations of everyone else, in player order."""
        others = (self.actions_of(p) for p in self.players if p != player)
        return itertools.product(*others)

    def profile_with(self, player: str, action: str, opponents: Sequence[str]) -> Profile:
        """Assemble a full profile from one player's action and the rest."""
        k = self.player_index(player)
        rest = iter(opponents)
        return tuple(action if i == k else next(rest) for i in range(self.n))

    def payoff(self, player: str, profile: Sequence[str]) -> Fraction:
        values = self.payoffs.get(tuple(profile))
        if values is None:
            raise KeyError(f"no payoff entry for profile {profile_key(profile)!r}")
        return values[self.player_index(player)]

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.players == other.players
            and self.actions == other.actions
            and self.payoffs == other.payoffs
        )

    def __repr__(self):
        return f"Game(players={self.players!r})"

    # -- serialization ------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "Game":
        if not isinstance(data, dict):
            raise SchemaError("game: expected an object")
        extra = set(data) - {"players", "actions", "payoffs"}
        if extra:
            raise SchemaError(f"game: unknown keys {sorted(extra)}")
        players = data.get("players")
        if not isinstance(players, list) or not all(isinstance(p, str) for p in players):
            raise SchemaError("game: 'players' must be a list of strings")
        actions = data.get("actions")
        if not isinstance(actions, dict):
            raise SchemaError("game: 'actions' must be an object")
        if set(actions) != set(players):
            raise SchemaError("game: 'actions' keys must be exactly the players")
        for p, acts in actions.items():
            if not isinstance(acts, list) or not all(isinstance(a, str) for a in acts):
                raise SchemaError(f"game: actions of player {p!r} must be a list of strings")
        payoffs_raw = data.get("payoffs")
        if not isinstance(payoffs_raw, dict):
            raise SchemaError("game: 'payoffs' must be an object")
        game = cls(players, {p: tuple(a) for p, a in actions.items()}, {})
        payoffs = {}
        for key, values in payoffs_raw.items():
            profile = parse_profile_key(key, game)
            if not isinstance(values, list) or len(values) != len(players):
                raise SchemaError(f"game: payoff vector for {key!r} must list one value per player")
            try:
                payoffs[profile] = tuple(parse_rational(v) for v in values)
            except ValueError as exc:
                raise SchemaError(f"game: payoff for {key!r}: {exc}") from None
        game.payoffs = payoffs
        return game

    def to_dict(self) -> dict:
        return {
            "players": list(self.players),
            "actions": {p: list(self.actions_of(p)) for p in self.players},
            "payoffs": {
                profile_key(a): [format_rational(v) for v in self.payoffs[a]]
                for a in self.profiles()
                if a in self.payoffs
            },
        }


def parse_profile_key(key: str, game: Game) -> Profile:
    """Split "a1,a2,..." and validate each action against the game."""
    if not isinstance(key, str):
        raise SchemaError(f"profile key must be a string, got {key!r}")
    parts = tuple(key.split(","))
    if len(parts) != game.n:
        raise SchemaError(f"profile key {key!r} must name {game.n} actions")
    for p, a in zip(game.players, parts):
        if a not in game.actions_of(p):
            raise SchemaError(f"profile key {key!r}: {a!r} is not an action of player {p!r}")
    return parts


def validate_game(game: Game) -> Report:
    """Report structural problems; an empty report means the game is usable."""
    problems = []
    if game.n < 2:
        problems.append(f"need at least 2 players, got {game.n}")
    seen = set()
    for k, p in enumerate(game.players):
        if not p:
            problems.append("empty player name")
        elif p in seen:
            problems.append(f"duplicate player name {p!r}")
        elif p.isdigit() and int(p) != k + 1:
            problems.append(f"numeric player name {p!r} must equal its position {k + 1}")
        elif not p.isdigit() and _NAME_RE.match(p) is None:
            problems.append(f"player name {p!r} is not an identifier")
        seen.add(p)
    for p in game.players:
        acts = game.actions.get(p, ())
        if not acts:
            problems.append(f"player {p!r} has no actions")
        if len(set(acts)) != len(acts):
            problems.append(f"player {p!r} has duplicate actions")
        for a in acts:
            if _NAME_RE.match(a) is None:
                problems.append(f"action name {a!r} of player {p!r} is not an identifier")
    if not problems:
        expected = set(game.profiles())
        have = set(game.payoffs)
        for a in sorted(expected - have):
            problems.append(f"missing payoff entry for profile {profile_key(a)!r}")
        for a in sorted(have - expected):
            problems.append(f"payoff entry for unknown profile {profile_key(a)!r}")
        for a, values in game.payoffs.items():
            if len(values) != game.n:
                problems.append(f"payoff vector for {profile_key(a)!r} has length {len(values)}")
    return Report(not problems, tuple(problems))


class Distribution:
    """Exact probability weights on full action profiles; zeros are implicit."""

    def __init__(self, weights: Mapping[Sequence[str], Fraction | int]):
        self.weights = {
            tuple(profile): Fraction(w) for profile, w in weights.items() if w != 0
        }

    def weight(self, profile: Sequence[str]) -> Fraction:
        return self.weights.get(tuple(profile), Fraction(0))

    def support(self) -> tuple[Profile, ...]:
        return tuple(self.weights)

    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.weights == other.weights

    def __repr__(self):
        inner = ", ".join(f"{profile_key(a)}: {w}" for a, w in self.weights.items())
        return f"Distribution({{{inner}}})"

    @classmethod
    def from_dict(cls, data: dict, game: Game) -> "Distribution":
        weights = _weights_from_dict(data, game, "distribution")
        dist = cls(weights)
        for w in dist.weights.values():
            if w < 0:
                raise SchemaError("distribution: negative weight")
        if dist.total() != 1:
            raise SchemaError(f"distribution: weights sum to {dist.total()}, not 1")
        return dist

    def to_dict(self, game: Game) -> dict:
        ordered = {
            profile_key(a): format_rational(self.weights[a])
            for a in game.profiles()
            if a in self.weights
        }
        return {"weights": ordered}


def _weights_from_dict(data: dict, game: Game, what: str) -> dict[Profile, Fraction]:
    if not isinstance(data, dict):
        raise SchemaError(f"{what}: expected an object")
    extra = set(data) - {"weights"}
    if extra:
        raise SchemaError(f"{what}: unknown keys {sorted(extra)}")
    raw = data.get("weights")
    if not isinstance(raw, dict):
        raise SchemaError(f"{what}: 'weights' must be an object")
    out = {}
    for key, value in raw.items():
        profile = parse_profile_key(key, game)
        try:
            out[profile] = parse_rational(value)
        except ValueError as exc:
            raise SchemaError(f"{what}: weight for {key!r}: {exc}") from None
    return out


def load_objective(data: dict, game: Game) -> dict[Profile, Fraction]:
    """Objective vectors share the distribution file shape, minus its invariants."""
    return _weights_from_dict(data, game, "objective")


# ---------------------------------------------------------------- CE checks


@dataclass(frozen=True)
class DeviationIssue:
    """One violated incentive inequality, with its exact slack."""

    player: str
    action: str
    deviation: str
    slack: Fraction


def _check_profile_support(game: Game, dist: Distribution) -> None:
    actions = {p: set(game.actions_of(p)) for p in game.players}
    for profile in dist.support():
        if len(profile) != game.n:
            raise PreconditionError(
                f"distribution profile {profile_key(profile)!r} has {len(profile)} entries for a {game.n}-player game"
            )
        for p, a in zip(game.players, profile):
            if a not in actions[p]:
                raise PreconditionError(
                    f"distribution profile {profile_key(profile)!r}: {a!r} is not an action of player {p!r}"
                )


def deviation_slack(game: Game, dist: Distribution, player: str, action: str, alt: str) -> Fraction:
    """Expected payoff loss of switching action->alt on the event "told action"."""
    slack = Fraction(0)
    for combo in game.opponent_profiles(player):
        told = game.profile_with(player, action, combo)
        w = dist.weight(told)
        if w != 0:
            slack += (game.payoff(player, told) - game.payoff(player, game.profile_with(player, alt, combo))) * w
    return slack


def check_objective_ce(game: Game, dist: Distribution) -> Report:
    """Every player weakly prefers following each recommended action."""
    _check_profile_support(game, dist)
    failures = []
    for p in game.players:
        for action in game.actions_of(p):
            for alt in game.actions_of(p):
                if alt == action:
                    continue
                slack = deviation_slack(game, dist, p, action, alt)
                if slack < 0:
                    failures.append(DeviationIssue(p, action, alt, slack))
    return Report(not failures, tuple(failures))


def check_subjective_ce(game: Game, dists: Sequence[Distribution]) -> Report:
    """Each player's inequalities are checked against her own distribution."""
    if len(dists) != game.n:
        raise PreconditionError(f"need one distribution per player, got {len(dists)} for {game.n}")
    failures = []
    for p, dist in zip(game.players, dists):
        _check_profile_support(game, dist)
        for action in game.actions_of(p):
            for alt in game.actions_of(p):
                if alt == action:
                    continue
                slack = deviation_slack(game, dist, p, action, alt)
                if slack < 0:
                    failures.append(DeviationIssue(p, action, alt, slack))
    return Report(not failures, tuple(failures))


def solve_ce(game: Game, objective: Mapping[Profile, Fraction] | None = None) -> Distribution:
    """Maximize a rational objective over the correlated-equilibrium polytope.

    Returns a vertex, exactly.  The polytope is never empty for a complete
    game, so infeasibility indicates a malformed input.
    """
    report = validate_game(game)
    if not report.ok:
        raise PreconditionError("game is not valid: " + "; ".join(map(str, report.failures)))
    profiles = list(game.profiles())
    index = {a: k for k, a in enumerate(profiles)}
    objective = dict(objective or {})
    for a in objective:
        if tuple(a) not in index:
            raise PreconditionError(f"objective names unknown profile {profile_key(a)!r}")
    c = [Fraction(objective.get(a, 0)) for a in profiles]

    eq_rows = [([Fraction(1)] * len(profiles), Fraction(1))]
    ge_rows = []
    for p in game.players:
        for action in game.actions_of(p):
            for alt in game.actions_of(p):
                if alt == action:
                    continue
                row = [Fraction(0)] * len(profiles)
                for combo in game.opponent_profiles(p):
                    told = game.profile_with(p, action, combo)
                    row[index[told]] = game.payoff(p, told) - game.payoff(
                        p, game.profile_with(p, alt, combo)
                    )
                ge_rows.append((row, Fraction(0)))
    try:
        _, x = lp.maximize(c, eq_rows, ge_rows)
    except lp.Infeasible:
        raise PreconditionError("correlated-equilibrium constraints are infeasible") from None
    return Distribution({a: x[index[a]] for a in profiles})
