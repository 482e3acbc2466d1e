"""Build epistemic structures that implement given correlated equilibria.

Two constructions, both refusing inputs that fail the corresponding CE check:

* `from_objective_ce`: one state per support profile of a shared equilibrium
  distribution, a common interpretation, and a mediator-style signal scheme.
  Every player is told (only) her own recommended action, encoded through a
  canonical action->signal map.

* `from_subjective_ce`: states are tuples of support profiles, one coordinate
  per player; the prior is the product of the players' distributions, and
  each player interprets signals and play according to her own coordinate.
  Players may thus disagree about what is played; each one's induced
  distribution is exactly her own input.

Both reuse one signal alphabet sig1..sigK with K = max action-set size, and
map each player's k-th declared action to sigK's k-th signal.  Signals beyond
a player's action count fall back to her first declared action, keeping the
returned strategy total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .coordination import CoordinationStrategy
from .errors import PreconditionError
from .formulas import Formula, Play, Receive
from .games import (
    Distribution,
    Game,
    check_objective_ce,
    check_subjective_ce,
    profile_key,
    validate_game,
)
from .structures import EpistemicStructure


@dataclass(frozen=True)
class ConstructionResult:
    structure: EpistemicStructure
    strategy: CoordinationStrategy
    signal_maps: dict[str, dict[str, str]]  # player -> action -> signal

    def signal_maps_dict(self) -> dict:
        return {p: dict(table) for p, table in self.signal_maps.items()}


def _signal_scheme(game: Game):
    """Shared alphabet sig1..sigK plus per-player action<->signal tables."""
    width = max(len(game.actions_of(p)) for p in game.players)
    signals = tuple(f"sig{k + 1}" for k in range(width))
    to_signal = {
        p: {a: signals[k] for k, a in enumerate(game.actions_of(p))} for p in game.players
    }
    strategy_table = {}
    for p in game.players:
        acts = game.actions_of(p)
        strategy_table[p] = {
            signals[k]: (acts[k] if k < len(acts) else acts[0]) for k in range(width)
        }
    return signals, to_signal, strategy_table


def _require_usable(game: Game, dist: Distribution, label: str) -> None:
    problems = validate_game(game)
    if not problems.ok:
        raise PreconditionError("game is not valid: " + "; ".join(map(str, problems.failures)))
    actions = {p: set(game.actions_of(p)) for p in game.players}
    for profile in dist.support():
        if len(profile) != game.n or any(
            a not in actions[p] for p, a in zip(game.players, profile)
        ):
            raise PreconditionError(f"{label} is not over this game's profiles")
    if any(w < 0 for w in dist.weights.values()) or dist.total() != 1:
        raise PreconditionError(f"{label} is not a probability distribution")


def from_objective_ce(game: Game, dist: Distribution) -> ConstructionResult:
    """Common-interpretation structure whose induced distribution is `dist`.

    States are named by their support profile's key; each player receives the
    signal encoding her own recommended action and plays it.
    """
    _require_usable(game, dist, "distribution")
    verdict = check_objective_ce(game, dist)
    if not verdict.ok:
        worst = verdict.failures[0]
        raise PreconditionError(
            "not an objective correlated equilibrium: e.g. player "
            f"{worst.player!r} gains by deviating {worst.action!r}->{worst.deviation!r} "
            f"(slack {worst.slack})"
        )

    signals, to_signal, strategy_table = _signal_scheme(game)
    support = [a for a in game.profiles() if dist.weight(a) > 0]
    states = [profile_key(a) for a in support]
    prior = {profile_key(a): dist.weight(a) for a in support}

    table: dict[Formula, set[str]] = {}
    for a in support:
        state = profile_key(a)
        for p, action in zip(game.players, a):
            table.setdefault(Receive(p, to_signal[p][action]), set()).add(state)
            table.setdefault(Play(p, action), set()).add(state)
    truth = {p: {node: frozenset(ss) for node, ss in table.items()} for p in game.players}

    partitions = {
        p: _grouped(states, support, lambda a, k=game.player_index(p): a[k]) for p in game.players
    }
    structure = EpistemicStructure(
        game, states, prior, signals, (), truth, partitions, None
    )
    strategy = CoordinationStrategy(game.players, signals, strategy_table)
    return ConstructionResult(structure, strategy, to_signal)


def from_subjective_ce(game: Game, dists: Sequence[Distribution]) -> ConstructionResult:
    """Product structure realizing one subjective distribution per player.

    Each state fixes, for every player, a support profile of her own
    distribution; player i's interpretation reads signals and play off her
    coordinate alone.  States whose coordinates disagree get the product
    prior, which may be zero; they are kept, and every information cell still
    has positive mass.
    """
    dists = list(dists)
    if len(dists) != game.n:
        raise PreconditionError(f"need one distribution per player, got {len(dists)} for {game.n}")
    for d in dists:
        _require_usable(game, d, "distribution")
    verdict = check_subjective_ce(game, dists)
    if not verdict.ok:
        worst = verdict.failures[0]
        raise PreconditionError(
            "not a subjective correlated equilibrium: e.g. player "
            f"{worst.player!r} gains by deviating {worst.action!r}->{worst.deviation!r} "
            f"(slack {worst.slack})"
        )

    signals, to_signal, strategy_table = _signal_scheme(game)
    supports = [[a for a in game.profiles() if d.weight(a) > 0] for d in dists]
    assignments = list(product(*supports))

    def name(assignment) -> str:
        return "|".join(profile_key(a) for a in assignment)

    states = [name(w) for w in assignments]
    prior = {}
    for w in assignments:
        weight = Fraction(1)
        for d, a in zip(dists, w):
            weight *= d.weight(a)
        prior[name(w)] = weight

    truth: dict[str, dict[Formula, frozenset[str]]] = {}
    for i, p in enumerate(game.players):
        table: dict[Formula, set[str]] = {}
        for w in assignments:
            state = name(w)
            mine = w[i]
            for q, action in zip(game.players, mine):
                table.setdefault(Receive(q, to_signal[q][action]), set()).add(state)
                table.setdefault(Play(q, action), set()).add(state)
        truth[p] = {node: frozenset(ss) for node, ss in table.items()}

    partitions = {}
    for i, p in enumerate(game.players):
        k = game.player_index(p)
        partitions[p] = _grouped(states, assignments, lambda w: w[i][k])

    structure = EpistemicStructure(
        game, states, prior, signals, (), truth, partitions, None
    )
    strategy = CoordinationStrategy(game.players, signals, strategy_table)
    return ConstructionResult(structure, strategy, to_signal)


def _grouped(states, tagged, tag_of):
    """Partition cells grouped by a tag, ordered by first appearance."""
    cells: dict[object, list[str]] = {}
    for state, item in zip(states, tagged):
        cells.setdefault(tag_of(item), []).append(state)
    return [frozenset(c) for c in cells.values()]
