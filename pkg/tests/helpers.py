"""Seeded random generators for games, objectives and formulas."""

from __future__ import annotations

import random
from fractions import Fraction

from ambicoord import (
    And,
    Belief,
    CommonBelief,
    Game,
    Implies,
    MutualBelief,
    Not,
    Optimal,
    Play,
    Prim,
    ProbGe,
    Rationality,
    Receive,
)

_PLAYER_NAMES = ("alice", "bob", "carol")
_ACTION_NAMES = ("a1", "a2", "a3")


def random_game(rng: random.Random) -> Game:
    """2-3 players with 2-3 actions each and small rational payoffs."""
    n = rng.randint(2, 3)
    players = _PLAYER_NAMES[:n]
    actions = {p: _ACTION_NAMES[: rng.randint(2, 3)] for p in players}
    payoffs = {}
    for profile in _product(actions, players):
        payoffs[profile] = tuple(
            Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in players
        )
    return Game(players, actions, payoffs)


def _product(actions, players):
    import itertools

    return itertools.product(*(actions[p] for p in players))


def random_objective(rng: random.Random, game: Game) -> dict:
    """Sparse rational objective over profiles; may be empty."""
    out = {}
    for profile in game.profiles():
        if rng.random() < 0.5:
            out[profile] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return out


def random_formula(rng: random.Random, game: Game, signals, atoms, depth: int = 3):
    """Arbitrary well-formed formula over the given vocabulary."""
    players = game.players
    leaves = ["play", "receive"] + (["prim"] if atoms else [])
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(
            leaves
            + ["not", "and", "implies", "probge", "belief", "mutual", "cb", "opt", "rat"]
        )
    if kind == "prim":
        return Prim(rng.choice(atoms))
    if kind == "play":
        p = rng.choice(players)
        return Play(p, rng.choice(game.actions_of(p)))
    if kind == "receive":
        return Receive(rng.choice(players), rng.choice(signals))
    if kind == "not":
        return Not(random_formula(rng, game, signals, atoms, depth - 1))
    if kind == "and":
        return And(
            random_formula(rng, game, signals, atoms, depth - 1),
            random_formula(rng, game, signals, atoms, depth - 1),
        )
    if kind == "implies":
        return Implies(
            random_formula(rng, game, signals, atoms, depth - 1),
            random_formula(rng, game, signals, atoms, depth - 1),
        )
    if kind == "probge":
        owner = rng.choice(players)
        terms = tuple(
            (
                Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.randint(1, 3)),
                random_formula(rng, game, signals, atoms, depth - 1),
            )
            for _ in range(rng.randint(1, 3))
        )
        bound = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
        return ProbGe(owner, terms, bound)
    if kind == "belief":
        return Belief(
            rng.choice(players), random_formula(rng, game, signals, atoms, depth - 1)
        )
    if kind == "mutual":
        return MutualBelief(
            rng.randint(1, 2), random_formula(rng, game, signals, atoms, depth - 1)
        )
    if kind == "cb":
        return CommonBelief(random_formula(rng, game, signals, atoms, depth - 1))
    if kind == "opt":
        p = rng.choice(players)
        return Optimal(p, rng.choice(game.actions_of(p)))
    assert kind == "rat"
    return Rationality(rng.choice(players))
