"""Formula AST for a propositional language with player-relative probability.

Core connectives are negation, conjunction, linear probability inequalities
and common belief.  Everything else (implication, probability-1 belief,
iterated mutual belief, action optimality, rationality) is definable sugar;
`expand` rewrites a formula so only core nodes remain, given the game that
fixes players, actions and payoffs.

Two formulas are equal iff they are structurally identical; `str(f)` renders
the canonical concrete syntax accepted by the parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from .games import Game


@dataclass(frozen=True)
class Formula:
    """Abstract base; only the concrete node classes below are instantiated."""

    def __str__(self) -> str:
        return _text(self, _IMP)


# ---------------------------------------------------------------- core nodes


@dataclass(frozen=True)
class Prim(Formula):
    """A generic primitive proposition (an atom declared by the structure)."""

    name: str


@dataclass(frozen=True)
class Play(Formula):
    """Primitive proposition "player plays action"."""

    player: str
    action: str


@dataclass(frozen=True)
class Receive(Formula):
    """Primitive proposition "player received signal"."""

    player: str
    signal: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ProbGe(Formula):
    """Linear inequality over one player's subjective probabilities.

    Holds at a state iff sum(coef * P_owner(sub)) >= bound, where P_owner
    conditions the prior on the owner's information cell at that state.
    Its truth value does not depend on who evaluates it.
    """

    owner: str
    terms: tuple[tuple[Fraction, Formula], ...]
    bound: Fraction

    def __post_init__(self):
        terms = tuple((Fraction(c), f) for c, f in self.terms)
        if not terms:
            raise ValueError("probability inequality needs at least one term")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "bound", Fraction(self.bound))


@dataclass(frozen=True)
class CommonBelief(Formula):
    """Common belief: mutual belief of every finite order at once."""

    arg: Formula


# --------------------------------------------------------------- sugar nodes


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Belief(Formula):
    """Probability-1 belief of one player (a pair of ProbGe inequalities)."""

    player: str
    arg: Formula


@dataclass(frozen=True)
class MutualBelief(Formula):
    """order-fold "everybody believes"; order 1 is plain mutual belief."""

    order: int
    arg: Formula

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"mutual-belief order must be a positive int, got {self.order!r}")


@dataclass(frozen=True)
class Optimal(Formula):
    """The action maximizes the player's expected payoff under her posterior."""

    player: str
    action: str


@dataclass(frozen=True)
class Rationality(Formula):
    """The player plays only actions she deems optimal."""

    player: str


# ------------------------------------------------------------------ printing

# precedence levels of the grammar productions, loosest first
_IMP, _CONJ, _NEG, _ATOM = 0, 1, 2, 3


def _text(f: Formula, need: int) -> str:
    text, level = _node_text(f)
    if level < need:
        return f"({text})"
    return text


def _node_text(f: Formula) -> tuple[str, int]:
    if isinstance(f, Prim):
        return f.name, _ATOM
    if isinstance(f, Play):
        return f"pl({f.player},{f.action})", _ATOM
    if isinstance(f, Receive):
        return f"rec({f.player},{f.signal})", _ATOM
    if isinstance(f, Not):
        return "!" + _text(f.arg, _NEG), _NEG
    if isinstance(f, And):
        # left-nested chains print flat: (a & b) & c  ->  "a & b & c"
        return _text(f.left, _CONJ) + " & " + _text(f.right, _NEG), _CONJ
    if isinstance(f, Implies):
        # right associative
        return _text(f.left, _CONJ) + " -> " + _text(f.right, _IMP), _IMP
    if isinstance(f, ProbGe):
        return _probge_text(f), _ATOM
    if isinstance(f, CommonBelief):
        return f"CB({_text(f.arg, _IMP)})", _ATOM
    if isinstance(f, Belief):
        return f"B_{f.player}({_text(f.arg, _IMP)})", _ATOM
    if isinstance(f, MutualBelief):
        head = "EB" if f.order == 1 else f"EB^{f.order}"
        return f"{head}({_text(f.arg, _IMP)})", _ATOM
    if isinstance(f, Optimal):
        return f"opt_{f.player}({f.action})", _ATOM
    if isinstance(f, Rationality):
        return f"rat_{f.player}", _ATOM
    raise TypeError(f"not a formula node: {f!r}")


def _probge_text(f: ProbGe) -> str:
    parts = []
    for k, (coef, sub) in enumerate(f.terms):
        base = f"pr_{f.owner}({_text(sub, _IMP)})"
        if k == 0:
            parts.append(base if coef == 1 else f"{coef}*{base}")
        else:
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            parts.append(f"{sign} {base}" if mag == 1 else f"{sign} {mag}*{base}")
    return " ".join(parts) + f" >= {f.bound}"


# ----------------------------------------------------------------- expansion


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    it = iter(parts)
    try:
        out = next(it)
    except StopIteration:
        raise ValueError("empty conjunction") from None
    for p in it:
        out = And(out, p)
    return out


def expand(f: Formula, game: Game) -> Formula:
    """Rewrite to core nodes only (Prim/Play/Receive/Not/And/ProbGe/CommonBelief).

    Expansion is idempotent, and satisfaction is invariant under it.
    """
    if isinstance(f, (Prim, Play, Receive)):
        return f
    if isinstance(f, Not):
        return Not(expand(f.arg, game))
    if isinstance(f, And):
        return And(expand(f.left, game), expand(f.right, game))
    if isinstance(f, Implies):
        return Not(And(expand(f.left, game), Not(expand(f.right, game))))
    if isinstance(f, ProbGe):
        return ProbGe(f.owner, tuple((c, expand(sub, game)) for c, sub in f.terms), f.bound)
    if isinstance(f, CommonBelief):
        return CommonBelief(expand(f.arg, game))
    if isinstance(f, Belief):
        sub = expand(f.arg, game)
        return And(
            ProbGe(f.player, ((Fraction(1), sub),), Fraction(1)),
            ProbGe(f.player, ((Fraction(-1), sub),), Fraction(-1)),
        )
    if isinstance(f, MutualBelief):
        inner: Formula = f.arg if f.order == 1 else MutualBelief(f.order - 1, f.arg)
        return conj(expand(Belief(j, inner), game) for j in game.players)
    if isinstance(f, Optimal):
        return optimality_core(f.player, f.action, game)
    if isinstance(f, Rationality):
        return conj(
            expand(Implies(Play(f.player, a), Optimal(f.player, a)), game)
            for a in game.actions_of(f.player)
        )
    raise TypeError(f"not a formula node: {f!r}")


def optimality_core(player: str, action: str, game: Game) -> Formula:
    """Core form of "action is a best response under player's beliefs".

    One inequality per alternative action: the expected payoff difference
    against the believed opponent play is >= 0.  The alternative equal to the
    action itself yields the trivially true all-zero inequality and is kept,
    so the conjunction always ranges over the player's whole action set.
    """
    others = [j for j in game.players if j != player]
    if not others:
        raise ValueError("optimality needs at least one opponent")
    rows = []
    for alt in game.actions_of(player):
        terms = []
        for combo in game.opponent_profiles(player):
            gain = game.payoff(player, game.profile_with(player, action, combo)) - game.payoff(
                player, game.profile_with(player, alt, combo)
            )
            event = conj(Play(j, b) for j, b in zip(others, combo))
            terms.append((gain, event))
        rows.append(ProbGe(player, tuple(terms), Fraction(0)))
    return conj(rows)
