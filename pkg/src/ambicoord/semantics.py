"""Satisfaction checking on epistemic structures.

The evaluator compiles a structure once: states become bit positions, events
become int bitmasks, and the prior becomes integer numerators over a common
denominator, so every comparison is exact integer/Fraction arithmetic.

Probability inequalities are evaluated per information cell of their owner
(their truth is constant on each cell and independent of the viewer), then
broadcast to states.  Common belief follows its fixed-point characterization:
iterate the everybody-believes-event operator from the mutual-belief set and
intersect the orbit, stopping when a set repeats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError
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
    optimality_core,
)

# node kinds whose truth cannot depend on who evaluates them
_VIEWER_FREE = (ProbGe, Belief, MutualBelief, CommonBelief, Optimal)


class Evaluator:
    """Compiled, memoizing model checker for one structure."""

    def __init__(self, m):
        self.m = m
        self.game = m.game
        self.nstates = len(m.states)
        self.full = (1 << self.nstates) - 1
        denom = math.lcm(*(m.prior[s].denominator for s in m.states))
        self.denom = denom
        self.num = [int(m.prior[s] * denom) for s in m.states]
        partitions = m.partitions()
        self.cells: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        for p in self.game.players:
            masks = []
            for c in partitions[p]:
                mask = 0
                for s in c:
                    mask |= 1 << m.state_index(s)
                masks.append(mask)
            self.cells[p] = (tuple(masks), tuple(self._mass_num(mk) for mk in masks))
        self._memo: dict = {}
        self._cores: dict = {}

    # -- plumbing -------------------------------------------------------------

    def _mass_num(self, mask: int) -> int:
        total = 0
        while mask:
            low = mask & -mask
            total += self.num[low.bit_length() - 1]
            mask ^= low
        return total

    def states_of(self, mask: int) -> frozenset[str]:
        return frozenset(s for k, s in enumerate(self.m.states) if (mask >> k) & 1)

    def mask_of(self, event: Iterable[str]) -> int:
        mask = 0
        for s in event:
            mask |= 1 << self.m.state_index(s)
        return mask

    # -- intensions -----------------------------------------------------------

    def intension_mask(self, viewer: str, f: Formula) -> int:
        self.game.player_index(viewer)
        return self._mask(viewer, f)

    def _mask(self, viewer: str, f: Formula) -> int:
        key = (None, f) if isinstance(f, _VIEWER_FREE) else (viewer, f)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._compute(viewer, f)
        return hit

    def _compute(self, viewer: str, f: Formula) -> int:
        if isinstance(f, Prim):
            if f.name not in self.m.atoms:
                raise PreconditionError(f"formula references undeclared atom {f.name!r}")
            return self.mask_of(self.m.true_set(viewer, f))
        if isinstance(f, Play):
            if f.action not in self.game.actions_of(f.player):
                raise PreconditionError(f"{f.action!r} is not an action of player {f.player!r}")
            return self.mask_of(self.m.true_set(viewer, f))
        if isinstance(f, Receive):
            self.game.player_index(f.player)
            if f.signal not in self.m.signals:
                raise PreconditionError(f"formula references undeclared signal {f.signal!r}")
            return self.mask_of(self.m.true_set(viewer, f))
        if isinstance(f, Not):
            return self.full ^ self._mask(viewer, f.arg)
        if isinstance(f, And):
            return self._mask(viewer, f.left) & self._mask(viewer, f.right)
        if isinstance(f, Implies):
            return (self.full ^ self._mask(viewer, f.left)) | self._mask(viewer, f.right)
        if isinstance(f, ProbGe):
            return self._probge(f)
        if isinstance(f, Belief):
            return self._believe(f.player, self._mask(f.player, f.arg))
        if isinstance(f, MutualBelief):
            cur = self._everybody_believes_formula(f.arg)
            for _ in range(f.order - 1):
                cur = self._everybody_believes_event(cur)
            return cur
        if isinstance(f, CommonBelief):
            return self._common(f.arg)
        if isinstance(f, Optimal):
            core = self._cores.get((f.player, f.action))
            if core is None:
                core = self._cores[(f.player, f.action)] = optimality_core(
                    f.player, f.action, self.game
                )
            return self._mask(viewer, core)
        if isinstance(f, Rationality):
            body = self._cores.get(f.player)
            if body is None:
                body = self._cores[f.player] = conj(
                    Implies(Play(f.player, a), Optimal(f.player, a))
                    for a in self.game.actions_of(f.player)
                )
            return self._mask(viewer, body)
        raise TypeError(f"not a formula node: {f!r}")

    def _probge(self, f: ProbGe) -> int:
        masks, sums = self._owner_cells(f.owner)
        terms = [(coef, self._mask(f.owner, sub)) for coef, sub in f.terms]
        out = 0
        for cmask, csum in zip(masks, sums):
            if csum == 0:
                raise PreconditionError(
                    f"zero-mass information cell of player {f.owner!r}; posterior undefined"
                )
            lhs = Fraction(0)
            for coef, emask in terms:
                if coef != 0:
                    inter = emask & cmask
                    if inter:
                        lhs += coef * self._mass_num(inter)
            if lhs >= f.bound * csum:
                out |= cmask
        return out

    def _owner_cells(self, owner: str):
        cells = self.cells.get(owner)
        if cells is None:
            raise PreconditionError(f"unknown player {owner!r} in probability formula")
        return cells

    def _believe(self, player: str, emask: int) -> int:
        """States where the player assigns posterior 1 to the event."""
        masks, sums = self._owner_cells(player)
        out = 0
        for cmask, csum in zip(masks, sums):
            if csum == 0:
                raise PreconditionError(
                    f"zero-mass information cell of player {player!r}; posterior undefined"
                )
            if self._mass_num(emask & cmask) == csum:
                out |= cmask
        return out

    def _everybody_believes_formula(self, f: Formula) -> int:
        out = self.full
        for j in self.game.players:
            out &= self._believe(j, self._mask(j, f))
        return out

    def _everybody_believes_event(self, emask: int) -> int:
        out = self.full
        for j in self.game.players:
            out &= self._believe(j, emask)
        return out

    def _common(self, f: Formula) -> int:
        cur = self._everybody_believes_formula(f)
        acc = cur
        seen = {cur}
        while True:
            cur = self._everybody_believes_event(cur)
            if cur in seen:
                return acc
            seen.add(cur)
            acc &= cur


# ------------------------------------------------------------- public API


def posterior(m, player: str, event: Iterable[str], state: str) -> Fraction:
    """P(event | player's information cell at state) under the prior."""
    cell = m.cell(player, state)
    cell_mass = m.mass(cell)
    if cell_mass == 0:
        raise PreconditionError(
            f"information cell of player {player!r} at state {state!r} has zero prior mass"
        )
    hits = frozenset(event) & cell
    return m.mass(hits) / cell_mass


def holds(m, state: str, player: str, f: Formula) -> bool:
    """Does the player deem the formula true at the state?"""
    ev = m.evaluator()
    return bool((ev.intension_mask(player, f) >> m.state_index(state)) & 1)


def intension(m, player: str, f: Formula) -> frozenset[str]:
    """All states where the player deems the formula true."""
    ev = m.evaluator()
    return ev.states_of(ev.intension_mask(player, f))


def cb_intension(m, f: Formula) -> frozenset[str]:
    """States where the formula is common belief (viewer-independent)."""
    return intension(m, m.game.players[0], CommonBelief(f))


def valid(m, f: Formula) -> bool:
    """True when every player deems the formula true at every state."""
    ev = m.evaluator()
    return all(ev.intension_mask(p, f) == ev.full for p in m.game.players)
