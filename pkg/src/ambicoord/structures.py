"""Finite epistemic probability structures with player-relative interpretation.

A structure couples a game with a finite state space, a common prior, a
signal alphabet, and one interpretation table per player: each player has her
own truth assignment for every primitive proposition (generic atoms, "j plays
a", "j received sigma").  Information partitions are either stored explicitly
or derived from each player's own received-signal atoms.

Structures are treated as immutable once built; derived data (partitions,
the compiled evaluator) is cached on first use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import PreconditionError, SchemaError
from .formulas import And, Formula, Implies, Not, Optimal, Play, Prim, Rationality, Receive, conj
from .games import Game
from .parser import ParseError, parse_formula, parse_instance
from .rationals import format_rational, parse_rational
from .reports import Report

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_RESERVED = {"pl", "rec", "EB", "CB"}
_RESERVED_PREFIXES = ("B_", "pr_", "rat_", "opt_")


def _usable_name(name: str) -> bool:
    """Atom/signal names must be identifiers the formula grammar can accept."""
    if _NAME_RE.match(name) is None or name in _RESERVED:
        return False
    return not name.startswith(_RESERVED_PREFIXES)


class EpistemicStructure:
    def __init__(
        self,
        game: Game,
        states: Iterable[str],
        prior: Mapping[str, Fraction | int],
        signals: Iterable[str],
        atoms: Iterable[str] = (),
        truth: Optional[Mapping[str, Mapping[Formula, Iterable[str]]]] = None,
        partitions: Optional[Mapping[str, Iterable[Iterable[str]]]] = None,
        signal_defs: Optional[Mapping[str, Optional[Formula]]] = None,
    ):
        self.game = game
        self.states = tuple(states)
        if not self.states:
            raise SchemaError("structure: needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise SchemaError("structure: duplicate state names")
        self._state_index = {s: k for k, s in enumerate(self.states)}

        self.prior: dict[str, Fraction] = {}
        for s, w in prior.items():
            if s not in self._state_index:
                raise SchemaError(f"structure: prior names unknown state {s!r}")
            self.prior[s] = Fraction(w)
        for s in self.states:
            self.prior.setdefault(s, Fraction(0))
        if any(w < 0 for w in self.prior.values()):
            raise SchemaError("structure: negative prior weight")
        total = sum(self.prior.values(), Fraction(0))
        if total != 1:
            raise SchemaError(f"structure: prior sums to {total}, not 1")

        self.signals = tuple(signals)
        if len(set(self.signals)) != len(self.signals):
            raise SchemaError("structure: duplicate signal names")
        self.atoms = tuple(atoms)
        if len(set(self.atoms)) != len(self.atoms):
            raise SchemaError("structure: duplicate atom names")
        for name in (*self.signals, *self.atoms):
            if not _usable_name(name):
                raise SchemaError(f"structure: {name!r} is not a usable signal/atom name")

        self.truth: dict[str, dict[Formula, frozenset[str]]] = {p: {} for p in game.players}
        for p, table in (truth or {}).items():
            if p not in self.truth:
                raise SchemaError(f"structure: interpretation for unknown player {p!r}")
            for node, where in table.items():
                self._check_instance(node)
                cell = frozenset(where)
                bad = cell - set(self.states)
                if bad:
                    raise SchemaError(f"structure: unknown states {sorted(bad)} for {node}")
                self.truth[p][node] = cell

        self.stored_partitions: Optional[dict[str, tuple[frozenset[str], ...]]] = None
        if partitions is not None:
            stored = {}
            for p, cells in partitions.items():
                if p not in self.truth:
                    raise SchemaError(f"structure: partition for unknown player {p!r}")
                stored[p] = tuple(frozenset(c) for c in cells)
            if set(stored) != set(game.players):
                raise SchemaError("structure: partitions must cover every player")
            for p, cells in stored.items():
                flat = [s for c in cells for s in c]
                if any(not c for c in cells):
                    raise SchemaError(f"structure: empty partition cell for player {p!r}")
                if len(flat) != len(set(flat)) or set(flat) != set(self.states):
                    raise SchemaError(f"structure: cells of player {p!r} do not partition the states")
            self.stored_partitions = stored

        self.signal_defs: dict[str, Optional[Formula]] = {s: None for s in self.signals}
        for sig, df in (signal_defs or {}).items():
            if sig not in self.signal_defs:
                raise SchemaError(f"structure: definition for unknown signal {sig!r}")
            if df is not None:
                self._check_signal_def(df)
            self.signal_defs[sig] = df

        self._derived_partitions: Optional[dict[str, tuple[frozenset[str], ...]]] = None
        self._cells: dict[str, dict[str, frozenset[str]]] = {}
        self._evaluator = None

    def _check_instance(self, node: Formula) -> None:
        if isinstance(node, Prim):
            if node.name not in self.atoms:
                raise SchemaError(f"structure: undeclared atom {node.name!r}")
        elif isinstance(node, Play):
            if node.action not in self.game.actions_of(node.player):
                raise SchemaError(f"structure: {node.action!r} is not an action of {node.player!r}")
        elif isinstance(node, Receive):
            self.game.player_index(node.player)
            if node.signal not in self.signals:
                raise SchemaError(f"structure: undeclared signal {node.signal!r}")
        else:
            raise SchemaError(f"structure: {node} is not a primitive proposition")

    def _check_signal_def(self, f: Formula) -> None:
        if isinstance(f, Prim):
            if f.name not in self.atoms:
                raise SchemaError(f"structure: signal definition uses undeclared atom {f.name!r}")
        elif isinstance(f, Not):
            self._check_signal_def(f.arg)
        elif isinstance(f, (And, Implies)):
            self._check_signal_def(f.left)
            self._check_signal_def(f.right)
        else:
            raise SchemaError("structure: signal definitions must be boolean formulas over generic atoms")

    # -- basic access --------------------------------------------------------

    def state_index(self, state: str) -> int:
        try:
            return self._state_index[state]
        except KeyError:
            raise KeyError(f"unknown state {state!r}") from None

    def prior_of(self, state: str) -> Fraction:
        self.state_index(state)
        return self.prior[state]

    def mass(self, event: Iterable[str]) -> Fraction:
        return sum((self.prior_of(s) for s in event), Fraction(0))

    def true_set(self, viewer: str, node: Formula) -> frozenset[str]:
        """States where `viewer` deems the primitive proposition true."""
        try:
            table = self.truth[viewer]
        except KeyError:
            raise KeyError(f"unknown player {viewer!r}") from None
        return table.get(node, frozenset())

    def atom_true(self, viewer: str, node: Formula, state: str) -> bool:
        return state in self.true_set(viewer, node)

    def signals_received(self, viewer: str, receiver: str, state: str) -> tuple[str, ...]:
        """All signals `viewer` thinks `receiver` got at `state`, in alphabet order."""
        return tuple(
            s for s in self.signals if state in self.true_set(viewer, Receive(receiver, s))
        )

    def received_signal(self, player: str, state: str) -> str:
        """The one signal `player` thinks she received; errors if not unique."""
        got = self.signals_received(player, player, state)
        if len(got) != 1:
            raise PreconditionError(
                f"player {player!r} receives {len(got)} signals at state {state!r}"
            )
        return got[0]

    # -- partitions -----------------------------------------------------------

    def derive_partitions(self) -> dict[str, tuple[frozenset[str], ...]]:
        """Group states by each player's own received signal.

        Fails if any state gives a player zero or several signals; cells are
        ordered by first appearance in the state list.
        """
        if self._derived_partitions is None:
            out = {}
            for p in self.game.players:
                cells: dict[str, list[str]] = {}
                for s in self.states:
                    cells.setdefault(self.received_signal(p, s), []).append(s)
                out[p] = tuple(frozenset(c) for c in cells.values())
            self._derived_partitions = out
        return self._derived_partitions

    def partitions(self) -> dict[str, tuple[frozenset[str], ...]]:
        """Stored partitions when present, otherwise the derived ones."""
        if self.stored_partitions is not None:
            return self.stored_partitions
        return self.derive_partitions()

    def cell(self, player: str, state: str) -> frozenset[str]:
        """The player's information cell containing the state."""
        lookup = self._cells.get(player)
        if lookup is None:
            lookup = {}
            for c in self.partitions()[player]:
                for s in c:
                    lookup[s] = c
            self._cells[player] = lookup
        self.state_index(state)
        return lookup[state]

    def seen_profile(self, viewer: str, state: str) -> tuple[str, ...]:
        """The full action profile `viewer` sees at `state`; errors unless unique."""
        out = []
        for p in self.game.players:
            acts = [
                a for a in self.game.actions_of(p) if state in self.true_set(viewer, Play(p, a))
            ]
            if len(acts) != 1:
                raise PreconditionError(
                    f"viewer {viewer!r} sees {len(acts)} actions for player {p!r} at state {state!r}"
                )
            out.append(acts[0])
        return tuple(out)

    def evaluator(self):
        """The compiled model checker for this structure (built once)."""
        if self._evaluator is None:
            from .semantics import Evaluator

            self._evaluator = Evaluator(self)
        return self._evaluator

    # -- serialization --------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict, game: Game) -> "EpistemicStructure":
        if not isinstance(data, dict):
            raise SchemaError("structure: expected an object")
        allowed = {"states", "prior", "signals", "atoms", "interpretation", "partitions"}
        extra = set(data) - allowed
        if extra:
            raise SchemaError(f"structure: unknown keys {sorted(extra)}")
        states = data.get("states")
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            raise SchemaError("structure: 'states' must be a list of strings")
        prior_raw = data.get("prior")
        if not isinstance(prior_raw, dict):
            raise SchemaError("structure: 'prior' must be an object")
        try:
            prior = {s: parse_rational(w) for s, w in prior_raw.items()}
        except ValueError as exc:
            raise SchemaError(f"structure: prior: {exc}") from None
        signals_raw = data.get("signals")
        if not isinstance(signals_raw, dict):
            raise SchemaError("structure: 'signals' must map signal names to definitions or null")
        atoms = data.get("atoms", [])
        if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
            raise SchemaError("structure: 'atoms' must be a list of strings")

        signal_names = tuple(signals_raw)
        signal_defs = {}
        for sig, df in signals_raw.items():
            if df is None:
                signal_defs[sig] = None
                continue
            if not isinstance(df, str):
                raise SchemaError(f"structure: definition of signal {sig!r} must be a string or null")
            try:
                signal_defs[sig] = parse_formula(df, game, signals=signal_names, atoms=atoms)
            except ParseError as exc:
                raise SchemaError(f"structure: definition of signal {sig!r}: {exc}") from None

        interp_raw = data.get("interpretation")
        if not isinstance(interp_raw, dict):
            raise SchemaError("structure: 'interpretation' must be an object")
        truth: dict[str, dict[Formula, frozenset[str]]] = {}
        for p, table in interp_raw.items():
            if not isinstance(table, dict):
                raise SchemaError(f"structure: interpretation of player {p!r} must be an object")
            entries = {}
            for key, where in table.items():
                try:
                    node = parse_instance(key, game, signals=signal_names, atoms=atoms)
                except ParseError as exc:
                    raise SchemaError(f"structure: instance key {key!r}: {exc}") from None
                if not isinstance(where, list) or not all(isinstance(s, str) for s in where):
                    raise SchemaError(f"structure: value of {key!r} must be a list of states")
                entries[node] = frozenset(where)
            truth[p] = entries

        partitions_raw = data.get("partitions")
        partitions = None
        if partitions_raw is not None:
            if not isinstance(partitions_raw, dict):
                raise SchemaError("structure: 'partitions' must be an object or null")
            partitions = {}
            for p, cells in partitions_raw.items():
                if not isinstance(cells, list) or not all(isinstance(c, list) for c in cells):
                    raise SchemaError(f"structure: partition of player {p!r} must be a list of lists")
                partitions[p] = [frozenset(c) for c in cells]

        return cls(
            game,
            states,
            prior,
            signal_names,
            atoms,
            truth,
            partitions,
            signal_defs,
        )

    def to_dict(self) -> dict:
        interp = {}
        for p in self.game.players:
            table = self.truth[p]
            entries = {}
            for node in self._instance_order():
                where = table.get(node)
                if where:
                    entries[str(node)] = self._ordered(where)
            interp[p] = entries
        partitions = None
        if self.stored_partitions is not None:
            partitions = {
                p: [self._ordered(c) for c in cells]
                for p, cells in self.stored_partitions.items()
            }
        return {
            "states": list(self.states),
            "prior": {s: format_rational(self.prior[s]) for s in self.states},
            "signals": {
                s: (str(df) if df is not None else None) for s, df in self.signal_defs.items()
            },
            "atoms": list(self.atoms),
            "interpretation": interp,
            "partitions": partitions,
        }

    def _instance_order(self) -> list[Formula]:
        out: list[Formula] = [Prim(a) for a in self.atoms]
        for p in self.game.players:
            out.extend(Receive(p, s) for s in self.signals)
        for p in self.game.players:
            out.extend(Play(p, a) for a in self.game.actions_of(p))
        return out

    def _ordered(self, states: Iterable[str]) -> list[str]:
        return sorted(states, key=self.state_index)


# ------------------------------------------------------------------- checks


@dataclass(frozen=True)
class SignalIssue:
    """A (receiver, viewer, state) where the received signal is not unique."""

    receiver: str
    viewer: str
    state: str
    signals: tuple[str, ...]


@dataclass(frozen=True)
class PartitionIssue:
    player: str
    state: str
    stored: tuple[str, ...]
    derived: tuple[str, ...]


@dataclass(frozen=True)
class ActionIssue:
    """A viewer sees several actions for one player at one state."""

    viewer: str
    state: str
    player: str
    actions: tuple[str, ...]


@dataclass(frozen=True)
class CellIssue:
    player: str
    cell: tuple[str, ...]


@dataclass(frozen=True)
class SignalDefIssue:
    player: str
    signal: str
    expected: tuple[str, ...]
    actual: tuple[str, ...]


@dataclass(frozen=True)
class RationalityIssue:
    """A state where a player plays an action she deems suboptimal."""

    player: str
    state: str
    played: str
    better: str
    gap: Fraction


def check_signal_uniqueness(m: EpistemicStructure) -> Report:
    """Every viewer sees exactly one received signal per receiver and state.

    Equivalently: each viewer's nonempty receipt-intensions for a receiver
    partition the state space, and distinct signals have distinct intensions.
    """
    failures = []
    for receiver in m.game.players:
        for viewer in m.game.players:
            for state in m.states:
                got = m.signals_received(viewer, receiver, state)
                if len(got) != 1:
                    failures.append(SignalIssue(receiver, viewer, state, got))
    return Report(not failures, tuple(failures))


def check_partition_consistency(m: EpistemicStructure) -> Report:
    """Stored information partitions match the signal-derived ones cell for cell."""
    if m.stored_partitions is None:
        return Report(True, notes=("no stored partitions; derived partitions are in effect",))
    try:
        derived = m.derive_partitions()
    except PreconditionError as exc:
        return Report(False, notes=(f"cannot derive partitions: {exc}",))
    failures = []
    for p in m.game.players:
        derived_of = {}
        for c in derived[p]:
            for s in c:
                derived_of[s] = c
        stored_of = {}
        for c in m.stored_partitions[p]:
            for s in c:
                stored_of[s] = c
        for s in m.states:
            if stored_of[s] != derived_of[s]:
                failures.append(
                    PartitionIssue(p, s, tuple(m._ordered(stored_of[s])), tuple(m._ordered(derived_of[s])))
                )
    return Report(not failures, tuple(failures))


def check_action_uniqueness(m: EpistemicStructure) -> Report:
    """No viewer ever sees a player playing two actions at once.

    States where a viewer sees no action at all are legal (play may be
    unmodeled there); they are listed in the notes for visibility.
    """
    failures = []
    notes = []
    for viewer in m.game.players:
        for state in m.states:
            for p in m.game.players:
                acts = tuple(
                    a for a in m.game.actions_of(p) if state in m.true_set(viewer, Play(p, a))
                )
                if len(acts) > 1:
                    failures.append(ActionIssue(viewer, state, p, acts))
                elif not acts:
                    notes.append(f"viewer {viewer!r} sees no action for player {p!r} at {state!r}")
    return Report(not failures, tuple(failures), tuple(notes))


def check_cell_positivity(m: EpistemicStructure) -> Report:
    """Every information cell carries positive prior mass, so posteriors exist."""
    try:
        partitions = m.partitions()
    except PreconditionError as exc:
        return Report(False, notes=(f"cannot derive partitions: {exc}",))
    failures = []
    for p in m.game.players:
        for c in partitions[p]:
            if m.mass(c) == 0:
                failures.append(CellIssue(p, tuple(m._ordered(c))))
    return Report(not failures, tuple(failures))


def check_signal_definitions(m: EpistemicStructure) -> Report:
    """Defined signals are received exactly where their defining formula holds.

    For each signal with a definition d and each player i, the states where i
    deems herself to have received the signal must equal i's intension of d.
    Signals without definitions are skipped.
    """
    from .semantics import intension

    failures = []
    notes = []
    for sig in m.signals:
        df = m.signal_defs.get(sig)
        if df is None:
            notes.append(f"signal {sig!r} has no definition; skipped")
            continue
        for p in m.game.players:
            expected = intension(m, p, df)
            actual = m.true_set(p, Receive(p, sig))
            if expected != actual:
                failures.append(
                    SignalDefIssue(p, sig, tuple(m._ordered(expected)), tuple(m._ordered(actual)))
                )
    return Report(not failures, tuple(failures), tuple(notes))


def is_common_interpretation(m: EpistemicStructure) -> bool:
    """True when all players' interpretation tables agree everywhere."""
    players = m.game.players
    keys = set()
    for p in players:
        keys.update(m.truth[p])
    first = players[0]
    return all(
        m.true_set(p, node) == m.true_set(first, node) for p in players[1:] for node in keys
    )


def check_rationality(m: EpistemicStructure) -> Report:
    """Each player, by her own lights, never plays a suboptimal action.

    Assumes signal uniqueness, partition consistency, action uniqueness and
    cell positivity already hold; may raise PreconditionError otherwise.
    """
    from .semantics import holds

    failures = []
    for p in m.game.players:
        for state in m.states:
            if holds(m, state, p, Rationality(p)):
                continue
            played = [
                a for a in m.game.actions_of(p) if state in m.true_set(p, Play(p, a))
            ]
            for a in played:
                if holds(m, state, p, Optimal(p, a)):
                    continue
                utilities = {b: _expected_payoff(m, p, b, state) for b in m.game.actions_of(p)}
                better = max(utilities, key=lambda b: (utilities[b], b))
                failures.append(
                    RationalityIssue(p, state, a, better, utilities[better] - utilities[a])
                )
    return Report(not failures, tuple(failures))


def _expected_payoff(m: EpistemicStructure, player: str, action: str, state: str) -> Fraction:
    """Expected payoff of an action under the player's posterior at a state."""
    from .semantics import intension, posterior

    others = [j for j in m.game.players if j != player]
    out = Fraction(0)
    for combo in m.game.opponent_profiles(player):
        event = intension(m, player, conj(Play(j, b) for j, b in zip(others, combo)))
        weight = posterior(m, player, event, state)
        if weight != 0:
            out += weight * m.game.payoff(player, m.game.profile_with(player, action, combo))
    return out
