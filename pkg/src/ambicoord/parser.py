"""Recursive-descent parser for the formula language.

Grammar (whitespace insensitive)::

    formula  := imp
    imp      := conj ("->" imp)?
    conj     := neg ("&" neg)*
    neg      := "!" neg | atom
    atom     := ident | "pl(" player "," action ")" | "rec(" player "," signal ")"
              | prob | "B_" player "(" formula ")" | "EB" ("^" int)? "(" formula ")"
              | "CB(" formula ")" | "rat_" player | "opt_" player "(" action ")"
              | "(" formula ")"
    prob     := pterm (("+" | "-") pterm)* ">=" rational
    pterm    := (rational "*")? "pr_" player "(" formula ")"
    rational := "-"? int ("/" posint)?
    player   := name or 1-based position of a player in the game

The identifiers ``pl``, ``rec``, ``EB`` and ``CB`` and the prefixes ``B_``,
``pr_``, ``rat_`` and ``opt_`` are reserved; generic atoms may not use them.
Player and action names are always validated against the game; signal and
atom names are validated only when a vocabulary is supplied (pass None to
leave them open, e.g. when no structure is at hand).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional

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
)

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<punct>->|>=|[()!&*+\-/^,])"
)

_RESERVED = ("pl", "rec", "EB", "CB")
_RESERVED_PREFIXES = ("B_", "pr_", "rat_", "opt_")


class ParseError(ValueError):
    """Syntax or vocabulary error, carrying a 0-based character position."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"{message} at column {position + 1}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)


class UnknownIdentifierError(ParseError):
    """An identifier that is not in the declared vocabulary."""

    def __init__(self, kind: str, name: str, position: int):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind} {name!r}", position)


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, game, signals, atoms):
        self.text = text
        self.game = game
        self.signals = None if signals is None else frozenset(signals)
        self.atoms = None if atoms is None else frozenset(atoms)
        self.tokens = _tokenize(text)
        self.idx = 0

    # token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            got = tok.text or "end of input"
            raise ParseError(f"found {got!r}", tok.pos, expected=(repr(text),))
        return self.advance()

    # vocabulary

    def resolve_player(self, name: str, pos: int) -> str:
        players = self.game.players
        if name.isdigit():
            k = int(name)
            if 1 <= k <= len(players):
                return players[k - 1]
            raise UnknownIdentifierError("player", name, pos)
        if name in players:
            return name
        raise UnknownIdentifierError("player", name, pos)

    def check_action(self, player: str, action: str, pos: int) -> str:
        if action not in self.game.actions_of(player):
            raise UnknownIdentifierError("action", action, pos)
        return action

    def check_signal(self, signal: str, pos: int) -> str:
        if self.signals is not None and signal not in self.signals:
            raise UnknownIdentifierError("signal", signal, pos)
        return signal

    def check_atom(self, name: str, pos: int) -> str:
        if self.atoms is not None and name not in self.atoms:
            raise UnknownIdentifierError("atom", name, pos)
        return name

    # grammar

    def formula(self) -> Formula:
        left = self.conj()
        if self.peek().text == "->":
            self.advance()
            return Implies(left, self.formula())
        return left

    def conj(self) -> Formula:
        out = self.neg()
        while self.peek().text == "&":
            self.advance()
            out = And(out, self.neg())
        return out

    def neg(self) -> Formula:
        if self.peek().text == "!":
            self.advance()
            return Not(self.neg())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.text == "(":
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "int" or tok.text == "-":
            return self.prob()
        if tok.kind != "ident":
            got = tok.text or "end of input"
            raise ParseError(f"found {got!r}", tok.pos, expected=("a formula",))
        name = tok.text
        if name == "pl":
            self.advance()
            self.expect("(")
            player = self.player_token()
            self.expect(",")
            atok = self.ident_token("an action name")
            action = self.check_action(player, atok.text, atok.pos)
            self.expect(")")
            return Play(player, action)
        if name == "rec":
            self.advance()
            self.expect("(")
            player = self.player_token()
            self.expect(",")
            stok = self.ident_token("a signal name")
            signal = self.check_signal(stok.text, stok.pos)
            self.expect(")")
            return Receive(player, signal)
        if name == "CB":
            self.advance()
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return CommonBelief(inner)
        if name == "EB":
            self.advance()
            order = 1
            if self.peek().text == "^":
                self.advance()
                otok = self.peek()
                if otok.kind != "int" or int(otok.text) < 1:
                    raise ParseError("mutual-belief order must be a positive integer", otok.pos)
                self.advance()
                order = int(otok.text)
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return MutualBelief(order, inner)
        if name.startswith("B_"):
            self.advance()
            player = self.resolve_player(name[2:], tok.pos + 2) if name[2:] else self._missing_player(tok)
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return Belief(player, inner)
        if name.startswith("rat_"):
            self.advance()
            player = self.resolve_player(name[4:], tok.pos + 4) if name[4:] else self._missing_player(tok)
            return Rationality(player)
        if name.startswith("opt_"):
            self.advance()
            player = self.resolve_player(name[4:], tok.pos + 4) if name[4:] else self._missing_player(tok)
            self.expect("(")
            atok = self.ident_token("an action name")
            action = self.check_action(player, atok.text, atok.pos)
            self.expect(")")
            return Optimal(player, action)
        if name.startswith("pr_"):
            return self.prob()
        self.advance()
        return Prim(self.check_atom(name, tok.pos))

    @staticmethod
    def _missing_player(tok: _Token) -> str:
        raise ParseError("missing player name", tok.pos + len(tok.text))

    def player_token(self) -> str:
        tok = self.peek()
        if tok.kind not in ("ident", "int"):
            got = tok.text or "end of input"
            raise ParseError(f"found {got!r}", tok.pos, expected=("a player name",))
        self.advance()
        return self.resolve_player(tok.text, tok.pos)

    def ident_token(self, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != "ident":
            got = tok.text or "end of input"
            raise ParseError(f"found {got!r}", tok.pos, expected=(what,))
        return self.advance()

    def prob(self) -> Formula:
        terms = [self.pterm(Fraction(1))]
        while self.peek().text in ("+", "-"):
            sign = Fraction(1) if self.advance().text == "+" else Fraction(-1)
            terms.append(self.pterm(sign))
        self.expect(">=")
        bound = self.rational()
        for owner, _, _, pos in terms[1:]:
            if owner != terms[0][0]:
                raise ParseError("all terms of a probability inequality must share one owner", pos)
        return ProbGe(terms[0][0], tuple((coef, sub) for _, coef, sub, _ in terms), bound)

    def pterm(self, sign: Fraction) -> tuple[str, Fraction, Formula, int]:
        coef = Fraction(1)
        tok = self.peek()
        if tok.kind == "int" or tok.text == "-":
            coef = self.rational()
            self.expect("*")
        tok = self.peek()
        if tok.kind != "ident" or not tok.text.startswith("pr_"):
            got = tok.text or "end of input"
            raise ParseError(f"found {got!r}", tok.pos, expected=("pr_<player>",))
        self.advance()
        owner = self.resolve_player(tok.text[3:], tok.pos + 3) if tok.text[3:] else self._missing_player(tok)
        self.expect("(")
        sub = self.formula()
        self.expect(")")
        return owner, sign * coef, sub, tok.pos

    def rational(self) -> Fraction:
        sign = 1
        if self.peek().text == "-":
            self.advance()
            sign = -1
        num_tok = self.peek()
        if num_tok.kind != "int":
            got = num_tok.text or "end of input"
            raise ParseError(f"found {got!r}", num_tok.pos, expected=("an integer",))
        self.advance()
        den = 1
        if self.peek().text == "/":
            self.advance()
            den_tok = self.peek()
            if den_tok.kind != "int":
                got = den_tok.text or "end of input"
                raise ParseError(f"found {got!r}", den_tok.pos, expected=("a positive integer",))
            if int(den_tok.text) == 0:
                raise ParseError("denominator must be positive", den_tok.pos)
            self.advance()
            den = int(den_tok.text)
        return Fraction(sign * int(num_tok.text), den)


def parse_formula(
    text: str,
    game,
    signals: Optional[Iterable[str]] = None,
    atoms: Optional[Iterable[str]] = None,
) -> Formula:
    """Parse a formula; player/action names are checked against the game.

    `signals`/`atoms` close the respective vocabularies; None leaves them open.
    """
    p = _Parser(text, game, signals, atoms)
    out = p.formula()
    tok = p.peek()
    if tok.kind != "end":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos, expected=("end of input",))
    return out


def parse_instance(
    text: str,
    game,
    signals: Optional[Iterable[str]] = None,
    atoms: Optional[Iterable[str]] = None,
) -> Formula:
    """Parse a single primitive proposition: a generic atom, pl(...) or rec(...)."""
    f = parse_formula(text, game, signals, atoms)
    if not isinstance(f, (Prim, Play, Receive)):
        raise ParseError("expected a primitive proposition", 0)
    return f
