"""Command-line front end: file-driven access to the library operations.

Exit codes: 0 success / verdict true, 1 verdict false or failed validation,
2 I/O or schema errors, 3 precondition violations (the offending check is
named on stderr).  Verdicts and requested output go to stdout; diagnostics
go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .construct import from_objective_ce, from_subjective_ce
from .coordination import (
    CoordinationStrategy,
    check_self_enforcing,
    check_strategy_valid,
    induce,
    verify_induced_equilibrium,
)
from .errors import PreconditionError, SchemaError
from .formulas import expand
from .games import Distribution, Game, load_objective, solve_ce, validate_game
from .parser import ParseError, parse_formula
from .semantics import holds
from .structures import (
    EpistemicStructure,
    check_action_uniqueness,
    check_cell_positivity,
    check_partition_consistency,
    check_rationality,
    check_signal_definitions,
    check_signal_uniqueness,
)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None


def _load_game(path: str) -> Game:
    game = Game.from_dict(_read_json(path))
    report = validate_game(game)
    if not report.ok:
        raise SchemaError(f"{path}: " + "; ".join(map(str, report.failures)))
    return game


def _load_structure(path: str, game: Game) -> EpistemicStructure:
    try:
        return EpistemicStructure.from_dict(_read_json(path), game)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _load_strategy(path: str, game: Game, signals) -> CoordinationStrategy:
    try:
        return CoordinationStrategy.from_dict(_read_json(path), game, signals)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _resolve_player(game: Game, text: str) -> str:
    if text in game.players:
        return text
    if text.isdigit() and 1 <= int(text) <= game.n:
        return game.players[int(text) - 1]
    raise SchemaError(f"unknown player {text!r}")


def _resolve_state(m: EpistemicStructure, text: str) -> str:
    if text not in m.states:
        raise SchemaError(f"unknown state {text!r}")
    return text


# ------------------------------------------------------------- subcommands


def _cmd_parse(args) -> int:
    game = _load_game(args.game)
    signals = atoms = None
    if args.structure:
        m = _load_structure(args.structure, game)
        signals, atoms = m.signals, m.atoms
    f = parse_formula(args.formula, game, signals, atoms)
    print(f"canonical: {f}")
    print(f"expanded: {expand(f, game)}")
    return 0


def _cmd_check(args) -> int:
    game = _load_game(args.game)
    m = _load_structure(args.structure, game)
    player = _resolve_player(game, args.player)
    state = _resolve_state(m, args.state)
    f = parse_formula(args.formula, game, m.signals, m.atoms)
    verdict = holds(m, state, player, f)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_validate(args) -> int:
    game = _load_game(args.game)
    m = _load_structure(args.structure, game)
    strategy = _load_strategy(args.strategy, game, m.signals) if args.strategy else None

    rows: list[tuple[str, object]] = []
    basic_ok = True
    for label, check in (
        ("signal-uniqueness", check_signal_uniqueness),
        ("partition-consistency", check_partition_consistency),
        ("action-uniqueness", check_action_uniqueness),
        ("cell-positivity", check_cell_positivity),
    ):
        report = check(m)
        basic_ok = basic_ok and report.ok
        rows.append((label, report))
    if any(df is not None for df in m.signal_defs.values()):
        rows.append(("signal-definitions", _guarded(check_signal_definitions, m)))
    if basic_ok:
        rows.append(("rationality", _guarded(check_rationality, m)))
    else:
        rows.append(("rationality", "skipped (structural checks failed)"))
    if strategy is not None:
        if basic_ok:
            rows.append(("strategy-validity", _guarded(check_strategy_valid, m, strategy)))
            rows.append(("self-enforcement", _guarded(check_self_enforcing, m, strategy)))
        else:
            rows.append(("strategy-validity", "skipped (structural checks failed)"))
            rows.append(("self-enforcement", "skipped (structural checks failed)"))

    all_ok = True
    for label, outcome in rows:
        if isinstance(outcome, str):
            print(f"{label}: {outcome}")
            all_ok = False
            continue
        print(f"{label}: {'pass' if outcome.ok else 'fail'}")
        if not outcome.ok:
            all_ok = False
            for issue in outcome.failures:
                print(f"  {label}: {issue}", file=sys.stderr)
            for note in outcome.notes:
                print(f"  {label}: {note}", file=sys.stderr)
    return 0 if all_ok else 1


def _guarded(check, *args):
    """Run a dependent check, reporting precondition blowups as a skip."""
    try:
        return check(*args)
    except PreconditionError as exc:
        return f"skipped ({exc})"


def _gate_preconditions(m: EpistemicStructure, strategy: CoordinationStrategy) -> None:
    """Shared gate for induce/verify-style commands: A-checks + strategy validity."""
    for label, report in (
        ("signal uniqueness", check_signal_uniqueness(m)),
        ("partition consistency", check_partition_consistency(m)),
        ("action uniqueness", check_action_uniqueness(m)),
    ):
        if not report.ok:
            raise PreconditionError(label)
    report = check_strategy_valid(m, strategy)
    if not report.ok:
        raise PreconditionError("strategy validity")


def _cmd_induce(args) -> int:
    game = _load_game(args.game)
    m = _load_structure(args.structure, game)
    strategy = _load_strategy(args.strategy, game, m.signals)
    _gate_preconditions(m, strategy)
    if args.player:
        player = _resolve_player(game, args.player)
        print(json.dumps(induce(m, player).to_dict(game), indent=2))
    else:
        out = {p: induce(m, p).to_dict(game) for p in game.players}
        print(json.dumps(out, indent=2))
    return 0


def _cmd_verify(args) -> int:
    game = _load_game(args.game)
    m = _load_structure(args.structure, game)
    strategy = _load_strategy(args.strategy, game, m.signals)
    result = verify_induced_equilibrium(m, strategy)
    for p in game.players:
        if p in result.distributions:
            print(f"player {p}: {json.dumps(result.distributions[p].to_dict(game))}")
    if result.kind is not None:
        print(f"{result.kind} CE: {'true' if result.ce_ok else 'false'}")
    for problem in result.problems:
        print(f"precondition violated: {problem}", file=sys.stderr)
    if result.problems:
        return 3
    return 0 if result.ok else 1


def _cmd_construct(args) -> int:
    game = _load_game(args.game)
    if args.objective:
        dist = Distribution.from_dict(_read_json(args.objective), game)
        result = from_objective_ce(game, dist)
    else:
        dists = [Distribution.from_dict(_read_json(p), game) for p in args.subjective]
        result = from_subjective_ce(game, dists)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, payload in (
        ("structure.json", result.structure.to_dict()),
        ("strategy.json", result.strategy.to_dict()),
        ("signal_map.json", result.signal_maps_dict()),
    ):
        path = out / name
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_solve_ce(args) -> int:
    game = _load_game(args.game)
    objective = {}
    if args.objective:
        objective = load_objective(_read_json(args.objective), game)
    dist = solve_ce(game, objective)
    print(json.dumps(dist.to_dict(game), indent=2))
    return 0


# ------------------------------------------------------------------ wiring


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ambicoord",
        description="Epistemic structures, ambiguous signalling and correlated equilibria.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula; print canonical and expanded forms")
    p.add_argument("--game", required=True)
    p.add_argument("--structure", help="closes the signal/atom vocabulary")
    p.add_argument("formula")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("check", help="evaluate a formula at a state for a player")
    p.add_argument("--game", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--player", required=True)
    p.add_argument("formula")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("validate", help="run the structural checks (and strategy checks)")
    p.add_argument("--game", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--strategy")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("induce", help="induced action-profile distribution per viewer")
    p.add_argument("--game", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--player")
    p.set_defaults(func=_cmd_induce)

    p = sub.add_parser("verify", help="induce distributions and check the CE conditions")
    p.add_argument("--game", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--strategy", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("construct", help="build a structure implementing a given CE")
    p.add_argument("--game", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--objective", help="shared-distribution JSON file")
    group.add_argument("--subjective", nargs="+", help="one distribution JSON file per player")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("solve-ce", help="solve for a correlated equilibrium via exact LP")
    p.add_argument("--game", required=True)
    p.add_argument("--objective", help="objective JSON file (same shape as a distribution)")
    p.set_defaults(func=_cmd_solve_ce)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
