import json
import random
from pathlib import Path

import pytest

from ambicoord import (
    CoordinationStrategy,
    Distribution,
    EpistemicStructure,
    Game,
    Not,
    Prim,
    Receive,
    from_objective_ce,
    from_subjective_ce,
    solve_ce,
)
from helpers import random_game, random_objective

FIXTURES = Path(__file__).parent / "fixtures"

# verdict lines appended by test_acceptance, echoed after the run
CRITERION_RESULTS: list[str] = []


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_RESULTS:
            terminalreporter.write_line(line)


# ------------------------------------------------------------------ weather


@pytest.fixture(scope="session")
def weather_game():
    return Game.from_dict(load_fixture("weather_game.json"))


@pytest.fixture(scope="session")
def weather(weather_game):
    return EpistemicStructure.from_dict(
        load_fixture("weather_structure.json"), weather_game
    )


@pytest.fixture(scope="session")
def weather_common(weather_game):
    # same report, but now everyone reads it with the first observer's
    # thresholds; partitions left to be derived from the signal rows
    states = ["w1", "w2", "w3", "w4"]
    table = {
        Prim("p"): {"w1", "w2"},
        Prim("q"): {"w1"},
        Receive("A", "sp"): {"w1", "w2"},
        Receive("A", "snp"): {"w3", "w4"},
        Receive("B", "sp"): {"w1", "w2"},
        Receive("B", "snp"): {"w3", "w4"},
    }
    return EpistemicStructure(
        weather_game,
        states,
        {w: "1/4" for w in states},
        ["sp", "snp"],
        ["p", "q"],
        {"A": dict(table), "B": dict(table)},
        None,
        {"sp": Prim("p"), "snp": Not(Prim("p"))},
    )


# -------------------------------------------------------------------- cycle


@pytest.fixture(scope="session")
def cycle_game():
    return Game.from_dict(load_fixture("cycle_game.json"))


@pytest.fixture(scope="session")
def cycle(cycle_game):
    return EpistemicStructure.from_dict(
        load_fixture("cycle_structure.json"), cycle_game
    )


@pytest.fixture(scope="session")
def cycle_strategy(cycle_game, cycle):
    return CoordinationStrategy.from_dict(
        load_fixture("cycle_strategy.json"), cycle_game, cycle.signals
    )


@pytest.fixture(scope="session")
def cycle_ce(cycle_game):
    return Distribution.from_dict(load_fixture("cycle_ce.json"), cycle_game)


# -------------------------------------------------------------------- coord


@pytest.fixture(scope="session")
def coord_game():
    return Game.from_dict(load_fixture("coord_game.json"))


@pytest.fixture(scope="session")
def coord(coord_game):
    return EpistemicStructure.from_dict(
        load_fixture("coord_structure.json"), coord_game
    )


@pytest.fixture(scope="session")
def coord_strategy(coord_game, coord):
    return CoordinationStrategy.from_dict(
        load_fixture("coord_strategy.json"), coord_game, coord.signals
    )


# --------------------------------------------------------- random instances

# Generated once per run with fixed seeds; shared by the acceptance tests so
# the equilibrium batteries and the validity sweeps see the same structures.


@pytest.fixture(scope="session")
def objective_instances():
    rng = random.Random(20260817)
    out = []
    for _ in range(100):
        game = random_game(rng)
        dist = solve_ce(game, random_objective(rng, game))
        out.append((game, dist, from_objective_ce(game, dist)))
    return out


@pytest.fixture(scope="session")
def subjective_instances():
    rng = random.Random(1729)
    out = []
    for _ in range(100):
        game = random_game(rng)
        dists = [solve_ce(game, random_objective(rng, game)) for _ in game.players]
        out.append((game, dists, from_subjective_ce(game, dists)))
    return out
