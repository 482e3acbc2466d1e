"""Truth evaluation: posteriors, belief operators and common belief."""

import random
from fractions import Fraction

import pytest

from ambicoord import (
    And,
    Belief,
    CommonBelief,
    EpistemicStructure,
    Implies,
    MutualBelief,
    Not,
    Optimal,
    Play,
    PreconditionError,
    Prim,
    ProbGe,
    Rationality,
    Receive,
    cb_intension,
    holds,
    intension,
    parse_formula,
    posterior,
    valid,
)
from helpers import random_formula
from oracle import naive_cb_set, naive_holds, naive_posterior

F = Fraction
P = Prim("p")
Q = Prim("q")


class TestWeatherReport:
    """Hand-computed values for the two-observer forecast structure."""

    def test_interpretations_differ_but_signals_are_shared(self, weather):
        assert intension(weather, "A", P) == frozenset({"w1", "w2"})
        assert intension(weather, "B", P) == frozenset({"w1", "w3"})
        assert intension(weather, "A", Receive("B", "sp")) == frozenset({"w1", "w3"})

    def test_everybody_believes_the_report(self, weather):
        assert holds(weather, "w1", "A", MutualBelief(1, P))
        assert holds(weather, "w1", "B", MutualBelief(1, P))

    def test_first_observer_doubts_the_second_ones_belief(self, weather):
        event = intension(weather, "A", Belief("B", P))
        assert event == frozenset({"w1", "w3"})
        assert posterior(weather, "A", event, "w1") == F(1, 2)
        assert holds(weather, "w1", "A", Not(Belief("A", Belief("B", P))))

    def test_mutual_belief_stops_at_order_one(self, weather):
        assert not holds(weather, "w1", "A", MutualBelief(2, P))
        assert cb_intension(weather, P) == frozenset()
        assert not holds(weather, "w1", "A", CommonBelief(P))

    def test_shared_thresholds_restore_common_belief(self, weather_common):
        assert cb_intension(weather_common, P) == frozenset({"w1", "w2"})
        assert holds(weather_common, "w1", "A", CommonBelief(P))
        assert not holds(weather_common, "w3", "A", CommonBelief(P))


class TestPosteriors:
    def test_posterior_of_everything_is_one(self, weather):
        for w in weather.states:
            for i in ("A", "B"):
                assert posterior(weather, i, weather.states, w) == 1

    def test_posterior_matches_the_direct_ratio(self, weather):
        rng = random.Random(11)
        for _ in range(20):
            event = frozenset(
                w for w in weather.states if rng.random() < 0.5
            )
            for w in weather.states:
                for i in ("A", "B"):
                    assert posterior(weather, i, event, w) == naive_posterior(
                        weather, i, event, w
                    )

    def test_posterior_needs_a_live_cell(self, weather_game, weather):
        data = weather.to_dict()
        data["prior"] = {"w1": "1/2", "w2": "1/2", "w3": "0", "w4": "0"}
        starved = EpistemicStructure.from_dict(data, weather_game)
        with pytest.raises(PreconditionError):
            posterior(starved, "A", {"w3"}, "w3")


class TestProbabilityFacts:
    def test_nonnegativity_is_trivially_valid(self, weather):
        f = ProbGe("A", ((F(1), P),), F(0))
        assert intension(weather, "A", f) == frozenset(weather.states)
        assert intension(weather, "B", f) == frozenset(weather.states)
        assert valid(weather, f)

    def test_probability_truth_ignores_the_viewer(self, weather):
        battery = [
            Belief("B", P),
            ProbGe("A", ((F(1), P), (F(-2), Q)), F(-1, 4)),
            MutualBelief(1, And(P, Q)),
            CommonBelief(P),
        ]
        for f in battery:
            assert intension(weather, "A", f) == intension(weather, "B", f)

    def test_zero_mass_cells_poison_probability_formulas(self, weather_game, weather):
        data = weather.to_dict()
        data["prior"] = {"w1": "1/2", "w2": "1/2", "w3": "0", "w4": "0"}
        starved = EpistemicStructure.from_dict(data, weather_game)
        with pytest.raises(PreconditionError):
            holds(starved, "w1", "A", Belief("A", P))

    def test_undeclared_vocabulary_is_rejected(self, weather):
        with pytest.raises(PreconditionError):
            holds(weather, "w1", "A", Prim("zz"))
        with pytest.raises(PreconditionError):
            holds(weather, "w1", "A", Receive("A", "zz"))
        with pytest.raises(PreconditionError):
            holds(weather, "w1", "A", Play("A", "run"))


class TestBooleanCoherence:
    def test_connectives_agree_with_pointwise_truth(self, weather):
        rng = random.Random(5)
        for _ in range(25):
            f = random_formula(
                rng, weather.game, weather.signals, weather.atoms, depth=2
            )
            g = random_formula(
                rng, weather.game, weather.signals, weather.atoms, depth=2
            )
            for w in weather.states:
                for i in ("A", "B"):
                    fv = holds(weather, w, i, f)
                    gv = holds(weather, w, i, g)
                    assert holds(weather, w, i, Not(f)) == (not fv)
                    assert holds(weather, w, i, And(f, g)) == (fv and gv)
                    assert holds(weather, w, i, Implies(f, g)) == ((not fv) or gv)

    def test_validity_of_tautologies(self, weather, cycle, coord):
        for m in (weather, cycle, coord):
            some = (
                Prim(m.atoms[0])
                if m.atoms
                else Play(m.game.players[0], m.game.actions_of(m.game.players[0])[0])
            )
            assert valid(m, Implies(some, some))
            assert valid(m, CommonBelief(Implies(some, some)))
            assert not valid(m, And(some, Not(some)))


class TestAgainstTheOracle:
    def test_common_belief_matches_the_naive_orbit(self, weather, weather_common, cycle, coord):
        for m in (weather, weather_common, cycle, coord):
            args = [Prim(a) for a in m.atoms]
            args += [Play(p, m.game.actions_of(p)[0]) for p in m.game.players]
            args += [Receive(p, m.signals[0]) for p in m.game.players]
            for arg in args:
                assert cb_intension(m, arg) == naive_cb_set(m, arg)

    def test_random_formulas_agree_pointwise(self, weather, cycle, coord):
        rng = random.Random(314)
        for m in (weather, cycle, coord):
            for _ in range(15):
                f = random_formula(rng, m.game, m.signals, m.atoms, depth=3)
                for w in m.states:
                    for i in m.game.players:
                        assert holds(m, w, i, f) == naive_holds(m, w, i, f), (
                            str(f),
                            w,
                            i,
                        )


class TestGameFormulas:
    def test_optimality_and_rationality_on_the_cycle_device(self, cycle):
        # at every state each player deems the recommended action optimal
        for w in cycle.states:
            for k, p in enumerate(cycle.game.players):
                action = w.split(",")[k]
                assert holds(cycle, w, p, Optimal(p, action))
                assert holds(cycle, w, p, Rationality(p))

    def test_the_ambiguity_witness(self, coord):
        f = parse_formula(
            "rec(1,s) & pl(1,U) & !opt_1(U)", coord.game, coord.signals, coord.atoms
        )
        assert holds(coord, "wp", "2", f)
        assert not holds(coord, "wp", "1", f)
        assert not holds(coord, "w", "2", f)

    def test_rationality_vs_oracle(self, cycle, coord):
        for m in (cycle, coord):
            for w in m.states:
                for i in m.game.players:
                    f = Rationality(i)
                    assert holds(m, w, i, f) == naive_holds(m, w, i, f)
