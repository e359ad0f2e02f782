"""Buchi games: solver vs exhaustive strategy enumeration."""

import random

import pytest

from vldlcheck.corpus import random_game
from vldlcheck.errors import InputError
from vldlcheck.games import (BuchiGame, brute_force_win0, solve_buchi_game,
                             winner_from)


def assert_strategy_wins(game, win0, strategy):
    """The extracted strategy must keep play inside win0 and force every
    infinite play through accepting vertices."""
    succ = {}
    for v in game.owner:
        if v in win0 and game.owner[v] == 0:
            succ[v] = (strategy[v],)
        else:
            succ[v] = game.edges[v]
    for v in win0:
        assert all(t in win0 for t in succ[v]), \
            "play can escape the winning region from %r" % (v,)
    # no cycle through non-accepting vertices only
    color = {}
    for start in win0:
        if start in game.accepting or color.get(start) == 2:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w in game.accepting or w not in win0:
                    continue
                c = color.get(w)
                assert c != 1, "avoidable Buchi condition via %r" % (w,)
                if c is None:
                    color[w] = 1
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
            if not advanced:
                color[v] = 2
                stack.pop()


# --------------------------------------------------------------- hand games

def test_single_accepting_loop():
    g = BuchiGame({"a": 0}, {"a": ("a",)}, {"a"})
    win0, strategy = solve_buchi_game(g)
    assert "a" in win0
    assert strategy["a"] == "a"


def test_single_rejecting_loop():
    g = BuchiGame({"a": 0}, {"a": ("a",)}, set())
    win0, _ = solve_buchi_game(g)
    assert "a" not in win0


def test_player0_picks_the_good_branch():
    g = BuchiGame({"a": 0, "b": 0, "c": 0},
                  {"a": ("b", "c"), "b": ("b",), "c": ("c",)},
                  {"c"})
    win0, strategy = solve_buchi_game(g)
    assert "a" in win0 and "c" in win0 and "b" not in win0
    assert strategy["a"] == "c"


def test_player1_picks_the_bad_branch():
    g = BuchiGame({"a": 1, "b": 0, "c": 0},
                  {"a": ("b", "c"), "b": ("b",), "c": ("c",)},
                  {"c"})
    win0, _ = solve_buchi_game(g)
    assert "a" not in win0


def test_dead_end_loses_for_its_owner():
    g = BuchiGame({"a": 0, "b": 1}, {"a": (), "b": ()}, {"a", "b"})
    win0, _ = solve_buchi_game(g)
    assert "a" not in win0   # player 0 stuck
    assert "b" in win0       # player 1 stuck


def test_accepting_visits_must_recur():
    # The accepting vertex is visited once and never again.
    g = BuchiGame({"a": 0, "b": 0}, {"a": ("b",), "b": ("b",)}, {"a"})
    win0, _ = solve_buchi_game(g)
    assert win0 == set()


def test_edge_to_unknown_vertex_rejected():
    with pytest.raises(InputError):
        BuchiGame({"a": 0}, {"a": ("zz",)}, set())


def test_winner_from():
    g = BuchiGame({"a": 0, "b": 0}, {"a": ("a",), "b": ("b",)}, {"a"})
    assert winner_from(g, "a") == 0
    assert winner_from(g, "b") == 1


# ------------------------------------------------- solver vs brute force

def test_solver_matches_brute_force_on_seeded_games():
    rng = random.Random(24601)
    checked = 0
    while checked < 60:
        game = random_game(rng, max_vertices=9)
        try:
            expected = brute_force_win0(game)
        except Exception:
            continue
        win0, strategy = solve_buchi_game(game)
        assert win0 == expected, (game.owner, game.edges, game.accepting)
        assert_strategy_wins(game, win0, strategy)
        checked += 1


def test_solution_partitions_the_vertices():
    # every vertex is won by exactly one player: win0 and its complement
    # under player-1 control stay disjoint and cover the arena
    rng = random.Random(8128)
    for _ in range(40):
        game = random_game(rng, max_vertices=14)
        win0, _ = solve_buchi_game(game)
        vertices = set(game.owner)
        assert win0 <= vertices
        win1 = vertices - win0
        # player 1 can keep play inside win1 from every win1 vertex
        for v in win1:
            if game.owner[v] == 1:
                assert any(w in win1 for w in game.edges[v])
            else:
                assert all(w in win1 for w in game.edges[v])


def test_strategy_is_deterministic_across_runs():
    rng = random.Random(1089)
    for _ in range(10):
        game = random_game(rng, max_vertices=12)
        first = solve_buchi_game(game)
        second = solve_buchi_game(game)
        assert first == second
