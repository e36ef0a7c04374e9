import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from twoway import classical, games
from twoway.classical import ClassicalStrategy, EdgePath, ThroughCenter
from twoway.errors import BoundaryAmbiguityError, CertificationError, DomainError

BITS = (0, 1)


def brute_bipartite(win, communication=True):
    """Independent oracle: tables as dicts, both signaling directions."""
    inputs = list(itertools.product(BITS, repeat=2))
    one_arg = [dict(zip(BITS, v)) for v in itertools.product(BITS, repeat=2)]
    two_arg = [dict(zip(inputs, v)) for v in itertools.product(BITS, repeat=4)]
    best = Fraction(0)
    if communication:
        for f, g in itertools.product(one_arg, two_arg):
            best = max(best, sum(Fraction(win(f[x], g[x, y], x, y), 4) for x, y in inputs),
                       sum(Fraction(win(g[x, y], f[y], x, y), 4) for x, y in inputs))
    for f, h in itertools.product(one_arg, one_arg):
        best = max(best, sum(Fraction(win(f[x], h[y], x, y), 4) for x, y in inputs))
    return best


def gyni_win(a, b, x, y):
    return int(a == y and b == x)


def lgyni_win(a, b, x, y):
    return int(x * (a ^ y) == 0 and y * (b ^ x) == 0)


def test_bipartite_oracle_values():
    assert brute_bipartite(gyni_win) == Fraction(1, 2)
    assert brute_bipartite(lgyni_win) == Fraction(3, 4)
    assert brute_bipartite(gyni_win, communication=False) == Fraction(1, 2)


def test_enumerate_bipartite_max():
    assert classical.enumerate_bipartite_max("gyni") == Fraction(1, 2)
    assert classical.enumerate_bipartite_max("LGYNI") == Fraction(3, 4)
    assert classical.enumerate_bipartite_max("gyni", communication="none") == Fraction(1, 2)
    assert isinstance(classical.enumerate_bipartite_max("gyni"), Fraction)
    with pytest.raises(DomainError):
        classical.enumerate_bipartite_max("chsh")


def test_one_way_vertex_count():
    # 64 per direction, the 16 signaling-free ones shared
    verts = classical.one_way_vertices()
    assert len(verts) == 112
    assert sum(v.direction == "none" for v in verts) == 16


def test_k_max_examples():
    assert classical.k_max(2) == 1
    assert classical.k_max(7) == 2
    assert classical.k_max(7) == int(mpmath.floor(1 / mpmath.sin(mpmath.pi / 7)))
    with pytest.raises(BoundaryAmbiguityError):
        classical.k_max(6)
    with pytest.raises(DomainError):
        classical.k_max(1)


def test_k_max_against_high_precision():
    mpmath.mp.dps = 40
    for n in list(range(2, 400)) + [1009, 10007, 99991]:
        if n == 6:
            continue
        assert classical.k_max(n) == int(mpmath.floor(1 / mpmath.sin(mpmath.pi / n)))


def test_k_max_floor_bracket_and_asymptote():
    for n in range(2, 3000):
        if n == 6:
            continue
        k, s = classical.k_max(n), math.sin(math.pi / n)
        assert k * s <= 1 < (k + 1) * s
        if n >= 100:
            assert abs(k / n - 1 / math.pi) < 1 / n + 1e-9


def vertex(n, i, r=0.5):
    return r * math.cos(2 * math.pi * i / n), r * math.sin(2 * math.pi * i / n)


def path_length(n, path, r=0.5):
    return sum(math.dist(vertex(n, a, r), vertex(n, b, r)) for a, b in zip(path, path[1:]))


def test_path_feasible_examples():
    assert path_length(7, (0, 1, 2)) == pytest.approx(2 * math.sin(math.pi / 7))
    assert classical.path_feasible(7, (0, 1, 2))
    assert not classical.path_feasible(7, (0, 1, 2, 3))
    for d in range(7):
        assert classical.path_feasible(7, ThroughCenter(d))


def test_path_feasible_matches_coordinates():
    rng = np.random.default_rng(5)
    for _ in range(300):
        n = int(rng.integers(3, 20))
        path = tuple(int(v) for v in rng.integers(0, n, size=int(rng.integers(1, 5))))
        r = float(rng.uniform(0.1, 3))
        length = path_length(n, path, r)
        if abs(length - 2 * r) > 1e-9:
            assert classical.path_feasible(n, path, r) == (length <= 2 * r)


def test_path_out_of_range():
    with pytest.raises(DomainError):
        classical.path_feasible(5, (0, 7))


def brute_center_nparty(n):
    """Independent oracle: dict tables, every holder/destination pair."""
    inst = [(s, [(s * k + o) % n for k in range(n)]) for s in range(n) for o in range(n)]
    own = list(itertools.product(BITS, repeat=n))
    pair = list(itertools.product(BITS, repeat=n * n))
    best = 0
    for h, d in itertools.product(range(n), repeat=2):
        others = [k for k in range(n) if k != d or d == h]
        informed = [pair] if d != h else [[None]]
        for td in informed[0]:
            for tabs in itertools.product(own, repeat=len(others)):
                t = dict(zip(others, tabs))
                wins = 0
                for s, x in inst:
                    ok = all(t[k][x[k]] == (k == s) for k in others)
                    if d != h:
                        ok = ok and td[x[h] * n + x[d]] == (d == s)
                    wins += ok
                best = max(best, wins)
    return Fraction(best, n * n)


def test_nparty_enumeration_n2():
    assert brute_center_nparty(2) == Fraction(1, 2)
    value, witness = classical.enumerate_nparty_max(2)
    assert value == Fraction(1, 2)
    assert classical.strategy_success(witness) == value


def test_nparty_enumeration_n3_beats_one_over_n():
    expected = brute_center_nparty(3)
    assert expected == Fraction(4, 9)
    value, witness = classical.enumerate_nparty_max(3, "center")
    assert value == expected
    assert classical.strategy_success(witness) == expected
    assert classical.enumerate_nparty_max(3, "edges")[0] == expected


def test_n3_counterexample_by_hand():
    # 0 holds and sends to 1, who decodes the slope; 0 says YES iff m == 0,
    # 2 says YES iff x_2 == 2
    responses = (np.array([1, 0, 0]), classical.decoder_table(3, 1, (0, 1)), np.array([0, 0, 1]))
    s = ClassicalStrategy(3, 0, ThroughCenter(1), responses)
    assert classical.strategy_success(s) == Fraction(4, 9)


def test_closed_forms():
    assert classical.nparty_classical_max_center(2) == Fraction(1, 2)
    assert classical.nparty_classical_max_center(5) == Fraction(1, 5)
    assert classical.nparty_classical_max_center(3, certify=False) == Fraction(1, 3)
    with pytest.raises(CertificationError) as err:
        classical.nparty_classical_max_center(3)
    assert err.value.found == Fraction(4, 9)
    assert classical.nparty_classical_max_edges(7) == Fraction(2, 7)
    assert classical.nparty_classical_max_edges(5) == Fraction(1, 5)
    with pytest.raises(DomainError):
        classical.nparty_classical_max_center(9)


def test_minimal_advantage_prime():
    assert classical.minimal_advantage_prime() == 7
    for n in (2, 3, 5):
        assert classical.k_max(n) == 1


def test_geometry_large_n():
    rep = classical.geometry_report(10007)
    assert abs(rep.k_max / 10007 - 1 / math.pi) < 1e-3
    assert rep.asymptote_gap == pytest.approx(rep.k_max / 10007 - 1 / math.pi)


@pytest.mark.parametrize("n", [2, 3, 5, 7, 11, 13])
def test_optimal_strategies_attain_closed_forms(n):
    center = classical.informed_strategy(n, "center")
    assert classical.strategy_success(center) == Fraction(1, n)
    edges = classical.informed_strategy(n, "edges")
    assert classical.strategy_success(edges) == classical.nparty_classical_max_edges(n, certify=False)


def test_routes():
    assert classical.routes(5, 0, "center") == [ThroughCenter(d) for d in range(5)]
    edge_paths = [r for r in classical.routes(7, 0, "edges") if isinstance(r, EdgePath)]
    assert {r.path for r in edge_paths} == {(0, 1), (0, 6), (0, 1, 2), (0, 6, 5)}
    with pytest.raises(DomainError):
        classical.routes(5, 0, "teleport")


def test_strategy_validation():
    with pytest.raises(DomainError):
        ClassicalStrategy(5, 0, EdgePath((0, 2)), [np.zeros(5)] * 5)
    with pytest.raises(DomainError):
        ClassicalStrategy(7, 0, EdgePath((0, 1, 2, 3)), [np.zeros(7)] * 7)
    with pytest.raises(DomainError):
        ClassicalStrategy(3, 0, ThroughCenter(1), [np.zeros(3)] * 3)


def test_batch_evaluator_matches_naive():
    rng = np.random.default_rng(2)
    for n in (3, 5, 7):
        for h in range(n):
            for route in classical.routes(n, h, "edges"):
                known = classical.knowledge(n, h, route)
                tables = [rng.integers(0, 2, size=(4, n ** len(kn))) for kn in known]
                wins = classical.batch_wins(n, h, route, tables)
                for i in range(4):
                    s = ClassicalStrategy(n, h, route, tuple(
                        t[i].reshape((n,) * len(kn)) for t, kn in zip(tables, known)))
                    assert Fraction(int(wins[i]), n * n) == classical.strategy_success(s)


def test_decompose_product_behavior():
    s = ClassicalStrategy(2, 0, ThroughCenter(0), (np.array([0, 1]), np.array([1, 1])))
    deco = classical.decompose_one_way(classical.bipartite_behavior(s))
    assert deco is not None
    comps = deco.components(1e-9)
    assert len(comps) == 1 and comps[0][0] == pytest.approx(1.0)


def test_decompose_rejects_two_way():
    ideal = games.BipartiteBehavior.deterministic(lambda x, y: y, lambda x, y: x)
    assert classical.decompose_one_way(ideal) is None


def test_decompose_recovers_direction_weight():
    ab = ClassicalStrategy(2, 0, ThroughCenter(1), (np.array([0, 1]), np.array([[0, 1], [1, 0]])))
    ba = ClassicalStrategy(2, 1, ThroughCenter(0), (np.array([[1, 0], [1, 1]]), np.array([1, 0])))
    behavior = classical.bipartite_behavior([ab, ba], [0.3, 0.7])
    deco = classical.decompose_one_way(behavior)
    assert deco is not None and deco.residual < 1e-9
    recon = sum(w * v.vector for w, v in deco.components())
    np.testing.assert_allclose(recon, behavior.as_vector(), atol=1e-9)


def test_random_classical_behaviors_decompose_and_obey_facets():
    rng = np.random.default_rng(9)
    for _ in range(100):
        b = classical.sample_one_way_behavior(rng)
        assert classical.decompose_one_way(b) is not None
        assert games.gyni_success(b) <= 0.5 + 1e-12
        assert games.lgyni_success(b) <= 0.75 + 1e-12
    for _ in range(100):
        s = classical.random_bipartite_strategy(rng)
        b = classical.bipartite_behavior(s)
        assert games.gyni_success(b) <= Fraction(1, 2)
        assert games.lgyni_success(b) <= Fraction(3, 4)


def test_sampling_is_seeded():
    a = classical.sample_strategies(5, "center", 2000, seed=4)
    b = classical.sample_strategies(5, "center", 2000, seed=4)
    assert a == b
    assert a.claimed_optimum == Fraction(1, 5)


def test_sampling_reaches_edge_closed_form_at_seven():
    rep = classical.sample_strategies(7, "edges", 20_000, seed=0)
    assert rep.max_success >= Fraction(2, 7)


def test_n5_counterexample():
    # holder 4 sends x_4 to player 2, who decodes the slope; the others guess
    # from their own inputs in a correlated way and win together 10 of 25 times
    responses = (
        np.array([0, 0, 0, 1, 1]),
        np.array([0, 1, 1, 0, 0]),
        classical.decoder_table(5, 2, (4, 2)),
        np.array([1, 1, 0, 0, 0]),
        np.array([0, 1, 1, 0, 0]),
    )
    s = ClassicalStrategy(5, 4, ThroughCenter(2), responses)
    assert classical.strategy_success(s) == Fraction(2, 5)
    wins = 0
    for slope, offset in itertools.product(range(5), repeat=2):
        x = [(slope * k + offset) % 5 for k in range(5)]
        wins += s.answers(x) == tuple(k == slope for k in range(5))
    assert wins == 10
