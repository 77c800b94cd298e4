import json

import numpy as np
import pytest
from scipy import stats

from ncsec.fixtures import E12, E13, E24, E26, E34, E37, E45, E56, E57, fig1_code
from ncsec.galois import make_field
from ncsec.netgraph import build_network, butterfly, complete_dag
from ncsec.rlnc import (
    CodeInstance,
    CodingError,
    Matrix,
    code_from_dict,
    global_mixing_matrix,
    is_feasible,
    partial_transfer_matrix,
    sample_code,
)
from ncsec.seclin import rank

from oracles import edge_process_columns, neumann_inverse, random_dag_edges

CHAIN1 = build_network(2, [(0, 1)], [0], [1])
CHAIN2 = build_network(3, [(0, 1), (1, 2)], [0], [2])


def test_chain_single_edge():
    code = sample_code(CHAIN1, 1, make_field(4), seed=3)
    assert code.A.shape == (1, 1)
    assert code.F.rows == ((0,),)


def test_sampling_is_deterministic():
    a = sample_code(butterfly(), 2, make_field(1), seed=17)
    b = sample_code(butterfly(), 2, make_field(1), seed=17)
    assert a.A == b.A and a.F == b.F


def test_complete_dag_a_support():
    net = complete_dag(5, seed=2)
    (src,) = net.sources
    out = set(net.out_edges(src))
    for seed in range(20):
        code = sample_code(net, 4, make_field(4), seed=seed)
        for row in code.A.rows:
            for e, x in enumerate(row):
                if e not in out:
                    assert x == 0


def test_f_support_is_line_graph():
    net = complete_dag(5, seed=2)
    for seed in range(10):
        code = sample_code(net, 3, make_field(3), seed=seed)
        for e1, row in enumerate(code.F.rows):
            for e2, x in enumerate(row):
                if x:
                    assert net.head(e1) == net.tail(e2)


def test_rate_bounds():
    with pytest.raises(CodingError, match="min-cut"):
        sample_code(CHAIN2, 2, make_field(2), seed=0)
    with pytest.raises(CodingError):
        sample_code(CHAIN2, 0, make_field(2), seed=0)
    sample_code(complete_dag(4, 0), 3, make_field(2), seed=0)
    with pytest.raises(CodingError, match="<"):
        sample_code(complete_dag(4, 0), 3, make_field(2), seed=0, strict=True)


def test_zero_f_gives_c_equal_a():
    net = build_network(4, [(0, 1), (0, 2), (0, 3)], [0], [1, 2, 3])
    code = sample_code(net, 3, make_field(4), seed=5, check=False)
    assert global_mixing_matrix(code) == code.A


def test_chain_symbolic_product():
    ctx = make_field(4)
    for a in (1, 5, 9):
        for b in (0, 3, 15):
            A = Matrix.from_lists(ctx, [[a, 0]])
            F = Matrix.from_lists(ctx, [[0, b], [0, 0]])
            code = CodeInstance(ctx, 1, CHAIN2, A, F, None, (0,))
            assert global_mixing_matrix(code).rows == ((a, ctx.mul(a, b)),)


def test_fig1_columns():
    code = fig1_code()
    C = global_mixing_matrix(code)
    assert C.column(E45) == (1, 1)
    assert C.column(E12) == C.column(E24) == C.column(E26) == (1, 0)
    assert C.column(E13) == C.column(E34) == C.column(E37) == (0, 1)
    assert C.column(E56) == C.column(E57) == (1, 1)
    assert partial_transfer_matrix(code, 4).rows == ((1, 0), (0, 1))
    assert partial_transfer_matrix(code, 5).rows == ((1,), (1,))
    assert is_feasible(code, 6) and is_feasible(code, 7)


def test_partial_needs_in_edges():
    with pytest.raises(CodingError):
        partial_transfer_matrix(fig1_code(), 1)


def test_feasibility_chain_and_zero_a():
    ctx = make_field(4)
    for seed in range(30):
        code = sample_code(CHAIN2, 1, ctx, seed=seed)
        prod = ctx.mul(code.A[0][0], code.F[0][1])
        assert is_feasible(code, 2) == (prod != 0)
    z = fig1_code()
    zero = CodeInstance(z.field, 2, z.network, Matrix.zeros(z.field, 2, 9), z.F, None, z.placement)
    assert not is_feasible(zero, 6)


def test_source_edges_copy_a():
    net = complete_dag(6, seed=1)
    (src,) = net.sources
    for seed in range(20):
        code = sample_code(net, 4, make_field(5), seed=seed)
        C = code.global_mixing
        for e in net.out_edges(src):
            assert C.column(e) == code.A.column(e)


def test_inverse_matches_neumann_and_edge_recursion():
    rng = np.random.default_rng(8)
    for i in range(40):
        n = int(rng.integers(3, 7))
        edges, _ = random_dag_edges(rng, n, int(rng.integers(2, 10)))
        src = edges[0][0]
        net = build_network(n, edges, [src], [edges[0][1]])
        ctx = make_field(int(rng.integers(1, 9)))
        code = sample_code(net, 1, ctx, seed=i, check=False)
        assert [list(r) for r in code.transfer_inverse.rows] == neumann_inverse(ctx, code.F.to_lists())
        C = code.global_mixing
        assert [list(C.column(e)) for e in range(len(edges))] == edge_process_columns(code)


def _feasible_rate(net, K, ctx, trials=1000):
    return sum(
        all(is_feasible(sample_code(net, K, ctx, seed=s), r) for r in net.receivers)
        for s in range(trials)
    ) / trials


def test_feasible_w_h_p_gf256_below_capacity():
    ctx = make_field(8)
    assert _feasible_rate(complete_dag(5, seed=0), 3, ctx) >= 0.99
    assert _feasible_rate(complete_dag(6, seed=0), 3, ctx) >= 0.99


@pytest.mark.parametrize("net, K", [(butterfly(), 2), (complete_dag(5, seed=0), 4)])
def test_feasible_at_capacity_above_random_coding_bound(net, K):
    # zero-inclusive sampling: at K = min-cut a single zero on a cut path is fatal,
    # so only the (1 - d/q)^|E| success bound applies
    ctx = make_field(8)
    d = len(net.receivers)
    assert _feasible_rate(net, K, ctx) >= (1 - d / ctx.q) ** len(net.edges)


def test_coefficient_marginals_uniform():
    net = build_network(4, [(0, 1), (1, 2), (1, 3)], [0], [2, 3])
    ctx = make_field(2)
    counts = np.zeros((3, 4), dtype=int)
    for s in range(10_000):
        code = sample_code(net, 1, ctx, seed=s)
        for k, x in enumerate((code.A[0][0], code.F[0][1], code.F[0][2])):
            counts[k, x] += 1
    for row in counts:
        assert stats.chisquare(row).pvalue > 0.001


def test_code_json_round_trip():
    code = sample_code(complete_dag(4, 1), 2, make_field(3), seed=12)
    again = code_from_dict(json.loads(code.to_json()))
    assert again.A == code.A and again.F == code.F and again.K == code.K
    assert again.seed == 12 and again.field == code.field
    assert rank(again.global_mixing) == rank(code.global_mixing)


def test_multi_source_placement():
    net = build_network(4, [(0, 2), (1, 2), (2, 3), (0, 3), (1, 3)], [0, 1], [3])
    code = sample_code(net, 2, make_field(4), seed=1)
    assert code.placement == (0, 1)
    for l, node in enumerate(code.placement):
        for e, x in enumerate(code.A.rows[l]):
            if x:
                assert net.tail(e) == node
    pinned = build_network(4, net.edges, [0, 1], [3], processes=[0, 0])
    assert sample_code(pinned, 2, make_field(4), seed=1).placement == (0, 0)
