"""Hand-pinned codes for the butterfly example and the protected/unprotected pair."""

from __future__ import annotations

from .galois import make_field
from .netgraph import Network, build_network, butterfly
from .rlnc import CodeInstance, Matrix

# Butterfly edge ids, in construction order.
E12, E13, E24, E34, E45, E26, E56, E37, E57 = range(9)


def _code(net: Network, ctx, K, a_entries, f_entries) -> CodeInstance:
    n_e = len(net.edges)
    A = [[0] * n_e for _ in range(K)]
    F = [[0] * n_e for _ in range(n_e)]
    for (l, e), v in a_entries.items():
        A[l][e] = v
    for (e1, e2), v in f_entries.items():
        F[e1][e2] = v
    placement = tuple(sorted(net.sources)[0] for _ in range(K))
    return CodeInstance(
        ctx, K, net, Matrix.from_lists(ctx, A), Matrix.from_lists(ctx, F), None, placement
    )


def fig1_code() -> CodeInstance:
    """Classic butterfly code over GF(2): a down the left, b down the right,
    a+b on the bottleneck 4->5."""
    net = butterfly()
    a_entries = {(0, E12): 1, (1, E13): 1}
    f_entries = {
        (E12, E24): 1,
        (E12, E26): 1,
        (E13, E34): 1,
        (E13, E37): 1,
        (E24, E45): 1,
        (E34, E45): 1,
        (E45, E56): 1,
        (E45, E57): 1,
    }
    return _code(net, make_field(1), 2, a_entries, f_entries)


def diamond() -> Network:
    """Source 1, relays 2 and 3, receiver 4; node 0 unused."""
    return build_network(5, [(1, 2), (1, 3), (2, 4), (3, 4)], [1], [4])


def fig2_unprotected() -> CodeInstance:
    """Each relay forwards one raw symbol: a through 2, b through 3."""
    net = diamond()
    ctx = make_field(2)
    return _code(net, ctx, 2, {(0, 0): 1, (1, 1): 1}, {(0, 2): 1, (1, 3): 1})


def fig2_protected() -> CodeInstance:
    """Relays see a+b and a+x*b over GF(4); the receiver still decodes."""
    net = diamond()
    ctx = make_field(2)
    x = 2
    a_entries = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): x}
    return _code(net, ctx, 2, a_entries, {(0, 2): 1, (1, 3): 1})
