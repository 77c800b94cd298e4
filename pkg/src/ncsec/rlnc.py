"""Random linear network codes and their transfer matrices.

A code on a network with edge set E and K source processes is the pair
(A, F): A is K x |E| (injection coefficients on edges out of the source
nodes), F is |E| x |E| (mixing coefficients on line-graph pairs). The
auxiliary encoding vectors of all edges are the columns of A (I - F)^-1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .galois import FieldContext, field_from_descriptor
from .netgraph import Network, line_graph_adjacency, max_flow, network_from_dict


class CodingError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over one field; rows are tuples of ints."""

    ctx: FieldContext
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise CodingError("matrix dimensions must be positive")
        width = len(self.rows[0])
        q = self.ctx.q
        for r in self.rows:
            if len(r) != width:
                raise CodingError("ragged matrix")
            for x in r:
                if not 0 <= x < q:
                    raise CodingError(f"entry {x} outside GF({q})")

    @classmethod
    def from_lists(cls, ctx: FieldContext, rows) -> Matrix:
        return cls(ctx, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, ctx: FieldContext, n: int) -> Matrix:
        return cls(ctx, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, ctx: FieldContext, rows: int, cols: int) -> Matrix:
        return cls(ctx, tuple((0,) * cols for _ in range(rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, i):
        return self.rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def select_columns(self, cols) -> Matrix:
        cols = list(cols)
        return Matrix(self.ctx, tuple(tuple(r[j] for j in cols) for r in self.rows))

    def transpose(self) -> Matrix:
        return Matrix(self.ctx, tuple(zip(*self.rows)))

    def __add__(self, other: Matrix) -> Matrix:
        return Matrix(
            self.ctx,
            tuple(tuple(a ^ b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ctx != other.ctx:
            raise CodingError("field mismatch")
        if self.shape[1] != other.shape[0]:
            raise CodingError(f"shape mismatch {self.shape} @ {other.shape}")
        ctx = self.ctx
        width = other.shape[1]
        out = []
        for r in self.rows:
            acc = [0] * width
            for c, orow in zip(r, other.rows):
                if c:
                    acc = ctx.axpy(c, orow, acc)
            out.append(tuple(acc))
        return Matrix(ctx, tuple(out))

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def default_placement(net: Network, K: int) -> tuple[int, ...]:
    """Node carrying each process: explicit map, else round-robin over sources."""
    if net.processes is not None:
        if len(net.processes) != K:
            raise CodingError(f"graph places {len(net.processes)} processes but K={K}")
        return net.processes
    srcs = sorted(net.sources)
    return tuple(srcs[l % len(srcs)] for l in range(K))


def feasible_rate(net: Network, placement) -> int:
    """Largest K accepted by every receiver's min-cut for this placement."""
    supply: dict[int, int] = {}
    for node in placement:
        supply[node] = supply.get(node, 0) + 1
    return min(max_flow(net, supply, r) for r in sorted(net.receivers))


@dataclass(frozen=True)
class CodeInstance:
    field: FieldContext
    K: int
    network: Network
    A: Matrix
    F: Matrix
    seed: int | None
    placement: tuple[int, ...]

    @cached_property
    def transfer_inverse(self) -> Matrix:
        """(I - F)^-1 by back-substitution over a topological edge order."""
        return Matrix(self.field, tuple(tuple(r) for r in _back_substitute(self)))

    @cached_property
    def global_mixing(self) -> Matrix:
        return self.A @ self.transfer_inverse

    def to_dict(self) -> dict:
        return {
            "field": self.field.descriptor,
            "K": self.K,
            "seed": self.seed,
            "placement": list(self.placement),
            "network": self.network.to_dict(),
            "A": self.A.to_lists(),
            "F": self.F.to_lists(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"


def _back_substitute(code: CodeInstance) -> list[list[int]]:
    # G = I + F G; row e of F is supported on edges downstream of e.
    ctx = code.field
    net = code.network
    n_e = len(net.edges)
    F = code.F.rows
    G: list[list[int] | None] = [None] * n_e
    for e in reversed(net.edge_order):
        row = [0] * n_e
        row[e] = 1
        for k in net.out_edges(net.head(e)):
            c = F[e][k]
            if c:
                row = ctx.axpy(c, G[k], row)
        G[e] = row
    return G


def code_support(net: Network, K: int, placement) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Positions of A and F that may hold nonzero coefficients."""
    a_pos = [(l, e) for l in range(K) for e in net.out_edges(placement[l])]
    f_pos = list(line_graph_adjacency(net).pairs)
    return a_pos, f_pos


def code_from_coefficients(
    net: Network,
    K: int,
    ctx: FieldContext,
    values,
    *,
    placement=None,
    seed=None,
) -> CodeInstance:
    """Assemble a code from coefficient values listed in support order."""
    placement = default_placement(net, K) if placement is None else tuple(placement)
    a_pos, f_pos = code_support(net, K, placement)
    values = list(values)
    if len(values) != len(a_pos) + len(f_pos):
        raise CodingError("coefficient count does not match the code support")
    n_e = len(net.edges)
    A = [[0] * n_e for _ in range(K)]
    F = [[0] * n_e for _ in range(n_e)]
    for (l, e), v in zip(a_pos, values):
        A[l][e] = v
    for (e1, e2), v in zip(f_pos, values[len(a_pos):]):
        F[e1][e2] = v
    return CodeInstance(
        ctx, K, net, Matrix.from_lists(ctx, A), Matrix.from_lists(ctx, F), seed, placement
    )


def sample_code(
    net: Network,
    K: int,
    ctx: FieldContext,
    seed=None,
    *,
    strict: bool = False,
    placement=None,
    rng: np.random.Generator | None = None,
    check: bool = True,
) -> CodeInstance:
    """Draw every allowed coefficient i.i.d. uniform over the whole field.

    The rate must satisfy K <= min-cut to every receiver (K < min-cut with
    ``strict``). Pass ``rng`` to draw from an existing stream; ``seed`` is
    then only recorded.
    """
    if K < 1:
        raise CodingError(f"K must be at least 1, got {K}")
    placement = default_placement(net, K) if placement is None else tuple(placement)
    if check:
        cut = feasible_rate(net, placement)
        if K > cut or (strict and K >= cut):
            op = "<" if strict else "<="
            raise CodingError(f"rate K={K} violates K {op} min-cut={cut}")
    if rng is None:
        rng = np.random.default_rng(seed)
    a_pos, f_pos = code_support(net, K, placement)
    values = rng.integers(0, ctx.q, size=len(a_pos) + len(f_pos)).tolist()
    return code_from_coefficients(net, K, ctx, values, placement=placement, seed=seed)


def enumerate_codes(net: Network, K: int, ctx: FieldContext, placement=None):
    """Yield every code on the support; q^(#coefficients) instances."""
    placement = default_placement(net, K) if placement is None else tuple(placement)
    a_pos, f_pos = code_support(net, K, placement)
    for values in itertools.product(range(ctx.q), repeat=len(a_pos) + len(f_pos)):
        yield code_from_coefficients(net, K, ctx, values, placement=placement)


def support_size(net: Network, K: int, placement=None) -> int:
    placement = default_placement(net, K) if placement is None else tuple(placement)
    a_pos, f_pos = code_support(net, K, placement)
    return len(a_pos) + len(f_pos)


def global_mixing_matrix(code: CodeInstance) -> Matrix:
    """C = A (I - F)^-1; column e is the coefficient vector of Y(e)."""
    return code.global_mixing


def partial_transfer_matrix(code: CodeInstance, v: int) -> Matrix:
    """K x delta_in(v) columns of C observed at node v."""
    cols = code.network.in_edges(v)
    if not cols:
        raise CodingError(f"node {v} has no incoming edges")
    return code.global_mixing.select_columns(cols)


def is_feasible(code: CodeInstance, receiver: int) -> bool:
    """True when the receiver's observation has full rank K."""
    from .seclin import rank

    if not code.network.in_edges(receiver):
        return False
    return rank(partial_transfer_matrix(code, receiver)) == code.K


def code_from_dict(d: dict) -> CodeInstance:
    ctx = field_from_descriptor(d["field"])
    net = network_from_dict(d["network"])
    return CodeInstance(
        ctx,
        int(d["K"]),
        net,
        Matrix.from_lists(ctx, d["A"]),
        Matrix.from_lists(ctx, d["F"]),
        d.get("seed"),
        tuple(d["placement"]),
    )
