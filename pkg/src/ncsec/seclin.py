"""Per-node algebraic security: rank, recoverable symbols and Delta_S."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .galois import FieldContext
from .rlnc import CodeInstance, CodingError, Matrix, partial_transfer_matrix


def rref_rows(ctx: FieldContext, rows) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of a list of rows; zero rows are dropped.

    Returns the nonzero RREF rows and their pivot columns.
    """
    work = [list(r) for r in rows]
    if not work:
        return [], []
    width = len(work[0])
    pivots: list[int] = []
    top = 0
    for col in range(width):
        if top == len(work):
            break
        piv = next((i for i in range(top, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[top], work[piv] = work[piv], work[top]
        lead = work[top][col]
        if lead != 1:
            work[top] = ctx.scale(ctx.inv(lead), work[top])
        prow = work[top]
        for i in range(len(work)):
            if i != top:
                f = work[i][col]
                if f:
                    work[i] = ctx.axpy(f, prow, work[i])
        pivots.append(col)
        top += 1
    return work[:top], pivots


def rank(mat: Matrix) -> int:
    return len(rref_rows(mat.ctx, mat.rows)[1])


def rref(mat: Matrix) -> tuple[Matrix, list[int]]:
    """Canonical RREF with zero rows kept at the bottom."""
    rows, pivots = rref_rows(mat.ctx, mat.rows)
    n_rows, n_cols = mat.shape
    rows = rows + [[0] * n_cols for _ in range(n_rows - len(rows))]
    return Matrix.from_lists(mat.ctx, rows), pivots


def count_unit_rows(rows) -> int:
    """Rows with a single nonzero entry equal to 1."""
    count = 0
    for r in rows:
        nz = [x for x in r if x]
        if len(nz) == 1 and nz[0] == 1:
            count += 1
    return count


def observation_profile(ctx: FieldContext, observed_rows) -> tuple[int, int]:
    """(rank, l_d) of an observation given as received-symbol rows."""
    rows, pivots = rref_rows(ctx, observed_rows)
    return len(pivots), count_unit_rows(rows)


def recoverable_symbols(code: CodeInstance, v: int) -> int:
    """Source symbols node v can isolate by Gaussian elimination."""
    obs = partial_transfer_matrix(code, v).transpose()
    return observation_profile(code.field, obs.rows)[1]


def delta_s_raw(K: int, rank_: int, l_d: int) -> Fraction:
    return Fraction(K - (rank_ + l_d), K)


def delta_s_value(K: int, rank_: int, l_d: int) -> Fraction:
    """Delta_S with full rank forced to 0 and negatives clamped to 0."""
    if rank_ >= K:
        return Fraction(0)
    return max(Fraction(0), delta_s_raw(K, rank_, l_d))


@dataclass(frozen=True)
class NodeSecurity:
    node: int
    order: int | None
    delta_in: int
    rank: int
    l_d: int
    delta_s: Fraction
    delta_s_raw: Fraction

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "order": self.order,
            "delta_in": self.delta_in,
            "rank": self.rank,
            "l_d": self.l_d,
            "delta_s_num": self.delta_s.numerator,
            "delta_s_den": self.delta_s.denominator,
            "delta_s_raw_num": self.delta_s_raw.numerator,
            "delta_s_raw_den": self.delta_s_raw.denominator,
        }


def security_level(code: CodeInstance, v: int) -> NodeSecurity:
    net = code.network
    if v in net.sources:
        raise CodingError(f"node {v} is a source; it observes the raw symbols")
    obs = partial_transfer_matrix(code, v).transpose()
    r, l_d = observation_profile(code.field, obs.rows)
    return NodeSecurity(
        node=v,
        order=net.order(v),
        delta_in=net.delta_in(v),
        rank=r,
        l_d=l_d,
        delta_s=delta_s_value(code.K, r, l_d),
        delta_s_raw=delta_s_raw(code.K, r, l_d),
    )


CSV_COLUMNS = ("node", "order", "delta_in", "rank", "l_d", "delta_s_num", "delta_s_den")


@dataclass(frozen=True)
class SecurityReport:
    nodes: tuple[NodeSecurity, ...]
    min_delta_s: Fraction | None
    K: int
    field: dict
    seed: int | None

    @property
    def secure(self) -> bool:
        """True unless some intermediate node has Delta_S = 0."""
        return self.min_delta_s is None or self.min_delta_s > 0

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "field": self.field,
            "seed": self.seed,
            "min_delta_s": None if self.min_delta_s is None else str(self.min_delta_s),
            "secure": self.secure,
            "nodes": [n.to_dict() for n in self.nodes],
        }

    def to_json(self, extra: dict | None = None) -> str:
        d = dict(extra or {})
        d.update(self.to_dict())
        return json.dumps(d, indent=2) + "\n"

    def to_csv(self, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            buf.write(header)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for n in self.nodes:
            d = n.to_dict()
            w.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
        return buf.getvalue()


def network_report(code: CodeInstance) -> SecurityReport:
    nodes = tuple(security_level(code, v) for v in code.network.intermediate_nodes())
    min_ds = min((n.delta_s for n in nodes), default=None)
    return SecurityReport(nodes, min_ds, code.K, code.field.descriptor, code.seed)


def secure_max_flow_complete_dag(n: int) -> int:
    """Largest K at which every relay of the complete DAG keeps Delta_S > 0."""
    if n < 3:
        raise ValueError(f"complete DAG needs n >= 3 for a relay node, got {n}")
    return n - 1
