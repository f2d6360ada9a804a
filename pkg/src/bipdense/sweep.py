"""Sweep rounding of a signed vector into pair subgraphs.

Vertices are ordered by ``|p(v)| / d(v)`` (descending, ties by ascending id)
and each prefix is split by sign: positive entries go to L, the rest to R.
Every prefix B-ratio is produced in one vectorised pass whose cost is the
number of adjacency entries of the swept vertices.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graph import PairSubgraph, bipartiteness_ratio
from .vecops import SignedVec, WorkCounter

SCOPES = ("all", "support")


def sweep_order(p: SignedVec, scope="support"):
    """Return (vertex order, positive-sign mask) shared by sweeps and potentials."""
    if scope not in SCOPES:
        raise ValidationError(f"scope must be one of {SCOPES}, got {scope!r}")
    g = p.graph
    ratio = np.abs(p.vals) / g.degree[p.ids]
    idx = np.lexsort((p.ids, -ratio))
    order = p.ids[idx]
    positive = p.vals[idx] > 0
    if scope == "all" and len(order) < g.n:
        rest = np.setdiff1d(np.arange(g.n, dtype=np.int64), p.ids, assume_unique=True)
        order = np.concatenate([order, rest])
        positive = np.concatenate([positive, np.zeros(len(rest), dtype=bool)])
    return order, positive


@dataclass
class SweepOutcome:
    """All prefix pair subgraphs of one sweep and the best admitted one."""

    graph: object
    order: np.ndarray
    positive: np.ndarray
    volumes: np.ndarray
    betas: np.ndarray
    cap: float | None
    best_index: int | None
    best: PairSubgraph | None
    edges_touched: int

    @property
    def swept_volume(self):
        return float(self.volumes[-1]) if len(self.volumes) else 0.0

    @property
    def admitted(self):
        if self.cap is None:
            return np.ones(len(self.volumes), dtype=bool)
        return self.volumes <= self.cap

    @property
    def trace(self):
        """List of (prefix size i, vol(S_i), β_i)."""
        return [(i + 1, float(v), float(b)) for i, (v, b) in enumerate(zip(self.volumes, self.betas))]

    def prefix(self, i):
        """(L_i, R_i) for the first ``i`` swept vertices."""
        head = self.order[:i]
        pos = self.positive[:i]
        return head[pos].tolist(), head[~pos].tolist()

    def to_csv(self):
        buf = io.StringIO()
        buf.write("i,vol,beta\n")
        for i, v, b in self.trace:
            buf.write(f"{i},{v!r},{b!r}\n")
        return buf.getvalue()


def sweep(
    p: SignedVec,
    scope="all",
    cap=None,
    stop_at_cap=False,
    counter: WorkCounter | None = None,
) -> SweepOutcome:
    """Sweep ``p`` and return every prefix B-ratio plus the best admitted prefix.

    ``scope="all"`` orders every vertex (zero entries last, joining R);
    ``scope="support"`` only sweeps ``supp(p)``. Prefixes with volume above
    ``cap`` are not admitted. With ``stop_at_cap`` the sweep ends at the last
    admissible prefix instead of running to the end of the scope.
    """
    if not len(p):
        raise ValidationError("cannot sweep the zero vector")
    if cap is not None and not cap > 0:
        raise ValidationError(f"volume cap must be positive, got {cap}")
    g = p.graph
    order, positive = sweep_order(p, scope)
    vols = np.cumsum(g.degree[order])
    if stop_at_cap and cap is not None:
        keep = int(np.searchsorted(vols, cap, side="right"))
        order, positive, vols = order[:keep], positive[:keep], vols[:keep]
    if not len(order):
        return SweepOutcome(g, order, positive, vols, np.zeros(0), cap, None, None, 0)

    owner, nbr, w = g.gather(order)
    by_id = np.argsort(order, kind="stable")
    sorted_ids = order[by_id]
    pos = np.searchsorted(sorted_ids, nbr)
    pos[pos == len(sorted_ids)] = 0
    swept = sorted_ids[pos] == nbr
    nbr_rank = np.where(swept, by_id[pos], len(order))
    earlier = nbr_rank < owner
    same = np.zeros(len(nbr), dtype=bool)
    same[earlier] = positive[nbr_rank[earlier]] == positive[owner[earlier]]

    num_delta = np.where(earlier & same, 2 * w, 0.0)
    bnd_delta = np.where(earlier, -w, w)
    k = len(order)
    num = np.cumsum(np.bincount(owner, weights=num_delta, minlength=k))
    bnd = np.cumsum(np.bincount(owner, weights=bnd_delta, minlength=k))
    betas = (num + bnd) / vols
    if counter is not None:
        counter.sweeps += 1
        counter.edges_touched += len(nbr)

    admitted = np.ones(k, dtype=bool) if cap is None else vols <= cap
    best_index = best = None
    if admitted.any():
        cand = np.where(admitted, betas, np.inf)
        best_index = int(np.argmin(cand))
        head, pos_head = order[: best_index + 1], positive[: best_index + 1]
        best = bipartiteness_ratio(g, head[pos_head], head[~pos_head])
    return SweepOutcome(g, order, positive, vols, betas, cap, best_index, best, len(nbr))


def partition_by_sign(p: SignedVec, s):
    """Split S into L0 = {p > 0} and R0 = S \\ L0, so p(L0, -R0) = |p|(S)."""
    s = sorted(set(int(v) for v in s))
    left = [v for v in s if p[v] > 0]
    right = [v for v in s if not p[v] > 0]
    return left, right
