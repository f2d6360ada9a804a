"""Immutable weighted undirected graphs and cut metrics.

The graph is stored in CSR form: ``indptr``/``indices``/``weights`` with every
undirected edge present in both directions and neighbour lists sorted by id.
All edge quantities (``e(L)``, ``e(U, U-bar)``, ...) are weight sums and
degrees are weighted degrees.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import GraphFormatError, ValidationError


class Graph:
    """Undirected graph with strictly positive edge weights and no isolated vertices.

    Use :func:`load_graph` or :meth:`Graph.from_edges` to build one; the
    constructor takes already-validated CSR arrays.
    """

    def __init__(self, indptr, indices, weights, tokens=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.n = len(self.indptr) - 1
        self.degree = np.add.reduceat(self.weights, self.indptr[:-1]) if self.n else np.zeros(0)
        self.total_volume = float(self.degree.sum())
        self.counts = np.diff(self.indptr)
        if tokens is None:
            tokens = [str(i) for i in range(self.n)]
        self.tokens = list(tokens)
        self._token_index = {t: i for i, t in enumerate(self.tokens)}
        self.dropped_isolated = 0
        for arr in (self.indptr, self.indices, self.weights, self.degree, self.counts):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, edges, n=None, tokens=None):
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples over integer ids.

        Duplicate edges (in either orientation) have their weights summed.
        Vertices in ``range(n)`` that end up with no edges are dropped and
        counted in ``dropped_isolated``; surviving vertices keep their
        relative order.
        """
        src, dst, w = [], [], []
        for e in edges:
            if len(e) == 2:
                u, v = e
                wt = 1.0
            elif len(e) == 3:
                u, v, wt = e
            else:
                raise ValidationError(f"edge must have 2 or 3 fields, got {e!r}")
            src.append(int(u))
            dst.append(int(v))
            w.append(float(wt))
        return cls.from_arrays(src, dst, w, n=n, tokens=tokens)

    @classmethod
    def from_arrays(cls, src, dst, weights=None, n=None, tokens=None):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        w = np.ones(len(src)) if weights is None else np.asarray(weights, dtype=np.float64)
        if not (len(src) == len(dst) == len(w)):
            raise ValidationError("src, dst and weights must have equal length")
        if np.any(src == dst):
            i = int(np.flatnonzero(src == dst)[0])
            raise ValidationError(f"self-loop at vertex {src[i]}")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError("edge weights must be finite and strictly positive")
        if len(src) and min(src.min(), dst.min()) < 0:
            raise ValidationError("vertex ids must be non-negative")
        top = int(max(src.max(), dst.max())) + 1 if len(src) else 0
        if n is None:
            n = top
        elif n < top:
            raise ValidationError(f"vertex id {top - 1} out of range for n={n}")
        if tokens is not None and len(tokens) != n:
            raise ValidationError("tokens must have one entry per vertex")

        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        key = lo * max(n, 1) + hi
        uniq, inv = np.unique(key, return_inverse=True)
        merged = np.bincount(inv, weights=w, minlength=len(uniq))
        lo, hi = uniq // max(n, 1), uniq % max(n, 1)

        present = np.zeros(n, dtype=bool)
        present[lo] = True
        present[hi] = True
        dropped = int(n - present.sum())
        if dropped:
            remap = np.cumsum(present) - 1
            lo, hi = remap[lo], remap[hi]
            if tokens is not None:
                tokens = [t for t, keep in zip(tokens, present) if keep]
            else:
                tokens = [str(i) for i in np.flatnonzero(present)]
            n = n - dropped
            warnings.warn(f"dropped {dropped} isolated vertices", stacklevel=2)

        a = np.concatenate([lo, hi])
        b = np.concatenate([hi, lo])
        ww = np.concatenate([merged, merged])
        order = np.lexsort((b, a))
        a, b, ww = a[order], b[order], ww[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(a, minlength=n), out=indptr[1:])
        g = cls(indptr, b, ww, tokens)
        g.dropped_isolated = dropped
        return g

    # -- access ---------------------------------------------------------------

    def neighbors(self, v):
        s, e = self.indptr[v], self.indptr[v + 1]
        return self.indices[s:e], self.weights[s:e]

    def edges(self):
        """Yield each undirected edge once as ``(u, v, w)`` with ``u < v``."""
        for u in range(self.n):
            nbr, w = self.neighbors(u)
            for v, wt in zip(nbr.tolist(), w.tolist()):
                if u < v:
                    yield u, v, wt

    @property
    def edge_count(self):
        return len(self.indices) // 2

    @property
    def total_weight(self):
        return self.total_volume / 2

    def vertex_id(self, token):
        try:
            return self._token_index[str(token)]
        except KeyError:
            raise ValidationError(f"unknown vertex {token!r}") from None

    def vertex_ids(self, tokens):
        return [self.vertex_id(t) for t in tokens]

    def token(self, v):
        return self.tokens[v]

    def check_ids(self, ids):
        ids = np.asarray(ids, dtype=np.int64).reshape(-1)
        if len(ids) and (ids.min() < 0 or ids.max() >= self.n):
            raise ValidationError(f"vertex ids out of range [0, {self.n})")
        return ids

    def volume(self, s):
        return float(self.degree[self.check_ids(list(s))].sum())

    def gather(self, ids):
        """Adjacency entries of ``ids``: (position of owner in ids, neighbour, weight)."""
        ids = np.asarray(ids, dtype=np.int64)
        starts = self.indptr[ids]
        counts = self.counts[ids]
        total = int(counts.sum())
        owner = np.repeat(np.arange(len(ids)), counts)
        offs = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(total)
        return owner, self.indices[offs], self.weights[offs]

    def to_scipy(self):
        import scipy.sparse as sp

        return sp.csr_matrix((self.weights, self.indices, self.indptr), shape=(self.n, self.n))

    def adjacency_dense(self):
        a = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), self.counts)
        a[rows, self.indices] = self.weights
        return a

    # -- serialization ----------------------------------------------------------

    def write_edgelist(self, stream: TextIO):
        for u, v, w in self.edges():
            ws = str(int(w)) if float(w).is_integer() else repr(w)
            stream.write(f"{self.tokens[u]} {self.tokens[v]} {ws}\n")

    def to_edgelist(self):
        buf = io.StringIO()
        self.write_edgelist(buf)
        return buf.getvalue()

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count}, vol={self.total_volume:g})"


def load_graph(source):
    """Parse an edge list (``"u v [w]"`` per line, ``#`` comments) into a Graph.

    ``source`` is a text stream (or any iterable of lines) or a filesystem path.
    Tokens are mapped to dense ids in order of first appearance.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            return _parse_edgelist(fh)
    return _parse_edgelist(source)


def parse_edgelist(text: str) -> Graph:
    return _parse_edgelist(io.StringIO(text))


def _parse_edgelist(lines: Iterable[str]):
    index = {}
    tokens = []
    src, dst, w = [], [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(lineno, f"expected 'u v [w]', got {raw.strip()!r}")
        a, b = parts[0], parts[1]
        if len(parts) == 3:
            try:
                wt = float(parts[2])
            except ValueError:
                raise GraphFormatError(lineno, f"bad weight {parts[2]!r}") from None
            if not np.isfinite(wt) or wt <= 0:
                raise ValidationError(f"line {lineno}: weight must be positive, got {parts[2]}")
        else:
            wt = 1.0
        if a == b:
            raise ValidationError(f"line {lineno}: self-loop at {a!r}")
        for t in (a, b):
            if t not in index:
                index[t] = len(tokens)
                tokens.append(t)
        src.append(index[a])
        dst.append(index[b])
        w.append(wt)
    return Graph.from_arrays(src, dst, w, n=len(tokens), tokens=tokens)


@dataclass(frozen=True)
class PairSubgraph:
    """A disjoint pair (L, R) with its cut metrics and bipartiteness ratio."""

    left: tuple
    right: tuple
    vol_u: float
    e_l: float
    e_r: float
    e_lr: float
    e_boundary: float
    beta: float

    @property
    def union(self):
        return self.left + self.right

    def to_dict(self, graph=None):
        name = (lambda v: graph.tokens[v]) if graph is not None else int
        return {
            "left": [name(v) for v in self.left],
            "right": [name(v) for v in self.right],
            "vol": self.vol_u,
            "beta": self.beta,
            "e_l": self.e_l,
            "e_r": self.e_r,
            "e_lr": self.e_lr,
            "e_boundary": self.e_boundary,
        }


def _sorted_ids(g, s):
    return g.check_ids(sorted(set(int(v) for v in s)))


def bipartiteness_ratio(g: Graph, left, right) -> PairSubgraph:
    """β(L, R) = (2e(L) + 2e(R) + e(U, U-bar)) / vol(U) with all metrics."""
    lids = _sorted_ids(g, left)
    rids = _sorted_ids(g, right)
    if len(np.intersect1d(lids, rids)):
        raise ValidationError("left and right must be disjoint")
    if len(lids) + len(rids) == 0:
        raise ValidationError("L ∪ R must be nonempty")
    u = np.concatenate([lids, rids])
    owner, nbr, w = g.gather(u)
    owner_left = owner < len(lids)
    nbr_left = _member(lids, nbr)
    nbr_right = _member(rids, nbr)
    e_l = float(w[owner_left & nbr_left].sum()) / 2
    e_r = float(w[~owner_left & nbr_right].sum()) / 2
    e_lr = float(w[owner_left & nbr_right].sum())
    e_b = float(w[~(nbr_left | nbr_right)].sum())
    vol = float(g.degree[u].sum())
    beta = (2 * e_l + 2 * e_r + e_b) / vol
    return PairSubgraph(
        tuple(lids.tolist()), tuple(rids.tolist()), vol, e_l, e_r, e_lr, e_b, beta
    )


def _member(sorted_ids, query):
    if len(sorted_ids) == 0:
        return np.zeros(len(query), dtype=bool)
    pos = np.searchsorted(sorted_ids, query)
    pos[pos == len(sorted_ids)] = 0
    return sorted_ids[pos] == query


def set_metrics(g: Graph, s) -> tuple[float, float, float]:
    """Return (vol(S), e(S), e(S, S-bar)) for a vertex set S."""
    ids = _sorted_ids(g, s)
    owner, nbr, w = g.gather(ids)
    inside = _member(ids, nbr)
    return float(g.degree[ids].sum()), float(w[inside].sum()) / 2, float(w[~inside].sum())
