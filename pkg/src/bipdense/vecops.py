"""Sparse signed vectors over vertices, the quasi-Laplacian product and truncation.

Vectors are row vectors. ``multiply_m`` computes ``p M`` with
``M = I - D^{-1} A`` by scattering ``p(v) / d(v)`` along the adjacency of
``supp(p)``, so its cost is proportional to the volume of the support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass
class WorkCounter:
    """Instrumentation for touched work; ``edges_touched`` counts adjacency entries read."""

    m_multiplies: int = 0
    edges_touched: int = 0
    sweeps: int = 0
    early_exits: int = 0
    per_step: list = field(default_factory=list)

    def as_dict(self):
        return {
            "m_multiplies": self.m_multiplies,
            "edges_touched": self.edges_touched,
            "sweeps": self.sweeps,
            "early_exits": self.early_exits,
        }


class SignedVec:
    """Sparse real vector on the vertices of ``graph``.

    Stored as ascending vertex ids with their nonzero values; exact zeros are
    never stored.
    """

    __slots__ = ("graph", "ids", "vals")

    def __init__(self, graph, ids, vals, *, _trusted=False):
        self.graph = graph
        if _trusted:
            self.ids, self.vals = ids, vals
            return
        ids = np.asarray(ids, dtype=np.int64).reshape(-1)
        vals = np.asarray(vals, dtype=np.float64).reshape(-1)
        if len(ids) != len(vals):
            raise ValidationError("ids and vals must have equal length")
        graph.check_ids(ids)
        order = np.argsort(ids, kind="stable")
        ids, vals = ids[order], vals[order]
        if len(ids) > 1 and np.any(ids[1:] == ids[:-1]):
            raise ValidationError("duplicate vertex ids")
        keep = vals != 0
        self.ids, self.vals = ids[keep], vals[keep]

    @classmethod
    def from_dict(cls, graph, entries):
        keys = list(entries)
        return cls(graph, keys, [entries[k] for k in keys])

    @classmethod
    def from_dense(cls, graph, x):
        x = np.asarray(x, dtype=np.float64)
        ids = np.flatnonzero(x)
        return cls(graph, ids, x[ids], _trusted=True)

    @classmethod
    def zeros(cls, graph):
        return cls(graph, np.zeros(0, dtype=np.int64), np.zeros(0), _trusted=True)

    def __len__(self):
        return len(self.ids)

    def __bool__(self):
        return len(self.ids) > 0

    def __getitem__(self, v):
        i = np.searchsorted(self.ids, v)
        if i < len(self.ids) and self.ids[i] == v:
            return float(self.vals[i])
        return 0.0

    def __neg__(self):
        return SignedVec(self.graph, self.ids, -self.vals, _trusted=True)

    def __mul__(self, c):
        if c == 0:
            return SignedVec.zeros(self.graph)
        return SignedVec(self.graph, self.ids, self.vals * c, _trusted=True)

    __rmul__ = __mul__

    def __repr__(self):
        return f"SignedVec({self.to_dict()})"

    def support(self):
        return self.ids

    def support_volume(self):
        return float(self.graph.degree[self.ids].sum())

    def l1_norm(self):
        return float(np.abs(self.vals).sum())

    def to_dense(self):
        x = np.zeros(self.graph.n)
        x[self.ids] = self.vals
        return x

    def to_dict(self, tokens=False):
        names = self.graph.tokens if tokens else None
        return {
            (names[i] if names else int(i)): float(x) for i, x in zip(self.ids, self.vals)
        }


def indicator(g, v) -> SignedVec:
    """χ_v, the indicator vector of vertex ``v``."""
    g.check_ids([v])
    return SignedVec(g, np.array([v], dtype=np.int64), np.array([1.0]), _trusted=True)


def multiply_m(p: SignedVec, counter: WorkCounter | None = None) -> SignedVec:
    """Return ``p M = p - p D^{-1} A``.

    Accumulation order is fixed: the entries of ``p`` first, then neighbour
    contributions in (support vertex, adjacency) order.
    """
    g = p.graph
    if not len(p):
        return SignedVec.zeros(g)
    owner, nbr, w = g.gather(p.ids)
    scaled = p.vals / g.degree[p.ids]
    contrib = -scaled[owner] * w
    all_ids = np.concatenate([p.ids, nbr])
    all_vals = np.concatenate([p.vals, contrib])
    uniq, inv = np.unique(all_ids, return_inverse=True)
    out = np.bincount(inv, weights=all_vals, minlength=len(uniq))
    keep = out != 0
    if counter is not None:
        counter.m_multiplies += 1
        counter.edges_touched += len(nbr)
    return SignedVec(g, uniq[keep], out[keep], _trusted=True)


def truncate(p: SignedVec, xi: float) -> SignedVec:
    """ξ-truncation: keep entry u iff |p(u)| >= ξ d(u)."""
    if xi < 0:
        raise ValidationError(f"truncation threshold must be non-negative, got {xi}")
    if xi == 0:
        return p
    keep = np.abs(p.vals) >= xi * p.graph.degree[p.ids]
    return SignedVec(p.graph, p.ids[keep], p.vals[keep], _trusted=True)


def l1_norm(p: SignedVec) -> float:
    return p.l1_norm()


def abs_mass(p: SignedVec, s) -> float:
    """|p|(S), the absolute mass of ``p`` on vertex set ``s``."""
    s = np.unique(np.asarray(list(s), dtype=np.int64))
    if not len(s):
        return 0.0
    hit = np.isin(p.ids, s, assume_unique=True)
    return float(np.abs(p.vals[hit]).sum())


def signed_mass(p: SignedVec, left, right) -> float:
    """p(L, -R) = Σ_{v∈L} p(v) - Σ_{v∈R} p(v)."""
    x = 0.0
    for s, sign in ((left, 1.0), (right, -1.0)):
        s = np.unique(np.asarray(list(s), dtype=np.int64))
        if len(s):
            x += sign * float(p.vals[np.isin(p.ids, s, assume_unique=True)].sum())
    return x


@dataclass(frozen=True)
class TruncationSchedule:
    """Doubling thresholds ξ_t = ξ_0 2^t."""

    xi0: float

    def __post_init__(self):
        if not self.xi0 >= 0:
            raise ValidationError(f"xi0 must be non-negative, got {self.xi0}")

    def xi(self, t):
        return self.xi0 * 2.0**t
