"""Brute-force and dense-spectral ground truth for small graphs.

Enumerations work on the dense adjacency matrix and use
``β(L, R) = 1 - 2 e(L, R) / vol(L ∪ R)``, which is a different route to the
ratio than the adjacency-list pass in :mod:`bipdense.graph`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, ValidationError
from .graph import Graph, bipartiteness_ratio
from .potential import CheckReport
from .vecops import SignedVec, indicator, multiply_m, signed_mass

_CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    """Exact minimum B-ratio and a minimising pair, or status ``"empty"``."""

    beta: float | None
    left: tuple = ()
    right: tuple = ()
    status: str = "ok"

    def to_dict(self, graph=None):
        name = (lambda v: graph.tokens[v]) if graph is not None else int
        return {
            "status": self.status,
            "beta": self.beta,
            "left": [name(v) for v in self.left],
            "right": [name(v) for v in self.right],
        }


def _assignments(n, start, stop):
    """Rows of base-3 digits (0 = out, 1 = L, 2 = R) for codes in [start, stop)."""
    codes = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(codes), n), dtype=np.int8)
    for j in range(n):
        digits[:, j] = codes % 3
        codes //= 3
    return digits


def _enumerate_pairs(g, max_n, vol_cap=None):
    if g.n > max_n:
        raise BudgetExceededError(f"oracle budget exceeded: n={g.n} > max_n={max_n}")
    a = g.adjacency_dense()
    d = g.degree
    n = g.n
    best = (math.inf, None)
    total = 3**n
    for start in range(1, total, _CHUNK):
        digits = _assignments(n, start, min(total, start + _CHUNK))
        in_u = digits > 0
        # canonical orientation: lowest-id member of U sits in L
        first = np.argmax(in_u, axis=1)
        canon = digits[np.arange(len(digits)), first] == 1
        xl = (digits == 1).astype(np.float64)
        xr = (digits == 2).astype(np.float64)
        vol = in_u.astype(np.float64) @ d
        ok = canon & (vol > 0)
        if vol_cap is not None:
            ok &= vol <= vol_cap
        if not ok.any():
            continue
        e_lr = np.einsum("ij,ij->i", xl @ a, xr)
        beta = np.where(ok, 1.0 - 2.0 * e_lr / np.where(vol > 0, vol, 1.0), np.inf)
        i = int(np.argmin(beta))
        if beta[i] < best[0]:
            best = (float(beta[i]), digits[i].copy())
    return best


def _result(g, best):
    beta, digits = best
    if digits is None:
        return OracleResult(None, status="empty")
    left = tuple(np.flatnonzero(digits == 1).tolist())
    right = tuple(np.flatnonzero(digits == 2).tolist())
    return OracleResult(bipartiteness_ratio(g, left, right).beta, left, right)


def brute_force_beta(g: Graph, max_n=14) -> OracleResult:
    """β(G) by enumerating all 3^n assignments of vertices to {L, R, out}."""
    return _result(g, _enumerate_pairs(g, max_n))


def brute_force_profile(g: Graph, k, max_n=14) -> OracleResult:
    """β(k): minimum β(L, R) over disjoint pairs with vol(L ∪ R) <= k."""
    return _result(g, _enumerate_pairs(g, max_n, vol_cap=k))


def brute_force_beta_of_set(g: Graph, s, max_size=24) -> OracleResult:
    """β(S): minimum over the 2^{|S|-1} partitions of S (including (S, ∅))."""
    s = sorted(set(int(v) for v in s))
    g.check_ids(s)
    if not s:
        raise ValidationError("S must be nonempty")
    if len(s) > max_size:
        raise BudgetExceededError(f"oracle budget exceeded: |S|={len(s)} > {max_size}")
    a = g.adjacency_dense()[np.ix_(s, s)]
    vol = float(g.degree[s].sum())
    m = len(s) - 1
    best = (math.inf, None)
    total = 1 << m
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = ((codes[:, None] >> np.arange(m)) & 1).astype(bool)
        in_r = np.concatenate([np.zeros((len(codes), 1), dtype=bool), bits], axis=1)
        xl = (~in_r).astype(np.float64)
        xr = in_r.astype(np.float64)
        e_lr = np.einsum("ij,ij->i", xl @ a, xr)
        beta = 1.0 - 2.0 * e_lr / vol
        i = int(np.argmin(beta))
        if beta[i] < best[0]:
            best = (float(beta[i]), in_r[i].copy())
    in_r = best[1]
    left = tuple(v for v, r in zip(s, in_r) if not r)
    right = tuple(v for v, r in zip(s, in_r) if r)
    return OracleResult(bipartiteness_ratio(g, left, right).beta, left, right)


# -- dense spectral machinery ---------------------------------------------------------


def dense_matrices(g: Graph):
    """Dense (A, D, M, 𝓛) with M = I - D^{-1}A and 𝓛 = I - D^{-1/2} A D^{-1/2}."""
    a = g.adjacency_dense()
    d = g.degree
    eye = np.eye(g.n)
    m = eye - a / d[:, None]
    s = 1.0 / np.sqrt(d)
    lap = eye - s[:, None] * a * s[None, :]
    return a, np.diag(d), m, lap


@dataclass(frozen=True)
class SpectrumReport:
    """Ascending eigenvalues of 𝓛 with orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def top(self):
        return float(self.eigenvalues[-1])

    def coefficients(self, vec):
        return self.eigenvectors.T @ np.asarray(vec, dtype=np.float64)

    def h_norm(self, vec, threshold):
        """sqrt(Σ_{i: λ_i >= threshold} <vec, v'_i>^2)."""
        c = self.coefficients(vec)
        return float(np.sqrt(np.sum(c[self.eigenvalues >= threshold] ** 2)))

    def to_dict(self):
        return {"eigenvalues": self.eigenvalues.tolist()}


def dense_spectrum(g: Graph, max_n=256) -> SpectrumReport:
    if g.n > max_n:
        raise BudgetExceededError(f"oracle budget exceeded: n={g.n} > max_n={max_n}")
    _, _, _, lap = dense_matrices(g)
    vals, vecs = np.linalg.eigh(lap)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    resid = np.linalg.norm(lap @ vecs - vecs * vals[None, :], axis=0)
    if np.any(resid > 1e-8):
        raise ArithmeticError(f"eigensolver residual {resid.max():.3g} exceeds 1e-8")
    rotated = vecs.T @ lap @ vecs
    off = np.abs(rotated - np.diag(np.diag(rotated))).max() if g.n > 1 else 0.0
    if off > 1e-10:
        raise ArithmeticError(f"eigenbasis leaves off-diagonal mass {off:.3g} > 1e-10")
    return SpectrumReport(vals, vecs)


def trace_identity_check(g: Graph, T, max_n=256, max_T=64, rtol=1e-6, every_step=False) -> CheckReport:
    """Σ_v (χ_v M^T)(v) computed with sparse chains against Σ_i λ_i^T.

    With ``every_step`` the identity is checked for each step 0..T from the
    same chains.
    """
    if g.n > max_n or T > max_T:
        raise BudgetExceededError(f"oracle budget exceeded: n={g.n}, T={T}")
    walk = np.zeros(T + 1)
    for v in range(g.n):
        q = indicator(g, v)
        walk[0] += 1.0
        for t in range(1, T + 1):
            q = multiply_m(q)
            walk[t] += q[v]
    lam = dense_spectrum(g, max_n).eigenvalues
    report = CheckReport("trace_identity")
    for t in range(T + 1) if every_step else (T,):
        rhs = float(np.sum(lam**t))
        err = abs(walk[t] - rhs)
        report.record(err, rtol * max(1.0, abs(rhs)), 0.0, T=t, trace_walk=float(walk[t]), trace_spectral=rhs)
    return report


def signed_indicators(g: Graph, left, right):
    """(ρ_U, ψ_U) as dense vectors: ±d/vol(U) and ±sqrt(d/vol(U)) on L/R."""
    left = list(left)
    right = list(right)
    vol = float(g.degree[left + right].sum())
    rho = np.zeros(g.n)
    psi = np.zeros(g.n)
    for ids, sign in ((left, 1.0), (right, -1.0)):
        rho[ids] = sign * g.degree[ids] / vol
        psi[ids] = sign * np.sqrt(g.degree[ids] / vol)
    return rho, psi


def psi_identities_check(g: Graph, left, right, t_max, theta=None, max_n=256, tol=1e-9, tol_power=1e-8) -> CheckReport:
    """Check the quadratic-form identities behind the spectral lower bound.

    (i)   ψ(2I - 𝓛)ψ^T = (4e(L) + 4e(R) + e(U, U-bar)) / vol(U) <= 2β(L, R)
    (ii)  ρ M^t (L, -R) = ψ 𝓛^t ψ^T for t <= t_max (tolerance relative to
          max(1, |value|))
    (iii) ρ M^t (L, -R) >= (2 - 2θ)^t whenever β(L, R) <= θ
    plus Σ λ_i^t α_i^2 >= (Σ λ_i α_i^2)^t for the expansion ψ = Σ α_i v'_i.
    """
    if g.n > max_n:
        raise BudgetExceededError(f"oracle budget exceeded: n={g.n} > max_n={max_n}")
    pair = bipartiteness_ratio(g, left, right)
    left, right = list(pair.left), list(pair.right)
    theta = pair.beta if theta is None else theta
    _, _, _, lap = dense_matrices(g)
    rho, psi = signed_indicators(g, left, right)
    report = CheckReport("psi_identities")

    report.record(abs(float(psi @ psi) - 1.0), 1e-12, 0.0, identity="unit_norm")
    quad = float(psi @ (2 * psi - lap @ psi))
    closed = (4 * pair.e_l + 4 * pair.e_r + pair.e_boundary) / pair.vol_u
    report.record(abs(quad - closed), tol, 0.0, identity="quadratic_form")
    report.record(closed, 2 * pair.beta, tol, identity="le_two_beta")

    spec = dense_spectrum(g, max_n)
    alpha2 = spec.coefficients(psi) ** 2
    first = float(np.sum(spec.eigenvalues * alpha2))
    r = SignedVec.from_dense(g, rho)
    y = psi.copy()
    for t in range(t_max + 1):
        if t > 0:
            r = multiply_m(r)
            y = y @ lap
        walk = signed_mass(r, left, right)
        quad_t = float(y @ psi)
        report.record(abs(walk - quad_t), tol_power * max(1.0, abs(quad_t)), 0.0, identity="power", t=t)
        if t >= 1:
            lam_t = float(np.sum(np.clip(spec.eigenvalues, 0, None) ** t * alpha2))
            report.record(max(first, 0.0) ** t, lam_t, 1e-9 * max(1.0, lam_t), identity="chebyshev", t=t)
        if pair.beta <= theta:
            bound = (2 - 2 * theta) ** t
            report.record(bound, walk, tol * max(1.0, bound), identity="lower_bound", t=t)
    return report


def good_seed_set(g: Graph, left, right, theta, t, max_n=2048):
    """U^t = {v ∈ U : |χ_v M^t|(U) >= (2 - 6θ)^t / 400}, plus a volume report.

    Requires β(L, R) <= θ < 1/3. The report asserts vol(U^t) >= vol(U)/2.
    """
    if not theta < 1 / 3:
        raise ValidationError(f"theta must be < 1/3, got {theta}")
    pair = bipartiteness_ratio(g, left, right)
    if pair.beta > theta:
        raise ValidationError(f"beta(L, R) = {pair.beta:.6g} exceeds theta = {theta}")
    if g.n > max_n:
        raise BudgetExceededError(f"oracle budget exceeded: n={g.n} > max_n={max_n}")
    u = np.array(pair.union, dtype=np.int64)
    threshold = (2 - 6 * theta) ** t / 400
    chosen = []
    for v in u.tolist():
        q = indicator(g, v)
        for _ in range(t):
            q = multiply_m(q)
        mass = float(np.abs(q.to_dense()[u]).sum())
        if mass >= threshold:
            chosen.append(v)
    report = CheckReport("good_seed_set")
    vol_t = float(g.degree[chosen].sum()) if chosen else 0.0
    report.record(pair.vol_u / 2, vol_t, 1e-12, t=t, vol_ut=vol_t, vol_u=pair.vol_u)
    return chosen, report


def connected_graphs_up_to(n_max):
    """All connected graphs on 2..n_max vertices up to isomorphism (networkx atlas, n_max <= 7).

    The single-vertex graph is skipped: it has no edges.
    """
    import networkx as nx

    if n_max > 7:
        raise BudgetExceededError("graph atlas only covers up to 7 vertices")
    out = []
    for h in nx.graph_atlas_g():
        if 2 <= h.number_of_nodes() <= n_max and nx.is_connected(h):
            out.append(Graph.from_edges(list(h.edges()), n=h.number_of_nodes()))
    return out


def all_pairs(n):
    """Every (L, R) assignment over n vertices; for tiny cross-checks only."""
    for digits in itertools.product(range(3), repeat=n):
        left = [v for v, x in enumerate(digits) if x == 1]
        right = [v for v, x in enumerate(digits) if x == 2]
        if left or right:
            yield left, right
