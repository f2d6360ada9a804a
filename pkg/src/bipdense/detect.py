"""Detectors for pair subgraphs with small bipartiteness ratio.

* :func:`swpdb` sweeps ``χ_v M^t`` for every seed ``v`` and every ``t <= T``
  and keeps the best sweep set of volume at most ``K``.
* :func:`locdb` runs the truncated chain from one seed; its work depends
  on ``1/ξ_0`` and ``T`` only, not on the size of the graph.
* :func:`eigen_sweep` sweeps an approximate top eigenvector of the
  normalised Laplacian.
* :func:`profile_estimate` runs the swpdb loop with the ``(T, K)`` choice
  that ties the result to ``λ_{n-k}``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ValidationError
from .graph import Graph, PairSubgraph
from .potential import ChainRecord
from .sweep import sweep
from .vecops import SignedVec, WorkCounter, indicator, multiply_m, truncate

CONSTANTS = ("paper", "relaxed")
LOCDB_K_GATE = 2_560_000


@dataclass(frozen=True)
class DetectParams:
    """Inputs (k, θ, ε) plus every derived constant a run used.

    ``T_raw`` is the unrounded iteration count from the formula and
    ``T_steps = max(1, ceil(T_raw))``. ``K_cap`` may be ``inf`` (uncapped).
    """

    algorithm: str
    k: float
    theta: float
    eps: float
    constants: str
    T_raw: float
    T_steps: int
    K_cap: float
    xi0: float | None = None
    overrides: tuple = ()
    warnings: tuple = ()

    @classmethod
    def swpdb(cls, k, theta, eps, constants="relaxed", T=None, cap=None):
        """T = ε ln(2k) / (2θ), K = 2 k^{1+ε} (both profiles).

        The ``"paper"`` profile enforces k > 4, 0 < θ < 1/4, 0 < ε < 1/2; the
        relaxed profile records range violations as warnings.
        """
        notes = _basic_checks(k, theta, eps, constants)
        gates = []
        if not k > 4:
            gates.append(f"k={k} <= 4")
        if not theta < 0.25:
            gates.append(f"theta={theta} >= 1/4")
        if not eps < 0.5:
            gates.append(f"eps={eps} >= 1/2")
        notes += _apply_gates(gates, constants, hard=True)
        T_raw = eps * math.log(2 * k) / (2 * theta)
        K = 2 * k ** (1 + eps)
        return cls._build("swpdb", k, theta, eps, constants, T_raw, K, None, T, cap, None, notes)

    @classmethod
    def locdb(cls, k, theta, eps, constants="relaxed", T=None, cap=None, xi0=None):
        """Local-run constants.

        paper:   T = ε ln(1600k) / (6θ), ξ_0 = k^{-1-ε} / (800 T), cap = 1600 k^{1+ε}
        relaxed: T = ε ln(2k) / (2θ),    ξ_0 = k^{-1-ε} / T,         cap = 2 k^{1+ε}

        ξ_0 uses the unrounded T. The ``"paper"`` profile rejects θ >= 1/3 or
        ε >= 1/2 and warns when k <= 2,560,000.
        """
        notes = _basic_checks(k, theta, eps, constants)
        gates = []
        if not theta < 1 / 3:
            gates.append(f"theta={theta} >= 1/3")
        if not eps < 0.5:
            gates.append(f"eps={eps} >= 1/2")
        notes += _apply_gates(gates, constants, hard=True)
        if constants == "paper" and not k > LOCDB_K_GATE:
            notes += _apply_gates([f"k={k} <= {LOCDB_K_GATE}: guarantees are asymptotic only"], constants, hard=False)
        if constants == "paper":
            T_raw = eps * math.log(1600 * k) / (6 * theta)
            xi = k ** (-1 - eps) / (800 * T_raw)
            K = 1600 * k ** (1 + eps)
        else:
            T_raw = eps * math.log(2 * k) / (2 * theta)
            xi = k ** (-1 - eps) / T_raw if T_raw > 0 else 1.0 / k
            K = 2 * k ** (1 + eps)
        return cls._build("locdb", k, theta, eps, constants, T_raw, K, xi, T, cap, xi0, notes)

    @classmethod
    def _build(cls, algo, k, theta, eps, constants, T_raw, K, xi, T, cap, xi0, notes):
        overrides = []
        if T is not None:
            if int(T) < 1:
                raise ValidationError(f"T must be >= 1, got {T}")
            overrides.append(("T", int(T)))
        if cap is not None:
            if not cap > 0:
                raise ValidationError(f"cap must be positive, got {cap}")
            overrides.append(("cap", float(cap)))
            K = float(cap)
        if xi0 is not None:
            if not xi0 > 0:
                raise ValidationError(f"xi0 must be positive, got {xi0}")
            overrides.append(("xi0", float(xi0)))
            xi = float(xi0)
        T_steps = int(T) if T is not None else max(1, math.ceil(T_raw))
        return cls(algo, k, theta, eps, constants, T_raw, T_steps, K, xi, tuple(overrides), tuple(notes))

    def to_dict(self):
        d = asdict(self)
        d["overrides"] = dict(self.overrides)
        d["warnings"] = list(self.warnings)
        if math.isinf(self.K_cap):
            d["K_cap"] = None
        return d


def _basic_checks(k, theta, eps, constants):
    if constants not in CONSTANTS:
        raise ValidationError(f"constants must be one of {CONSTANTS}, got {constants!r}")
    if not k > 0.5:
        raise ValidationError(f"k must exceed 1/2, got {k}")
    if not theta > 0:
        raise ValidationError(f"theta must be positive, got {theta}")
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    return []


def _apply_gates(gates, constants, hard):
    if not gates:
        return []
    msg = "; ".join(gates)
    if constants == "paper" and hard:
        raise ValidationError(f"parameter range violated under paper constants: {msg}")
    warnings.warn(msg, stacklevel=3)
    return gates


@dataclass
class DetectionResult:
    """Best pair subgraph found by a detector, with provenance and work counters.

    ``status`` is ``"ok"`` or ``"truncated_to_zero"`` (no sweep set was ever
    admitted); ``best`` is ``None`` in the latter case.
    """

    best: PairSubgraph | None
    found_at: tuple | None
    params: object
    work: dict
    trace: list = field(default_factory=list)
    status: str = "ok"
    extras: dict = field(default_factory=dict)
    chains: list | None = None

    @property
    def beta(self):
        return self.best.beta if self.best is not None else math.inf

    def to_dict(self, graph: Graph):
        params = self.params.to_dict() if hasattr(self.params, "to_dict") else dict(self.params)
        found = None
        if self.found_at is not None:
            seed, t, i = self.found_at
            found = {"seed": graph.tokens[seed] if seed is not None else None, "t": t, "i": i}
        return {
            "status": self.status,
            "best": self.best.to_dict(graph) if self.best is not None else None,
            "found_at": found,
            "params": params,
            "work": self.work,
            "trace": self.trace,
            **{k: _jsonable(v) for k, v in self.extras.items()},
        }


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and math.isinf(v):
        return None
    return v


# -- global sweep ---------------------------------------------------------------


def _seed_chain(g, v, T_steps, cap, record):
    """Sweep χ_v M^t for t = 0..T_steps; stop early once β = 0."""
    counter = WorkCounter()
    q = indicator(g, v)
    best = None
    step_best = []
    vectors = [q] if record else None
    sweep_cap = None if math.isinf(cap) else cap
    for t in range(T_steps + 1):
        if t > 0:
            q = multiply_m(q, counter)
            if record:
                vectors.append(q)
            if not len(q):
                break
        out = sweep(q, scope="all", cap=sweep_cap, stop_at_cap=sweep_cap is not None, counter=counter)
        step_best.append(out.best.beta if out.best is not None else math.inf)
        if out.best is not None:
            key = (out.best.beta, v, t, out.best_index + 1)
            if best is None or key < best[0]:
                best = (key, out.best)
        if best is not None and best[1].beta == 0.0:
            counter.early_exits += 1
            break
    chain = ChainRecord(g, v, vectors, list(range(len(vectors))), "all") if record else None
    return best, counter, step_best, chain


def _global_sweeps(g, params, seeds, threads, record):
    seeds = list(range(g.n)) if seeds is None else [int(s) for s in g.check_ids(seeds)]
    run = lambda v: _seed_chain(g, v, params.T_steps, params.K_cap, record)  # noqa: E731
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, seeds))
    else:
        results = [run(v) for v in seeds]

    best = None
    work = WorkCounter()
    per_t = [math.inf] * (params.T_steps + 1)
    chains = [] if record else None
    for found, counter, step_best, chain in results:
        work.m_multiplies += counter.m_multiplies
        work.edges_touched += counter.edges_touched
        work.sweeps += counter.sweeps
        work.early_exits += counter.early_exits
        for t, b in enumerate(step_best):
            per_t[t] = min(per_t[t], b)
        if found is not None and (best is None or found[0] < best[0]):
            best = found
        if record:
            chains.append(chain)
    trace = [{"t": t, "best_beta": None if math.isinf(b) else b} for t, b in enumerate(per_t)]
    if best is None:
        return DetectionResult(None, None, params, work.as_dict(), trace, "truncated_to_zero", chains=chains)
    (beta, v, t, i), pair = best
    return DetectionResult(pair, (v, t, i), params, work.as_dict(), trace, chains=chains)


def swpdb(g: Graph, params: DetectParams, threads=1, seeds=None, record_chains=False) -> DetectionResult:
    """Global sweep detector: best admitted sweep set of χ_v M^t over all v, t <= T.

    Ties in β resolve to the smallest (seed, t, prefix), so the result does
    not depend on ``threads``.
    """
    if params.algorithm not in ("swpdb", "profile"):
        raise ValidationError(f"swpdb needs swpdb parameters, got {params.algorithm!r}")
    return _global_sweeps(g, params, seeds, threads, record_chains)


# -- local sweep ------------------------------------------------------------------


def locdb(g: Graph, seed, params: DetectParams, record_chain=False) -> DetectionResult:
    """Local detector: sweep supp(q̂_t) of the truncated chain started at ``seed``.

    r_0 = [χ_seed]_{ξ_0}; for t = 1..T: q̂_t = r_{t-1} M, sweep supp(q̂_t),
    r_t = [q̂_t]_{ξ_0 2^t}. Sweep sets above the volume cap are not admitted.
    """
    if params.algorithm != "locdb":
        raise ValidationError(f"locdb needs locdb parameters, got {params.algorithm!r}")
    seed = int(g.check_ids([seed])[0])
    xi0 = params.xi0
    cap = None if math.isinf(params.K_cap) else params.K_cap
    counter = WorkCounter()
    chi = indicator(g, seed)
    r = truncate(chi, xi0)
    vectors = [chi] if record_chain else None
    best = None
    trace = []
    per_step = []
    touched = set()
    died_at = None
    for t in range(1, params.T_steps + 1):
        if not len(r):
            died_at = t
            break
        before = counter.edges_touched
        qhat = multiply_m(r, counter)
        if record_chain:
            vectors.append(qhat)
        if not len(qhat):
            per_step.append(counter.edges_touched - before)
            died_at = t
            break
        touched.update(qhat.ids.tolist())
        out = sweep(qhat, scope="support", cap=cap, counter=counter)
        per_step.append(counter.edges_touched - before)
        step = out.best.beta if out.best is not None else None
        trace.append({"t": t, "best_beta": step, "support": len(qhat)})
        if out.best is not None:
            key = (out.best.beta, t, out.best_index + 1)
            if best is None or key < best[0]:
                best = (key, out.best)
        r = truncate(qhat, xi0 * 2.0**t)
    if died_at is None and not len(r):
        died_at = params.T_steps + 1
    extras = {
        "edges_touched_per_step": per_step,
        "touched_vertices": len(touched),
        "chain_died_at": died_at,
    }
    chains = [ChainRecord(g, seed, vectors, list(range(1, len(vectors))), "support")] if record_chain else None
    if best is None:
        extras["diagnostic"] = (
            "truncation removed the seed indicator" if died_at == 1 else "no sweep set was admitted"
        )
        return DetectionResult(None, None, params, counter.as_dict(), trace, "truncated_to_zero", extras, chains)
    (beta, t, i), pair = best
    return DetectionResult(pair, (seed, t, i), params, counter.as_dict(), trace, "ok", extras, chains)


def theta_grid(floor=1 / 64, start=0.25):
    grid = []
    th = start
    while th >= floor * (1 - 1e-12):
        grid.append(th)
        th /= 2
    return grid


def locdb_theta_grid(g: Graph, seed, k, eps, constants="relaxed", theta_floor=1 / 64, **overrides):
    """Run :func:`locdb` for θ in {1/4, 1/8, ...} down to ``theta_floor`` and keep the best."""
    grid = theta_grid(theta_floor)
    best = None
    total = WorkCounter()
    runs = []
    for theta in grid:
        params = DetectParams.locdb(k, theta, eps, constants, **overrides)
        res = locdb(g, seed, params)
        for name, val in res.work.items():
            setattr(total, name, getattr(total, name) + val)
        runs.append({"theta": theta, "beta": None if res.best is None else res.best.beta})
        if res.best is not None and (best is None or res.best.beta < best.best.beta):
            best = res
    if best is None:
        res.extras.update({"theta_grid": grid, "grid_runs": runs})
        res.work = total.as_dict()
        return res
    best.work = total.as_dict()
    best.extras.update({"theta_grid": grid, "grid_runs": runs, "theta_chosen": best.params.theta})
    return best


# -- eigenvector sweep --------------------------------------------------------------


def _normalized_adjacency(g):
    import scipy.sparse as sp

    s = 1.0 / np.sqrt(g.degree)
    return sp.diags(s) @ g.to_scipy() @ sp.diags(s)


def is_connected(g):
    from scipy.sparse.csgraph import connected_components

    return connected_components(g.to_scipy(), directed=False)[0] == 1


def eigen_sweep(g: Graph, tol=1e-13, max_iters=100_000, rng_seed=0) -> DetectionResult:
    """Sweep an approximate top eigenvector of 𝓛 = I - D^{-1/2} A D^{-1/2}.

    Power iteration on 𝓛 (spectrum in [0, 2]) from a seeded Gaussian start
    stops when successive Rayleigh quotients differ by less than ``tol``.
    The iterate ``x`` becomes M's left-eigenvector coordinates ``x * sqrt(d)``
    and is swept over all vertices without a cap.
    """
    connected = is_connected(g)
    if not connected:
        warnings.warn("graph is disconnected; the top eigenspace may be degenerate", stacklevel=2)
    S = _normalized_adjacency(g)
    rng = np.random.default_rng(rng_seed)
    x = rng.standard_normal(g.n)
    x /= np.linalg.norm(x)
    lam = prev = math.nan
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        y = x - S @ x
        lam = float(x @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            converged = True
            break
        x = y / norm
        if abs(lam - prev) < tol:
            converged = True
            break
        prev = lam
    lam = float(x @ (x - S @ x))
    p = SignedVec.from_dense(g, x * np.sqrt(g.degree))
    counter = WorkCounter()
    out = sweep(p, scope="all", counter=counter)
    bound = math.sqrt(2 * max(0.0, 2 - lam))
    extras = {
        "lambda_estimate": lam,
        "bound": bound,
        "converged": converged,
        "iterations": it,
        "connected": connected,
    }
    params = {"tol": tol, "max_iters": max_iters, "rng_seed": rng_seed}
    return DetectionResult(
        out.best, (None, it, out.best_index + 1), params, counter.as_dict(), [], "ok", extras
    )


# -- dense bipartite profile ----------------------------------------------------------


def profile_estimate(g: Graph, k, eta, eps, threads=1, spectrum_max_n=256) -> DetectionResult:
    """Run the swpdb loop with T = ε ln k / (2η) and K = vol(G) / (0.5 k^{1-ε}).

    On graphs with at most ``spectrum_max_n`` vertices the result also reports
    whether λ_{n-k} >= 2 - 2η holds (the hypothesis under which
    β <= sqrt(16 (η/ε) log_k n) is guaranteed).
    """
    if int(k) != k or k < 1:
        raise ValidationError(f"k must be a positive integer, got {k}")
    k = int(k)
    if k >= g.n:
        raise ValidationError(f"k={k} must be smaller than n={g.n}")
    if not 0 < eta < 1:
        raise ValidationError(f"eta must lie in (0, 1), got {eta}")
    if not 0 < eps < 1:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    T_raw = eps * math.log(k) / (2 * eta)
    K = g.total_volume / (0.5 * k ** (1 - eps))
    params = DetectParams(
        "profile", k, eta, eps, "paper", T_raw, max(1, math.ceil(T_raw)), K
    )
    res = _global_sweeps(g, params, None, threads, False)
    guarantee = math.sqrt(16 * (eta / eps) * math.log(g.n) / math.log(k)) if k >= 2 else None
    res.extras["guarantee"] = guarantee
    res.extras["volume_cap"] = K
    if g.n <= spectrum_max_n:
        from .oracle import dense_spectrum

        lam = float(dense_spectrum(g).eigenvalues[g.n - k])
        res.extras["lambda_n_minus_k"] = lam
        res.extras["hypothesis_holds"] = bool(lam >= 2 - 2 * eta - 1e-12)
    else:
        res.extras["hypothesis_holds"] = None
    return res
