"""The sweep potential J(p, x) and executable checks of its inequalities.

``J(p, x)`` is the largest |p|-mass that fractional vertex weights of total
volume ``x`` can capture. Greedily filling vertices in sweep order gives it
in closed form: a piecewise linear, concave, non-decreasing curve with
breakpoints at the sweep-prefix volumes, flat at ``||p||_1`` beyond the
support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, ValidationError
from .sweep import sweep, sweep_order
from .vecops import SignedVec, TruncationSchedule, indicator, multiply_m, truncate


@dataclass(frozen=True)
class PotentialCurve:
    xs: np.ndarray
    js: np.ndarray
    total_mass: float
    vol_g: float

    @property
    def breakpoints(self):
        return list(zip(self.xs.tolist(), self.js.tolist()))

    def __call__(self, x):
        return np.interp(x, self.xs, self.js)


def potential_curve(p: SignedVec) -> PotentialCurve:
    g = p.graph
    order, _ = sweep_order(p, "support")
    xs = np.concatenate([[0.0], np.cumsum(g.degree[order])])
    js = np.concatenate([[0.0], np.cumsum(np.abs(p.vals[np.searchsorted(p.ids, order)]))])
    if xs[-1] < g.total_volume:
        xs = np.append(xs, g.total_volume)
        js = np.append(js, js[-1])
    return PotentialCurve(xs, js, float(js[-1]), g.total_volume)


def potential(p: SignedVec, x):
    """Evaluate J(p, x) for ``0 <= x <= vol(G)`` (scalar or array)."""
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 0) or np.any(xa > p.graph.total_volume):
        raise ValidationError(f"x must lie in [0, {p.graph.total_volume}]")
    out = potential_curve(p)(xa)
    return float(out) if np.ndim(out) == 0 else out


def potential_edge_view(p: SignedVec, x):
    """J(p, x) via the directed-edge view: sum of the top-x values |p(u)|/d(u).

    Only defined for unweighted graphs, where vertex u contributes d(u)
    directed edges. Fractional x interpolates between neighbouring integers.
    """
    g = p.graph
    if not np.all(g.weights == 1.0):
        raise ValidationError("edge view requires an unweighted graph")
    deg = g.counts
    vals = np.repeat(np.abs(p.to_dense()) / g.degree, deg)
    vals = -np.sort(-vals)
    cum = np.concatenate([[0.0], np.cumsum(vals)])
    x = float(x)
    if x < 0 or x > len(vals):
        raise ValidationError(f"x must lie in [0, {len(vals)}]")
    lo = math.floor(x)
    r = x - lo
    if r == 0:
        return float(cum[lo])
    return float((1 - r) * cum[lo] + r * cum[lo + 1])


@dataclass
class CheckReport:
    """Outcome of an inequality checker; serialises to the documented JSON shape."""

    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    max_slack_used: float = 0.0
    applicable: bool = True
    note: str = ""

    @property
    def ok(self):
        return not self.violations

    def record(self, lhs, rhs, slack, **where):
        self.checked += 1
        excess = lhs - rhs
        if excess > slack:
            self.violations.append({"lhs": lhs, "rhs": rhs, **where})
        elif excess > 0:
            self.max_slack_used = max(self.max_slack_used, excess)

    def to_dict(self):
        d = {
            "name": self.name,
            "checked": self.checked,
            "violations": self.violations,
            "max_slack_used": self.max_slack_used,
        }
        if not self.applicable:
            d["status"] = "not applicable"
        if self.note:
            d["note"] = self.note
        return d


def slack_for(t, base=1e-9):
    """Absolute slack up to t = 40, relative to 2^t afterwards."""
    return base if t <= 40 else 1e-12 * 2.0**t


def check_convergence_lemma(p: SignedVec, tol=1e-9, sets_from="product") -> CheckReport:
    """Check J(pM, x) <= J(p, x + Θx) + J(p, x - Θx) over sweep prefixes.

    With ``sets_from="product"`` the prefixes S_i, their B-ratio Θ_i and
    x = vol(S_i) come from sweeping ``pM``, the vector whose potential is
    bounded. ``sets_from="input"`` takes them from sweeping ``p`` instead.
    """
    if not len(p):
        raise ValidationError("cannot check the zero vector")
    if sets_from not in ("product", "input"):
        raise ValidationError("sets_from must be 'product' or 'input'")
    q = multiply_m(p)
    report = CheckReport("convergence_lemma")
    if not len(q):
        return report
    vol_g = p.graph.total_volume
    Jp, Jq = potential_curve(p), potential_curve(q)
    out = sweep(q if sets_from == "product" else p, scope="all")
    slack = max(tol, 1e-12 * p.l1_norm())
    for i, (x, theta) in enumerate(zip(out.volumes, out.betas)):
        theta = min(max(float(theta), 0.0), 1.0)
        lhs = float(Jq(x))
        rhs = float(Jp(min(x * (1 + theta), vol_g)) + Jp(max(x * (1 - theta), 0.0)))
        report.record(lhs, rhs, slack, prefix=i + 1, x=float(x), theta=theta)
    return report


def check_truncation_proposition(
    g, v, schedule: TruncationSchedule, t_max, test_sets=(), budget=20_000_000
) -> CheckReport:
    """Run the exact chain q_t = χ_v M^t beside the truncated chain and check its bounds.

    Checked for every t <= t_max: ||q̂_t||_1 <= 2^t, the entrywise bound
    |r_t - q_t| <= ξ_0 t 2^t d, and for each set U in ``test_sets`` the chain
    |q̂_t|(U) >= |r_t|(U) >= |q_t|(U) - ξ_0 t 2^t vol(U).
    """
    if g.n * (t_max + 1) > budget:
        raise BudgetExceededError(
            f"oracle budget exceeded: n*(t_max+1) = {g.n * (t_max + 1)} > {budget}"
        )
    report = CheckReport("truncation_proposition")
    deg = g.degree
    sets = [np.unique(np.asarray(list(u), dtype=np.int64)) for u in test_sets]
    q = indicator(g, v)
    qhat = q
    r = truncate(qhat, schedule.xi(0))
    for t in range(t_max + 1):
        if t > 0:
            q = multiply_m(q)
            qhat = multiply_m(r)
            r = truncate(qhat, schedule.xi(t))
        slack = slack_for(t)
        report.record(qhat.l1_norm(), 2.0**t, slack, t=t, bound="l1")
        gap = np.abs(r.to_dense() - q.to_dense())
        allow = schedule.xi0 * t * 2.0**t * deg
        worst = int(np.argmax(gap - allow))
        report.record(float(gap[worst]), float(allow[worst]), slack, t=t, bound="entrywise", vertex=worst)
        for u in sets:
            a_qhat = float(np.abs(qhat.to_dense()[u]).sum())
            a_r = float(np.abs(r.to_dense()[u]).sum())
            a_q = float(np.abs(q.to_dense()[u]).sum())
            report.record(a_r, a_qhat, slack, t=t, bound="truncated_mass_le_product")
            lower = a_q - schedule.xi0 * t * 2.0**t * float(deg[u].sum())
            report.record(lower, a_r, slack, t=t, bound="local_lower")
    return report


@dataclass
class ChainRecord:
    """The vectors one detector run swept from a single seed.

    ``vectors[t]`` is the vector at step t (index 0 is χ_seed); ``swept``
    lists the steps whose sweep sets were candidates; ``scope`` is the
    sweep scope used.
    """

    graph: object
    seed: int
    vectors: list
    swept: list
    scope: str


def upper_bound_audit(record: ChainRecord, theta, K, tol=1e-9) -> CheckReport:
    """Check J(q_t, x) <= 2^t x / K + sqrt(x / d(v)) (2 - Θ²/4)^t at every breakpoint.

    Applies only when every admitted sweep set (volume <= K) in the run had
    B-ratio at least ``theta``; otherwise the report is marked not applicable.
    """
    report = CheckReport("upper_bound_audit")
    g = record.graph
    for t in record.swept:
        vec = record.vectors[t]
        if not len(vec):
            continue
        out = sweep(vec, scope=record.scope, cap=K, stop_at_cap=True)
        if len(out.betas) and out.betas.min() < theta - 1e-12:
            report.applicable = False
            report.note = f"sweep at t={t} admitted a set with beta {out.betas.min():.6g} < {theta}"
            return report
    d_v = float(g.degree[record.seed])
    base = 2.0 - theta * theta / 4.0
    for t, vec in enumerate(record.vectors):
        if not len(vec):
            continue
        curve = potential_curve(vec)
        for x, j in zip(curve.xs, curve.js):
            rhs = 2.0**t * x / K + math.sqrt(x / d_v) * base**t
            report.record(float(j), rhs, max(tol, slack_for(t)), t=t, x=float(x))
    return report
