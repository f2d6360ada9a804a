"""Command-line front end.

Exit codes: 0 success, 1 invalid input (flags, files, graph format),
2 budget exceeded, 3 a diagnostic check reported violations.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from .errors import BudgetExceededError, GraphFormatError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3

RELAXED_NOTE = (
    "note: using relaxed constants (default); the literal proof constants only "
    "carry their guarantees for k > 2560000. Pass --constants paper to use them."
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _tokens(text):
    return [t for t in (s.strip() for s in text.split(",")) if t]


def build_parser():
    p = _Parser(prog="bipdense", description="Find small dense bipartite-like subgraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("--graph", required=True, help="edge-list path, or - for stdin")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
        fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
        sp.set_defaults(fmt="json")
        sp.add_argument("--out", default="-", help="output path (default stdout)")

    def detect_flags(sp):
        sp.add_argument("--k", type=float, required=True, help="target volume")
        sp.add_argument("--theta", type=float, help="target B-ratio")
        sp.add_argument("--eps", type=float, required=True)
        sp.add_argument("--constants", choices=("paper", "relaxed"), default=None)
        sp.add_argument("--T", type=int, dest="T_override", help="override the iteration count")
        sp.add_argument("--cap", type=float, help="override the volume cap")

    sp = sub.add_parser("locdb", help="local detector from one seed vertex")
    common(sp)
    detect_flags(sp)
    sp.add_argument("--seed", required=True, help="seed vertex token")
    sp.add_argument("--xi0", type=float, help="override the base truncation threshold")
    sp.add_argument("--theta-grid", action="store_true", help="search θ over {1/4, 1/8, ...}")
    sp.add_argument("--theta-floor", type=float, default=1 / 64)

    sp = sub.add_parser("swpdb", help="global sweep detector")
    common(sp)
    detect_flags(sp)
    sp.add_argument("--uncapped", action="store_true", help="admit sweep sets of any volume")
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("eigsweep", help="sweep of the top Laplacian eigenvector")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-13)
    sp.add_argument("--max-iters", type=int, default=100_000)
    sp.add_argument("--rng-seed", type=int, default=0)

    sp = sub.add_parser("profile", help="dense bipartite profile estimate")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("bratio", help="bipartiteness ratio of a given pair")
    common(sp)
    sp.add_argument("--left", type=_tokens, required=True)
    sp.add_argument("--right", type=_tokens, default=[])

    sp = sub.add_parser("oracle", help="exact brute-force / dense spectral answers")
    common(sp)
    sp.add_argument("what", choices=("beta", "set", "profile", "spectrum"))
    sp.add_argument("--set", type=_tokens, dest="vset")
    sp.add_argument("--k", type=float)
    sp.add_argument("--max-n", type=int, default=14)

    sp = sub.add_parser("check", help="run diagnostic inequality checkers")
    common(sp)
    sp.add_argument("which", choices=("all", "convergence", "truncation", "trace", "psi", "upper"))
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--t-max", type=int, default=12)
    sp.add_argument("--xi0", type=float, default=1e-3)
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--left", type=_tokens)
    sp.add_argument("--right", type=_tokens)

    sp = sub.add_parser("gen", help="generate a planted instance")
    common(sp, graph=False)
    sp.add_argument("--n-background", type=int, required=True)
    sp.add_argument("--k-left", type=int, required=True)
    sp.add_argument("--k-right", type=int, required=True)
    sp.add_argument("--p-cross", type=float, default=1.0)
    sp.add_argument("--p-noise", type=float, default=0.0)
    sp.add_argument("--n-attach", type=float, default=0.0)
    sp.add_argument("--background", choices=("er", "regular"), default="er")
    sp.add_argument("--background-p", type=float, default=0.0)
    sp.add_argument("--background-degree", type=int, default=3)
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--prefix", help="write <prefix>.el and <prefix>.json")
    return p


def _load(path, stdin):
    from .graph import load_graph

    if path == "-":
        return load_graph(stdin)
    try:
        return load_graph(path)
    except FileNotFoundError:
        raise ValidationError(f"graph file not found: {path}") from None


def _detect_params(args, algo, stderr):
    from .detect import DetectParams

    constants = args.constants
    if constants is None:
        constants = "relaxed"
        print(RELAXED_NOTE, file=stderr)
    if args.theta is None and not getattr(args, "theta_grid", False):
        raise ValidationError("--theta is required unless --theta-grid is given")
    theta = args.theta if args.theta is not None else 0.25
    cap = args.cap
    if getattr(args, "uncapped", False):
        cap = math.inf
    if algo == "swpdb":
        return DetectParams.swpdb(args.k, theta, args.eps, constants, T=args.T_override, cap=cap)
    return DetectParams.locdb(
        args.k, theta, args.eps, constants, T=args.T_override, cap=cap, xi0=args.xi0
    )


def _trace_csv(trace):
    buf = io.StringIO()
    keys = list(trace[0]) if trace else ["t", "best_beta"]
    buf.write(",".join(keys) + "\n")
    for row in trace:
        buf.write(",".join("" if row[k] is None else repr(row[k]) for k in keys) + "\n")
    return buf.getvalue()


def _merge(name, runs):
    from .potential import CheckReport

    out = CheckReport(name)
    for r in runs:
        out.checked += r.checked
        out.violations += r.violations
        out.max_slack_used = max(out.max_slack_used, r.max_slack_used)
        if not r.applicable:
            out.note = out.note or r.note
    return out


def _run_checks(g, args):
    from . import oracle
    from .potential import (
        check_convergence_lemma,
        check_truncation_proposition,
        upper_bound_audit,
    )
    from .detect import DetectParams, swpdb
    from .vecops import SignedVec, TruncationSchedule

    rng = np.random.default_rng(args.rng_seed)
    which = args.which
    reports = []
    skipped = []

    if which in ("all", "convergence"):
        runs = []
        for _ in range(args.samples):
            size = int(rng.integers(1, g.n + 1))
            ids = rng.choice(g.n, size=size, replace=False)
            runs.append(check_convergence_lemma(SignedVec(g, ids, rng.standard_normal(size))))
        reports.append(_merge("convergence_lemma", runs))

    if which in ("all", "truncation"):
        runs = []
        for v in rng.choice(g.n, size=min(args.samples, g.n), replace=False).tolist():
            try:
                runs.append(check_truncation_proposition(g, v, TruncationSchedule(args.xi0), args.t_max))
            except BudgetExceededError:
                if which != "all":
                    raise
                skipped.append("truncation_proposition")
                break
        if runs:
            reports.append(_merge("truncation_proposition", runs))

    dense_ok = g.n <= 256
    if which in ("all", "trace"):
        if dense_ok or which == "trace":
            reports.append(oracle.trace_identity_check(g, min(args.t_max, 64), every_step=True))
        else:
            skipped.append("trace_identity")

    if which in ("all", "psi"):
        if dense_ok or which == "psi":
            if args.left or args.right:
                pairs = [(g.vertex_ids(args.left or []), g.vertex_ids(args.right or []))]
            else:
                pairs = []
                for _ in range(args.samples):
                    labels = rng.integers(0, 3, size=g.n)
                    if not (labels > 0).any():
                        labels[0] = 1
                    pairs.append((np.flatnonzero(labels == 1).tolist(), np.flatnonzero(labels == 2).tolist()))
            runs = [oracle.psi_identities_check(g, l, r, min(args.t_max, 20)) for l, r in pairs]
            reports.append(_merge("psi_identities", runs))
        else:
            skipped.append("psi_identities")

    if which in ("all", "upper"):
        k = max(g.total_volume / 4, 4.5)
        params = DetectParams.swpdb(k, 0.1, 0.4, "relaxed", T=min(args.t_max, 12))
        seeds = rng.choice(g.n, size=min(args.samples, g.n), replace=False).tolist()
        run = swpdb(g, params, seeds=seeds, record_chains=True)
        runs = [upper_bound_audit(chain, run.beta, params.K_cap) for chain in run.chains]
        reports.append(_merge("upper_bound_audit", runs))
    return reports, skipped


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        return _main(argv, stdin, stdout, stderr)
    except BudgetExceededError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_BUDGET
    except (ValidationError, GraphFormatError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_INVALID


def _main(argv, stdin, stdout, stderr):
    import warnings

    from . import detect, oracle
    from .graph import bipartiteness_ratio

    args = build_parser().parse_args(argv)
    cmd = args.command
    code = EXIT_OK

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if cmd in ("locdb", "swpdb"):
            params = _detect_params(args, cmd, stderr)
            g = _load(args.graph, stdin)
            if cmd == "swpdb":
                if args.threads < 1:
                    raise ValidationError("--threads must be >= 1")
                res = detect.swpdb(g, params, threads=args.threads)
            elif args.theta_grid:
                over = {"T": args.T_override, "cap": args.cap, "xi0": args.xi0}
                res = detect.locdb_theta_grid(
                    g, g.vertex_id(args.seed), args.k, args.eps, params.constants,
                    theta_floor=args.theta_floor, **{k: v for k, v in over.items() if v is not None},
                )
            else:
                res = detect.locdb(g, g.vertex_id(args.seed), params)
            payload = res.to_dict(g)
            text = _trace_csv(res.trace) if args.fmt == "csv" else None
        elif cmd == "eigsweep":
            g = _load(args.graph, stdin)
            res = detect.eigen_sweep(g, tol=args.tol, max_iters=args.max_iters, rng_seed=args.rng_seed)
            payload, text = res.to_dict(g), None
        elif cmd == "profile":
            g = _load(args.graph, stdin)
            res = detect.profile_estimate(g, args.k, args.eta, args.eps, threads=args.threads)
            payload = res.to_dict(g)
            text = _trace_csv(res.trace) if args.fmt == "csv" else None
        elif cmd == "bratio":
            g = _load(args.graph, stdin)
            payload = bipartiteness_ratio(g, g.vertex_ids(args.left), g.vertex_ids(args.right)).to_dict(g)
            text = None
        elif cmd == "oracle":
            g = _load(args.graph, stdin)
            if args.what == "beta":
                payload = oracle.brute_force_beta(g, max_n=args.max_n).to_dict(g)
            elif args.what == "set":
                if not args.vset:
                    raise ValidationError("oracle set requires --set")
                payload = oracle.brute_force_beta_of_set(g, g.vertex_ids(args.vset)).to_dict(g)
            elif args.what == "profile":
                if args.k is None:
                    raise ValidationError("oracle profile requires --k")
                payload = oracle.brute_force_profile(g, args.k, max_n=args.max_n).to_dict(g)
            else:
                payload = oracle.dense_spectrum(g).to_dict()
            text = None
        elif cmd == "check":
            g = _load(args.graph, stdin)
            reports, skipped = _run_checks(g, args)
            bad = [r for r in reports if r.violations]
            payload = {
                "ok": not bad,
                "checks": [r.to_dict() for r in reports],
                "skipped": skipped,
            }
            if args.fmt == "csv":
                rows = ["name,checked,violations,max_slack_used"]
                rows += [f"{r.name},{r.checked},{len(r.violations)},{r.max_slack_used!r}" for r in reports]
                text = "\n".join(rows) + "\n"
            else:
                text = None
            code = EXIT_VIOLATION if bad else EXIT_OK
        else:  # gen
            from .synth import PlantSpec, generate, write_instance

            spec = PlantSpec(
                n_background=args.n_background, k_left=args.k_left, k_right=args.k_right,
                p_cross=args.p_cross, p_noise_internal=args.p_noise, n_attach=args.n_attach,
                background_model=args.background, background_p=args.background_p,
                background_degree=args.background_degree, rng_seed=args.rng_seed,
            )
            inst = generate(spec)
            if args.prefix:
                write_instance(inst, args.prefix)
            payload = inst.sidecar()
            payload["n"] = inst.graph.n
            payload["m"] = inst.graph.edge_count
            text = inst.graph.to_edgelist() if args.fmt == "csv" else None

    for w in caught:
        print(f"warning: {w.message}", file=stderr)
    if text is None:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out == "-":
        stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
