"""Command-line front door.

Subcommands wire the library together for file-based workflows:

* ``graph``      classify a graph: profile, distance-regularity, transitivity
* ``analyze``    audit a channel against a graph and report leakage/utility
* ``transform``  run the canonical-form pipeline on a channel
* ``synth``      synthesise the optimal mechanism for a graph and level
* ``compare``    side-by-side utility/leakage of two channels under priors
* ``oracle``     run the grid / hillclimb / random verification harness

Machine-readable output is stable: JSON is emitted with sorted keys and no
environment-dependent content, so identical inputs (and seeds) produce
byte-identical reports.
"""

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from .channels import (
    ChannelMatrix,
    DEFAULT_LN_TOL,
    PrivacyParameter,
    Prior,
    column_maxima_sum,
    dp_audit,
    format_fraction,
    leakage,
    min_capacity,
    min_entropy,
    posterior_min_entropy,
    posterior_success,
    prior_from_csv,
)
from .graphs import (
    DEFAULT_SEARCH_EFFORT,
    DEFAULT_SIZE_CAP,
    DisconnectedGraphError,
    Graph,
    build_family,
    common_profile,
    distance_profile,
    distances,
    is_distance_regular,
    vt_plus_certificate,
)
from .mechanisms import optimal_mechanism, truncated_geometric_fixture
from .oracle import SearchReport, grid_search_optimal, hillclimb_utility, random_dp_sample
from .transforms import canonicalize, to_diagonal_form

SIZE_CAP_ENV = "DPCHANNEL_SIZE_CAP"


def _size_cap(args):
    if args.size_cap is not None:
        return args.size_cap
    env = os.environ.get(SIZE_CAP_ENV)
    return int(env) if env else DEFAULT_SIZE_CAP


def _load_graph(args):
    if args.family:
        return build_family(args.family, size_cap=_size_cap(args))
    with open(args.graph_file, encoding="utf-8") as fh:
        return Graph.from_json(fh.read())


def _load_matrix(path):
    if path == "fixture:geometric":
        return truncated_geometric_fixture()
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return ChannelMatrix.from_json(text)
    return ChannelMatrix.from_csv(text)


def _load_prior(path, matrix):
    with open(path, encoding="utf-8") as fh:
        prior, labels = prior_from_csv(fh.read())
    if set(labels) == set(matrix.row_labels) and labels != matrix.row_labels:
        by_label = dict(zip(labels, prior.probs))
        prior = Prior(tuple(by_label[lab] for lab in matrix.row_labels))
    elif len(prior) != matrix.rows:
        raise ValueError("prior length does not match the matrix rows")
    return prior


def _privacy(args):
    if args.ratio is not None:
        return PrivacyParameter.from_ratio(args.ratio)
    if args.epsilon == "ln2":
        return PrivacyParameter.from_ratio(Fraction(1, 2))
    return PrivacyParameter.from_epsilon(float(args.epsilon))


def _emit(args, payload, text_lines):
    if args.format == "json":
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _fmt_eps(value):
    return "inf" if math.isinf(value) else f"{value:.6f}"


def _frac_float(q):
    return f"{format_fraction(q)} (= {float(q):.6f})"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_graph(args):
    g = _load_graph(args)
    hist = {}
    for d in g.degrees:
        hist[d] = hist.get(d, 0) + 1
    payload = {"n": g.n, "edges": len(g.edge_list),
               "degree_histogram": {str(k): v for k, v in sorted(hist.items())},
               "connected": g.is_connected}
    lines = [f"vertices: {g.n}",
             f"edges: {len(g.edge_list)}",
             "degrees: " + ", ".join(f"{k} (x{v})" for k, v in sorted(hist.items())),
             f"connected: {'yes' if g.is_connected else 'no'}"]
    if g.is_connected:
        dm = distances(g)
        profile = distance_profile(g, 0)
        shared = common_profile(g)
        payload.update({
            "diameter": dm.diameter,
            "profile_base_0": list(profile.counts),
            "profile_base_independent": shared is not None,
        })
        lines.append(f"diameter: {dm.diameter}")
        lines.append("profile (base 0): " + ", ".join(str(c) for c in profile.counts))
        lines.append("profile base-independent: " + ("yes" if shared else "no"))
        array = is_distance_regular(g)
        if array is not None:
            payload["distance_regular"] = True
            payload["intersection_array"] = {"b": list(array.b), "c": list(array.c)}
            lines.append("distance-regular: yes")
            lines.append(f"intersection array: b={tuple(array.b)} c={tuple(array.c)}")
        else:
            payload["distance_regular"] = False
            lines.append("distance-regular: no")
    else:
        payload["distance_regular"] = False
        lines.append("diameter: infinite (disconnected)")
        lines.append("distance-regular: no")
    cert = vt_plus_certificate(g, effort=args.effort)
    payload["vt_plus"] = cert.status
    payload["vt_plus_method"] = cert.method
    lines.append(f"VT+: {cert.status} ({cert.method})")
    return _emit(args, payload, lines)


def cmd_analyze(args):
    g = _load_graph(args)
    matrix = _load_matrix(args.matrix)
    pp = _privacy(args)
    prior = _load_prior(args.prior, matrix) if args.prior else Prior.uniform(matrix.rows)

    audit = dp_audit(matrix, g)
    success = posterior_success(prior, matrix)
    payload = {
        "eps_star": None if math.isinf(audit.eps_star) else audit.eps_star,
        "eps_star_infinite": math.isinf(audit.eps_star),
        "max_ratio": None if audit.max_ratio is None else format_fraction(audit.max_ratio),
        "witness": list(audit.worst_witness) if audit.worst_witness else None,
        "satisfies_epsilon": audit.is_dp(pp, args.tolerance),
        "epsilon": pp.epsilon,
        "r": format_fraction(pp.r),
        "prior_min_entropy_bits": min_entropy(prior),
        "max_prior_prob": format_fraction(prior.max_prob),
        "posterior_success": format_fraction(success),
        "posterior_min_entropy_bits": posterior_min_entropy(prior, matrix),
        "leakage_bits": leakage(prior, matrix),
        "min_capacity_bits": min_capacity(matrix),
        "column_maxima_sum": format_fraction(column_maxima_sum(matrix)),
    }
    lines = [
        f"privacy level: epsilon={pp.epsilon:.6f} (r={format_fraction(pp.r)})",
        f"eps_star: {_fmt_eps(audit.eps_star)}"
        + (f" (max adjacent ratio {format_fraction(audit.max_ratio)},"
           f" witness rows {audit.worst_witness[0]}/{audit.worst_witness[1]}"
           f" column {audit.worst_witness[2]})" if audit.worst_witness else ""),
        f"satisfies declared epsilon: {'yes' if payload['satisfies_epsilon'] else 'no'}"
        f" (tolerance {args.tolerance:g})",
        f"prior min-entropy: {payload['prior_min_entropy_bits']:.6f} bits"
        f" (max prob {payload['max_prior_prob']})",
        f"posterior success: {_frac_float(success)},"
        f" min-entropy {payload['posterior_min_entropy_bits']:.6f} bits",
        f"leakage: {payload['leakage_bits']:.6f} bits",
        f"min-capacity: {payload['min_capacity_bits']:.6f} bits"
        f" (column-maxima sum {payload['column_maxima_sum']})",
        f"binary utility (optimal guess): {_frac_float(success)}",
    ]

    if g.is_connected and matrix.rows == g.n:
        shared = common_profile(g)
        if shared is not None:
            ent_bound = bounds_mod.posterior_entropy_bound(shared, pp)
            util_bound = bounds_mod.utility_bound(shared, pp)
            uniform = Prior.uniform(matrix.rows)
            uniform_success = posterior_success(uniform, matrix)
            attains = uniform_success == util_bound.probability
            payload.update({
                "posterior_entropy_bound_bits": ent_bound.bits,
                "utility_bound": format_fraction(util_bound.probability),
                "uniform_utility": format_fraction(uniform_success),
                "attains_bound": attains,
            })
            lines.append(
                f"posterior entropy bound: {ent_bound.bits:.6f} bits"
                f" (core {format_fraction(ent_bound.exact_core)})")
            lines.append(
                f"utility bound (uniform prior): {_frac_float(util_bound.probability)}")
            lines.append(f"attains bound: {'yes' if attains else 'no'}")
        else:
            payload["bounds_note"] = "profile is base-dependent; symmetry bounds not applicable"
            lines.append("bounds: not applicable (base-dependent profile)")
    return _emit(args, payload, lines)


def cmd_transform(args):
    g = _load_graph(args)
    matrix = _load_matrix(args.matrix)
    before = dp_audit(matrix, g)
    uniform = Prior.uniform(matrix.rows)
    success_before = posterior_success(uniform, matrix)
    if args.stage == "diagonal":
        cf = to_diagonal_form(matrix, g)
    else:
        cf = canonicalize(matrix, g, effort=args.effort)
    after = dp_audit(cf.matrix, g)
    success_after = posterior_success(uniform, cf.matrix)
    payload = {
        "stage": cf.stage,
        "symmetry": cf.symmetry,
        "merge_map": list(cf.merge_map) if cf.merge_map else None,
        "eps_star_before": None if math.isinf(before.eps_star) else before.eps_star,
        "eps_star_after": None if math.isinf(after.eps_star) else after.eps_star,
        "uniform_success_before": format_fraction(success_before),
        "uniform_success_after": format_fraction(success_after),
        "success_preserved": success_before == success_after,
        "matrix": cf.matrix.to_dict(),
    }
    lines = [
        f"stage: {cf.stage}" + (f" ({cf.symmetry})" if cf.symmetry else ""),
        f"eps_star: {_fmt_eps(before.eps_star)} -> {_fmt_eps(after.eps_star)}",
        f"uniform success: {format_fraction(success_before)} -> {format_fraction(success_after)}"
        f" ({'preserved exactly' if success_before == success_after else 'CHANGED'})",
        "",
        cf.matrix.to_csv().rstrip("\n"),
    ]
    return _emit(args, payload, lines)


def cmd_synth(args):
    g = _load_graph(args)
    pp = _privacy(args)
    bundle = optimal_mechanism(g, pp)
    audit = dp_audit(bundle.matrix, g)
    payload = bundle.to_dict()
    payload["utility"] = format_fraction(bundle.c)
    payload["eps_star"] = audit.eps_star
    lines = [
        f"privacy level: epsilon={pp.epsilon:.6f} (r={format_fraction(pp.r)})",
        f"normaliser c: {_frac_float(bundle.c)}",
        f"uniform-prior utility: {_frac_float(bundle.c)} (equals the bound by construction)",
        f"eps_star: {_fmt_eps(audit.eps_star)}",
        "",
        bundle.matrix.to_csv().rstrip("\n"),
    ]
    return _emit(args, payload, lines)


def cmd_compare(args):
    left = _load_matrix(args.matrix_a)
    right = _load_matrix(args.matrix_b)
    if left.rows != right.rows:
        raise ValueError("matrices must share an input domain to be compared")
    priors = [("uniform", Prior.uniform(left.rows))]
    for path in args.prior or []:
        priors.append((os.path.basename(path), _load_prior(path, left)))
    rows = []
    for name, prior in priors:
        rows.append({
            "prior": name,
            "utility_a": format_fraction(posterior_success(prior, left)),
            "utility_b": format_fraction(posterior_success(prior, right)),
            "leakage_a": leakage(prior, left),
            "leakage_b": leakage(prior, right),
        })
    if args.format == "csv":
        lines = ["prior,utility_a,utility_b,leakage_a,leakage_b"]
        for row in rows:
            lines.append(f"{row['prior']},{float(Fraction(row['utility_a'])):.6f},"
                         f"{float(Fraction(row['utility_b'])):.6f},"
                         f"{row['leakage_a']:.6f},{row['leakage_b']:.6f}")
        out = "\n".join(lines) + "\n"
        if args.output and args.output != "-":
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return 0
    lines = []
    for row in rows:
        lines.append(f"prior {row['prior']}:")
        lines.append(f"  utility:  {_frac_float(Fraction(row['utility_a']))}"
                     f"  vs  {_frac_float(Fraction(row['utility_b']))}")
        lines.append(f"  leakage:  {row['leakage_a']:.6f} bits"
                     f"  vs  {row['leakage_b']:.6f} bits")
    return _emit(args, {"rows": rows}, lines)


def cmd_oracle(args):
    g = _load_graph(args)
    pp = _privacy(args)
    if args.method == "grid":
        report = grid_search_optimal(g, pp, Fraction(args.step))
    elif args.method == "hillclimb":
        report = hillclimb_utility(g, pp, iters=args.iters, seed=args.seed)
    else:
        best = None
        count = 0
        for matrix in random_dp_sample(g, pp, args.count, args.seed):
            count += 1
            value = posterior_success(Prior.uniform(g.n), matrix)
            if best is None or value > best[0]:
                best = (value, matrix)
        report = SearchReport("random", args.seed, count, best[0], best[1])
    payload = report.to_dict()
    lines = [
        f"method: {report.method}",
        f"seed: {report.seed}",
        f"trials: {report.trials}",
        f"best utility: {_frac_float(report.best_utility)}",
    ]
    try:
        shared = common_profile(g)
    except DisconnectedGraphError:
        shared = None
    if shared is not None:
        bound = bounds_mod.utility_bound(shared, pp)
        payload["utility_bound"] = format_fraction(bound.probability)
        gap = bound.probability - report.best_utility
        lines.append(f"utility bound: {_frac_float(bound.probability)}"
                     f" (gap {format_fraction(gap)})")
    return _emit(args, payload, lines)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--size-cap", type=int, default=None,
                   help=f"vertex cap for constructions (or ${SIZE_CAP_ENV})")
    p.add_argument("--effort", type=int, default=DEFAULT_SEARCH_EFFORT,
                   help="node budget for certificate searches")


def _add_graph_source(p, required=True):
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--family", help="clique:N | cycle:N | path:N | petersen | hamming:U,V")
    grp.add_argument("--graph-file", help="graph JSON path")


def _add_privacy(p, required=True):
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--ratio", help="exact r = e^-epsilon as p/q or decimal")
    grp.add_argument("--epsilon", help="epsilon as a decimal, or the literal ln2")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dpchannel",
        description="Audit, bound and synthesise privacy mechanisms over graph domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="classify a graph")
    _add_common(p)
    _add_graph_source(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("analyze", help="audit a channel against a graph")
    _add_common(p)
    _add_graph_source(p)
    _add_privacy(p)
    p.add_argument("--matrix", required=True, help="matrix CSV/JSON path or fixture:geometric")
    p.add_argument("--prior", help="prior CSV path (label,value per line)")
    p.add_argument("--tolerance", type=float, default=DEFAULT_LN_TOL,
                   help="ln-scale tolerance of the epsilon verdict")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transform", help="canonical-form pipeline")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--stage", choices=("diagonal", "symmetric"), default="symmetric")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("synth", help="synthesise the optimal mechanism")
    _add_common(p)
    _add_graph_source(p)
    _add_privacy(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", help="compare two channels under priors")
    _add_common(p)
    p.add_argument("--matrix-a", required=True)
    p.add_argument("--matrix-b", required=True)
    p.add_argument("--prior", action="append", help="prior CSV path; repeatable")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="verification searches")
    _add_common(p)
    _add_graph_source(p)
    _add_privacy(p)
    p.add_argument("--method", choices=("grid", "hillclimb", "random"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=10_000)
    p.add_argument("--step", default="1/16", help="grid step, must divide 1")
    p.add_argument("--count", type=int, default=20, help="sample count for --method random")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface as a clean one-line error, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
