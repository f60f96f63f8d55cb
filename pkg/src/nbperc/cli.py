"""Command-line harness wiring generators, spectra, percolation, and bounds.

One process, batch-oriented: each command validates its config, runs the
named pipeline, writes a report (JSON or CSV) that echoes the config,
tool version, graph descriptor, and seeds, and prints a one-line summary
to stderr.  Identical configs produce byte-identical outputs, independent
of NBPERC_THREADS.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .bounds import (
    connectivity_envelope,
    decay_diagnostic,
    rho_sequence,
    threshold_bounds,
    verify_envelope,
)
from .generators import FAMILIES, generate
from .graphs import Graph, bfs_distances, read_edge_list, write_edge_list
from .growth import growth_for_graph
from .hashimoto import hashimoto, strong_ell_connected
from .localrules import SubgraphSequence, rule_from_name
from .percolation import (
    estimate_chi,
    estimate_tau,
    estimate_theta_proxy,
    pair_connectivity_counts,
    wilson_interval,
)
from .rng import shuffled, substream
from .serialize import csv_lines, dumps
from .spectral import PowerIterationError, spectral_radius


class UsageError(ValueError):
    """Invalid configuration; carries the offending field name."""

    def __init__(self, field, message):
        super().__init__(message)
        self.field = field


def _parse_p_list(raw: str) -> list:
    try:
        values = [float(x) for x in raw.split(",") if x != ""]
    except ValueError:
        raise UsageError("p", f"could not parse probability list {raw!r}")
    if not values:
        raise UsageError("p", "empty probability list")
    for p in values:
        if not 0.0 <= p <= 1.0:
            raise UsageError("p", f"probability {p} outside [0, 1]")
    return values


_FAMILY_PARAM_FLAGS = {"n": "n", "d": "d", "t": "t", "k": "k",
                       "radius": "radius", "seed": "graph_seed"}


def _graph_from_args(args) -> Graph:
    if getattr(args, "edge_list", None):
        return read_edge_list(args.edge_list)
    family = getattr(args, "family", None)
    if not family:
        raise UsageError("family", "provide --family or --edge-list")
    if family not in FAMILIES:
        raise UsageError("family", f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    _fn, names = FAMILIES[family]
    params = {}
    for name in names:
        flag = _FAMILY_PARAM_FLAGS[name]
        value = getattr(args, flag, None)
        if value is None:
            raise UsageError(flag.replace("_", "-"), f"family {family!r} needs --{flag.replace('_', '-')}")
        params[name] = value
    return generate(family, **params)


def _sequence_from_args(args) -> SubgraphSequence:
    if getattr(args, "rule", None):
        rule = rule_from_name(args.rule)
        return SubgraphSequence.from_rule(rule, args.t_max)
    raise UsageError("rule", "this command needs --rule (e.g. tree3, grid2d)")


def _config_echo(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _envelope_report(command: str, args, graph_desc, report) -> dict:
    return {
        "tool": "nbperc",
        "version": __version__,
        "command": command,
        "config": _config_echo(args),
        "graph": graph_desc,
        "report": report,
    }


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_json(args, command: str) -> None:
    if getattr(args, "format", "json") == "csv":
        raise UsageError("format", f"{command} has no CSV form; use json")


def _summary(line: str) -> None:
    print(line, file=sys.stderr)


# ---------------------------------------------------------------- commands

def _cmd_gen(args) -> int:
    g = _graph_from_args(args)
    if not args.out or args.out == "-":
        raise UsageError("out", "gen needs --out to name the edge-list file")
    write_edge_list(g, args.out)
    desc = _envelope_report("gen", args, g.descriptor(), {"written": True})
    with open(args.out + ".json", "w", encoding="utf-8") as fh:
        fh.write(dumps(desc))
    _summary(f"gen: wrote {g.n} vertices, {g.edge_count} edges to {args.out}")
    return 0


def _cmd_rho(args) -> int:
    _require_json(args, "rho")
    g = _graph_from_args(args)
    h = hashimoto(g)
    res = spectral_radius(h, tol=args.tol, max_iter=args.max_iter)
    report = res.to_json_dict(include_vector=args.full)
    _emit(args, dumps(_envelope_report("rho", args, g.descriptor(), report)))
    _summary(f"rho: {res.rho:.12g} (nilpotent={res.nilpotent}, dim={res.dimension}, "
             f"iterations={res.iterations})")
    return 0


def _cmd_olg_check(args) -> int:
    g = _graph_from_args(args)
    h = hashimoto(g)
    rep = strong_ell_connected(g, args.ell, h=h)
    arcs = h.arc_set.arcs
    witness = {f"{arcs[a][0]}->{arcs[a][1]}": rep.witness[a] for a in range(h.dimension)}
    report = {"ell": rep.ell, "holds": rep.holds, "max_witness": rep.max_witness,
              "witness": witness}
    if args.format == "csv":
        rows = [(a, arcs[a][0], arcs[a][1],
                 rep.witness[a] if rep.witness[a] is not None else "")
                for a in range(h.dimension)]
        _emit(args, csv_lines(["arc", "tail", "head", "witness"], rows))
    else:
        _emit(args, dumps(_envelope_report("olg-check", args, g.descriptor(), report)))
    _summary(f"olg-check: holds={rep.holds} at ell={args.ell} "
             f"(smallest certifying ell: {rep.max_witness})")
    return 0


def _cmd_growth(args) -> int:
    _require_json(args, "growth")
    g = _graph_from_args(args)
    result = growth_for_graph(g, p_norm=args.p_norm, m_max=args.m_max,
                              window=args.window, seed_sample=args.seed_sample)
    per_seed = [e.to_json_dict(include_sequence=args.full) for e in result.estimates]
    report = {
        "p_norm": result.p_norm,
        "m_max": result.m_max,
        "window": result.window,
        "sup_liminf": result.sup_liminf,
        "sup_limsup": result.sup_limsup,
        "seeds_used": len(result.seeds_used),
        "per_seed": per_seed,
    }
    _emit(args, dumps(_envelope_report("growth", args, g.descriptor(), report)))
    _summary(f"growth: sup-liminf={result.sup_liminf:.6g} "
             f"sup-limsup={result.sup_limsup:.6g} over {len(result.seeds_used)} seeds")
    return 0


def _cmd_percolate(args) -> int:
    p_values = _parse_p_list(args.p)
    quantity = args.quantity
    estimates = []
    if quantity == "theta":
        if args.t is None:
            raise UsageError("t", "theta proxy needs --t (truncation radius)")
        if args.t_max is None:
            args.t_max = args.t
        seq = _sequence_from_args(args)
        for p in p_values:
            estimates.append(estimate_theta_proxy(seq, args.t, p, args.trials,
                                                  args.master_seed, root=args.root))
        graph_desc = seq.truncate(args.t).descriptor()
    else:
        g = _graph_from_args(args)
        graph_desc = g.descriptor()
        for p in p_values:
            if quantity == "tau":
                if args.u is None or args.v is None:
                    raise UsageError("u", "tau needs --u and --v")
                estimates.append(estimate_tau(g, p, args.u, args.v, args.trials,
                                              args.master_seed))
            else:
                if args.v is None:
                    raise UsageError("v", "chi needs --v")
                estimates.append(estimate_chi(g, p, args.v, args.trials,
                                              args.master_seed))
    if args.format == "csv":
        rows = []
        for e in estimates:
            rows.append((e.quantity, e.p,
                         e.params.get("u", ""), e.params.get("v", ""),
                         e.params.get("root", ""), e.params.get("t", ""),
                         e.trials, e.point, e.ci_low, e.ci_high))
        _emit(args, csv_lines(
            ["quantity", "p", "u", "v", "root", "t", "trials", "point", "ci_low", "ci_high"],
            rows))
    else:
        report = [e.to_json_dict() for e in estimates]
        _emit(args, dumps(_envelope_report("percolate", args, graph_desc, report)))
    points = " ".join(f"{e.point:.6g}@p={e.p:g}" for e in estimates)
    _summary(f"percolate {quantity}: {points}")
    return 0


def _cmd_tau_table(args) -> int:
    g = _graph_from_args(args)
    p_values = _parse_p_list(args.p)
    all_pairs = [(i, j) for i in range(g.n) for j in range(i + 1, g.n)]
    if len(all_pairs) > args.max_pairs:
        all_pairs = sorted(shuffled(all_pairs, substream(args.master_seed, 0x7AB))[: args.max_pairs])
    dist_cache = {}
    rows = []
    for p in p_values:
        counts = pair_connectivity_counts(g, p, all_pairs, args.trials, args.master_seed)
        for (u, v), c in zip(all_pairs, counts):
            if u not in dist_cache:
                dist_cache[u] = bfs_distances(g, u)
            lo, hi = wilson_interval(int(c), args.trials, 0.95)
            rows.append((p, u, v, dist_cache[u][v], c / args.trials, lo, hi))
    header = ["p", "u", "v", "dist", "tau_hat", "ci_low", "ci_high"]
    if args.format == "csv":
        _emit(args, csv_lines(header, rows))
    else:
        report = [dict(zip(header, row)) for row in rows]
        _emit(args, dumps(_envelope_report("tau-table", args, g.descriptor(), report)))
    _summary(f"tau-table: {len(rows)} rows ({len(all_pairs)} pairs x {len(p_values)} p values)")
    return 0


def _cmd_bounds(args) -> int:
    _require_json(args, "bounds")
    if getattr(args, "rule", None):
        source = _sequence_from_args(args)
        graph_desc = source.truncate(source.radii[-1]).descriptor()
    else:
        source = _graph_from_args(args)
        graph_desc = source.descriptor()
    tb = threshold_bounds(source, m_max=args.m_max, window=args.window,
                          seed_sample=args.seed_sample)
    growth = tb.growth
    report = {
        "bounds": tb.summary_dict(),
        "growth": {
            "p_norm": growth.p_norm,
            "m_max": growth.m_max,
            "window": growth.window,
            "sup_liminf": growth.sup_liminf,
            "sup_limsup": growth.sup_limsup,
            "seeds_used": len(growth.seeds_used),
            "extinct_seeds": sum(1 for e in growth.estimates if e.extinct),
            "per_seed": [e.to_json_dict(include_sequence=args.full) for e in growth.estimates]
            if args.full else None,
        },
        "rho_sequence": None if tb.rho_report is None else {
            "radii": tb.rho_report.radii,
            "rho_t": tb.rho_report.rho_t,
            "vertex_counts": tb.rho_report.vertex_counts,
            "arc_counts": tb.rho_report.arc_counts,
            "d_max_t": tb.rho_report.d_max_t,
            "monotone": tb.rho_report.monotone,
            "converged": tb.rho_report.converged,
            "partial": tb.rho_report.partial,
        },
        "spectral": None if tb.spectral is None else tb.spectral.to_json_dict(),
        "source": tb.source,
    }
    _emit(args, dumps(_envelope_report("bounds", args, graph_desc, report)))
    _summary(f"bounds: p_T>={tb.p_T_lower:g} p_c>={tb.p_c_lower:g} p_u>={tb.p_u_lower:g}")
    return 0


def _cmd_rho_limit(args) -> int:
    seq = _sequence_from_args(args)
    rep = rho_sequence(seq, plateau_tol=args.plateau_tol)
    graph_desc = seq.truncate(rep.radii[-1]).descriptor() if rep.radii else None
    if args.format == "csv":
        rows = [(t, nv, na, rho, rep.monotone)
                for t, nv, na, rho in zip(rep.radii, rep.vertex_counts, rep.arc_counts, rep.rho_t)]
        _emit(args, csv_lines(["t", "vertices", "arcs", "rho_t", "monotone"], rows))
    else:
        _emit(args, dumps(_envelope_report("rho-limit", args, graph_desc, rep)))
    _summary(f"rho-limit: rho_0~{rep.rho_0_estimate:.6g} converged={rep.converged} "
             f"monotone={rep.monotone} over t={rep.radii[0]}..{rep.radii[-1]}")
    return 0


def _cmd_envelope_verify(args) -> int:
    g = _graph_from_args(args)
    p_values = _parse_p_list(args.p)
    if len(p_values) != 1:
        raise UsageError("p", "envelope-verify takes a single p")
    p = p_values[0]
    env = connectivity_envelope(g, p, ell_max=args.ell_max)
    if not env.applicable:
        report = {
            "applicable": False,
            "failed_gate": env.failed_gate,
            "detail": env.detail,
            "rho": env.rho,
            "p": p,
        }
        _emit(args, dumps(_envelope_report("envelope-verify", args, g.descriptor(), report)))
        _summary(f"envelope-verify: inapplicable ({env.failed_gate})")
        return 0
    ver = verify_envelope(g, p, env, args.trials, args.master_seed,
                          max_pairs=args.max_pairs)
    header = ["i", "j", "deg_i", "deg_j", "dist", "bound",
              "tau_hat", "ci_low", "ci_high", "verdict"]
    degs = g.degrees()
    rows = []
    for k in range(ver.pairs_measured):
        i = int(ver.pair_i[k])
        j = int(ver.pair_j[k])
        rows.append((i, j, degs[i], degs[j], int(ver.dist[k]), float(ver.bound[k]),
                     float(ver.tau_hat[k]), float(ver.ci_low[k]), float(ver.ci_high[k]),
                     "holds" if ver.holds[k] else "violated"))
    if args.format == "csv":
        _emit(args, csv_lines(header, rows))
    else:
        report = {
            "applicable": True,
            "rho": env.rho,
            "ell": env.ell,
            "lambda": env.lam,
            "violations": ver.violations,
            "pairs_measured": ver.pairs_measured,
            "pairs_total": ver.pairs_total,
            "pairs": [dict(zip(header, row)) for row in rows],
        }
        _emit(args, dumps(_envelope_report("envelope-verify", args, g.descriptor(), report)))
    _summary(f"envelope-verify: ell={env.ell} lambda={env.lam:.4g} "
             f"violations={ver.violations}/{ver.pairs_measured}")
    return 0


def _cmd_decay(args) -> int:
    g = _graph_from_args(args)
    p_values = _parse_p_list(args.p)
    if len(p_values) != 1:
        raise UsageError("p", "decay takes a single p")
    fit = decay_diagnostic(g, p_values[0], args.trials, args.master_seed,
                           max_sources=args.max_sources,
                           pairs_per_distance=args.pairs_per_distance)
    if args.format == "csv":
        rows = list(zip(fit.distances, fit.tau_hats))
        _emit(args, csv_lines(["dist", "tau_hat"], rows))
    else:
        _emit(args, dumps(_envelope_report("decay", args, g.descriptor(), fit)))
    if fit.defined:
        _summary(f"decay: slope={fit.slope:.4g} base={fit.base:.4g} lambda={fit.lam:.4g} "
                 f"pairs={fit.pairs_used}")
    else:
        _summary("decay: fit undefined (all tau-hat zero)")
    return 0


# ---------------------------------------------------------------- parser

def _add_graph_args(sp) -> None:
    sp.add_argument("--family", help=f"generator family: {', '.join(sorted(FAMILIES))}")
    sp.add_argument("--edge-list", help="path to an edge-list file (overrides --family)")
    sp.add_argument("--n", type=int, help="vertex count (cycle, complete, path, random_regular)")
    sp.add_argument("--d", type=int, help="degree (tree, random_regular)")
    sp.add_argument("--t", type=int, help="tree depth / truncation radius")
    sp.add_argument("--k", type=int, help="leaf count (star)")
    sp.add_argument("--radius", type=int, help="ball radius (grid_ball)")
    sp.add_argument("--graph-seed", type=int, help="generator seed (random_regular)")


def _add_out_args(sp) -> None:
    sp.add_argument("--out", default="-", help="output path ('-' for stdout)")
    sp.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nbperc",
        description="Non-backtracking spectra and site-percolation bound verification.",
    )
    ap.add_argument("--version", action="version", version=f"nbperc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="generate a graph and write edge list + descriptor")
    _add_graph_args(sp)
    sp.add_argument("--out", required=False, default=None)
    sp.set_defaults(func=_cmd_gen, format="json")

    sp = sub.add_parser("rho", help="spectral radius of the Hashimoto matrix")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=None)
    sp.add_argument("--full", action="store_true", help="include the Perron vector")
    sp.set_defaults(func=_cmd_rho)

    sp = sub.add_parser("olg-check", help="strong ell-connectivity of the oriented line graph")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--ell", type=int, required=True)
    sp.set_defaults(func=_cmd_olg_check)

    sp = sub.add_parser("growth", help="walk-norm growth estimates over all seed arcs")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--p-norm", type=int, choices=(1, 2), default=1)
    sp.add_argument("--m-max", type=int, default=200)
    sp.add_argument("--window", type=int, default=None)
    sp.add_argument("--seed-sample", type=int, default=None,
                    help="sample this many seed arcs instead of all")
    sp.add_argument("--full", action="store_true", help="include lambda sequences")
    sp.set_defaults(func=_cmd_growth)

    sp = sub.add_parser("percolate", help="Monte Carlo tau / chi / theta-proxy estimates")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--quantity", choices=("tau", "chi", "theta"), required=True)
    sp.add_argument("--p", required=True, help="comma-separated probabilities")
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--master-seed", type=int, default=1)
    sp.add_argument("--u", type=int, default=None)
    sp.add_argument("--v", type=int, default=None)
    sp.add_argument("--root", type=int, default=0)
    sp.add_argument("--rule", help="local rule for theta (tree3, grid2d, ...)")
    sp.add_argument("--t-max", type=int, default=None)
    sp.set_defaults(func=_cmd_percolate)

    sp = sub.add_parser("tau-table", help="pairwise connectivity table over p values")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--master-seed", type=int, default=1)
    sp.add_argument("--max-pairs", type=int, default=2000)
    sp.set_defaults(func=_cmd_tau_table)

    sp = sub.add_parser("bounds", help="threshold lower bounds from growth and rho_0")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--rule", help="local rule (tree3, grid2d) for a subgraph sequence")
    sp.add_argument("--t-max", type=int, default=6)
    sp.add_argument("--m-max", type=int, default=200)
    sp.add_argument("--window", type=int, default=None)
    sp.add_argument("--seed-sample", type=int, default=None)
    sp.add_argument("--full", action="store_true")
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("rho-limit", help="rho(H_t) along a subgraph sequence")
    _add_out_args(sp)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--t-max", type=int, required=True)
    sp.add_argument("--plateau-tol", type=float, default=1e-3)
    sp.set_defaults(func=_cmd_rho_limit)

    sp = sub.add_parser("envelope-verify", help="connectivity envelope + Monte Carlo check")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--ell-max", type=int, default=64)
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--master-seed", type=int, default=1)
    sp.add_argument("--max-pairs", type=int, default=20000)
    sp.set_defaults(func=_cmd_envelope_verify)

    sp = sub.add_parser("decay", help="exponential-decay diagnostic fit of tau vs distance")
    _add_graph_args(sp)
    _add_out_args(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--master-seed", type=int, default=1)
    sp.add_argument("--max-sources", type=int, default=12)
    sp.add_argument("--pairs-per-distance", type=int, default=24)
    sp.set_defaults(func=_cmd_decay)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        record = {"error": {"kind": "usage", "field": exc.field, "message": str(exc)}}
        sys.stderr.write(dumps(record))
        return 2
    except (ValueError, OSError) as exc:
        record = {"error": {"kind": "invalid", "message": str(exc)}}
        sys.stderr.write(dumps(record))
        return 2
    except PowerIterationError as exc:
        record = {"error": {"kind": "no-convergence", "message": str(exc),
                            "estimates": list(exc.estimates)}}
        sys.stderr.write(dumps(record))
        return 1


if __name__ == "__main__":
    sys.exit(main())
