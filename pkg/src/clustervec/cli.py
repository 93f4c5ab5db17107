"""``clustervec`` command line.

Exit status: 0 when every check passes, 1 when some check fails, 2 on bad
input or a resource cap.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import AnalysisConfig, VerifyConfig, analyze_matrix, verify_type
from .diagrams import (
    compute_V,
    diagram_of_matrix,
    templates_for,
    write_catalog,
)
from .dynkin_types import ClusterTypeLabel, parse_label
from .enumeration import (
    DEFAULT_CLASS_CAP,
    DEFAULT_SEED_CAP,
    bounded_depth_probe,
    cache_dir,
    cached_enumerate_seeds,
    detect_cluster_type,
    enumerate_matrix_class,
    extract_vector_sets,
)
from .errors import CapExceeded, ClusterVecError
from .folding import OrbitAutomorphism, commutation_walk, fold_matrix, fold_seed
from .matrices import format_matrix, initial_seed, load_exchange_matrix
from .probes import AFFINE_A2_CYCLIC, KNOWN_FAMILIES, MARKOV
from .roots import fold_vector
from .surface import (
    TRIANGULATION_SCHEMA,
    MarkedSurface,
    cross_check,
    enumerate_triangulations,
    flip_graph_dot,
)

NAMED = {"markov": MARKOV, "affine-a2": AFFINE_A2_CYCLIC}


class UsageError(Exception):
    pass


def _read_matrix(arg: str):
    if arg.lower() in NAMED:
        return NAMED[arg.lower()]
    if arg == "-":
        return load_exchange_matrix(sys.stdin.read())
    path = Path(arg)
    if path.is_file():
        return load_exchange_matrix(path.read_text())
    # inline rows separated by ';'
    return load_exchange_matrix(arg.replace(";", "\n"))


def _label(args) -> ClusterTypeLabel:
    rank = getattr(args, "rank", None)
    return parse_label(args.family, rank)


def _fmt_vectors(vs) -> str:
    return " ".join("(" + ",".join(map(str, v)) + ")" for v in vs)


# --- text renderers ----------------------------------------------------------

def _text_report(r: dict) -> str:
    lines = [f"type: {r['type']}", "B =", format_matrix(r["input"]["b"])]
    if "counts" in r:
        c = r["counts"]
        lines.append(f"|C+| = {c['c_pos']}  |D| = {c['d']}  |V| = {c['v']}  expected {c['expected']}")
        lines.append("C+: " + _fmt_vectors(r["sets"]["c_pos"]))
        real = sum(1 for x in r["roots"] if x["status"] == "RealRoot")
        lines.append(f"roots: {real} real, {len(r['roots']) - real} imaginary or other")
    if "enumeration" in r:
        e = r["enumeration"]
        lines.append(f"enumeration: {'capped' if e['capped'] else 'closed'} at {e['states']} states, depth {e['depth']}")
    if "guidance" in r:
        lines.append(r["guidance"])
    if "probe" in r:
        lines.append(f"probe depth {r['probe']['depth']}: {len(r['probe']['c_pos'])} positive c-vectors, "
                     f"{len(r['probe']['d'])} d-vectors" + (f" (family: {r['family']})" if "family" in r else ""))
    for k, v in r["checks"].items():
        lines.append(f"  [{'ok' if v else 'FAIL'}] {k}")
    lines.append(f"{r['timing']['seconds']:.3f}s")
    return "\n".join(lines)


def _text_verify(r: dict) -> str:
    lines = [f"verify {r['type']}: {r['members']} members"
             + (" (sampled)" if r["sampled"] else "") + f", expected {r['expected_count']} vectors each"]
    for m in r["results"]:
        bad = [k for k, v in m["checks"].items() if not v]
        lines.append(f"  {'ok  ' if m['ok'] else 'FAIL'} |C+|={m['counts']['c_pos']} "
                     f"{'bipartite ' if m['bipartite'] else ''}{m['b']}" + (f" failed: {bad}" if bad else ""))
    lines.append(f"{'all checks pass' if r['ok'] else 'FAILED'} in {r['timing']['seconds']:.1f}s")
    return "\n".join(lines)


def _emit(args, obj: dict, text: str, dot: str | None = None):
    if args.format == "json":
        out = json.dumps(obj, indent=1)
    elif args.format == "dot":
        if dot is None:
            raise UsageError("this command has no DOT rendering")
        out = dot
    else:
        out = text
    if getattr(args, "output", None):
        Path(args.output).write_text(out + "\n")
    else:
        print(out)


def _analysis_config(args) -> AnalysisConfig:
    cfg = AnalysisConfig(class_cap=args.class_cap, probe_depth=args.depth,
                         cache_dir=cache_dir(args.cache_dir))
    if args.cap is not None:
        cfg.seed_cap = cfg.indeterminate_cap = args.cap
    return cfg


# --- commands ----------------------------------------------------------------

def cmd_analyze(args) -> int:
    m = _read_matrix(args.matrix)
    report = analyze_matrix(m, _analysis_config(args))
    _emit(args, report, _text_report(report), diagram_of_matrix(m).to_dot("X"))
    return 0 if report["ok"] else 1


def cmd_verify(args) -> int:
    z = _label(args)
    cfg = VerifyConfig(sample=args.sample, rng_seed=args.seed, analysis=_analysis_config(args))
    report = verify_type(z, cfg)
    _emit(args, report, _text_verify(report))
    return 0 if report["ok"] else 1


def cmd_enumerate(args) -> int:
    m = _read_matrix(args.matrix)
    t0 = time.perf_counter()
    if args.mutation_class:
        cls = enumerate_matrix_class(m, args.class_cap)
        obj = {"schema": "clustervec.class/1", "input": m.tolist(), "complete": cls.complete,
               "size": len(cls), "members": [b.tolist() for b in cls.members]}
        text = f"{len(cls)} matrices up to relabeling" + ("" if cls.complete else " (capped)")
        _emit(args, obj, text)
        return 0
    atlas = cached_enumerate_seeds(m, args.cap or DEFAULT_SEED_CAP, cache_dir(args.cache_dir))
    vs = extract_vector_sets(atlas)
    obj = {"schema": "clustervec.enumeration/1", "input": m.tolist(), "states": len(atlas),
           "depth": atlas.depth, "quotient_labels": atlas.quotient_labels,
           "c_pos": [list(v) for v in sorted(vs.c_pos)], "d": [list(v) for v in sorted(vs.d_noninit)],
           "seconds": round(time.perf_counter() - t0, 4)}
    text = (f"{len(atlas)} seeds (up to relabeling), depth {atlas.depth}\n"
            f"C+ ({len(vs.c_pos)}): {_fmt_vectors(sorted(vs.c_pos))}\n"
            f"D  ({len(vs.d_noninit)}): {_fmt_vectors(sorted(vs.d_noninit))}")
    _emit(args, obj, text)
    return 0


def cmd_templates(args) -> int:
    z = _label(args)
    d = cache_dir(args.cache_dir)
    temps = templates_for(z, args.class_cap, d)
    path = None
    if args.out:
        path = write_catalog(z.normalized() if z.family != "A" else z, temps, Path(args.out))
    obj = {"schema": "clustervec.templates/1", "type": str(z), "count": len(temps),
           "templates": [w.to_json() for w in temps]}
    text = f"{z}: {len(temps)} templates" + (f" written to {path}" if path else "")
    for w in temps:
        text += f"\n  {w.weights} {sorted(w.diagram.edges.items())}"
    dot = "\n".join(w.to_dot(f"W{i}") for i, w in enumerate(temps))
    _emit(args, obj, text, dot)
    return 0


def cmd_fold(args) -> int:
    m = _read_matrix(args.matrix)
    sigma = OrbitAutomorphism.parse(args.sigma, m.n)
    folded = fold_matrix(m, sigma)
    s0 = fold_seed(initial_seed(m), sigma)
    obj = {"schema": "clustervec.fold/1", "input": m.tolist(), "sigma": sigma.cycle_string(),
           "orbits": [list(o) for o in sigma.orbits], "folded": folded.tolist(),
           "folded_initial_c": s0.c.tolist()}
    text = f"sigma {sigma.cycle_string()}, orbits {sigma.orbits}\nfolded B =\n{format_matrix(folded)}"
    ok = True
    if args.verify:
        walk = commutation_walk(m, sigma, args.steps, args.seed)
        obj["walk"] = walk.to_json()
        ok = walk.ok
        text += f"\nwalk of {args.steps} orbit mutations: {'commutes' if ok else 'FAILED'}"
        if args.roots:
            z, zf = detect_cluster_type(m, args.class_cap), detect_cluster_type(folded, args.class_cap)
            if z is None or zf is None:
                raise UsageError("V sets need finite-type input")
            v = compute_V(m, templates_for(z, args.class_cap))
            vf = compute_V(folded, templates_for(zf, args.class_cap))
            same = {fold_vector(x, sigma.orbits) for x in v} == vf
            obj["folded_v_matches"] = same
            ok = ok and same
            text += f"\npi(V(B)) = V(folded B): {same}"
    obj["ok"] = ok
    _emit(args, obj, text)
    return 0 if ok else 1


def cmd_surface(args) -> int:
    z = _label(args)
    s = MarkedSurface.of_type(z)
    if args.format == "dot":
        _emit(args, {}, "", flip_graph_dot(s))
        return 0
    ts = enumerate_triangulations(s)
    obj = {"schema": TRIANGULATION_SCHEMA, "type": str(z), "arcs": len(s.arcs()),
           "triangulations": [t.to_json() for t in ts]}
    text = f"{z}: {len(s.arcs())} tagged arcs, {len(ts)} triangulations"
    ok = True
    if args.cross_check:
        starts = ts if args.sample is None else ts[: args.sample]
        totals = {"initial": 0, "pairs": 0, "flips": 0, "mismatches": 0}
        for t0 in starts:
            r = cross_check(t0)
            totals["initial"] += 1
            totals["pairs"] += r.pairs
            totals["flips"] += r.flips
            totals["mismatches"] += len(r.mismatches)
        ok = totals["mismatches"] == 0
        obj["cross_check"] = dict(totals, ok=ok)
        text += (f"\ncross-check from {totals['initial']} initial triangulations: {totals['pairs']} "
                 f"(triangulation, arc) pairs, {totals['flips']} flips, {totals['mismatches']} mismatches")
    _emit(args, obj, text)
    return 0 if ok else 1


def cmd_probe(args) -> int:
    m = _read_matrix(args.matrix)
    vs = bounded_depth_probe(m, args.depth)
    obj = {"schema": "clustervec.probe/1", "input": m.tolist(), "depth": args.depth,
           "c_pos": [list(v) for v in sorted(vs.c_pos)], "d": [list(v) for v in sorted(vs.d_noninit)]}
    text = (f"depth {args.depth}: {len(vs.c_pos)} positive c-vectors, {len(vs.d_noninit)} d-vectors\n"
            f"C+: {_fmt_vectors(sorted(vs.c_pos))}\nD: {_fmt_vectors(sorted(vs.d_noninit))}")
    ok = True
    fam = KNOWN_FAMILIES.get(m)
    if fam is not None:
        name, c_ok, d_ok = fam
        bad_c = [v for v in sorted(vs.c_pos) if not c_ok(v)]
        bad_d = [v for v in sorted(vs.d_noninit) if not d_ok(v)]
        ok = not bad_c and not bad_d
        obj["family"] = {"name": name, "c_outside": bad_c, "d_outside": bad_d, "ok": ok}
        text += f"\nfamily {name}: {'all vectors inside' if ok else f'outside: {bad_c} {bad_d}'}"
    _emit(args, obj, text)
    return 0 if ok else 1


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None,
                        help=f"seed enumeration cap (default {DEFAULT_SEED_CAP}, 10^4 for infinite type)")
    common.add_argument("--class-cap", type=int, default=DEFAULT_CLASS_CAP, help="mutation class cap")
    common.add_argument("--depth", type=int, default=6, help="bounded probe depth")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--cache-dir", default=None,
                        help="atlas and catalog cache (default: $CLUSTERVEC_CACHE_DIR)")
    common.add_argument("-o", "--output", default=None, help="write to a file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="clustervec", description="c-vectors, d-vectors and templates "
                                "of finite type cluster algebras")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def typed(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("family", help="type letter, or a full label such as D5")
        sp.add_argument("rank", type=int, nargs="?")
        return sp

    sp = sub.add_parser("analyze", parents=[common], help="full report for one exchange matrix")
    sp.add_argument("matrix", help="file, '-', inline rows 'a b;c d', JSON, or markov/affine-a2")
    sp.set_defaults(func=cmd_analyze)

    sp = typed("verify", "analyze every member (or a sample) of a mutation class")
    sp.add_argument("--sample", type=int, default=None, help="members to sample (bipartite one included)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("enumerate", parents=[common], help="seed atlas or mutation class of a matrix")
    sp.add_argument("matrix")
    sp.add_argument("--class", dest="mutation_class", action="store_true",
                    help="enumerate the matrix mutation class instead of seeds")
    sp.set_defaults(func=cmd_enumerate)

    sp = typed("templates", "template catalog of a finite type")
    sp.add_argument("--out", default=None, help="directory to write templates_<type>.json into")
    sp.set_defaults(func=cmd_templates)

    sp = sub.add_parser("fold", parents=[common], help="fold a matrix along an admissible permutation")
    sp.add_argument("matrix")
    sp.add_argument("--sigma", required=True, help="1-based cycles, e.g. '(3 4)' or '(15)(24)'")
    sp.add_argument("--verify", action="store_true", help="run a random orbit-mutation walk")
    sp.add_argument("--roots", action="store_true", help="with --verify, also compare folded V sets")
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_fold)

    sp = typed("surface", "triangulations of the polygon (A) or punctured disk (D)")
    sp.add_argument("--cross-check", action="store_true", help="compare with the algebraic engine")
    sp.add_argument("--sample", type=int, default=None, help="only the first N initial triangulations")
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("probe", parents=[common], help="bounded-depth vectors of any matrix")
    sp.add_argument("matrix")
    sp.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}; raise --cap or use `probe` for a bounded-depth look", file=sys.stderr)
        return 2
    except (ClusterVecError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
