"""End-to-end analysis of one exchange matrix and aggregate verification of a type."""
from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from .diagrams import (
    catalog_is_complete,
    compute_V,
    diagram_of_matrix,
    templates_for,
    templates_of_matrix,
)
from .dynkin_types import ClusterTypeLabel, positive_root_count, reference_matrix
from .enumeration import (
    DEFAULT_CLASS_CAP,
    DEFAULT_SEED_CAP,
    bounded_depth_probe,
    cached_enumerate_seeds,
    detect_cluster_type,
    enumerate_matrix_class,
    extract_vector_sets,
)
from .errors import CapExceeded
from .matrices import ExchangeMatrix, is_bipartite, is_sign_coherent, matrix_to_json
from .probes import KNOWN_FAMILIES
from .roots import RootStatus, classify_root, context_of, support_is_tree

REPORT_SCHEMA = "clustervec.report/1"
log = logging.getLogger(__name__)


@dataclass
class AnalysisConfig:
    seed_cap: int = DEFAULT_SEED_CAP
    class_cap: int = DEFAULT_CLASS_CAP
    # enumeration budget once the type is known to be infinite
    indeterminate_cap: int = 10**4
    probe_depth: int = 6
    cache_dir: Path | None = None
    check_sign_pattern: bool = True


@dataclass
class VerifyConfig:
    sample: int | None = None
    rng_seed: int = 0
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)


def _vec_list(vs) -> list[list[int]]:
    return [list(v) for v in sorted(vs)]


def analyze_matrix(m: ExchangeMatrix, config: AnalysisConfig | None = None,
                   label: ClusterTypeLabel | None = None) -> dict:
    """Report dict; ``report["ok"]`` is the conjunction of every check."""
    cfg = config or AnalysisConfig()
    t0 = time.perf_counter()
    x = diagram_of_matrix(m)
    report: dict = {"schema": REPORT_SCHEMA, "input": matrix_to_json(m), "diagram": x.to_json()}
    z = label or detect_cluster_type(m, cfg.class_cap)
    report["type"] = str(z) if z is not None else "Indeterminate"
    if z is None:
        report.update(_analyze_indeterminate(m, cfg))
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 4)}
        report["ok"] = all(report["checks"].values())
        return report

    atlas = cached_enumerate_seeds(m, cfg.seed_cap, cfg.cache_dir)
    vs = extract_vector_sets(atlas)
    templates = templates_for(z, cfg.class_cap, cfg.cache_dir)
    complete = catalog_is_complete(z, cfg.cache_dir)
    if not complete:
        templates = set(templates) | templates_of_matrix(m)
    V = compute_V(m, templates)

    ctx = context_of(m)
    roots = []
    for v in sorted(vs.c_pos | vs.d_noninit):
        status = classify_root(ctx, v)
        roots.append({"vector": list(v), "status": status.value, "tree": support_is_tree(v, x)})

    c_pos = set(vs.c_pos)
    checks = {
        "c_pos_eq_d_eq_v": c_pos == set(vs.d_noninit) == V,
        "count_matches_root_table": len(c_pos) == positive_root_count(z),
        "vectors_are_roots": all(r["status"] != RootStatus.NOT_A_ROOT.value for r in roots),
        "real_iff_tree": all((r["status"] == RootStatus.REAL.value) == r["tree"] for r in roots),
        "c_splits_into_pos_and_neg": set(vs.c_all) == c_pos | {tuple(-a for a in v) for v in c_pos},
        "sign_coherent": all(is_sign_coherent(v) for v in vs.c_all),
        "bipartite_occurrence": vs.c_pos_bipartite == vs.c_pos and vs.d_bipartite == vs.d_noninit,
    }
    if cfg.check_sign_pattern:
        # same Cartan counterpart, opposite orientation
        other = ExchangeMatrix(-m.b, m.symmetrizer)
        other_vs = extract_vector_sets(cached_enumerate_seeds(other, cfg.seed_cap, cfg.cache_dir))
        checks["c_pos_depends_on_cartan"] = other_vs.c_pos == vs.c_pos

    report.update({
        "atlas": {"states": len(atlas), "depth": atlas.depth, "quotient_labels": atlas.quotient_labels},
        "counts": {"c_pos": len(c_pos), "d": len(vs.d_noninit), "v": len(V),
                   "expected": positive_root_count(z)},
        "sets": {"c_pos": _vec_list(c_pos), "d": _vec_list(vs.d_noninit), "v": _vec_list(V)},
        "templates": {"count": len(templates), "catalog_complete": complete},
        "roots": roots,
        "checks": checks,
        "bipartite": is_bipartite(m),
    })
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 4)}
    report["ok"] = all(checks.values())
    return report


def _analyze_indeterminate(m: ExchangeMatrix, cfg: AnalysisConfig) -> dict:
    out: dict = {}
    try:
        atlas = cached_enumerate_seeds(m, min(cfg.seed_cap, cfg.indeterminate_cap), cfg.cache_dir)
        out["enumeration"] = {"capped": False, "states": len(atlas), "depth": atlas.depth}
    except CapExceeded as exc:
        out["enumeration"] = {"capped": True, "states": len(exc.partial), "depth": exc.depth}
        out["guidance"] = ("seed enumeration did not close under the cap; the vectors below come "
                           f"from a bounded-depth probe (depth {cfg.probe_depth})")
    probe = bounded_depth_probe(m, cfg.probe_depth)
    checks = {"sign_coherent": all(is_sign_coherent(v) for v in probe.c_all)}
    fam = KNOWN_FAMILIES.get(m)
    if fam is not None:
        name, c_ok, d_ok = fam
        out["family"] = name
        checks["probe_c_in_family"] = all(c_ok(v) for v in probe.c_pos)
        checks["probe_d_in_family"] = all(d_ok(v) for v in probe.d_noninit)
    out["probe"] = {"depth": cfg.probe_depth, "c_pos": _vec_list(probe.c_pos),
                    "d": _vec_list(probe.d_noninit)}
    out["checks"] = checks
    return out


def class_sample(z: ClusterTypeLabel, k: int | None, rng_seed: int = 0,
                 cap: int = DEFAULT_CLASS_CAP) -> list[ExchangeMatrix]:
    """Members of the mutation class of ``z``; with ``k`` given, the bipartite
    reference plus ``k - 1`` seeded random picks."""
    ref = reference_matrix(z)
    if k is None:
        return list(enumerate_matrix_class(ref, cap))
    members = enumerate_matrix_class(ref, cap).members
    rng = random.Random(rng_seed)
    picks = rng.sample(range(1, len(members)), min(k - 1, len(members) - 1))
    return [members[0]] + [members[i] for i in sorted(picks)]


DEFAULT_SAMPLE = {("E", 7): 3, ("E", 8): 3}


def verify_type(z: ClusterTypeLabel, config: VerifyConfig | None = None) -> dict:
    cfg = config or VerifyConfig()
    k = cfg.sample if cfg.sample is not None else DEFAULT_SAMPLE.get((z.family, z.rank))
    t0 = time.perf_counter()
    members = class_sample(z, k, cfg.rng_seed, cfg.analysis.class_cap)
    results = []
    for m in members:
        r = analyze_matrix(m, cfg.analysis, label=z)
        log.info("%s member %s: %s", z, m.tolist(), "ok" if r["ok"] else "FAIL")
        results.append({"b": m.tolist(), "ok": r["ok"], "checks": r["checks"],
                        "counts": r["counts"], "bipartite": r["bipartite"]})
    return {
        "schema": REPORT_SCHEMA,
        "type": str(z),
        "members": len(results),
        "sampled": k is not None,
        "expected_count": positive_root_count(z),
        "results": results,
        "ok": all(r["ok"] for r in results),
        "timing": {"seconds": round(time.perf_counter() - t0, 3)},
    }
