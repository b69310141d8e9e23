"""Experiment scenarios run by the command line tool.

Each scenario takes a params dict, a seed and an output directory, writes
CSV/JSON files there and returns a small JSON-able summary.  Outputs
depend only on (params, seed).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Callable

import numpy as np

from . import densities as dens
from .core import Graphon, constant_graphon, make_graphon, metric_graphon_from_matrix, WeightedGrid
from .graphing import (
    check_degree_symmetry,
    edge_measure,
    full_subgraphing,
    graphing_automorphisms,
    make_graphing,
    positive_support,
)
from .groups import (
    biinvariant_profile,
    cayley_graphon,
    cyclic_group,
    padic_tower,
    product_group,
    pullback_graphon,
    symmetric_group_table,
    table_group,
    torus_group,
    torus_limit_profile,
    winding_kernel_profile,
    winding_morphism,
)
from .metrics import image_convergence, purity_check
from .spectral import eigendecompose, truncation_sweep
from .symmetry import frucht_realize, graph_automorphisms, graphon_automorphisms, trivial_automorphisms


class ScenarioError(ValueError):
    """Invalid scenario name or parameters."""


def _write(out_dir: Path, name: str, text: str) -> str:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text, encoding="utf-8", newline="\n")
    return name


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def build_graphon(desc: dict) -> Graphon:
    """Small named-graphon factory used by scenario configs."""
    kind = desc.get("kind")
    if kind == "G2":
        return make_graphon(WeightedGrid([0.5, 0.5]), [[0.0, 1.0], [1.0, 0.0]])
    if kind == "constant":
        return constant_graphon(int(desc["n"]), float(desc["c"]))
    if kind == "cayley-winding":
        n = int(desc["N"])
        exps = [int(e) for e in desc["exponents"]]
        return cayley_graphon(cyclic_group(n), winding_kernel_profile(len(exps), exps, n))
    if kind == "cayley-circle":
        g = cyclic_group(int(desc["N"]))
        return cayley_graphon(g, biinvariant_profile(g))
    if kind == "json":
        return Graphon.from_json(json.dumps(desc["graphon"]))
    raise ScenarioError(f"unknown graphon kind {kind!r}")


def _exponent_tuples(raw, k: int) -> list[tuple[int, ...]]:
    out = []
    for e in raw:
        t = tuple(int(x) for x in e) if isinstance(e, (list, tuple)) else (int(e),) * k
        if len(t) != k:
            raise ScenarioError(f"exponent tuple {t} does not have length k={k}")
        out.append(t)
    return out


def winding_torus(params: dict, seed: int, out_dir: Path) -> dict:
    k = int(params.get("k", 1))
    n = int(params.get("N", 256))
    limit_n = int(params.get("limit_N", 32))
    exps = _exponent_tuples(params.get("exponents", [2, 4, 8, 16, 32, 64]), k)
    patterns = [dens.pattern(p) for p in params.get("patterns", ["edge", "triangle"])]
    opts = {"max_grid": int(params.get("max_grid", 4096))}

    seq = [cayley_graphon(cyclic_group(n), winding_kernel_profile(k, e, n)) for e in exps]
    labels = ["x".join(map(str, e)) for e in exps]
    limit = cayley_graphon(torus_group(k + 1, limit_n), torus_limit_profile(k, limit_n))
    rows = dens.convergence_report(seq + [limit], patterns, labels + ["limit"], **opts)
    files = [_write(out_dir, "densities.csv", dens.report_to_csv(rows))]
    limit_vals = {r.pattern_name: r.density for r in rows if r.index == "limit"}
    gaps = {
        label: {r.pattern_name: abs(r.density - limit_vals[r.pattern_name]) for r in rows if r.index == label}
        for label in labels
    }
    summary = {"limit": limit_vals, "gap_to_limit": gaps, "files": files}
    files.append(_write(out_dir, "summary.json", _dump(summary)))
    return summary


def padic(params: dict, seed: int, out_dir: Path) -> dict:
    p = int(params.get("p", 2))
    n = int(params.get("N", 1024))
    ms = [int(m) for m in params.get("m", [1, 2, 3, 4, 5, 6])]
    patterns = [dens.pattern(x) for x in params.get("patterns", ["edge", "triangle"])]
    circle = cyclic_group(n)
    target = cayley_graphon(circle, biinvariant_profile(circle))
    morphisms = [padic_tower(p, m, n) for m in ms]
    dh = image_convergence(morphisms, circle)
    opts = {"max_grid": max(n, 256)}
    pulled = [pullback_graphon(phi, target) for phi in morphisms]
    rows = dens.convergence_report(pulled + [target], patterns, [str(m) for m in ms] + ["circle"], **opts)
    haus_rows = [(m, p**m, d, 1.0 / (2 * p**m)) for m, d in zip(ms, dh)]
    files = [
        _write(out_dir, "hausdorff.csv", _csv(["m", "order", "hausdorff", "expected"], haus_rows)),
        _write(out_dir, "densities.csv", dens.report_to_csv(rows)),
    ]
    summary = {"hausdorff": dict(zip(map(str, ms), dh)), "files": files}
    _write(out_dir, "summary.json", _dump(summary))
    return summary


def truncation(params: dict, seed: int, out_dir: Path) -> dict:
    g = build_graphon(params.get("graphon", {"kind": "G2"}))
    rs = [float(r) for r in params.get("r", [0.1, 0.4, 0.5, 0.6, 1.0])]
    if any(r <= 0 for r in rs):
        raise ScenarioError("all thresholds r must be > 0")
    decomp = eigendecompose(g)
    sweep = truncation_sweep(g, rs)
    files = [
        _write(out_dir, "spectrum.csv", decomp.to_csv()),
        _write(out_dir, "truncation.json", _dump(sweep)),
    ]
    return {"sweep": sweep, "files": files}


def purity(params: dict, seed: int, out_dir: Path) -> dict:
    clouds = int(params.get("clouds", 50))
    points = int(params.get("points", 6))
    dim = int(params.get("dim", 2))
    const_n = int(params.get("constant_n", 4))
    rng = np.random.default_rng(seed)
    reports = []
    for i in range(clouds):
        x = rng.random((points, dim))
        w = rng.random(points) + 0.05
        w = w / w.sum()
        d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
        g = metric_graphon_from_matrix(d, w, x)
        rep = purity_check(g)
        triv = trivial_automorphisms(g, graphon_automorphisms(g))
        reports.append({"cloud": i, "separated": rep.separated, "full_support": rep.full_support,
                        "min_rw": rep.min_rw, "trivial_order": triv.order})
    const = purity_check(constant_graphon(const_n, float(params.get("constant_c", 0.5))))
    summary = {
        "clouds": clouds,
        "all_pure": all(r["separated"] and r["full_support"] for r in reports),
        "all_trivial": all(r["trivial_order"] == 1 for r in reports),
        "constant": {"separated": const.separated, "min_rw": const.min_rw, "full_support": const.full_support},
    }
    files = [_write(out_dir, "purity.json", _dump({"reports": reports, "summary": summary}))]
    summary["files"] = files
    return summary


def named_group(name: str):
    """Return ``(group, generators)`` for the small groups used by the frucht scenario."""
    if name == "trivial":
        return cyclic_group(1), [0]
    if name in ("Z2", "Z3", "Z4", "Z5", "Z6"):
        return cyclic_group(int(name[1:])), [1]
    if name == "Z2xZ2":
        return product_group(cyclic_group(2), cyclic_group(2)), [1, 2]
    if name == "S3":
        table, perms = symmetric_group_table(3)
        return table_group(table), [perms.index((1, 0, 2)), perms.index((1, 2, 0))]
    raise ScenarioError(f"unknown group {name!r}")


def frucht(params: dict, seed: int, out_dir: Path) -> dict:
    if "table" in params:
        group = table_group(params["table"])
        gens = [int(s) for s in params["generators"]]
        name = "table"
    else:
        name = params.get("group", "Z3")
        group, gens = named_group(name)
        gens = [int(s) for s in params.get("generators", gens)]
    graph = frucht_realize(group, gens)
    auts = graph_automorphisms(graph, cap=int(params.get("cap", 256)))
    result = {"group": name, "group_order": group.order, "generators": gens,
              "num_vertices": graph.num_vertices, "automorphism_order": auts.order,
              "automorphisms": auts.to_dict()}
    files = [_write(out_dir, "graph.json", graph.to_json() + "\n"), _write(out_dir, "result.json", _dump(result))]
    return {"automorphism_order": auts.order, "group_order": group.order, "files": files}


def graphing_check(params: dict, seed: int, out_dir: Path) -> dict:
    weights = params.get("weights", [0.25, 0.25, 0.25, 0.25])
    edges = params.get("edges", [[0, 1], [1, 2], [2, 3], [3, 0]])
    g = make_graphing(WeightedGrid(np.asarray(weights, dtype=float)), edges, int(params.get("D", 2)))
    rep = check_degree_symmetry(g)
    everything = range(len(g))
    auts = graphing_automorphisms(g)
    sub = full_subgraphing(g, positive_support(g))
    result = {
        "degree_symmetry": {"holds": rep.holds, "max_violation": rep.max_violation,
                            "witness": None if rep.witness is None else [list(s) for s in rep.witness]},
        "eta_VxV": edge_measure(g, everything, everything),
        "automorphism_order": auts.order,
        "full_subgraphing_order": graphing_automorphisms(sub).order,
    }
    files = [_write(out_dir, "graphing.json", _dump(result))]
    return {**result, "files": files}


def image_limits(params: dict, seed: int, out_dir: Path) -> dict:
    n = int(params.get("N", 64))
    exps = [int(e) for e in params.get("exponents", [2, 4, 8])]
    morphisms = [winding_morphism(n, (e,)) for e in exps]
    dh = image_convergence(morphisms)
    files = [_write(out_dir, "images.csv", _csv(["n", "hausdorff"], list(zip(exps, dh))))]
    return {"hausdorff": dict(zip(map(str, exps), dh)),
            "strictly_decreasing": all(a > b for a, b in zip(dh, dh[1:])), "files": files}


REGISTRY: dict[str, Callable[[dict, int, Path], dict]] = {
    "winding-torus": winding_torus,
    "padic": padic,
    "truncation": truncation,
    "purity": purity,
    "frucht": frucht,
    "graphing-check": graphing_check,
    "image-limits": image_limits,
}


def scenarios() -> list[str]:
    return list(REGISTRY)


def run_scenario(name: str, params: dict, seed: int, out_dir: Path) -> dict:
    if name not in REGISTRY:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {', '.join(REGISTRY)}")
    if not isinstance(params, dict):
        raise ScenarioError("params must be a JSON object")
    return REGISTRY[name](params, int(seed), Path(out_dir))
