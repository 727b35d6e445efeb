"""Command-line driver: scene parsing, artifact emission, run caching."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import acceptance, cache
from .bodies import body_from_dict, ellipticity_bounds
from .domains import domain_from_dict
from .errors import CheckFailure, InvalidBody, SchemaError
from .profiles import (comparison_report, concavity_report, polygon_profile,
                       structure_checks, _as_polygon)
from .surfaces import (anisotropic_area, enclosed_volume, frame_csv, frames,
                       wulff_sample)
from .svg import line_plot
from .variation import Flow, first_variation, second_variation
from .scenes import variation_scenes


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _require_keys(obj: dict, required, optional=(), where: str = "scene"):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be a JSON object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaError(f"{where} missing keys: {missing}")
    unknown = [k for k in obj if k not in set(required) | set(optional)]
    if unknown:
        raise SchemaError(f"{where} has unknown keys: {unknown}")


def _load_scene(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read scene file: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"scene is not valid JSON: {exc}")


def _body(scene: dict):
    try:
        return body_from_dict(scene["body"])
    except (KeyError, ValueError, TypeError, InvalidBody) as exc:
        raise SchemaError(f"bad body: {exc}")


def _domain(scene: dict):
    try:
        return domain_from_dict(scene["domain"])
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad domain: {exc}")


def cmd_body(scene: dict, seed: int, outdir: Path) -> int:
    _require_keys(scene, ["body"], ["resolution"])
    body = _body(scene)
    res = int(scene.get("resolution", 64))
    surf = wulff_sample(body, res)
    fb = frames(surf, body)
    n = body.dim - 1
    report = {
        "seed": seed,
        "body": body.to_dict(),
        "volume": body.volume(),
        "wulff_area": anisotropic_area(surf, body),
        "area_identity_gap": abs(anisotropic_area(surf, body)
                                 - (n + 1) * body.volume()),
        "HK_sup_deviation": float(np.max(np.abs(fb.HK + 1.0))),
        "trace_gap_sup": float(np.max(np.abs(fb.trace_gap))),
        "ellipticity_bounds": [ellipticity_bounds(body).a,
                               ellipticity_bounds(body).b],
    }
    (outdir / "body.json").write_text(_dump(report))
    if report["HK_sup_deviation"] > 1e-6 or report["area_identity_gap"] > 1e-6:
        raise CheckFailure("Wulff identity residuals exceed tolerance")
    return 0


def cmd_surface(scene: dict, seed: int, outdir: Path) -> int:
    _require_keys(scene, ["body"], ["resolution"])
    body = _body(scene)
    surf = wulff_sample(body, int(scene.get("resolution", 64)))
    (outdir / "frames.csv").write_text(f"# seed={seed}\n"
                                       + frame_csv(surf, body))
    return 0


def cmd_variation(scene: dict, seed: int, outdir: Path) -> int:
    _require_keys(scene, ["scene_name"], [], "variation scene")
    catalog = dict(variation_scenes())
    name = scene["scene_name"]
    if name not in catalog:
        raise SchemaError(f"unknown variation scene {name!r}; "
                          f"choose from {sorted(catalog)}")
    rep = second_variation(catalog[name])
    out = {"seed": seed, "scene": name, **rep.to_dict()}
    (outdir / "variation.json").write_text(_dump(out))
    gap = abs(rep.a_prime_fd - rep.a_prime_analytic)
    if gap > 1e-4 * (1.0 + abs(rep.a_prime_analytic)):
        raise CheckFailure(f"first variation FD gap {gap:.2e}")
    return 0


def _profile_artifacts(scene: dict, seed: int) -> dict:
    body = _body(scene)
    domain = _domain(scene)
    if "volumes" in scene:
        vols = [float(v) for v in scene["volumes"]]
    else:
        V = _as_polygon(domain).area()
        n = int(scene.get("grid", 21))
        vols = [i * V / (n + 1) for i in range(1, n + 1)]
    method = scene.get("method", "candidates")
    if method not in ("candidates", "optimizer", "both"):
        raise SchemaError(f"unknown method {method!r}")
    prof = polygon_profile(body, domain, vols, method=method, seed=seed)
    reports = {
        "seed": seed,
        "scene": scene,
        "concavity": concavity_report(prof),
        "comparison": comparison_report(prof, body, domain),
        "structure": structure_checks(prof),
    }
    v, I, psi = prof.volumes(), prof.values(), prof.psi()
    svg = line_plot(
        [("I(v)", v, I),
         ("psi(v)", v, psi, False),
         ("best cone bound", v,
          np.array(reports["comparison"]["best_cone_bound"]), True)],
        title="isoperimetric profile", xlabel="volume", ylabel="value")
    return {"profile.csv": prof.to_csv(seed),
            "reports.json": _dump(reports),
            "profile.svg": svg}


def cmd_profile(scene: dict, seed: int, outdir: Path, use_cache: bool) -> int:
    _require_keys(scene, ["body", "domain"],
                  ["volumes", "grid", "method"])
    artifacts = None
    key = cache.cache_key(scene, seed)
    if use_cache:
        hit = cache.fetch(key)
        if hit is not None:
            artifacts = {k: v.decode() for k, v in hit.items()}
    if artifacts is None:
        artifacts = _profile_artifacts(scene, seed)
        if use_cache:
            cache.store(key, artifacts)
    for name, text in artifacts.items():
        (outdir / name).write_text(text)
    reports = json.loads(artifacts["reports.json"])
    gates = [reports["concavity"]["pass"], reports["comparison"]["pass"],
             reports["structure"]["pass"]]
    if not all(gates):
        raise CheckFailure(f"profile checks failed: concavity={gates[0]} "
                           f"comparison={gates[1]} structure={gates[2]}")
    return 0


def cmd_compare(scene: dict, seed: int, outdir: Path) -> int:
    _require_keys(scene, ["body", "domain"], ["volumes", "grid", "method"])
    body = _body(scene)
    domain = _domain(scene)
    V = _as_polygon(domain).area()
    n = int(scene.get("grid", 21))
    vols = scene.get("volumes") or [i * V / (n + 1) for i in range(1, n + 1)]
    prof = polygon_profile(body, domain, vols, seed=seed)
    rep = {"seed": seed, "scene": scene,
           "comparison": comparison_report(prof, body, domain)}
    (outdir / "compare.json").write_text(_dump(rep))
    if not rep["comparison"]["pass"]:
        raise CheckFailure("cone comparison bound violated")
    return 0


def cmd_suite(seed: int, outdir: Path, tol: dict) -> int:
    mc = int(tol.get("mc_samples", 1_000_000))
    summary = acceptance.run_suite(seed=seed, mc_samples=mc)
    # timings go to stdout only, so repeat runs stay byte-identical
    stored = {"seed": summary["seed"], "pass": summary["pass"],
              "criteria": [{k: v for k, v in c.items()
                            if k not in ("runtime_s", "within_budget")}
                           for c in summary["criteria"]]}
    (outdir / "suite.json").write_text(_dump(stored))
    for c in summary["criteria"]:
        verdict = "PASS" if c["pass"] else "FAIL"
        print(f"criterion {c['criterion']} {c['name']}: {verdict} "
              f"({c['runtime_s']}s)")
    if not summary["pass"]:
        raise CheckFailure("acceptance suite failed")
    return 0


def _parse_tol(pairs) -> dict:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise SchemaError(f"--tol expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = float(v)
        except ValueError:
            raise SchemaError(f"--tol value not numeric: {item!r}")
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="wulffkit")
    ap.add_argument("command", choices=["body", "surface", "variation",
                                        "profile", "compare", "suite"])
    ap.add_argument("--scene", help="path to a JSON scene file")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--tol", action="append",
                    help="NAME=VALUE tolerance override, repeatable")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args(argv)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        tol = _parse_tol(args.tol)
        if args.command == "suite":
            return cmd_suite(args.seed, outdir, tol)
        if not args.scene:
            raise SchemaError(f"{args.command} requires --scene")
        scene = _load_scene(args.scene)
        if args.command == "body":
            return cmd_body(scene, args.seed, outdir)
        if args.command == "surface":
            return cmd_surface(scene, args.seed, outdir)
        if args.command == "variation":
            return cmd_variation(scene, args.seed, outdir)
        if args.command == "profile":
            return cmd_profile(scene, args.seed, outdir, not args.no_cache)
        return cmd_compare(scene, args.seed, outdir)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
