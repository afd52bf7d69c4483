"""Command-line front door: generate towers, compute homology, run analyses.

Three subcommands:

* ``generate``  — build a tower from a construction spec (JSON) and write its
  descriptor plus per-component meshes (raw-tetrahedra JSON and OFF text).
* ``homology``  — Betti numbers of one mesh, or of every component of a
  descriptor together with per-level rank totals.
* ``analyze``   — run the full analysis report on a descriptor, optionally
  rendering figures and CSV summaries.

Machine-readable JSON goes to standard output; a short human summary goes to
standard error.  Identical inputs produce byte-identical outputs.  Exit codes:
0 success, 1 the analysis found an inconsistency, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from wildtower.analysis import full_report
from wildtower.constructions import (
    DEFAULT_BUDGET,
    NecklaceSpec,
    _round_point,
    build_cell_tower,
    build_necklace_tower,
)
from wildtower.simplicial import MESH_SCHEMA, SimplicialComplex3
from wildtower.tower import (
    DESCRIPTOR_SCHEMA,
    SubstitutionRule,
    Tower,
    to_descriptor_dict,
    tower_from_descriptor,
)
from wildtower.units import default_scale


class InputError(Exception):
    """Anything wrong with what the user handed us (exit code 2)."""


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# tower <-> files
# ---------------------------------------------------------------------------


def write_tower_artifacts(t: Tower, out_dir: str, write_meshes: bool = True) -> dict:
    """Write ``descriptor.json`` plus, for every component with geometry, a
    raw-tetrahedra JSON mesh and an OFF export under ``meshes/``.  Returns a
    summary dict (also the generate command's stdout payload)."""
    os.makedirs(out_dir, exist_ok=True)
    has_geometry = write_meshes and any(
        c.mesh is not None for level in t.levels for c in level
    )
    if has_geometry:
        os.makedirs(os.path.join(out_dir, "meshes"), exist_ok=True)
    mesh_files = 0
    new_levels = []
    for k, level in enumerate(t.levels):
        row = []
        for i, c in enumerate(level):
            ref = None
            if has_geometry and c.mesh is not None:
                stem = f"meshes/level{k}_comp{i:03d}"
                _write_text(
                    os.path.join(out_dir, stem + ".json"),
                    _dumps(c.mesh.to_json_dict()),
                )
                _write_text(os.path.join(out_dir, stem + ".off"), c.mesh.to_off())
                ref = stem + ".json"
                mesh_files += 2
            row.append(replace(c, mesh_ref=ref))
        new_levels.append(row)
    stripped = Tower(
        new_levels,
        declared_r=t.declared_r,
        complement_not_simply_connected=t.complement_not_simply_connected,
        rule=t.rule,
    )
    descriptor_path = os.path.join(out_dir, "descriptor.json")
    _write_text(descriptor_path, _dumps(to_descriptor_dict(stripped)))
    return {
        "descriptor": descriptor_path,
        "mesh_files": mesh_files,
        "levels": [len(level) for level in t.levels],
    }


def load_descriptor_tower(path: str, attach_meshes: bool = True) -> Tower:
    """Load a descriptor; when ``attach_meshes``, resolve each component's
    mesh_ref relative to the descriptor's directory and load the mesh."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: descriptor must be a JSON object")
    try:
        t = tower_from_descriptor(data)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{path}: {e}") from e
    if not attach_meshes:
        return t
    base = os.path.dirname(os.path.abspath(path))
    new_levels = []
    for level in t.levels:
        row = []
        for c in level:
            mesh = None
            if c.mesh_ref is not None:
                mesh_data = _load_json(os.path.join(base, c.mesh_ref))
                try:
                    mesh = SimplicialComplex3.from_json_dict(mesh_data)
                except (ValueError, KeyError, TypeError) as e:
                    raise InputError(f"{c.mesh_ref}: {e}") from e
            row.append(replace(c, mesh=mesh))
        new_levels.append(row)
    return Tower(
        new_levels,
        declared_r=t.declared_r,
        complement_not_simply_connected=t.complement_not_simply_connected,
        rule=t.rule,
    )


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def _build_from_spec(spec_data: dict, scale: int, budget: int) -> Tower:
    kind = spec_data.get("kind")
    if kind == "necklace":
        spec = NecklaceSpec.from_json_dict(spec_data)
        return build_necklace_tower(spec, scale=scale, budget=budget)
    if kind == "cells":
        if "points" not in spec_data or "depth" not in spec_data:
            raise ValueError('a "cells" spec needs "points" and "depth"')
        points = [
            _round_point(tuple(float(c) for c in p), scale)
            for p in spec_data["points"]
        ]
        return build_cell_tower(points, int(spec_data["depth"]), scale=scale)
    raise ValueError(
        f'unknown construction kind {kind!r}: expected "necklace" or "cells"'
    )


def cmd_generate(args) -> int:
    spec_data = _load_json(args.spec_file)
    if not isinstance(spec_data, dict):
        raise InputError(f"{args.spec_file}: spec must be a JSON object")
    scale = args.scale
    if scale is None:
        scale = spec_data.get("scale")
    if scale is None:
        scale = default_scale()
    try:
        t = _build_from_spec(spec_data, int(scale), args.budget)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{args.spec_file}: {e}") from e
    summary = write_tower_artifacts(t, args.out, write_meshes=not args.no_meshes)
    sys.stdout.write(_dumps(summary))
    _info(
        "levels: " + "/".join(str(n) for n in summary["levels"]) + " components"
    )
    _info(f"wrote {summary['descriptor']} and {summary['mesh_files']} mesh files")
    return 0


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def _betti_dict(mesh: SimplicialComplex3) -> dict:
    b = mesh.betti()
    return {"b0": b.b0, "b1": b.b1, "b2": b.b2, "b3": b.b3}


def cmd_homology(args) -> int:
    data = _load_json(args.path)
    if not isinstance(data, dict):
        raise InputError(f"{args.path}: expected a JSON object")
    schema = data.get("schema")
    if schema == MESH_SCHEMA:
        try:
            mesh = SimplicialComplex3.from_json_dict(data)
        except (ValueError, KeyError, TypeError) as e:
            raise InputError(f"{args.path}: {e}") from e
        payload = _betti_dict(mesh)
        sys.stdout.write(_dumps(payload))
        _info(f"betti: {payload}")
        return 0
    if schema == DESCRIPTOR_SCHEMA:
        t = load_descriptor_tower(args.path)
        levels = []
        totals = []
        for k, level in enumerate(t.levels):
            row = []
            total = 0
            for i, c in enumerate(level):
                if c.mesh is None:
                    raise InputError(
                        f"level {k} component {i} has no mesh reference; "
                        "regenerate with geometry to compute homology"
                    )
                betti = _betti_dict(c.mesh)
                row.append(betti)
                total += betti["b1"]
            levels.append(row)
            totals.append(total)
        payload = {"levels": levels, "level_totals": totals}
        sys.stdout.write(_dumps(payload))
        _info(f"level totals (first Betti numbers): {totals}")
        return 0
    raise InputError(
        f"{args.path}: unsupported schema {schema!r} "
        f"(expected {MESH_SCHEMA!r} or {DESCRIPTOR_SCHEMA!r})"
    )


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _parse_rule(text: str) -> SubstitutionRule:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"--rule is not valid JSON: {e}") from e
    else:
        data = _load_json(text)
    try:
        return SubstitutionRule.from_json_dict(data)
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"invalid substitution rule: {e}") from e


def _parse_plane(text: str, t: Tower) -> tuple:
    axis, sep, value = text.partition("=")
    axis = axis.strip().lower()
    if not sep or axis not in ("x", "y", "z"):
        raise InputError(
            f"--plane must look like x=0.5 or z=-1 (got {text!r})"
        )
    try:
        model = float(value)
    except ValueError as e:
        raise InputError(f"--plane coordinate {value!r} is not a number") from e
    scale = None
    for level in t.levels:
        for c in level:
            if c.mesh is not None:
                scale = c.mesh.scale
                break
        if scale is not None:
            break
    if scale is None:
        raise InputError("--plane needs geometry, but no component has a mesh")
    return (axis, round(model * scale))


def cmd_analyze(args) -> int:
    t = load_descriptor_tower(args.descriptor)
    if args.declared_r is not None or args.complement_nontrivial or args.rule:
        t = Tower(
            t.levels,
            declared_r=args.declared_r if args.declared_r is not None else t.declared_r,
            complement_not_simply_connected=(
                True if args.complement_nontrivial else t.complement_not_simply_connected
            ),
            rule=_parse_rule(args.rule) if args.rule else t.rule,
        )
    instance = args.instance
    if instance is None:
        instance = os.path.splitext(os.path.basename(args.descriptor))[0]
    plane = _parse_plane(args.plane, t) if args.plane else None
    try:
        report = full_report(t, instance=instance, plane=plane)
    except ValueError as e:
        raise InputError(str(e)) from e
    if args.figures:
        from wildtower.figures import render_all

        report["figures"] = render_all(t, report, args.figures)
    sys.stdout.write(_dumps(report))
    _info(f"instance: {report['instance']}")
    for check in report["checks"]:
        _info(f"check {check['name']}: {check['status']}")
    bound = report["bounds"]["upper_bound_r"]
    if bound is not None:
        _info(f"upper bound on r: {bound}")
    _info(f"verdict: {report['verdict']}")
    failed = [c["name"] for c in report["checks"] if c["status"] == "fail"]
    if failed:
        _info("failed checks: " + ", ".join(failed))
        return 1
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wildtower",
        description=(
            "Generate neighbourhood towers, compute their GF(2) homology, "
            "and analyze the smallest achievable level-rank invariant."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser(
        "generate",
        help="build a tower from a spec file and write descriptor + meshes",
    )
    g.add_argument("spec_file", help="construction spec (JSON)")
    g.add_argument("out", help="output directory")
    g.add_argument(
        "--scale",
        type=int,
        default=None,
        help="lattice units per model unit (default: spec file, then "
        "WILDTOWER_SCALE, then 10^6)",
    )
    g.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="maximum total tetrahedra (towers grow exponentially with depth)",
    )
    g.add_argument(
        "--no-meshes",
        action="store_true",
        help="write only the descriptor, no mesh files",
    )
    g.set_defaults(fn=cmd_generate)

    h = sub.add_parser(
        "homology",
        help="Betti numbers of a mesh file or of every component of a descriptor",
    )
    h.add_argument("path", help="mesh JSON or tower descriptor JSON")
    h.set_defaults(fn=cmd_homology)

    a = sub.add_parser(
        "analyze",
        help="run the full analysis report on a tower descriptor",
    )
    a.add_argument("descriptor", help="tower descriptor JSON")
    a.add_argument(
        "--declared-r",
        type=int,
        default=None,
        help="declared value of the tower invariant r",
    )
    a.add_argument(
        "--complement-nontrivial",
        action="store_true",
        help="assert that the complement of the limit set is not simply connected",
    )
    a.add_argument(
        "--rule",
        default=None,
        help="substitution rule as inline JSON or a path to a JSON file",
    )
    a.add_argument(
        "--plane",
        default=None,
        help="axis-aligned split plane in model units, e.g. x=0 (adds the "
        "subadditivity check)",
    )
    a.add_argument(
        "--figures",
        default=None,
        help="directory for rendered figures and CSV summaries",
    )
    a.add_argument(
        "--instance",
        default=None,
        help="instance name used in the report (default: descriptor file stem)",
    )
    a.set_defaults(fn=cmd_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
