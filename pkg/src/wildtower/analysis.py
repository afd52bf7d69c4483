"""Bridging geometry and tower combinatorics: homology annotation, rank
bounds, and the semicontinuity / subadditivity / nullity checks.

Everything here computes *certified* statements only: upper bounds valid at
the depths actually built, exact values when a certificate applies (all
components cells, or a fixed family of solid tori per level), and otherwise
explicitly labelled informational output.  No check ever asserts a claim
about the limit object beyond what the finite stages witness.
"""
from __future__ import annotations

from typing import Sequence

from wildtower.constructions import plane_split
from wildtower.tower import (
    Component,
    Tower,
    claim1_check,
    exceptional_report,
    leaf_addresses,
    rectifiability_verdict,
    s_value,
    self_similarity_analysis,
    validate_tower,
)

REPORT_SCHEMA = "report/1"


# ---------------------------------------------------------------------------
# annotation
# ---------------------------------------------------------------------------


def annotate_with_homology(t: Tower, collect_discrepancies: list | None = None) -> Tower:
    """Tower with every component's rank set to its mesh's computed first
    Betti number.

    Components must all carry meshes.  A prior annotation that disagrees with
    the computed value is a discrepancy: with collect_discrepancies given, a
    record is appended and the computed value wins; without, ValueError.
    Computed annotations are stable, so the operation is idempotent.
    """
    new_levels = []
    strict_failures = []
    for k, level in enumerate(t.levels):
        comps = []
        for i, c in enumerate(level):
            if c.mesh is None:
                raise ValueError(
                    f"annotate_with_homology requires geometry: level {k} "
                    f"component {i} has no mesh"
                )
            computed = int(c.mesh.betti().b1)
            if c.rank is not None and c.rank != computed:
                record = {
                    "level": k,
                    "component": i,
                    "declared": c.rank,
                    "computed": computed,
                }
                if collect_discrepancies is None:
                    strict_failures.append(record)
                else:
                    collect_discrepancies.append(record)
            comps.append(
                Component(
                    rank=computed,
                    is_cell=c.is_cell,
                    parent=c.parent,
                    mesh=c.mesh,
                    mesh_ref=c.mesh_ref,
                )
            )
        new_levels.append(comps)
    if strict_failures:
        raise ValueError(
            "declared ranks disagree with computed homology: "
            + "; ".join(
                f"level {r['level']} component {r['component']} declared "
                f"{r['declared']} but computed {r['computed']}"
                for r in strict_failures
            )
        )
    return t.with_levels(new_levels)


# ---------------------------------------------------------------------------
# rank bounds
# ---------------------------------------------------------------------------


def upper_bound_r(t: Tower) -> int:
    """Smallest level total rank: an upper bound for the limit's r-number
    witnessed by the best level built so far (valid as a bound on the limit
    object only because generators shrink levels toward it)."""
    ranks = t.level_ranks()
    if any(r is None for r in ranks):
        raise ValueError("upper_bound_r requires a fully annotated tower")
    return min(ranks)


def exact_value_certificate(t: Tower) -> int | None:
    """The certified exact value of the tower's bound, or None.

    Certificates: every component a cell (value 0, including empty towers),
    or a constant family of rank-1 components per level (k disjoint solid
    tori shrinking onto k separate cores: value k).
    """
    ranks = t.level_ranks()
    if any(r is None for r in ranks):
        return None
    if all(c.is_cell for level in t.levels for c in level):
        return 0 if not ranks else min(ranks)
    sizes = {len(level) for level in t.levels}
    if len(sizes) == 1 and all(
        c.rank == 1 and not c.is_cell for level in t.levels for c in level
    ):
        return sizes.pop()
    return None


# ---------------------------------------------------------------------------
# chain semicontinuity
# ---------------------------------------------------------------------------


def truncations(t: Tower) -> list[Tower]:
    """The refinement chain of a tower: its depth-k prefixes, shallow to
    full."""
    return [t.with_levels(t.levels[: k + 1]) for k in range(t.n_levels)]


def _check_refines(shallow: Tower, deep: Tower, stage: int) -> None:
    if deep.n_levels < shallow.n_levels:
        raise ValueError(
            f"malformed chain: stage {stage} has fewer levels than stage "
            f"{stage - 1}"
        )
    for k in range(shallow.n_levels):
        a, b = shallow.levels[k], deep.levels[k]
        if len(a) != len(b):
            raise ValueError(
                f"malformed chain: stage {stage} changes the number of "
                f"components at level {k}"
            )
        for i, (ca, cb) in enumerate(zip(a, b)):
            if ca.parent != cb.parent or ca.is_cell != cb.is_cell:
                raise ValueError(
                    f"malformed chain: stage {stage} restructures level {k} "
                    f"component {i}"
                )


def check_semicontinuity(chain: Sequence[Tower]) -> dict:
    """Each stage's bound must dominate the refined (final) object's bound.

    The chain must be structurally nested (each tower extends the previous);
    rank annotations that break the bound monotonicity — e.g. a corrupted
    deep stage — fail with the offending stage identified.
    """
    chain = list(chain)
    if not chain:
        raise ValueError("malformed chain: empty")
    for s in range(1, len(chain)):
        _check_refines(chain[s - 1], chain[s], s)
    stage_bounds = [upper_bound_r(t) for t in chain]
    refined = stage_bounds[-1]
    offending = None
    for s, bound in enumerate(stage_bounds):
        if bound < refined:
            offending = s
            break
    # shared-prefix annotations must agree as well
    mismatch = None
    final = chain[-1]
    for s, t in enumerate(chain[:-1]):
        if t.level_ranks() != final.level_ranks()[: t.n_levels]:
            mismatch = s
            break
    status = "pass" if offending is None and mismatch is None else "fail"
    return {
        "name": "semicontinuity",
        "status": status,
        "evidence": {
            "stage_bounds": stage_bounds,
            "refined_bound": refined,
            "offending_stage": offending if offending is not None else mismatch,
        },
    }


# ---------------------------------------------------------------------------
# plane subadditivity
# ---------------------------------------------------------------------------


def check_subadditivity(t: Tower, plane) -> dict:
    """Split by a plane and compare rank bounds of the halves to the whole.

    The split is disjoint by construction, so the additivity inequality
    bound(whole) >= bound(low) + bound(high) is *verified* when all three
    values carry exactness certificates; otherwise the three bounds are
    reported without asserting the inequality.  The per-level partition
    identity (low + high = whole on every level) is always checked exactly.
    """
    low, high = plane_split(t, plane)
    bound_whole = upper_bound_r(t)
    bound_low = upper_bound_r(low)
    bound_high = upper_bound_r(high)
    whole_ranks = t.level_ranks()
    partition_ok = [
        a + b == w
        for a, b, w in zip(low.level_ranks(), high.level_ranks(), whole_ranks)
    ]
    certificates = [
        exact_value_certificate(side) for side in (t, low, high)
    ]
    certified = all(v is not None for v in certificates)
    if certified:
        inequality_ok = bound_whole >= bound_low + bound_high
        status = "pass" if inequality_ok and all(partition_ok) else "fail"
    else:
        inequality_ok = None
        status = "reported" if all(partition_ok) else "fail"
    return {
        "name": "subadditivity",
        "status": status,
        "evidence": {
            "plane": [plane[0], int(plane[1])],
            "bound_whole": bound_whole,
            "bound_low": bound_low,
            "bound_high": bound_high,
            "certified": certified,
            "inequality_verified": inequality_ok,
            "partition_identity": all(partition_ok),
        },
    }


# ---------------------------------------------------------------------------
# nullity
# ---------------------------------------------------------------------------


def check_nullity(t: Tower) -> dict:
    """All components cells if and only if every level rank is zero,
    verified direction by direction."""
    ranks = t.level_ranks()
    if any(r is None for r in ranks):
        raise ValueError("check_nullity requires a fully annotated tower")
    all_cells = all(c.is_cell for level in t.levels for c in level)
    all_zero = all(r == 0 for r in ranks)
    violations = [
        {"level": k, "component": i, "rank": c.rank}
        for k, level in enumerate(t.levels)
        for i, c in enumerate(level)
        if c.is_cell and c.rank != 0
    ]
    forward = (not all_cells) or all_zero
    backward = (not all_zero) or all_cells
    status = "pass" if forward and backward and not violations else "fail"
    return {
        "name": "nullity",
        "status": status,
        "evidence": {
            "all_cells": all_cells,
            "all_ranks_zero": all_zero,
            "cells_imply_null": forward,
            "null_implies_cells": backward,
            "violations": violations,
        },
    }


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def full_report(t: Tower, instance: str = "tower", plane=None) -> dict:
    """Complete analysis report: structural validation, homology annotation,
    rank additivity, branch limits, exceptional set, self-similarity, and the
    final verdict, as one JSON-ready dictionary.

    Statuses: pass/fail are verified statements about this tower; "declared"
    marks assumptions taken on trust; "reported" marks informational output;
    "skipped" marks checks whose preconditions are absent.  The verdict field
    carries the rectifiability outcome for the limit object.
    """
    checks = []

    has_geometry = all(
        c.mesh is not None for level in t.levels for c in level
    ) and any(len(level) for level in t.levels)
    if has_geometry:
        discrepancies: list = []
        t = annotate_with_homology(t, collect_discrepancies=discrepancies)
        checks.append(
            {
                "name": "homology/annotation",
                "status": "fail" if discrepancies else "pass",
                "evidence": {"discrepancies": discrepancies},
            }
        )
    else:
        checks.append(
            {
                "name": "homology/annotation",
                "status": "skipped",
                "evidence": {"reason": "not every component carries a mesh"},
            }
        )

    structure = validate_tower(t)
    checks.extend(structure["checks"])

    annotated = not any(r is None for r in t.level_ranks())

    if t.declared_r is not None and annotated and t.n_levels >= 1:
        claim = claim1_check(t, 0, t.n_levels - 1)
        checks.append(
            {
                "name": "rank-additivity",
                "status": "pass" if claim["ok"] else "fail",
                "evidence": claim,
            }
        )
    else:
        checks.append(
            {
                "name": "rank-additivity",
                "status": "skipped",
                "evidence": {
                    "reason": "needs declared_r and full annotation"
                },
            }
        )

    if annotated:
        try:
            leaves = leaf_addresses(t)
            values = []
            stable_count = 0
            for address in leaves:
                value, stable = s_value(t, address)
                values.append(value)
                stable_count += int(stable)
            checks.append(
                {
                    "name": "branch-limits",
                    "status": "reported",
                    "evidence": {
                        "branches": len(leaves),
                        "stable": stable_count,
                        "max_value": max(values, default=0),
                        "positive": sum(1 for v in values if v > 0),
                    },
                }
            )
        except ValueError as exc_err:
            checks.append(
                {
                    "name": "branch-limits",
                    "status": "skipped",
                    "evidence": {"reason": str(exc_err)},
                }
            )
        try:
            exc = exceptional_report(t)
            checks.append(
                {
                    "name": "exceptional-set",
                    "status": "pass" if exc["consistent"] else "fail",
                    "evidence": exc,
                }
            )
        except ValueError as exc_err:
            checks.append(
                {
                    "name": "exceptional-set",
                    "status": "skipped",
                    "evidence": {"reason": str(exc_err)},
                }
            )

    if t.rule is not None:
        analysis = self_similarity_analysis(
            t.rule, t.complement_not_simply_connected
        )
        checks.append(
            {
                "name": "self-similarity",
                "status": "reported",
                "evidence": analysis,
            }
        )

    if annotated:
        checks.append(check_nullity(t))

    bounds = {
        "level_ranks": t.level_ranks(),
        "upper_bound_r": upper_bound_r(t) if annotated else None,
        "exact_value_certificate": exact_value_certificate(t),
        "declared_r": t.declared_r,
    }

    if plane is not None:
        checks.append(check_subadditivity(t, plane))

    verdict = rectifiability_verdict(t)
    return {
        "schema": REPORT_SCHEMA,
        "instance": instance,
        "checks": checks,
        "bounds": bounds,
        "verdict": verdict["verdict"],
        "verdict_evidence": verdict["evidence"],
    }
