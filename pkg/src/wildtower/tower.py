"""Abstract model of a defining sequence: a forest of annotated components.

A tower records, level by level, the connected components of a shrinking
sequence of compact polyhedral neighbourhoods: each component carries its
first GF(2) Betti number (the "rank"), an is-this-a-3-cell flag, a parent
pointer into the previous level, and optionally the mesh realizing it.

Branch addresses (one component index per level, respecting parent pointers)
stand for the points of the limiting compactum; substitution rules capture
exact self-similarity of the construction and drive the fixed-point argument
r = n*r that forces the limit invariant into {0, oo}.

Checkers report; they do not repair.  Structural impossibilities raise
ValueError, while failed mathematical conditions come back as report entries,
so that batch analyses keep running on inconsistent declarations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

CERTIFICATE_R0 = "CERTIFICATE_R0"
OBSTRUCTION = "OBSTRUCTION"
INCONCLUSIVE = "INCONCLUSIVE"

DESCRIPTOR_SCHEMA = "tower/1"


@dataclass(frozen=True)
class Component:
    """One connected component of one tower level."""

    rank: int | None = None
    is_cell: bool = False
    parent: int | None = None
    mesh: object | None = None  # SimplicialComplex3 when geometry is attached
    mesh_ref: str | None = None  # file reference used by descriptors


@dataclass(frozen=True)
class BranchAddress:
    """Component indices along one branch, one per level from the root level."""

    path: tuple[int, ...]

    def __init__(self, path: Iterable[int]):
        object.__setattr__(self, "path", tuple(int(i) for i in path))
        if not self.path:
            raise ValueError("branch address must contain at least one level")


@dataclass(frozen=True)
class SubstitutionRule:
    """Exact self-similarity data: each component type produces a fixed
    multiset of child types, and carries a fixed rank."""

    children: Mapping[str, tuple[str, ...]]
    ranks: Mapping[str, int]

    def __init__(self, children: Mapping[str, Sequence[str]], ranks: Mapping[str, int]):
        ch = {str(k): tuple(str(c) for c in v) for k, v in children.items()}
        rk = {str(k): int(v) for k, v in ranks.items()}
        if not ch:
            raise ValueError("rule must define at least one type")
        for t, kids in ch.items():
            if not kids:
                raise ValueError(f"type {t!r} is unproductive (no children)")
            unknown = [c for c in kids if c not in ch]
            if unknown:
                raise ValueError(f"type {t!r} produces unknown types {unknown}")
        if set(rk) != set(ch):
            raise ValueError("ranks must cover exactly the declared types")
        if any(v < 0 for v in rk.values()):
            raise ValueError("ranks must be nonnegative")
        object.__setattr__(self, "children", ch)
        object.__setattr__(self, "ranks", rk)

    def self_copies(self, t: str) -> int:
        return sum(1 for c in self.children[t] if c == t)

    def to_json_dict(self) -> dict:
        return {
            "children": {k: list(v) for k, v in sorted(self.children.items())},
            "ranks": dict(sorted(self.ranks.items())),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SubstitutionRule":
        return cls(data["children"], data["ranks"])


@dataclass(frozen=True)
class Tower:
    """Immutable tower of component levels."""

    levels: tuple[tuple[Component, ...], ...]
    declared_r: int | None = None
    complement_not_simply_connected: bool | None = None
    rule: SubstitutionRule | None = None

    def __init__(
        self,
        levels: Iterable[Iterable[Component]],
        declared_r: int | None = None,
        complement_not_simply_connected: bool | None = None,
        rule: SubstitutionRule | None = None,
    ):
        object.__setattr__(
            self, "levels", tuple(tuple(level) for level in levels)
        )
        object.__setattr__(self, "declared_r", declared_r)
        object.__setattr__(
            self, "complement_not_simply_connected", complement_not_simply_connected
        )
        object.__setattr__(self, "rule", rule)
        if declared_r is not None and declared_r < 0:
            raise ValueError("declared_r must be nonnegative")

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    def component(self, level: int, index: int) -> Component:
        return self.levels[level][index]

    def children_of(self, level: int, index: int) -> list[int]:
        if level + 1 >= len(self.levels):
            return []
        return [
            j for j, c in enumerate(self.levels[level + 1]) if c.parent == index
        ]

    def level_ranks(self) -> list[int | None]:
        """Total rank per level; None where any component is unannotated."""
        out: list[int | None] = []
        for level in self.levels:
            if any(c.rank is None for c in level):
                out.append(None)
            else:
                out.append(sum(c.rank for c in level))
        return out

    def with_levels(self, levels) -> "Tower":
        return Tower(
            levels,
            declared_r=self.declared_r,
            complement_not_simply_connected=self.complement_not_simply_connected,
            rule=self.rule,
        )


# ---------------------------------------------------------------------------
# structural validation
# ---------------------------------------------------------------------------


def _check(name: str, status: str, evidence) -> dict:
    return {"name": name, "status": status, "evidence": evidence}


def validate_tower(t: Tower) -> dict:
    """Structural and declared-condition report.

    Checks: parent-pointer totality (the nesting skeleton), productivity
    (every non-leaf component has a child), annotation sanity (ranks are
    nonnegative; the cell flag forces rank 0), constancy of the level rank
    totals against declared_r when set, and records that rank minimality is a
    declaration about all sufficiently small neighbourhoods — finite data can
    never verify it, so it is reported as assumed, not checked.
    """
    checks = []

    nesting_bad = []
    for k, level in enumerate(t.levels):
        for i, c in enumerate(level):
            if k == 0:
                if c.parent is not None:
                    nesting_bad.append((k, i, "root component with a parent"))
            else:
                if c.parent is None:
                    nesting_bad.append((k, i, "missing parent"))
                elif not 0 <= c.parent < len(t.levels[k - 1]):
                    nesting_bad.append((k, i, f"parent {c.parent} out of range"))
    checks.append(
        _check(
            "N1/nesting-skeleton",
            "fail" if nesting_bad else "pass",
            nesting_bad or f"{t.n_levels} levels, parent pointers total",
        )
    )

    unproductive = []
    for k in range(t.n_levels - 1):
        with_children = {c.parent for c in t.levels[k + 1] if c.parent is not None}
        unproductive += [
            (k, i) for i in range(len(t.levels[k])) if i not in with_children
        ]
    checks.append(
        _check(
            "N2/productivity",
            "fail" if unproductive else "pass",
            unproductive or "every non-leaf component has a child",
        )
    )

    bad_annotations = []
    for k, level in enumerate(t.levels):
        for i, c in enumerate(level):
            if c.rank is not None and c.rank < 0:
                bad_annotations.append((k, i, f"negative rank {c.rank}"))
            if c.is_cell and c.rank not in (0, None):
                bad_annotations.append((k, i, f"cell with rank {c.rank}"))
    checks.append(
        _check(
            "annotations/sanity",
            "fail" if bad_annotations else "pass",
            bad_annotations or "ranks nonnegative; cells have rank 0",
        )
    )

    if t.declared_r is None:
        checks.append(
            _check("N3/constant-level-rank", "skipped", "declared_r not set")
        )
    else:
        totals = t.level_ranks()
        if any(v is None for v in totals):
            checks.append(
                _check(
                    "N3/constant-level-rank",
                    "skipped",
                    "unannotated components present",
                )
            )
        else:
            off = [
                (k, v) for k, v in enumerate(totals) if v != t.declared_r
            ]
            checks.append(
                _check(
                    "N3/constant-level-rank",
                    "fail" if off else "pass",
                    off or f"every level totals declared_r={t.declared_r}",
                )
            )

    checks.append(
        _check(
            "N4/rank-minimality",
            "declared",
            "quantifies over all sufficiently small neighbourhoods; "
            "not decidable from a finite tower — assumed as declared",
        )
    )

    ok = all(c["status"] != "fail" for c in checks)
    return {"ok": ok, "checks": checks}


# ---------------------------------------------------------------------------
# rank additivity between levels, and branch limits
# ---------------------------------------------------------------------------


def _require_annotated(t: Tower, levels: Iterable[int]) -> None:
    for k in levels:
        if any(c.rank is None for c in t.levels[k]):
            raise ValueError(f"level {k} has unannotated components")


def _descendant_rank_sums(t: Tower, k: int, l: int) -> list[int]:
    """Sum of level-l descendant ranks for each level-k component."""
    totals = [0] * len(t.levels[k])
    for j in range(len(t.levels[l])):
        idx = j
        for level in range(l, k, -1):
            idx = t.levels[level][idx].parent
        totals[idx] += t.levels[l][j].rank
    return totals


def claim1_check(t: Tower, k: int, l: int) -> dict:
    """Rank additivity between levels: each level-k component's rank must
    equal the summed ranks of its level-l descendants.

    Failure certifies that the tower cannot sit inside a rank-minimal
    regime (the additivity is forced there); it is evidence, not an error.
    """
    if t.declared_r is None:
        raise ValueError("claim1_check requires declared_r to be set")
    if not 0 <= k <= l < t.n_levels:
        raise ValueError(f"need 0 <= k <= l < {t.n_levels}, got k={k}, l={l}")
    _require_annotated(t, range(k, l + 1))
    sums = _descendant_rank_sums(t, k, l)
    per_component = []
    for i, c in enumerate(t.levels[k]):
        per_component.append(
            {
                "component": i,
                "rank": c.rank,
                "descendant_sum": sums[i],
                "ok": c.rank == sums[i],
            }
        )
    return {
        "level_from": k,
        "level_to": l,
        "per_component": per_component,
        "ok": all(p["ok"] for p in per_component),
    }


def _rank_additive(t: Tower, k: int, l: int) -> bool:
    _require_annotated(t, range(k, l + 1))
    sums = _descendant_rank_sums(t, k, l)
    return all(c.rank == sums[i] for i, c in enumerate(t.levels[k]))


def resolve_branch(t: Tower, p: BranchAddress) -> list[Component]:
    """Components along a branch address; raises if the address is invalid."""
    if len(p.path) > t.n_levels:
        raise ValueError("branch address deeper than the tower")
    out = []
    for k, idx in enumerate(p.path):
        if not 0 <= idx < len(t.levels[k]):
            raise ValueError(f"level {k} has no component {idx}")
        c = t.levels[k][idx]
        if k > 0 and c.parent != p.path[k - 1]:
            raise ValueError(
                f"address breaks nesting at level {k}: "
                f"component {idx} has parent {c.parent}, address says {p.path[k-1]}"
            )
        out.append(c)
    return out


def branch_ranks(t: Tower, p: BranchAddress) -> list[int]:
    comps = resolve_branch(t, p)
    if any(c.rank is None for c in comps):
        raise ValueError("branch has unannotated components")
    return [c.rank for c in comps]


def s_value(t: Tower, p: BranchAddress) -> tuple[int, bool]:
    """Limit of the branch rank sequence, as far as the finite data allows.

    Returns (value, stable): the rank at the deepest level of the address,
    with stable=True only when the last two branch ranks agree *and* rank
    additivity holds between those two levels — the regime in which the
    branch sequence is nonincreasing, so an agreeing tail is trustworthy.
    """
    ranks = branch_ranks(t, p)
    value = ranks[-1]
    if len(ranks) < 2:
        return value, False
    last = len(p.path) - 1
    stable = ranks[-1] == ranks[-2] and _rank_additive(t, last - 1, last)
    return value, stable


def leaf_addresses(t: Tower) -> list[BranchAddress]:
    """One full-depth address per deepest-level component."""
    if t.n_levels == 0:
        return []
    out = []
    deepest = t.n_levels - 1
    for j in range(len(t.levels[deepest])):
        path = [0] * t.n_levels
        idx = j
        for k in range(deepest, -1, -1):
            path[k] = idx
            idx = t.levels[k][idx].parent if k > 0 else 0
        out.append(BranchAddress(path))
    return out


def exceptional_set(t: Tower) -> list[BranchAddress]:
    """All deepest-level branches whose limiting rank is positive.

    Requires a structurally valid, fully annotated tower with declared_r set.
    The returned list is never truncated: if the declarations are
    inconsistent, it may exceed declared_r — see exceptional_report.
    """
    if t.declared_r is None:
        raise ValueError("exceptional_set requires declared_r to be set")
    report = validate_tower(t)
    structural = [
        c
        for c in report["checks"]
        if c["name"].startswith(("N1", "N2", "annotations")) and c["status"] == "fail"
    ]
    if structural:
        raise ValueError(f"tower structurally invalid: {structural}")
    _require_annotated(t, range(t.n_levels))
    return [p for p in leaf_addresses(t) if s_value(t, p)[0] > 0]


def exceptional_report(t: Tower) -> dict:
    """exceptional_set plus the pigeonhole bound check against declared_r."""
    addresses = exceptional_set(t)
    count, bound = len(addresses), t.declared_r
    return {
        "addresses": [list(a.path) for a in addresses],
        "count": count,
        "declared_r": bound,
        "consistent": count <= bound,
        "note": (
            "consistent with the at-most-r exceptional points bound"
            if count <= bound
            else "declared annotations are inconsistent: more positive-rank "
            "branches than declared_r allows"
        ),
    }


# ---------------------------------------------------------------------------
# self-similarity: the fixed-point argument
# ---------------------------------------------------------------------------


def self_similarity_analysis(rule: SubstitutionRule, complement_flag: bool) -> dict:
    """Symbolic consequence of exact self-similarity.

    If some type reproduces n >= 2 copies of itself, the limit invariant r of
    that type satisfies r = n*r, so r is 0 or infinite.  A complement that is
    not simply connected (declared input) excludes 0; all-zero ranks yield 0.
    """
    best_type, best_n = None, 0
    for name in sorted(rule.children):
        n = rule.self_copies(name)
        if n > best_n:
            best_type, best_n = name, n

    all_zero = all(v == 0 for v in rule.ranks.values())
    out = {
        "self_similar_type": best_type if best_n >= 2 else None,
        "copies": best_n if best_n >= 2 else 0,
        "equation": f"r = {best_n}*r" if best_n >= 2 else None,
        "complement_not_simply_connected": bool(complement_flag),
    }
    if all_zero:
        if complement_flag:
            out["conclusion"] = "inconsistent"
            out["basis"] = (
                "all declared ranks are 0 (forcing r = 0) but the complement "
                "flag excludes r = 0"
            )
        else:
            out["conclusion"] = "r = 0"
            out["basis"] = "every type has rank 0: all levels are rank-free"
    elif best_n >= 2:
        if complement_flag:
            out["conclusion"] = "r = oo"
            out["basis"] = (
                f"r = {best_n}*r forces r in {{0, oo}}; the complement flag "
                "excludes 0"
            )
        else:
            out["conclusion"] = "r in {0, oo}"
            out["basis"] = f"r = {best_n}*r admits only 0 and oo; neither excluded"
    else:
        out["conclusion"] = "undetermined"
        out["basis"] = "no type reproduces itself at least twice"
    return out


def _branching_consistent(t: Tower, rule: SubstitutionRule) -> bool | None:
    """For single-type rules: does every non-leaf component produce exactly
    the rule's child count?  Multi-type rules are not matched structurally."""
    if len(rule.children) != 1:
        return None
    (n_children,) = {len(v) for v in rule.children.values()}
    for k in range(t.n_levels - 1):
        counts = [0] * len(t.levels[k])
        for c in t.levels[k + 1]:
            if c.parent is not None:
                counts[c.parent] += 1
        if any(c != n_children for c in counts):
            return False
    return True


def rectifiability_verdict(t: Tower, rule: SubstitutionRule | None = None) -> dict:
    """Certificate, obstruction, or honest inconclusiveness.

    CERTIFICATE_R0: every component of every level is a cell — the tower
    witnesses vanishing rank at all available depths.
    OBSTRUCTION: an attached self-similarity rule plus the declared
    complement flag force the limit rank to be infinite.
    INCONCLUSIVE: the finite data supports neither.
    """
    rule = rule if rule is not None else t.rule
    evidence: dict = {"levels": t.n_levels}

    if t.n_levels > 0 and all(
        c.is_cell and c.rank in (0, None) for level in t.levels for c in level
    ):
        evidence["all_cells"] = True
        return {"verdict": CERTIFICATE_R0, "evidence": evidence}

    evidence["all_cells"] = False
    if rule is not None and t.complement_not_simply_connected:
        analysis = self_similarity_analysis(rule, True)
        consistent = _branching_consistent(t, rule)
        evidence["self_similarity"] = analysis
        evidence["rule_branching_consistent"] = consistent
        if analysis["conclusion"] == "r = oo" and consistent is not False:
            return {"verdict": OBSTRUCTION, "evidence": evidence}

    evidence["has_rule"] = rule is not None
    evidence["complement_not_simply_connected"] = t.complement_not_simply_connected
    return {"verdict": INCONCLUSIVE, "evidence": evidence}


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


def to_descriptor_dict(t: Tower) -> dict:
    return {
        "schema": DESCRIPTOR_SCHEMA,
        "declared_r": t.declared_r,
        "complement_not_simply_connected": t.complement_not_simply_connected,
        "rule": t.rule.to_json_dict() if t.rule is not None else None,
        "levels": [
            [
                {
                    "rank": c.rank,
                    "is_cell": c.is_cell,
                    "parent": c.parent,
                    "mesh_ref": c.mesh_ref,
                }
                for c in level
            ]
            for level in t.levels
        ],
    }


def tower_from_descriptor(data: Mapping) -> Tower:
    if data.get("schema") != DESCRIPTOR_SCHEMA:
        raise ValueError(f"unsupported tower schema: {data.get('schema')!r}")
    levels = [
        [
            Component(
                rank=c.get("rank"),
                is_cell=bool(c.get("is_cell", False)),
                parent=c.get("parent"),
                mesh_ref=c.get("mesh_ref"),
            )
            for c in level
        ]
        for level in data.get("levels", [])
    ]
    rule = data.get("rule")
    return Tower(
        levels,
        declared_r=data.get("declared_r"),
        complement_not_simply_connected=data.get("complement_not_simply_connected"),
        rule=SubstitutionRule.from_json_dict(rule) if rule else None,
    )
