"""Dual graphs of weighted nodal curves, stability, and boundary divisors.

A one-node degeneration is recorded by the markings on one side together
with a genus split; a coincidence divisor records two positive-weight
markings allowed to collide. Trees are canonicalized so enumeration is
deterministic, and reduction morphisms report exactly the divisors whose
collapsed side maps to a stratum of codimension at least two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .weights import (
    WeightData,
    chamber_signature,
    reduction_exists,
    require_valid,
)

__all__ = [
    "StableTree",
    "BoundaryDivisor",
    "Contraction",
    "vertex_degree",
    "is_stable",
    "enumerate_boundary_divisors",
    "contracted_divisors",
    "divisor_tree",
]

TREE_SCHEMA = "stable-tree/1"


@dataclass(frozen=True)
class StableTree:
    """Dual graph: vertices carry genus, markings sit at vertices.

    ``edges`` are unordered vertex pairs; a self-loop ``(v, v)`` is a
    non-separating node and counts twice in the degree at ``v``.
    ``clusters[v]`` lists the coincidence classes at vertex ``v`` —
    markings in one class share a point. Markings not listed are at
    pairwise distinct points; singleton classes are implicit.

    ``edge_markings`` is an extension slot for zero-weight markings that
    sit at a node (keyed by position into ``edges``). Such markings are
    excluded from vertex degrees and flagged, since their stratum
    geometry is not modeled here.
    """

    vertex_genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    marking_at: tuple[tuple[int, int], ...]  # (marking, vertex), sorted
    clusters: tuple[tuple[tuple[int, ...], ...], ...] = ()
    edge_markings: tuple[tuple[int, int], ...] = ()  # (marking, edge index)

    def __post_init__(self):
        nv = len(self.vertex_genera)
        if nv == 0:
            raise ValueError("a curve has at least one component")
        if any(g < 0 for g in self.vertex_genera):
            raise ValueError("vertex genus must be non-negative")
        for e in self.edges:
            if len(e) != 2 or not all(0 <= v < nv for v in e):
                raise ValueError(f"edge {e} references unknown vertices")
        object.__setattr__(
            self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges))
        )
        seen: set[int] = set()
        for m, v in self.marking_at:
            if m in seen:
                raise ValueError(f"marking {m} placed twice")
            seen.add(m)
            if not 0 <= v < nv:
                raise ValueError(f"marking {m} at unknown vertex {v}")
        for m, e in self.edge_markings:
            if m in seen:
                raise ValueError(f"marking {m} placed twice")
            seen.add(m)
            if not 0 <= e < len(self.edges):
                raise ValueError(f"marking {m} on unknown edge {e}")
        object.__setattr__(self, "marking_at", tuple(sorted(self.marking_at)))
        object.__setattr__(self, "edge_markings", tuple(sorted(self.edge_markings)))
        clusters = self.clusters if self.clusters else ((),) * nv
        if len(clusters) != nv:
            raise ValueError("clusters must list one entry per vertex")
        at_vertex = {v: set() for v in range(nv)}
        for m, v in self.marking_at:
            at_vertex[v].add(m)
        canon_clusters = []
        for v, classes in enumerate(clusters):
            used: set[int] = set()
            vc = []
            for cls in classes:
                cs = set(cls)
                if len(cs) != len(cls):
                    raise ValueError(f"repeated marking in a class at vertex {v}")
                if not cs <= at_vertex[v]:
                    raise ValueError(
                        f"class {sorted(cs)} contains markings not at vertex {v}"
                    )
                if cs & used:
                    raise ValueError(f"overlapping classes at vertex {v}")
                used |= cs
                vc.append(tuple(sorted(cs)))
            canon_clusters.append(tuple(sorted(vc)))
        object.__setattr__(self, "clusters", tuple(canon_clusters))
        if not self._connected():
            raise ValueError("the dual graph must be connected")

    def _connected(self) -> bool:
        nv = len(self.vertex_genera)
        parent = list(range(nv))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        return len({find(v) for v in range(nv)}) == 1

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_genera)

    @property
    def total_genus(self) -> int:
        return sum(self.vertex_genera) + len(self.edges) - self.num_vertices + 1

    @property
    def markings(self) -> frozenset[int]:
        return frozenset(m for m, _ in self.marking_at) | frozenset(
            m for m, _ in self.edge_markings
        )

    @property
    def has_node_markings(self) -> bool:
        return bool(self.edge_markings)

    def markings_at_vertex(self, v: int) -> tuple[int, ...]:
        return tuple(m for m, w in self.marking_at if w == v)

    def edge_ends(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def classes_at_vertex(self, v: int) -> tuple[tuple[int, ...], ...]:
        return self.clusters[v]

    def to_json_dict(self) -> dict:
        out = {
            "schema": TREE_SCHEMA,
            "vertices": [{"genus": g} for g in self.vertex_genera],
            "edges": [list(e) for e in self.edges],
            "markings": {str(m): v for m, v in self.marking_at},
            "clusters": [
                [list(cls) for cls in self.classes_at_vertex(v)]
                for v in range(self.num_vertices)
            ],
        }
        if self.edge_markings:
            out["edge_markings"] = {str(m): e for m, e in self.edge_markings}
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "StableTree":
        if data.get("schema") != TREE_SCHEMA:
            raise ValueError(f"expected schema {TREE_SCHEMA!r}")
        return cls(
            vertex_genera=tuple(v["genus"] for v in data["vertices"]),
            edges=tuple(tuple(e) for e in data["edges"]),
            marking_at=tuple(
                (int(m), v) for m, v in data.get("markings", {}).items()
            ),
            clusters=tuple(
                tuple(tuple(cls) for cls in classes)
                for classes in data.get("clusters", [])
            ),
            edge_markings=tuple(
                (int(m), e) for m, e in data.get("edge_markings", {}).items()
            ),
        )


def _check_ambient(w: WeightData, t: StableTree) -> None:
    """The tree must be a curve of the ambient genus carrying all markings."""
    if t.total_genus != w.genus:
        raise ValueError(
            f"tree has arithmetic genus {t.total_genus}, ambient genus is {w.genus}"
        )
    expected = frozenset(range(1, w.n + 1))
    if t.markings != expected:
        raise ValueError(
            f"tree carries markings {sorted(t.markings)}, expected 1..{w.n}"
        )
    for m, _ in t.edge_markings:
        if w.weights[m - 1] > 0:
            raise ValueError(
                f"marking {m} has positive weight and cannot sit at a node"
            )


def vertex_degree(w: WeightData, t: StableTree, v: int) -> Fraction:
    """Degree of the log-canonical polarization on one component:
    2*genus - 2 + (edge ends, self-loops twice) + sum of marking weights.

    Zero-weight markings recorded at nodes contribute nothing.
    """
    if not 0 <= v < t.num_vertices:
        raise ValueError(f"unknown vertex {v}")
    total = Fraction(2 * t.vertex_genera[v] - 2 + t.edge_ends(v))
    for m in t.markings_at_vertex(v):
        if not 1 <= m <= w.n:
            raise ValueError(f"marking {m} outside 1..{w.n}")
        total += w.weights[m - 1]
    return total


def is_stable(w: WeightData, t: StableTree) -> bool:
    """Positive polarization degree on every component, and each
    coincidence class light enough to share a point (sum <= 1)."""
    require_valid(w)
    _check_ambient(w, t)
    for v in range(t.num_vertices):
        if vertex_degree(w, t, v) <= 0:
            return False
        for cls in t.classes_at_vertex(v):
            if sum(w.weights[m - 1] for m in cls) > 1:
                return False
    return True


@dataclass(frozen=True)
class BoundaryDivisor:
    """One-node boundary divisor or two-marking coincidence divisor.

    * ``nodal``: two components; ``side`` holds the canonical side's
      markings and ``genus_split`` its genus first. Canonical means the
      smaller genus, ties broken by fewer markings then lexicographic.
    * ``irreducible``: one component of genus g-1 glued to itself
      (genus >= 1 only).
    * ``coincidence``: two positive-weight markings with weight sum <= 1
      meeting in the smooth locus.
    """

    kind: str
    side: frozenset[int] | None = None
    genus_split: tuple[int, int] | None = None
    pair: frozenset[int] | None = None

    def __post_init__(self):
        if self.kind not in {"nodal", "irreducible", "coincidence"}:
            raise ValueError(f"unknown divisor kind {self.kind!r}")
        if self.kind == "nodal":
            if self.side is None or self.genus_split is None:
                raise ValueError("nodal divisors need a side and a genus split")
        elif self.kind == "coincidence":
            if self.pair is None or len(self.pair) != 2:
                raise ValueError("coincidence divisors need a marking pair")

    @property
    def sort_key(self) -> tuple:
        if self.kind == "nodal":
            assert self.side is not None and self.genus_split is not None
            return (0, self.genus_split[0], len(self.side), tuple(sorted(self.side)))
        if self.kind == "irreducible":
            return (1,)
        assert self.pair is not None
        return (2, tuple(sorted(self.pair)))

    def to_json_dict(self) -> dict:
        if self.kind == "nodal":
            assert self.side is not None and self.genus_split is not None
            return {
                "kind": "nodal",
                "side": sorted(self.side),
                "genus_split": list(self.genus_split),
            }
        if self.kind == "irreducible":
            return {"kind": "irreducible"}
        assert self.pair is not None
        return {"kind": "coincidence", "pair": sorted(self.pair)}


def _canonical_nodal(
    g1: int, s: frozenset[int], g2: int, comp: frozenset[int]
) -> BoundaryDivisor:
    a = (g1, len(s), tuple(sorted(s)))
    b = (g2, len(comp), tuple(sorted(comp)))
    if b < a:
        g1, s, g2, comp = g2, comp, g1, s
    return BoundaryDivisor(kind="nodal", side=s, genus_split=(g1, g2))


def _genus0_side_stable(
    sig: frozenset[frozenset[int]], side: frozenset[int]
) -> bool:
    """A genus-0 side with one node is stable iff it carries more than
    weight 1, i.e. at least two markings forming a set outside the
    chamber signature."""
    return len(side) >= 2 and side not in sig


def _side_stable(
    sig: frozenset[frozenset[int]], g_side: int, side: frozenset[int]
) -> bool:
    if g_side >= 1:
        return True
    return _genus0_side_stable(sig, side)


def enumerate_boundary_divisors(w: WeightData) -> list[BoundaryDivisor]:
    """All one-node divisors (over genus splits) plus the irreducible-node
    divisor for genus >= 1, plus all coincidence divisors.

    Deterministic order: nodal by (side genus, side size, side), then the
    irreducible divisor, then coincidence pairs lexicographically.
    """
    require_valid(w)
    sig = chamber_signature(w)
    full = frozenset(range(1, w.n + 1))
    found: set[BoundaryDivisor] = set()

    for g1 in range(0, w.genus // 2 + 1):
        g2 = w.genus - g1
        for r in range(0, w.n + 1):
            for combo in combinations(sorted(full), r):
                s = frozenset(combo)
                comp = full - s
                if _side_stable(sig, g1, s) and _side_stable(sig, g2, comp):
                    found.add(_canonical_nodal(g1, s, g2, comp))

    out = sorted(found, key=lambda d: d.sort_key)
    if w.genus >= 1:
        out.append(BoundaryDivisor(kind="irreducible"))
    for i, j in combinations(range(1, w.n + 1), 2):
        if w.weights[i - 1] > 0 and w.weights[j - 1] > 0:
            if frozenset({i, j}) in sig:
                out.append(
                    BoundaryDivisor(kind="coincidence", pair=frozenset({i, j}))
                )
    return out


@dataclass(frozen=True)
class Contraction:
    """A divisor collapsed by a reduction morphism, reported from the
    collapse viewpoint: ``collapsed_side`` is the component that loses
    positive degree, which is not always the divisor's canonical side."""

    divisor: BoundaryDivisor
    collapsed_side: frozenset[int]
    collapsed_genus: int

    def to_json_dict(self) -> dict:
        return {
            "divisor": self.divisor.to_json_dict(),
            "collapsed_side": sorted(self.collapsed_side),
            "collapsed_genus": self.collapsed_genus,
        }


def contracted_divisors(a: WeightData, b: WeightData) -> list[Contraction]:
    """Nodal divisors of the source whose degree-losing side maps to a
    stratum of codimension at least two under the target weights.

    A genus-0 side loses positive degree when its target weight drops to
    at most 1. With exactly two positive-weight markings the image is the
    coincidence divisor of that pair (nothing is contracted); with three
    or more, the image is a deeper stratum and the divisor is contracted.
    Sides of positive genus never lose degree.
    """
    if not reduction_exists(a, b):
        raise ValueError("no reduction morphism: target weights must be "
                         "pointwise at most the source weights")
    sig_b = chamber_signature(b)
    out: list[Contraction] = []
    for d in enumerate_boundary_divisors(a):
        if d.kind != "nodal":
            continue
        assert d.side is not None and d.genus_split is not None
        full = frozenset(range(1, a.n + 1))
        for side, g_side in (
            (d.side, d.genus_split[0]),
            (full - d.side, d.genus_split[1]),
        ):
            if g_side != 0:
                continue
            if _genus0_side_stable(sig_b, side):
                continue  # still stable under the target
            positive = [m for m in side if b.weights[m - 1] > 0]
            if len(positive) >= 3:
                out.append(
                    Contraction(
                        divisor=d, collapsed_side=side, collapsed_genus=g_side
                    )
                )
    out.sort(key=lambda c: (len(c.collapsed_side), tuple(sorted(c.collapsed_side))))
    return out


def divisor_tree(w: WeightData, d: BoundaryDivisor) -> StableTree:
    """The dual graph of a divisor's generic member."""
    require_valid(w)
    all_marks = tuple(range(1, w.n + 1))
    if d.kind == "nodal":
        assert d.side is not None and d.genus_split is not None
        return StableTree(
            vertex_genera=d.genus_split,
            edges=((0, 1),),
            marking_at=tuple(
                (m, 0 if m in d.side else 1) for m in all_marks
            ),
        )
    if d.kind == "irreducible":
        if w.genus < 1:
            raise ValueError("irreducible-node divisors need genus >= 1")
        return StableTree(
            vertex_genera=(w.genus - 1,),
            edges=((0, 0),),
            marking_at=tuple((m, 0) for m in all_marks),
        )
    assert d.pair is not None
    return StableTree(
        vertex_genera=(w.genus,),
        edges=(),
        marking_at=tuple((m, 0) for m in all_marks),
        clusters=((tuple(sorted(d.pair)),),),
    )
