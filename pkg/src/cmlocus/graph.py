"""Truncated ell-power isogeny graphs with their complex-conjugation action.

Vertices are abstract (copy, level, index) triples; index 0 of every level
is the marked vertex, whose lattice chain pins down the real structure.
Below the surface the graph is the usual volcano; over the maximal orders
of Q(i) and Q(sqrt(-3)) the surface descents come in parallel bundles of
w_K/2 and two parameter sets require passing to a double cover before the
conjugation action means anything.

This module materializes graphs for brute-force enumeration; the
non-materializing counter lives in ``pathstats``.
"""

from dataclasses import dataclass
from functools import lru_cache

from .arith import ValidationError, kronecker
from .fields import rcf_rel_degree, unit_count
from .forms import (
    class_number,
    compose,
    inverse_form,
    is_ambiguous,
    prime_form,
    principal_form,
    reduced_forms,
    two_torsion_count,
)

COVER_PARAMS = ((-4, 2, 1), (-3, 3, 1))


@dataclass(frozen=True)
class Vertex:
    copy: int
    level: int
    index: int


@dataclass(frozen=True)
class Edge:
    eid: int
    src: Vertex
    dst: Vertex
    kind: str  # "up" | "down" | "horiz"
    parallel: int


@dataclass(frozen=True)
class GraphPath:
    start_level: int
    edges: tuple[Edge, ...]

    @property
    def bhd(self) -> tuple[int, int, int]:
        b = sum(1 for e in self.edges if e.kind == "up")
        h = sum(1 for e in self.edges if e.kind == "horiz")
        d = sum(1 for e in self.edges if e.kind == "down")
        return (b, h, d)


@dataclass(frozen=True)
class GeometricPoint:
    paths: tuple[GraphPath, ...]
    e: int
    real: bool

    @property
    def bhd(self):
        return self.paths[0].bhd


class IsogenyGraph:
    """Explicit truncated graph; built by :func:`build_graph`."""

    def __init__(self, delta_K, ell, f0, depth, doubled=False):
        self.delta_K = delta_K
        self.ell = ell
        self.f0 = f0
        self.depth = depth
        self.doubled = doubled
        self.level_counts: list[int] = []
        self.out: dict[Vertex, list[Edge]] = {}
        self.edges: dict[int, Edge] = {}
        self.dual: dict[int, int] = {}
        self.conj_v: dict[Vertex, Vertex] = {}
        self.conj_e: dict[int, int] = {}
        self.surface_forms: list[tuple[int, int, int]] = []

    # -- basic queries -------------------------------------------------

    def marked(self, level: int) -> Vertex:
        return Vertex(0, level, 0)

    def vertex_real(self, v: Vertex) -> bool:
        return self.conj_v[v] == v

    def edge_real(self, e: Edge) -> bool:
        return self.conj_e[e.eid] == e.eid

    def real_vertex_count(self, level: int) -> int:
        n = self.level_counts[level]
        return sum(
            1 for i in range(n) if self.vertex_real(Vertex(0, level, i))
        )

    def conjugate_path(self, path: GraphPath) -> GraphPath:
        return GraphPath(
            path.start_level,
            tuple(self.edges[self.conj_e[e.eid]] for e in path.edges),
        )

    def path_real(self, path: GraphPath) -> bool:
        return all(self.edge_real(e) for e in path.edges)

    # -- construction helpers -------------------------------------------

    def _add_edge(self, src, dst, kind, parallel=0):
        e = Edge(len(self.edges), src, dst, kind, parallel)
        self.edges[e.eid] = e
        self.out.setdefault(src, []).append(e)
        return e

    def level_disc(self, level: int) -> int:
        return self.ell ** (2 * level) * self.f0 * self.f0 * self.delta_K


def _level_count(delta_K, ell, f0, m):
    return rcf_rel_degree(delta_K, ell**m * f0) * (
        1 if delta_K in (-3, -4) else class_number(delta_K)
    )


@lru_cache(maxsize=None)
def build_graph(delta_K, ell, f0, depth) -> IsogenyGraph:
    """Build the truncated graph down to ``depth`` levels below the surface."""
    if delta_K not in (-3, -4):
        raise ValidationError("graphs are built for delta_K in {-3, -4}")
    if f0 % ell == 0:
        raise ValidationError("f0 must be coprime to ell")
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    g = IsogenyGraph(delta_K, ell, f0, depth)
    g.level_counts = [_level_count(delta_K, ell, f0, m) for m in range(depth + 1)]

    if f0 == 1:
        _build_surface_max_order(g)
    else:
        _build_surface_suborder(g)
    _build_lower_levels(g)
    _mark_conjugation(g)
    return g


def _build_surface_max_order(g: IsogenyGraph):
    ell, dK = g.ell, g.delta_K
    chi = kronecker(dK, ell)
    w2 = unit_count(dK) // 2
    v0 = Vertex(0, 0, 0)
    g.out[v0] = []
    # horizontal loops
    if chi == 1:
        p = g._add_edge(v0, v0, "horiz", 0)
        q = g._add_edge(v0, v0, "horiz", 1)
        g.dual[p.eid] = q.eid
        g.dual[q.eid] = p.eid
    elif chi == 0:
        p = g._add_edge(v0, v0, "horiz", 0)
        g.dual[p.eid] = p.eid
    # descent bundles
    n1 = (ell - chi) // w2
    assert n1 == g.level_counts[1]
    for t in range(n1):
        tv = Vertex(0, 1, t)
        up = g._add_edge(tv, v0, "up")
        downs = [g._add_edge(v0, tv, "down", k) for k in range(w2)]
        g.dual[up.eid] = downs[0].eid
        for e in downs:
            g.dual[e.eid] = up.eid


def _build_surface_suborder(g: IsogenyGraph):
    ell, dK, f0 = g.ell, g.delta_K, g.f0
    disc0 = f0 * f0 * dK
    chi = kronecker(disc0, ell)
    forms = reduced_forms(disc0)
    one = principal_form(disc0)
    order = [one]
    if chi != -1:
        pcls = prime_form(disc0, ell)
        if pcls != one and pcls in forms:
            order.append(pcls)
    order += sorted(f for f in forms if f not in order)
    assert len(order) == g.level_counts[0]
    g.surface_forms = order
    index_of = {f: i for i, f in enumerate(order)}

    for i, f in enumerate(order):
        g.out.setdefault(Vertex(0, 0, i), [])
    p_edge: dict[int, Edge] = {}
    pbar_edge: dict[int, Edge] = {}
    if chi != -1:
        pcls = prime_form(disc0, ell)
        pbar = inverse_form(pcls)
        for i, f in enumerate(order):
            tgt = index_of[compose(f, pcls, disc0)]
            p_edge[i] = g._add_edge(Vertex(0, 0, i), Vertex(0, 0, tgt), "horiz", 0)
            if chi == 1:
                tgt2 = index_of[compose(f, pbar, disc0)]
                pbar_edge[i] = g._add_edge(
                    Vertex(0, 0, i), Vertex(0, 0, tgt2), "horiz", 1
                )
        for i in range(len(order)):
            ti = p_edge[i].dst.index
            if chi == 1:
                g.dual[p_edge[i].eid] = pbar_edge[ti].eid
                g.dual[pbar_edge[i].eid] = p_edge[pbar_edge[i].dst.index].eid
            else:
                g.dual[p_edge[i].eid] = p_edge[ti].eid
    # simple descents, contiguous blocks
    k0 = ell - chi
    assert k0 * len(order) == g.level_counts[1]
    for i in range(len(order)):
        src = Vertex(0, 0, i)
        for j in range(k0):
            tv = Vertex(0, 1, i * k0 + j)
            down = g._add_edge(src, tv, "down")
            up = g._add_edge(tv, src, "up")
            g.dual[down.eid] = up.eid
            g.dual[up.eid] = down.eid


def _build_lower_levels(g: IsogenyGraph):
    ell = g.ell
    for m in range(1, g.depth):
        cnt, nxt = g.level_counts[m], g.level_counts[m + 1]
        assert nxt == ell * cnt
        for i in range(cnt):
            src = Vertex(0, m, i)
            for j in range(ell):
                tv = Vertex(0, m + 1, ell * i + j)
                down = g._add_edge(src, tv, "down")
                up = g._add_edge(tv, src, "up")
                g.dual[down.eid] = up.eid
                g.dual[up.eid] = down.eid
    for m in range(1, g.depth + 1):
        for i in range(g.level_counts[m]):
            g.out.setdefault(Vertex(0, m, i), [])


def _rtor(g: IsogenyGraph, m: int) -> int:
    return two_torsion_count(g.level_disc(m))


def _mark_conjugation(g: IsogenyGraph):
    ell = g.ell
    # vertex involution level by level
    real_prev: list[int] = []
    if g.f0 == 1:
        g.conj_v[Vertex(0, 0, 0)] = Vertex(0, 0, 0)
        real_prev = [0]
    else:
        for i, f in enumerate(g.surface_forms):
            j = g.surface_forms.index(inverse_form(f))
            g.conj_v[Vertex(0, 0, i)] = Vertex(0, 0, j)
        real_prev = [i for i, f in enumerate(g.surface_forms) if is_ambiguous(f)]
        assert len(real_prev) == _rtor(g, 0)

    parent_of: dict[tuple[int, int], int] = {}
    children_of: dict[tuple[int, int], list[int]] = {}
    for m in range(1, g.depth + 1):
        for i in range(g.level_counts[m]):
            up = next(e for e in g.out[Vertex(0, m, i)] if e.kind == "up")
            parent_of[(m, i)] = up.dst.index
            children_of.setdefault((m - 1, up.dst.index), []).append(i)

    for m in range(1, g.depth + 1):
        r_here = _rtor(g, m)
        reals = _distribute_reals(
            g, m, real_prev, children_of, parent_of, r_here
        )
        realset = set(reals)
        # pair complex vertices: children of conjugate parents map blockwise,
        # leftovers inside a real parent's block pair consecutively
        conj_idx: dict[int, int] = {i: i for i in reals}
        for p in real_prev:
            block = [
                c for c in children_of.get((m - 1, p), []) if c not in realset
            ]
            for x, y in zip(block[0::2], block[1::2]):
                conj_idx[x] = y
                conj_idx[y] = x
            assert len(block) % 2 == 0
        for p in range(g.level_counts[m - 1]):
            q = g.conj_v[Vertex(0, m - 1, p)].index
            if q == p:
                continue
            bp = children_of.get((m - 1, p), [])
            bq = children_of.get((m - 1, q), [])
            for x, y in zip(bp, bq):
                conj_idx[x] = y
        for i in range(g.level_counts[m]):
            g.conj_v[Vertex(0, m, i)] = Vertex(0, m, conj_idx[i])
        real_prev = reals

    _mark_edge_conjugation(g)


def _distribute_reals(g, m, real_parents, children_of, parent_of, r_here):
    """Pick the real vertices at level ``m`` under the marked-first rules."""
    ell = g.ell
    if m == 1 and g.f0 == 1:
        return list(range(r_here))
    surface_junction = m == 1
    ordered = _priority(g, m - 1, real_parents)
    per_parent = {
        p: children_of.get((m - 1, p), []) for p in ordered
    }
    child_count = len(per_parent[ordered[0]]) if ordered else 0
    reals: list[int] = []
    if child_count % 2 == 1:
        assert r_here == len(ordered)
        for p in ordered:
            reals.append(per_parent[p][0])
        return sorted(reals)
    assert r_here % 2 == 0
    fertile_needed = r_here // 2
    if surface_junction or 2 * len(ordered) == r_here:
        fertile = ordered[:fertile_needed]
    else:
        # pair rule: one fertile parent per sibling pair
        groups: dict[int, list[int]] = {}
        for p in ordered:
            groups.setdefault(parent_of[(m - 1, p)], []).append(p)
        fertile = []
        for gp in groups.values():
            assert len(gp) == 2
            fertile.append(min(gp))
        assert len(fertile) == fertile_needed
    for p in fertile:
        reals.extend(per_parent[p][:2])
    return sorted(reals)


def _priority(g, level, reals):
    """Real vertices of a level in fertility priority: the marked vertex,
    then (on a suborder surface) the prime-translate of it, then index order."""
    out = sorted(reals)
    if 0 in out:
        out.remove(0)
        out.insert(0, 0)
    if level == 0 and g.f0 > 1 and len(g.surface_forms) > 1:
        if 1 in out and out[0] == 0:
            out.remove(1)
            out.insert(1, 1)
    return out


def _mark_edge_conjugation(g: IsogenyGraph):
    dK, ell = g.delta_K, g.ell
    w2 = unit_count(dK) // 2
    for v, edges in list(g.out.items()):
        for e in edges:
            if e.eid in g.conj_e:
                continue
            cv, cw = g.conj_v[e.src], g.conj_v[e.dst]
            if e.kind == "up":
                target = next(x for x in g.out[cv] if x.kind == "up")
                g.conj_e[e.eid] = target.eid
            elif e.kind == "down" and (e.src.level >= 1 or g.f0 > 1):
                target = next(
                    x
                    for x in g.out[cv]
                    if x.kind == "down" and x.dst == cw
                )
                g.conj_e[e.eid] = target.eid
            elif e.kind == "down":
                # surface bundle over a maximal order
                bundle = [
                    x for x in g.out[cv] if x.kind == "down" and x.dst == cw
                ]
                bundle.sort(key=lambda x: x.parallel)
                if g.conj_v[e.dst] != e.dst:
                    g.conj_e[e.eid] = bundle[e.parallel].eid
                elif dK == -4:
                    if e.dst.index == 0:
                        g.conj_e[e.eid] = e.eid
                    else:
                        g.conj_e[e.eid] = bundle[1 - e.parallel].eid
                else:
                    perm = {0: 0, 1: 2, 2: 1}
                    g.conj_e[e.eid] = bundle[perm[e.parallel]].eid
            else:  # horizontal
                if g.f0 == 1:
                    chi = kronecker(dK, ell)
                    mates = [x for x in g.out[v] if x.kind == "horiz"]
                    if chi == 1:
                        other = next(x for x in mates if x.parallel != e.parallel)
                        g.conj_e[e.eid] = other.eid
                    else:
                        g.conj_e[e.eid] = e.eid
                elif kronecker(g.f0 * g.f0 * dK, ell) == 0:
                    target = next(x for x in g.out[cv] if x.kind == "horiz")
                    g.conj_e[e.eid] = target.eid
                else:
                    target = next(
                        x
                        for x in g.out[cv]
                        if x.kind == "horiz" and x.parallel == 1 - e.parallel
                    )
                    g.conj_e[e.eid] = target.eid


def conjugation_mark(graph: IsogenyGraph) -> IsogenyGraph:
    """The involution is filled in at build time; kept as the public
    hook (idempotent)."""
    return graph


@lru_cache(maxsize=None)
def double_cover(delta_K, ell, f0, depth) -> IsogenyGraph:
    """Unwrap the surface loop of the (-4, 2, 1) / (-3, 3, 1) graphs."""
    if (delta_K, ell, f0) not in COVER_PARAMS:
        raise ValidationError(f"no double cover for ({delta_K}, {ell}, {f0})")
    base = build_graph(delta_K, ell, f0, depth)
    g = IsogenyGraph(delta_K, ell, f0, depth, doubled=True)
    g.level_counts = list(base.level_counts)

    def lift(v: Vertex, copy: int) -> Vertex:
        return Vertex(copy, v.level, v.index)

    copies: dict[tuple[int, int], Edge] = {}
    for copy in (0, 1):
        for v, edges in base.out.items():
            g.out.setdefault(lift(v, copy), [])
            for e in edges:
                if e.kind == "horiz":
                    continue
                ne = g._add_edge(lift(e.src, copy), lift(e.dst, copy), e.kind, e.parallel)
                copies[(e.eid, copy)] = ne
    for (eid, copy), ne in copies.items():
        g.dual[ne.eid] = copies[(base.dual[eid], copy)].eid
    cross01 = g._add_edge(Vertex(0, 0, 0), Vertex(1, 0, 0), "horiz", 0)
    cross10 = g._add_edge(Vertex(1, 0, 0), Vertex(0, 0, 0), "horiz", 0)
    g.dual[cross01.eid] = cross10.eid
    g.dual[cross10.eid] = cross01.eid

    for v in base.conj_v:
        for copy in (0, 1):
            g.conj_v[lift(v, copy)] = lift(base.conj_v[v], copy)
    for (eid, copy), ne in copies.items():
        mate = base.conj_e[eid]
        if delta_K == -4 and copy == 1 and base.edges[eid].kind == "down" \
                and base.edges[eid].src.level == 0:
            # in the far copy the surface descents are complex
            flipped = next(
                x
                for x in g.out[ne.src]
                if x.kind == "down" and x.dst == ne.dst and x.parallel == 1 - ne.parallel
            )
            g.conj_e[ne.eid] = flipped.eid
        else:
            g.conj_e[ne.eid] = copies[(mate, copy)].eid
    g.conj_e[cross01.eid] = cross01.eid
    g.conj_e[cross10.eid] = cross10.eid
    return g


def conjugation_graph(delta_K, ell, f0, depth) -> IsogenyGraph:
    """Graph on which real/complex path counting is meaningful."""
    if (delta_K, ell, f0) == (-4, 2, 1):
        return double_cover(delta_K, ell, f0, depth)
    return build_graph(delta_K, ell, f0, depth)


PATH_LIMIT = 3_000_000


def enumerate_paths(graph: IsogenyGraph, start_level: int, a: int,
                    limit: int = PATH_LIMIT) -> list[GraphPath]:
    """All nonbacktracking length-``a`` paths from the marked vertex."""
    if start_level + a > graph.depth:
        raise ValidationError("graph too shallow for this enumeration")
    out: list[GraphPath] = []
    stack: list[Edge] = []

    def rec(v: Vertex, prev: Edge | None, remaining: int):
        if remaining == 0:
            out.append(GraphPath(start_level, tuple(stack)))
            if len(out) > limit:
                raise ValidationError("path enumeration limit exceeded")
            return
        for e in graph.out[v]:
            if prev is not None and graph.dual[prev.eid] == e.eid:
                continue
            stack.append(e)
            rec(e.dst, e, remaining - 1)
            stack.pop()

    rec(graph.marked(start_level), None, a)
    return out


def geometric_points(graph: IsogenyGraph, paths) -> list[GeometricPoint]:
    """Group paths into geometric points (orbits under the starting curve's
    extra automorphisms) and mark conjugation-stable orbits as real."""

    def key(p: GraphPath):
        parts = []
        for e in p.edges:
            if (
                p.start_level == 0
                and graph.f0 == 1
                and e.kind == "down"
                and e.src.level == 0
            ):
                parts.append(("bundle", e.src, e.dst))
            else:
                parts.append(e.eid)
        return tuple(parts)

    buckets: dict[tuple, list[GraphPath]] = {}
    for p in paths:
        buckets.setdefault(key(p), []).append(p)
    points = []
    for k, orbit in buckets.items():
        real = key(graph.conjugate_path(orbit[0])) == k
        points.append(GeometricPoint(tuple(orbit), len(orbit), real))
    return points


def to_dot(graph: IsogenyGraph) -> str:
    """DOT rendering with conjugation-fixed vertices and edges in orange."""
    lines = ["digraph isogeny {", "  rankdir=TB;"]
    for v in graph.out:
        color = "orange" if graph.vertex_real(v) else "black"
        name = f"v{v.copy}_{v.level}_{v.index}"
        tag = f"{v.level}.{v.index}" + ("'" if v.copy else "")
        lines.append(f'  {name} [label="{tag}", color={color}];')
    for e in graph.edges.values():
        color = "orange" if graph.edge_real(e) else "black"
        style = {"up": "dashed", "down": "solid", "horiz": "bold"}[e.kind]
        a = f"v{e.src.copy}_{e.src.level}_{e.src.index}"
        b = f"v{e.dst.copy}_{e.dst.level}_{e.dst.index}"
        lines.append(f"  {a} -> {b} [color={color}, style={style}];")
    lines.append("}")
    return "\n".join(lines)
