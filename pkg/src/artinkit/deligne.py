"""Finite balls of the Deligne complex with certified vertex identification.

The Deligne complex of an Artin group has one vertex per left coset of a
spherical standard parabolic subgroup - here (large type) the trivial group
(type 0), the cyclic groups on one generator (type 1), and the dihedral
groups on an edge (type 2) - and one triangle per inclusion chain
{g} < g<a> < gA_ab.  The group acts by left multiplication with strict
fundamental domain K, the cone on the barycentric subdivision of the
presentation graph.

A ball is assembled by gluing finitely many translates gK: starting from the
identity translate, each dihedral chart around a type-2 vertex contributes
the translates g*u for u in the edge group with short canonical words.  The
complex is not locally finite (type-2 vertices have infinitely many type-1
neighbours), so a ball is always budget-truncated in the dihedral direction;
`chart_len` bounds the canonical word length of chart elements and `radius`
bounds the depth in the essential skeleton (the base copy of the subdivided
graph sits at depth 0).

Identification of vertices between charts is the delicate part, and it is
never guessed: two candidate cosets are merged only on a certified equality
(letters already inside the subgroup, a dihedral normal-form computation, or
a replayable rewrite trace) and kept distinct only on a certified
obstruction (height, abelianization, the exact Coxeter-coset invariant, a
dihedral normal form, or standard-parabolic intersection facts, the latter
labelled as externally assumed theory).  A pair the oracles cannot settle
taints the region around it: the ball records the event and shrinks
`safe_radius`, the depth up to which every verification quantifies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cosring import mat_mul
from .presentation import PresentationGraph, validate_class
from .words import (
    Budget,
    Equal,
    MemberIn,
    MemberNotIn,
    Word,
    abelianization_image,
    coxeter_context,
    cyclic_reduce,
    equal_oracle,
    engine_for_edge,
    free_reduce,
    height,
    invert,
    odd_components,
    parabolic_membership_oracle,
    parse_word,
    word_to_str,
)


# ---------------------------------------------------------------------------
# Handles


@dataclass(frozen=True)
class ParabolicHandle:
    """Canonical name (representative word, generating subset) for a coset
    g A_S of a spherical standard parabolic; kind = |S| in {0, 1, 2}."""

    kind: int
    rep: Word
    gens: tuple

    def __post_init__(self):
        assert self.kind == len(self.gens)

    def describe(self) -> str:
        if self.kind == 0:
            return "{%s}" % word_to_str(self.rep)
        return "%s A<%s>" % (word_to_str(self.rep) + " " if self.rep else "", ",".join(self.gens))


# ---------------------------------------------------------------------------
# Identification outcomes


@dataclass(frozen=True)
class SameCoset:
    witness: object = None
    basis: str = "direct"

    def __bool__(self):
        return True


@dataclass(frozen=True)
class DistinctCoset:
    basis: str
    detail: object = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Undecided:
    reason: str


# External facts used as certificates (never re-proved here): standard
# parabolics intersect in the standard parabolic on the intersection of their
# generating sets; distinct type-2 parabolic subgroups intersect in a
# parabolic of type at most 1; a type-2 standard parabolic is the full
# stabiliser of its vertex.  These enter only through the bases below.
EXTERNAL_BASES = {"standard-intersection", "parabolic-intersection"}


class IdentificationOracle:
    """Certified equality / coset-membership decisions for one graph."""

    def __init__(self, G: PresentationGraph, budget: Budget):
        self.graph = G
        self.budget = budget
        self.ctx = coxeter_context(G)
        self._member_cache: dict = {}
        self._element_cache: dict = {}
        self.external_uses = 0

    # -- helpers ---------------------------------------------------------------

    def _names_in(self, w: Word):
        return {name for name, _ in w}

    def _support(self, w: Word):
        """Sorted generator support of a word, or None when it has > 2 names."""
        names = sorted(self._names_in(w), key=self.graph.vertices.index)
        if len(names) > 2:
            return None
        if len(names) == 2 and not self.graph.adjacent(*names):
            return None
        return tuple(names)

    def _single_edge(self, w: Word):
        """An edge whose alphabet contains w, if any."""
        sup = self._support(w)
        if sup is None or not sup:
            return None
        if len(sup) == 2:
            return sup
        v = sup[0]
        for u in self.graph.vertices:
            if u != v and self.graph.adjacent(u, v):
                return tuple(sorted((u, v), key=self.graph.vertices.index))
        return None

    def _block_is_identity(self, w: Word):
        """Exact triviality for a word supported on at most one edge."""
        sup = self._support(w)
        assert sup is not None
        if not w:
            return True
        if len(sup) == 1:
            return False  # a reduced nonempty one-letter word is a power
        return engine_for_edge(self.graph, *sup).is_identity(w)

    def _block_power(self, w: Word, t: str):
        """k with w = t^k, or None, for a word supported on at most one edge."""
        sup = self._support(w)
        assert sup is not None
        if not w:
            return 0
        if len(sup) == 1:
            return height(w) if sup[0] == t else None
        if t not in sup:
            # w in <t> would put it in two standard parabolics meeting trivially
            eng = engine_for_edge(self.graph, *sup)
            return 0 if eng.is_identity(w) else None
        return engine_for_edge(self.graph, *sup).power_of(w, t)

    def _two_block_decision(self, core: Word):
        """Certified triviality for a cyclic word splitting into two blocks,
        each supported on a single edge.  The two blocks multiply to 1 only
        through the standard parabolic on the shared generators, which is
        where dihedral normal forms decide everything.  Returns SameCoset /
        DistinctCoset, or None when no such splitting exists."""
        n = len(core)
        for r in range(n):
            w = core[r:] + core[:r]
            for cut in range(1, n):
                X, Y = w[:cut], w[cut:]
                sX, sY = self._support(X), self._support(Y)
                if sX is None or sY is None or set(sX) == set(sY):
                    continue
                shared = sorted(set(sX) & set(sY))
                self.external_uses += 1
                if not shared:
                    if self._block_is_identity(X) and self._block_is_identity(Y):
                        return SameCoset(basis="standard-intersection")
                    return DistinctCoset("standard-intersection")
                t = shared[0]
                jX = self._block_power(X, t)
                if jX is None:
                    return DistinctCoset("standard-intersection", t)
                jY = self._block_power(Y, t)
                if jY is None:
                    return DistinctCoset("standard-intersection", t)
                if jX + jY == 0:
                    return SameCoset(basis="standard-intersection")
                return DistinctCoset("standard-intersection", t)
        return None

    def _type1_envelope(self, core: Word):
        """The unique type-1 parabolic v<t>v^-1 of the edge group supporting
        `core` that contains it, as (v, t), or None when the bounded search
        finds none.  Uniqueness: distinct type-1 parabolics meet trivially."""
        sup = self._support(core)
        if sup is None or not core:
            return None
        if len(sup) == 1:
            return ((), sup[0])
        eng = engine_for_edge(self.graph, *sup)
        k = height(core)
        if k == 0:
            return None  # nontrivial elements of type-1 parabolics have k != 0
        for t in sup:
            tk = ((t, 1 if k >= 0 else -1),) * abs(k)
            for v in eng.elements_up_to(min(len(core) + 2, 6)):
                if eng.equal(core, v + tk + tuple(invert(v))):
                    return (v, t)
        return None

    def element_is_identity(self, w: Word):
        """Certified triviality of a word: SameCoset / DistinctCoset / Undecided."""
        w = free_reduce(w)
        key = w
        cached = self._element_cache.get(key)
        if cached is not None:
            return cached
        res = self._element_is_identity(w)
        self._element_cache[key] = res
        return res

    def _element_is_identity(self, w: Word):
        if not w:
            return SameCoset(basis="free")
        conj, core = cyclic_reduce(w)
        # invariants are conjugation-stable, so test the core
        if height(core) != 0:
            return DistinctCoset("height", height(core))
        if any(x != 0 for x in abelianization_image(self.graph, core)):
            return DistinctCoset("abelianization")
        edge = self._single_edge(core)
        if edge is not None:
            eng = engine_for_edge(self.graph, *edge)
            if eng.is_identity(core):
                return SameCoset(basis="dihedral")
            return DistinctCoset("dihedral", edge)
        if self.ctx.image(core) != self.ctx.identity:
            return DistinctCoset("coxeter")
        split = self._two_block_decision(core)
        if split is not None:
            return split
        verdict = equal_oracle(self.graph, core, (), self.budget)
        if isinstance(verdict, Equal):
            return SameCoset(witness=verdict.trace, basis="rewrite")
        return Undecided("identity test exhausted")

    def elements_equal(self, g: Word, h: Word):
        return self.element_is_identity(free_reduce(invert(g) + h))

    def member_of_edge_group(self, z: Word, pair: tuple):
        """Certified decision of z in A_{pair}; pair must be an edge."""
        z = free_reduce(z)
        key = (z, pair)
        cached = self._member_cache.get(key)
        if cached is not None:
            return cached
        res = self._member_of_edge_group(z, pair, 0)
        self._member_cache[key] = res
        return res

    def _member_of_edge_group(self, z: Word, pair: tuple, depth: int):
        a, b = pair
        names = self._names_in(z)
        if names <= {a, b}:
            return SameCoset(witness=z, basis="alphabet")

        # invariant obstructions (exact, internal)
        comps = odd_components(self.graph)
        allowed = {i for i, comp in enumerate(comps) if a in comp or b in comp}
        vec = abelianization_image(self.graph, z)
        if any(x != 0 and i not in allowed for i, x in enumerate(vec)):
            return DistinctCoset("abelianization")
        if self.ctx.image(z) not in self.ctx.dihedral_subgroup(a, b):
            return DistinctCoset("coxeter")

        conj, core = cyclic_reduce(z)
        sup = self._support(core)
        if not conj and sup is not None and len(sup) == 1:
            # a nonzero power of a generator outside the pair
            self.external_uses += 1
            return DistinctCoset("standard-intersection", sup[0])
        if not conj and sup is not None and len(sup) == 2:
            # z itself lies in a standard edge group other than A_{pair}
            shared = [t for t in sup if t in pair]
            core_eng = engine_for_edge(self.graph, *sup)
            self.external_uses += 1
            if not shared:
                if core_eng.is_identity(core):
                    return SameCoset(witness=(), basis="standard-intersection")
                return DistinctCoset("standard-intersection")
            t = shared[0]
            k = core_eng.power_of(core, t)
            if k is None:
                return DistinctCoset("standard-intersection", t)
            witness = ((t, 1 if k >= 0 else -1),) * abs(k)
            return SameCoset(witness=witness, basis="standard-intersection")

        if conj and sup is not None and core:
            # z is conjugate into an edge group.  A nontrivial element of a
            # parabolic lies in a unique type-1 parabolic v<t>v^-1 (if any),
            # and then z in A_pair iff the conjugated generator is.
            envelope = self._type1_envelope(core)
            if envelope is not None:
                v, t = envelope
                self.external_uses += 1
                h = free_reduce(conj + v)
                w = free_reduce(h + ((t, 1),) + invert(h))
                if w != z and depth < 2:
                    res = self._member_of_edge_group(w, pair, depth + 1)
                    if isinstance(res, SameCoset):
                        return SameCoset(witness=res.witness, basis="parabolic-intersection")
                    if isinstance(res, DistinctCoset):
                        return DistinctCoset("parabolic-intersection", res.basis)
            split = self._two_block_decision(core)
            if isinstance(split, SameCoset):
                return SameCoset(witness=(), basis=split.basis)

        if depth == 0:
            verdict = parabolic_membership_oracle(self.graph, z, pair, self.budget)
            if isinstance(verdict, MemberIn):
                return SameCoset(witness=verdict.witness, basis="rewrite")
            if isinstance(verdict, MemberNotIn):
                return DistinctCoset(verdict.certificate)
        return Undecided("membership search exhausted")

    def cosets_equal(self, g: Word, h: Word, gens: tuple):
        """Certified equality of the cosets g A_S and h A_S."""
        z = free_reduce(invert(g) + h)
        if len(gens) == 0:
            return self.element_is_identity(z)
        if len(gens) == 1:
            t = gens[0]
            k = height(z)
            tk = ((t, 1 if k >= 0 else -1),) * abs(k)
            res = self.elements_equal(z, tk)
            if isinstance(res, SameCoset):
                return SameCoset(witness=k, basis=res.basis)
            return res
        return self.member_of_edge_group(z, tuple(gens))

    def subgroup_contains_conjugate(self, g: Word, S: tuple, h: Word, t: str):
        """Certified decision of  h <t> h^-1  inside  g A_S g^-1."""
        z = free_reduce(invert(g) + h)
        w = free_reduce(z + ((t, 1),) + invert(z))
        return self.member_of_edge_group(w, S)

    def type1_subgroups_equal(self, g: Word, t: str, h: Word, s: str):
        """Certified equality of the parabolic subgroups g<t>g^-1 and h<s>h^-1."""
        z = free_reduce(invert(g) + h)
        # equality forces z s z^-1 = t (heights match the +1 generator)
        w = free_reduce(((t, -1),) + z + ((s, 1),) + invert(z))
        return self.element_is_identity(w)


# ---------------------------------------------------------------------------
# Moussong geometry


@dataclass(frozen=True)
class MoussongTriangle:
    """Exact data of the Euclidean triangle on {1} < <a> < A_ab with label m.

    Angles are stored as exact rational multiples of pi; squared side lengths
    as exact pairs (numerator, denominator) over Z[2cos(pi/m)], with float
    shadows for display.  The right angle sits at the type-1 vertex, the
    angle pi/(2m) at the type-2 vertex.
    """

    m: int
    angle_type0: Fraction  # units of pi
    angle_type1: Fraction
    angle_type2: Fraction
    side01_sq: tuple  # (num, den) ring elements: d({1}, <a>)^2
    side12_sq: tuple  # d(<a>, A_ab)^2
    side02_sq: tuple  # d({1}, A_ab)^2
    shadow01: float
    shadow12: float
    shadow02: float


def moussong_geometry(m: int) -> MoussongTriangle:
    """Exact right triangle with legs 1 and cot(pi/2m), hypotenuse 1/sin(pi/2m)."""
    if m < 3:
        raise ValueError("Moussong triangle requires label m >= 3")
    from .cosring import CosineRing

    ring = CosineRing(m)
    C = ring.two_cos_pi_over(m)  # 2cos(pi/m)
    two = ring.from_int(2)
    four = ring.from_int(4)
    one = ring.one
    # cot^2(pi/2m) = (1+cos(pi/m)) / (1-cos(pi/m)) = (2+C)/(2-C)
    # 1/sin^2(pi/2m) = 2/(1-cos(pi/m)) = 4/(2-C)
    side12 = (ring.add(two, C), ring.sub(two, C))
    side02 = (four, ring.sub(two, C))
    side01 = (one, one)
    angle0 = Fraction(m - 1, 2 * m)
    angle1 = Fraction(1, 2)
    angle2 = Fraction(1, 2 * m)
    assert angle0 + angle1 + angle2 == 1, "triangle angles must sum to pi"
    # Pythagoras, cross-multiplied: side02 == side01 + side12 exactly
    lhs = ring.mul(side02[0], ring.mul(side01[1], side12[1]))
    rhs = ring.add(
        ring.mul(side01[0], ring.mul(side02[1], side12[1])),
        ring.mul(side12[0], ring.mul(side02[1], side01[1])),
    )
    assert lhs == rhs, "squared sides must satisfy Pythagoras"

    def shadow(pair):
        num, den = pair
        return (ring.to_float(num) / ring.to_float(den)) ** 0.5

    return MoussongTriangle(
        m,
        angle0,
        angle1,
        angle2,
        side01,
        side12,
        side02,
        shadow(side01),
        shadow(side12),
        shadow(side02),
    )


# ---------------------------------------------------------------------------
# The ball


@dataclass
class VertexRecord:
    id: int
    kind: int
    rep: Word
    gens: tuple
    depth: int = -1  # essential-skeleton depth; -1 until computed
    tainted: bool = False

    def handle(self) -> ParabolicHandle:
        return ParabolicHandle(self.kind, self.rep, self.gens)


@dataclass(frozen=True)
class BallBudget:
    chart_len: int = 2  # canonical-word length bound for dihedral charts
    oracle: Budget = field(default_factory=lambda: Budget(max_len=14, max_states=30000))
    max_translates: int = 20000


class ComplexBall:
    """Immutable-after-build finite portion of a Deligne complex."""

    def __init__(self, G: PresentationGraph, radius: int, budget: BallBudget):
        self.graph = G
        self.radius = radius
        self.budget = budget
        self.vertices: list[VertexRecord] = []
        self.edges: set = set()
        self.triangles: set = set()
        self.center: int = -1
        self.safe_radius: int = radius
        self.unknown_log: list = []
        self.translates: dict = {}  # canonical word -> dict(apex, bar vertex ids)
        self._adj: dict = {}
        self._by_bucket: dict = {}
        self._apex_index: dict = {}  # apex vid -> translate word
        self._oracle: IdentificationOracle | None = None
        self._geometry: dict = {}

    # -- queries ---------------------------------------------------------------

    def vertex(self, vid: int) -> VertexRecord:
        return self.vertices[vid]

    def handle(self, vid: int) -> ParabolicHandle:
        return self.vertices[vid].handle()

    def neighbors(self, vid: int):
        return self._adj.get(vid, ())

    def essential_vertices(self):
        return [v.id for v in self.vertices if v.kind in (1, 2)]

    def essential_neighbors(self, vid: int):
        return [u for u in self._adj.get(vid, ()) if self.vertices[u].kind in (1, 2)]

    def vertices_of_kind(self, kind: int):
        return [v.id for v in self.vertices if v.kind == kind]

    def is_interior(self, vid: int, margin: int = 1) -> bool:
        v = self.vertices[vid]
        if v.tainted:
            return False
        return v.depth >= 0 and v.depth <= self.safe_radius - margin

    def interior_vertices(self, kind: int, margin: int):
        return [
            v.id
            for v in self.vertices
            if v.kind == kind and self.is_interior(v.id, margin)
        ]

    def find_vertex(self, kind: int, rep: Word, gens: tuple):
        """Locate the ball vertex for a coset handle, or None (certified)."""
        oracle = self._oracle
        key = self._bucket_key(kind, rep, gens)
        for vid in self._by_bucket.get(key, ()):
            v = self.vertices[vid]
            res = oracle.cosets_equal(v.rep, rep, gens)
            if isinstance(res, SameCoset):
                return vid
        return None

    def geometry(self, m: int) -> MoussongTriangle:
        tri = self._geometry.get(m)
        if tri is None:
            tri = moussong_geometry(m)
            self._geometry[m] = tri
        return tri

    def triangle_label(self, tri) -> int:
        """Edge label of the type-2 vertex of a triangle."""
        kinds = {self.vertices[v].kind: v for v in tri}
        v2 = self.vertices[kinds[2]]
        return self.graph.label(*v2.gens)

    # -- identification plumbing -------------------------------------------------

    def _bucket_key(self, kind: int, rep: Word, gens: tuple):
        ctx = self._oracle.ctx
        M = ctx.image(rep)
        if kind == 0:
            return (0, height(rep), abelianization_image(self.graph, rep), M)
        if kind == 1:
            t = gens[0]
            alt = mat_mul(ctx.ring, M, ctx.reflections[t])
            comps = odd_components(self.graph)
            vec = list(abelianization_image(self.graph, rep))
            for i, comp in enumerate(comps):
                if t in comp:
                    vec[i] = 0
            return (1, gens, tuple(vec), min(M, alt))
        orbit = [mat_mul(ctx.ring, M, R) for R in ctx.dihedral_subgroup(*gens)]
        comps = odd_components(self.graph)
        vec = list(abelianization_image(self.graph, rep))
        for i, comp in enumerate(comps):
            if gens[0] in comp or gens[1] in comp:
                vec[i] = 0
        return (2, gens, tuple(vec), min(orbit))

    def _intern_vertex(self, kind: int, rep: Word, gens: tuple) -> int:
        rep = free_reduce(rep)
        key = self._bucket_key(kind, rep, gens)
        bucket = self._by_bucket.setdefault(key, [])
        for vid in bucket:
            v = self.vertices[vid]
            res = self._oracle.cosets_equal(v.rep, rep, gens)
            if isinstance(res, SameCoset):
                if (len(rep), rep) < (len(v.rep), v.rep):
                    v.rep = rep
                return vid
            if isinstance(res, Undecided):
                # never merge on a guess: keep both, taint both, log
                self.unknown_log.append(
                    {
                        "kind": kind,
                        "gens": list(gens),
                        "left": word_to_str(v.rep),
                        "right": word_to_str(rep),
                        "reason": res.reason,
                    }
                )
                v.tainted = True
                vid2 = self._new_vertex(kind, rep, gens, bucket)
                self.vertices[vid2].tainted = True
                return vid2
        return self._new_vertex(kind, rep, gens, bucket)

    def _new_vertex(self, kind: int, rep: Word, gens: tuple, bucket: list) -> int:
        vid = len(self.vertices)
        self.vertices.append(VertexRecord(vid, kind, rep, gens))
        bucket.append(vid)
        return vid

    def _add_edge(self, u: int, v: int):
        if u != v:
            self.edges.add((min(u, v), max(u, v)))

    def _add_triangle(self, t0: int, t1: int, t2: int):
        self.triangles.add(tuple(sorted((t0, t1, t2))))


def _materialize_translate(ball: ComplexBall, g: Word):
    """Add the translate g.K: apex, subdivided-graph vertices, simplices.

    Returns None when g denotes a translate that is already materialized
    under another word (the apex vertex merges), so callers can skip it.
    """
    G = ball.graph
    apex = ball._intern_vertex(0, g, ())
    if apex in ball._apex_index:
        return None
    ball._apex_index[apex] = g
    type1 = {}
    for a in G.vertices:
        type1[a] = ball._intern_vertex(1, g, (a,))
    rec = {"apex": apex, "type1": dict(type1), "type2": {}}
    for a, b in G.edge_pairs():
        v2 = ball._intern_vertex(2, g, (a, b))
        rec["type2"][(a, b)] = v2
        ball._add_edge(apex, v2)
        for t in (a, b):
            ball._add_edge(apex, type1[t])
            ball._add_edge(type1[t], v2)
            ball._add_triangle(apex, type1[t], v2)
    ball.translates[g] = rec
    return rec


def _compute_depths(ball: ComplexBall):
    """Essential depth: BFS from the base subdivided graph over kinds 1-2;
    type-0 vertices take the least depth among their essential neighbours."""
    base = ball.translates[()]
    seeds = list(base["type1"].values()) + list(base["type2"].values())
    ball._adj = {}
    for u, v in ball.edges:
        ball._adj.setdefault(u, []).append(v)
        ball._adj.setdefault(v, []).append(u)
    for vid in ball._adj:
        ball._adj[vid] = sorted(ball._adj[vid])
    dist = {vid: 0 for vid in seeds}
    frontier = list(seeds)
    while frontier:
        nxt = []
        for u in frontier:
            for w in ball._adj.get(u, ()):
                if ball.vertices[w].kind in (1, 2) and w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    for v in ball.vertices:
        if v.kind in (1, 2):
            v.depth = dist.get(v.id, -1)
    for v in ball.vertices:
        if v.kind == 0:
            ds = [
                ball.vertices[u].depth
                for u in ball._adj.get(v.id, ())
                if ball.vertices[u].kind in (1, 2) and ball.vertices[u].depth >= 0
            ]
            v.depth = min(ds) if ds else -1


def _prune_to_radius(ball: ComplexBall):
    keep = {
        v.id
        for v in ball.vertices
        if v.depth >= 0 and v.depth <= ball.radius
    }
    keep.add(ball.center)
    remap = {}
    new_vertices = []
    for v in ball.vertices:
        if v.id in keep:
            remap[v.id] = len(new_vertices)
            v.id = len(new_vertices)
            new_vertices.append(v)
    ball.vertices = new_vertices
    ball.edges = {
        (remap[u], remap[v]) for u, v in ball.edges if u in remap and v in remap
    }
    ball.triangles = {
        tuple(sorted((remap[a], remap[b], remap[c])))
        for a, b, c in ball.triangles
        if a in remap and b in remap and c in remap
    }
    new_translates = {}
    for g, rec in ball.translates.items():
        if rec["apex"] not in remap:
            continue
        rec2 = {
            "apex": remap[rec["apex"]],
            "type1": {a: remap[v] for a, v in rec["type1"].items() if v in remap},
            "type2": {e: remap[v] for e, v in rec["type2"].items() if v in remap},
        }
        new_translates[g] = rec2
    ball.translates = new_translates
    ball.center = remap[ball.center]
    ball._adj = {}
    for u, v in ball.edges:
        ball._adj.setdefault(u, []).append(v)
        ball._adj.setdefault(v, []).append(u)
    for vid in ball._adj:
        ball._adj[vid] = sorted(ball._adj[vid])
    ball._by_bucket = {}
    for v in ball.vertices:
        ball._by_bucket.setdefault(
            ball._bucket_key(v.kind, v.rep, v.gens), []
        ).append(v.id)
    ball._apex_index = {rec["apex"]: g for g, rec in ball.translates.items()}


def build_ball(G: PresentationGraph, radius: int, budget: BallBudget | None = None) -> ComplexBall:
    """Assemble the ball of the given essential-skeleton radius around {1}.

    Deterministic for fixed inputs.  Raises ValueError when the graph is out
    of scope (must be large-type, free-of-infinity, rank >= 3, connected) or
    the translate budget cannot hold the requested radius.
    """
    report = validate_class(G)
    if not report.in_scope:
        raise ValueError(f"graph out of scope: {report.as_dict()}")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    budget = budget or BallBudget()
    ball = ComplexBall(G, radius, budget)
    ball._oracle = IdentificationOracle(G, budget.oracle)

    if radius == 0:
        vid = ball._intern_vertex(0, (), ())
        ball.center = vid
        ball.vertices[vid].depth = 0
        return ball

    base = _materialize_translate(ball, ())
    ball.center = base["apex"]

    rounds = (radius + 1) // 2
    frontier = [((), None)]  # (translate word, edge it was reached through)
    for _ in range(rounds):
        new_frontier = []
        for g, via_edge in sorted(frontier, key=lambda p: (len(p[0]), p[0])):
            for a, b in G.edge_pairs():
                if via_edge == (a, b):
                    continue  # same-edge regluing stays in the same chart family
                eng = engine_for_edge(G, a, b)
                for u in eng.elements_up_to(budget.chart_len):
                    if not u:
                        continue
                    h = free_reduce(g + u)
                    if h in ball.translates:
                        continue
                    if len(ball.translates) >= budget.max_translates:
                        raise ValueError(
                            "translate budget exhausted; raise max_translates or lower radius"
                        )
                    if _materialize_translate(ball, h) is not None:
                        new_frontier.append((h, (a, b)))
        frontier = new_frontier

    _compute_depths(ball)
    _prune_to_radius(ball)

    # taint shrinks the trusted region: claims stop below the shallowest taint
    for v in ball.vertices:
        if v.tainted and v.depth >= 0:
            ball.safe_radius = min(ball.safe_radius, max(v.depth - 1, 0))
    return ball


# ---------------------------------------------------------------------------
# Subcomplex queries


@dataclass(frozen=True)
class Subcomplex:
    vertices: tuple
    edges: tuple
    triangles: tuple

    def kinds(self, ball: ComplexBall):
        return [ball.vertices[v].kind for v in self.vertices]


def star(ball: ComplexBall, vid: int, essential: bool = False) -> Subcomplex:
    """The star of a vertex: the vertex, its neighbours, and every simplex of
    the ball containing it.  Requires the vertex to sit inside the safe
    region with margin 1 so the star is complete."""
    if not ball.is_interior(vid, 1) and vid != ball.center:
        raise ValueError(f"vertex {vid} too close to the boundary for a star")
    nbrs = ball.essential_neighbors(vid) if essential else list(ball.neighbors(vid))
    verts = [vid] + nbrs
    vset = set(verts)
    edges = [e for e in ball.edges if vid in e]
    if essential:
        edges = [
            (u, v)
            for u, v in edges
            if u in vset and v in vset
        ]
    tris = [] if essential else [t for t in ball.triangles if vid in t]
    return Subcomplex(tuple(sorted(vset)), tuple(sorted(edges)), tuple(sorted(tris)))


def link(ball: ComplexBall, vid: int) -> Subcomplex:
    """The link: neighbours of the vertex plus the edges opposite to it."""
    if not ball.is_interior(vid, 1) and vid != ball.center:
        raise ValueError(f"vertex {vid} too close to the boundary for a link")
    nbrs = set(ball.neighbors(vid))
    edges = []
    for a, b, c in ball.triangles:
        tri = (a, b, c)
        if vid in tri:
            rest = tuple(sorted(x for x in tri if x != vid))
            edges.append(rest)
    return Subcomplex(tuple(sorted(nbrs)), tuple(sorted(set(edges))), ())


def stabilizer_handle(ball: ComplexBall, vid: int) -> ParabolicHandle:
    """Handle (g, S) of the stabiliser g A_S g^-1 of a vertex."""
    v = ball.vertices[vid]
    return ParabolicHandle(v.kind, v.rep, v.gens)


def fixed_set(ball: ComplexBall, handle: ParabolicHandle) -> Subcomplex:
    """Portion of the fixed set of the parabolic subgroup named by `handle`
    inside the ball: a single vertex for type 2, a subtree of the standard
    tree for type 1.  Type 0 is rejected (everything is fixed)."""
    if handle.kind == 0:
        raise ValueError("fixed set of the trivial parabolic is the whole complex")
    oracle = ball._oracle
    fixed = []
    if handle.kind == 2:
        for vid in ball.vertices_of_kind(2):
            v = ball.vertices[vid]
            if v.gens == tuple(handle.gens):
                res = oracle.cosets_equal(v.rep, handle.rep, v.gens)
                if isinstance(res, SameCoset):
                    fixed.append(vid)
        return Subcomplex(tuple(fixed), (), ())
    t = handle.gens[0]
    for vid in ball.essential_vertices():
        v = ball.vertices[vid]
        if v.kind == 1:
            res = oracle.type1_subgroups_equal(v.rep, v.gens[0], handle.rep, t)
            if isinstance(res, SameCoset):
                fixed.append(vid)
        else:
            res = oracle.subgroup_contains_conjugate(v.rep, v.gens, handle.rep, t)
            if isinstance(res, SameCoset):
                fixed.append(vid)
    vset = set(fixed)
    edges = tuple(sorted((u, v) for u, v in ball.edges if u in vset and v in vset))
    return Subcomplex(tuple(sorted(vset)), edges, ())


def subcomplex_is_tree(sub: Subcomplex) -> bool:
    """Connected and acyclic."""
    if not sub.vertices:
        return False
    adj = {v: [] for v in sub.vertices}
    for u, v in sub.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {sub.vertices[0]}
    todo = [sub.vertices[0]]
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(sub.vertices) and len(sub.edges) == len(sub.vertices) - 1


# ---------------------------------------------------------------------------
# Distances in the essential skeleton


@dataclass(frozen=True)
class DistanceReport:
    value: int | None  # None: unreachable inside the ball
    exact: bool  # True when the value is certified as the true distance
    basis: str


def _bfs_distance(ball: ComplexBall, u: int, v: int):
    if u == v:
        return 0
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            for y in ball.essential_neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == v:
                        return dist[y]
                    nxt.append(y)
        frontier = nxt
    return None


@dataclass(frozen=True)
class Dist2Yes:
    witness: object  # vertex id or an algebraic witness description
    basis: str


@dataclass(frozen=True)
class Dist2No:
    basis: str


@dataclass(frozen=True)
class Dist2Unknown:
    reason: str


def _product_shadow(ball: ComplexBall, S1: tuple, S2: tuple):
    """The finite set of Coxeter matrices of W_S1 . W_S2 (cached)."""
    key = ("wprod", S1, S2)
    cached = ball._geometry.get(key)
    if cached is not None:
        return cached
    ctx = ball._oracle.ctx
    out = set()
    for P in ctx.dihedral_subgroup(*S1):
        for Q in ctx.dihedral_subgroup(*S2):
            out.add(mat_mul(ctx.ring, P, Q))
    fs = frozenset(out)
    ball._geometry[key] = fs
    return fs


def distance_two_status(ball: ComplexBall, v1: int, v2: int, search_len: int = 4):
    """Certified trichotomy: do two type-2 vertices share a type-1 neighbour?

    Yes needs a materialized common neighbour or an algebraic witness
    (a factorisation of the connecting element through the two edge groups);
    No needs a certificate (disjoint generator sets, distinct cosets of one
    parabolic, or a Coxeter-shadow obstruction to the factorisation).
    """
    r1, r2 = ball.vertices[v1], ball.vertices[v2]
    assert r1.kind == 2 and r2.kind == 2 and v1 != v2
    common = sorted(
        set(ball.essential_neighbors(v1)) & set(ball.essential_neighbors(v2))
    )
    if common:
        return Dist2Yes(common[0], "materialized")
    S1, S2 = r1.gens, r2.gens
    shared = sorted(set(S1) & set(S2))
    if not shared:
        return Dist2No("disjoint-generators")
    if S1 == S2:
        # distinct vertices of one parabolic family are disjoint cosets
        return Dist2No("same-parabolic-distinct-coset")
    z = free_reduce(invert(r1.rep) + r2.rep)
    ctx = ball._oracle.ctx
    if ctx.image(z) not in _product_shadow(ball, S1, S2):
        return Dist2No("coxeter-shadow")
    # bounded search for a factorisation z = p q with p in A_S1, q in A_S2
    eng = engine_for_edge(ball.graph, *S1)
    oracle = ball._oracle
    for p in eng.elements_up_to(search_len):
        q = free_reduce(invert(p) + z)
        res = oracle.member_of_edge_group(q, S2)
        if isinstance(res, SameCoset):
            return Dist2Yes(
                {"through": word_to_str(free_reduce(r1.rep + p))}, "factorisation"
            )
    return Dist2Unknown("no factorisation within search bound")


def combinatorial_distance(ball: ComplexBall, u: int, v: int) -> DistanceReport:
    """Distance between essential-skeleton vertices inside the ball.

    The BFS value is an upper bound for the true distance in the complex
    (charts are truncated, so short detours through unmaterialized vertices
    cannot be ruled out in general); the report states when the value is
    certified exact: always for 0-3 (bipartite parity plus adjacency), and
    for 4 between type-2 vertices when the shared-neighbour decision refutes
    distance 2.
    """
    ru, rv = ball.vertices[u], ball.vertices[v]
    assert ru.kind in (1, 2) and rv.kind in (1, 2), "essential vertices only"
    d = _bfs_distance(ball, u, v)
    if d is None:
        return DistanceReport(None, False, "unreachable inside ball")
    if d <= 3:
        # 0: same vertex; 1: a shared simplex; 2: a common neighbour with
        # bipartite parity excluding 1; 3: parity again, given non-adjacency
        return DistanceReport(d, True, "short-range")
    if d == 4 and ru.kind == 2 and rv.kind == 2:
        st = distance_two_status(ball, u, v)
        if isinstance(st, Dist2No):
            return DistanceReport(4, True, f"distance-2 refuted: {st.basis}")
        if isinstance(st, Dist2Yes):
            # the ball missed the common neighbour; the true distance is 2
            return DistanceReport(2, True, f"algebraic witness: {st.basis}")
        return DistanceReport(4, False, "distance-2 undecided")
    return DistanceReport(d, False, "upper bound only")


# ---------------------------------------------------------------------------
# Export


def ball_to_json(ball: ComplexBall) -> str:
    data = {
        "graph": {
            "vertices": list(ball.graph.vertices),
            "edges": [[u, v, ball.graph.label(u, v)] for u, v in ball.graph.edge_pairs()],
        },
        "center": ball.center,
        "radius": ball.radius,
        "safe_radius": ball.safe_radius,
        "chart_len": ball.budget.chart_len,
        "vertices": [
            {
                "id": v.id,
                "type": v.kind,
                "rep": word_to_str(v.rep),
                "gens": list(v.gens),
                "depth": v.depth,
            }
            for v in ball.vertices
        ],
        "edges": sorted([list(e) for e in ball.edges]),
        "triangles": sorted([list(t) for t in ball.triangles]),
        "unknown_log": ball.unknown_log,
        "external_certificates": ball._oracle.external_uses if ball._oracle else 0,
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
