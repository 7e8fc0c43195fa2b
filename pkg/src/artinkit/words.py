"""Words in an Artin group: invariants, rewriting, and budgeted oracles.

Elements are words over the standard generators, stored as tuples of
(generator name, sign).  Equality of words in the full group is approached
three ways, all exact:

  * homomorphic invariants - height (every generator to 1), the
    abelianization onto one Z per odd-label component, and the image in the
    Coxeter quotient through the Tits reflection representation over
    Z[2cos(pi/L)].  Differing invariants certify inequality.
  * relation rewriting - a breadth-first search over free cancellations and
    replacements of a subword by the complementary side of a braid relator
    (all cyclic rotations of the relator and its inverse, all splits).
    Reaching the target certifies equality with a replayable trace.
  * the dihedral engine - exact normal forms whenever a word lives in a
    single edge subgroup.

`equal_oracle` combines these into a sound three-valued verdict; it never
answers Equal without a trace that replays, and never answers Unequal
without an invariant certificate that re-evaluates.  Budgets bound the
search; exhaustion yields Unknown, never a guess.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cosring import CosineRing, mat_identity, mat_mul, ring_for_labels
from .dihedral import DihedralEngine
from .presentation import PresentationGraph

Word = tuple  # tuple of (name, sign)


# ---------------------------------------------------------------------------
# Word basics


def parse_word(text: str) -> Word:
    """Parse `a b a^-1` (also `a^3`, `b^-2`) into a word tuple."""
    out = []
    for tok in text.split():
        if "^" in tok:
            name, _, exp = tok.partition("^")
            k = int(exp)
        else:
            name, k = tok, 1
        if not name.isidentifier():
            raise ValueError(f"bad generator name {name!r}")
        sign = 1 if k > 0 else -1
        out.extend([(name, sign)] * abs(k))
    return tuple(out)


def word_to_str(w: Word) -> str:
    if not w:
        return "e"
    return " ".join(name if sign > 0 else f"{name}^-1" for name, sign in w)


def invert(w: Word) -> Word:
    return tuple((name, -sign) for name, sign in reversed(w))


def concat(*ws) -> Word:
    return tuple(itertools.chain.from_iterable(ws))


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list = []
    for letter in w:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def cyclic_reduce(w: Word):
    """Return (conjugator u, core) with w = u . core . u^-1, core cyclically reduced."""
    w = free_reduce(w)
    u: list = []
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        u.append(w[0])
        w = w[1:-1]
    return tuple(u), w


def height(w: Word) -> int:
    """The homomorphism sending every standard generator to 1."""
    return sum(sign for _, sign in w)


# ---------------------------------------------------------------------------
# Abelianization: one Z per connected component of the odd-label subgraph


def odd_components(G: PresentationGraph) -> list[tuple[str, ...]]:
    parent = {v: v for v in G.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, m in G.labels.items():
        if m % 2 == 1:
            u, v = tuple(e)
            parent[find(u)] = find(v)
    comps: dict = {}
    for v in G.vertices:
        comps.setdefault(find(v), []).append(v)
    ordered = sorted(comps.values(), key=lambda c: G.vertices.index(c[0]))
    return [tuple(c) for c in ordered]


def abelianization_image(G: PresentationGraph, w: Word) -> tuple[int, ...]:
    comps = odd_components(G)
    index = {}
    for i, comp in enumerate(comps):
        for v in comp:
            index[v] = i
    vec = [0] * len(comps)
    for name, sign in w:
        vec[index[name]] += sign
    return tuple(vec)


# ---------------------------------------------------------------------------
# Coxeter quotient via the Tits representation, exact over Z[2cos(pi/L)]


class CoxeterContext:
    """Reflection matrices of the Coxeter quotient of one presentation graph."""

    def __init__(self, G: PresentationGraph):
        self.graph = G
        self.ring: CosineRing = ring_for_labels(G.labels.values() or [2])
        n = G.rank
        self.rank = n
        ring = self.ring
        self.identity = mat_identity(ring, n)
        self.reflections = {}
        for s in G.vertices:
            si = G.vertices.index(s)
            rows = []
            for i in range(n):
                if i != si:
                    rows.append(tuple(ring.one if j == i else ring.zero for j in range(n)))
                else:
                    row = []
                    for j, t in enumerate(G.vertices):
                        if j == si:
                            row.append(ring.from_int(-1))
                        else:
                            m = G.label(s, t)
                            if m is None:
                                row.append(ring.from_int(2))  # label infinity
                            else:
                                row.append(ring.two_cos_pi_over(m))
                    rows.append(tuple(row))
            self.reflections[s] = tuple(rows)
        self._dihedral_sets: dict = {}

    def image(self, w: Word):
        M = self.identity
        for name, _sign in w:  # reflections are involutions: signs are immaterial
            M = mat_mul(self.ring, M, self.reflections[name])
        return M

    def dihedral_subgroup(self, a: str, b: str):
        """All matrices of the finite parabolic <R_a, R_b>; exactly 2*m of them."""
        key = frozenset((a, b))
        cached = self._dihedral_sets.get(key)
        if cached is not None:
            return cached
        m = self.graph.label(a, b)
        assert m is not None, "dihedral subgroup requires an edge"
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for M in frontier:
                for s in (a, b):
                    M2 = mat_mul(self.ring, M, self.reflections[s])
                    if M2 not in seen:
                        seen.add(M2)
                        nxt.append(M2)
            frontier = nxt
            assert len(seen) <= 2 * m, "dihedral closure exceeded order 2m"
        assert len(seen) == 2 * m, "dihedral parabolic has order 2m"
        result = frozenset(seen)
        self._dihedral_sets[key] = result
        return result


_COXETER_CACHE: dict = {}


def _graph_key(G: PresentationGraph):
    return (G.vertices, tuple(sorted((tuple(sorted(e)), m) for e, m in G.labels.items())))


def coxeter_context(G: PresentationGraph) -> CoxeterContext:
    key = _graph_key(G)
    ctx = _COXETER_CACHE.get(key)
    if ctx is None:
        ctx = CoxeterContext(G)
        _COXETER_CACHE[key] = ctx
    return ctx


def coxeter_image(G: PresentationGraph, w: Word):
    """Exact matrix of w in the Tits representation of the Coxeter quotient."""
    return coxeter_context(G).image(w)


# ---------------------------------------------------------------------------
# Budgets and verdicts


@dataclass(frozen=True)
class Budget:
    max_len: int = 16
    max_states: int = 20000

    def __post_init__(self):
        assert self.max_len > 0 and self.max_states > 0


@dataclass(frozen=True)
class Equal:
    trace: tuple  # replayable steps, see `replay_trace`

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Unequal:
    invariant: str  # "height" | "abelianization" | "coxeter"
    left: object
    right: object

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Unknown:
    reason: str
    states: int = 0


EqualityVerdict = object  # Equal | Unequal | Unknown


# ---------------------------------------------------------------------------
# Relation moves: all splits of all rotations of each braid relator


def _alternating(a: str, b: str, m: int) -> Word:
    return tuple(((a, b)[i % 2], 1) for i in range(m))


def braid_relator(a: str, b: str, m: int) -> Word:
    """The cyclic word (aba...)(bab...)^-1 of length 2m; trivial in the group."""
    return concat(_alternating(a, b, m), invert(_alternating(b, a, m)))


class RewriteSystem:
    """Subword replacement rules derived from the braid relators of a graph.

    A rule (u, v) means: the subword u may be replaced by v; both sides are
    complementary halves of a rotation of a relator or its inverse, so the
    replacement preserves the group element.
    """

    def __init__(self, G: PresentationGraph):
        self.graph = G
        rules: dict = {}
        for u_, v_ in G.edge_pairs():
            m = G.label(u_, v_)
            rel = braid_relator(u_, v_, m)
            for base in (rel, invert(rel)):
                n = len(base)
                for r in range(n):
                    rot = base[r:] + base[:r]
                    for cut in range(1, n):
                        lhs = rot[:cut]
                        rhs = invert(rot[cut:])
                        rules.setdefault(lhs, set()).add(rhs)
        # deterministic ordering of replacements per left-hand side
        self.rules = {lhs: tuple(sorted(rhs_set)) for lhs, rhs_set in rules.items()}
        self.max_lhs = max((len(k) for k in self.rules), default=0)
        self._rule_pairs = {(l, r) for l, rs in self.rules.items() for r in rs}

    def is_relation_pair(self, lhs: Word, rhs: Word) -> bool:
        return (lhs, rhs) in self._rule_pairs

    def neighbors(self, w: Word, max_len: int):
        """All words reachable by one free cancellation or one rule application,
        with the describing step, in deterministic order."""
        out = []
        for i in range(len(w) - 1):
            if w[i][0] == w[i + 1][0] and w[i][1] == -w[i + 1][1]:
                out.append((w[:i] + w[i + 2:], ("free_cancel", i)))
        for i in range(len(w)):
            for l in range(1, min(self.max_lhs, len(w) - i) + 1):
                sub = w[i:i + l]
                for rhs in self.rules.get(sub, ()):
                    w2 = w[:i] + rhs + w[i + l:]
                    if len(w2) <= max_len:
                        out.append((w2, ("relation", i, sub, rhs)))
        return out


_REWRITE_CACHE: dict = {}


def rewrite_system(G: PresentationGraph) -> RewriteSystem:
    key = _graph_key(G)
    rs = _REWRITE_CACHE.get(key)
    if rs is None:
        rs = RewriteSystem(G)
        _REWRITE_CACHE[key] = rs
    return rs


def apply_step(w: Word, step) -> Word:
    """Apply one trace step to a word, validating legality."""
    kind = step[0]
    if kind == "free_cancel":
        _, i = step
        assert 0 <= i < len(w) - 1 and w[i][0] == w[i + 1][0] and w[i][1] == -w[i + 1][1]
        return w[:i] + w[i + 2:]
    if kind == "free_insert":
        _, i, letter = step
        name, sign = letter
        assert 0 <= i <= len(w)
        return w[:i] + ((name, sign), (name, -sign)) + w[i:]
    if kind == "relation":
        _, i, lhs, rhs = step
        assert w[i:i + len(lhs)] == tuple(lhs)
        return w[:i] + tuple(rhs) + w[i + len(lhs):]
    raise ValueError(f"unknown step kind {kind!r}")


def replay_trace(G: PresentationGraph, w1: Word, w2: Word, trace) -> bool:
    """Check that a trace is a legal move chain from w1 to w2."""
    rs = rewrite_system(G)
    cur = tuple(w1)
    for step in trace:
        if step[0] == "relation":
            if not rs.is_relation_pair(tuple(step[2]), tuple(step[3])):
                return False
        try:
            cur = apply_step(cur, step)
        except AssertionError:
            return False
    return cur == tuple(w2)


def _free_reduction_steps(w: Word):
    """Steps performing one full free reduction of w, plus the result."""
    steps = []
    cur = tuple(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if cur[i][0] == cur[i + 1][0] and cur[i][1] == -cur[i + 1][1]:
                steps.append(("free_cancel", i))
                cur = cur[:i] + cur[i + 2:]
                changed = True
                break
    return steps, cur


def _invert_steps(steps, words):
    """Invert a step chain: words[i] --steps[i]--> words[i+1], reversed."""
    out = []
    for step, before in zip(reversed(steps), reversed(words[:-1])):
        kind = step[0]
        if kind == "free_cancel":
            i = step[1]
            out.append(("free_insert", i, before[i]))
        elif kind == "free_insert":
            out.append(("free_cancel", step[1]))
        else:
            _, i, lhs, rhs = step
            out.append(("relation", i, rhs, lhs))
    return out


# ---------------------------------------------------------------------------
# The equality oracle


def invariant_certificates(G: PresentationGraph, w1: Word, w2: Word):
    """First separating invariant between w1 and w2, or None."""
    h1, h2 = height(w1), height(w2)
    if h1 != h2:
        return Unequal("height", h1, h2)
    a1, a2 = abelianization_image(G, w1), abelianization_image(G, w2)
    if a1 != a2:
        return Unequal("abelianization", a1, a2)
    c1, c2 = coxeter_image(G, w1), coxeter_image(G, w2)
    if c1 != c2:
        return Unequal("coxeter", c1, c2)
    return None


def _bfs_meet(rs: RewriteSystem, start: Word, goal: Word, budget: Budget):
    """Bidirectional breadth-first search in the rewriting graph.

    Returns a step chain start -> goal, or None.  Deterministic: frontiers
    are expanded in insertion order and neighbors are generated in a fixed
    order.
    """
    if start == goal:
        return []
    # parents map word -> (previous word, step) per side
    sides = {
        "f": ({start: None}, [start]),
        "b": ({goal: None}, [goal]),
    }
    states = 2

    def build_chain(meet):
        fparents = sides["f"][0]
        bparents = sides["b"][0]
        fsteps, fwords = [], [meet]
        cur = meet
        while fparents[cur] is not None:
            prev, step = fparents[cur]
            fsteps.append(step)
            fwords.append(prev)
            cur = prev
        fsteps.reverse()
        fwords.reverse()  # start ... meet
        bsteps, bwords = [], [meet]
        cur = meet
        while bparents[cur] is not None:
            prev, step = bparents[cur]
            bsteps.append(step)
            bwords.append(prev)
            cur = prev
        # walking gave the goal->meet chain backwards; realign and invert it
        inv = _invert_steps(list(reversed(bsteps)), list(reversed(bwords)))
        return fsteps + inv

    while True:
        tag = "f" if len(sides["f"][1]) <= len(sides["b"][1]) else "b"
        parents, frontier = sides[tag]
        other_parents = sides["b" if tag == "f" else "f"][0]
        if not frontier:
            return None
        nxt = []
        for w in frontier:
            for w2, step in rs.neighbors(w, budget.max_len):
                if w2 in parents:
                    continue
                parents[w2] = (w, step)
                states += 1
                if w2 in other_parents:
                    return build_chain(w2)
                nxt.append(w2)
                if states >= budget.max_states:
                    return None
        sides[tag] = (parents, nxt)


def equal_oracle(G: PresentationGraph, w1: Word, w2: Word, budget: Budget = Budget()):
    """Three-valued equality of words in the Artin group of G.

    Equal carries a move trace from w1 to w2 (verified before returning);
    Unequal carries a separating invariant (re-evaluated before returning);
    otherwise Unknown.
    """
    w1, w2 = tuple(w1), tuple(w2)
    pre_steps, r1 = _free_reduction_steps(w1)
    post_steps_fwd, r2 = _free_reduction_steps(w2)
    w2_chain_words = [w2]
    cur = w2
    for step in post_steps_fwd:
        cur = apply_step(cur, step)
        w2_chain_words.append(cur)
    post_steps = _invert_steps(post_steps_fwd, w2_chain_words)

    verdict = None
    if r1 == r2:
        verdict = Equal(tuple(pre_steps + post_steps))
    if verdict is None:
        cert = invariant_certificates(G, r1, r2)
        if cert is not None:
            verdict = cert
    if verdict is None:
        rs = rewrite_system(G)
        chain = _bfs_meet(rs, r1, r2, budget)
        if chain is not None:
            verdict = Equal(tuple(pre_steps + chain + post_steps))
        else:
            verdict = Unknown("budget exhausted", budget.max_states)

    # always-on soundness layer
    if isinstance(verdict, Equal):
        assert replay_trace(G, w1, w2, verdict.trace), "Equal trace failed to replay"
    elif isinstance(verdict, Unequal):
        fn = {
            "height": lambda w: height(w),
            "abelianization": lambda w: abelianization_image(G, w),
            "coxeter": lambda w: coxeter_image(G, w),
        }[verdict.invariant]
        assert fn(w1) == verdict.left and fn(w2) == verdict.right, (
            "Unequal certificate failed re-evaluation"
        )
        assert verdict.left != verdict.right
    return verdict


# ---------------------------------------------------------------------------
# Membership in an edge (dihedral) parabolic subgroup


@dataclass(frozen=True)
class MemberIn:
    witness: Word  # a word over the pair, equal to the input
    trace: tuple

    def __bool__(self):
        return True


@dataclass(frozen=True)
class MemberNotIn:
    certificate: str  # "coxeter" | "abelianization"
    detail: object = None

    def __bool__(self):
        return False


_DIHEDRAL_ENGINES: dict = {}


def dihedral_engine(a: str, b: str, m: int) -> DihedralEngine:
    key = (a, b, m)
    eng = _DIHEDRAL_ENGINES.get(key)
    if eng is None:
        eng = DihedralEngine(a, b, m)
        _DIHEDRAL_ENGINES[key] = eng
    return eng


def engine_for_edge(G: PresentationGraph, a: str, b: str) -> DihedralEngine:
    m = G.label(a, b)
    assert m is not None, f"{{{a},{b}}} is not an edge"
    a, b = sorted((a, b), key=G.vertices.index)
    return dihedral_engine(a, b, m)


def parabolic_membership_oracle(
    G: PresentationGraph, w: Word, pair, budget: Budget = Budget()
):
    """Decide membership of w in the standard parabolic on an edge pair.

    In requires a witness word over the pair together with a rewrite trace
    proving equality; NotIn requires an exact obstruction: the Coxeter image
    lies outside the order-2m dihedral parabolic (checked against all 2m
    matrices), or the abelianization leaves the sublattice of the pair.
    """
    a, b = tuple(pair)
    assert G.adjacent(a, b), f"{{{a},{b}}} is not an edge"
    w_orig = tuple(w)
    pre_steps, w = _free_reduction_steps(w_orig)

    if all(name in (a, b) for name, _ in w):
        verdict = MemberIn(w, tuple(pre_steps))
        assert replay_trace(G, w_orig, verdict.witness, verdict.trace)
        return verdict

    comps = odd_components(G)
    vec = abelianization_image(G, w)
    allowed = {i for i, comp in enumerate(comps) if a in comp or b in comp}
    if any(x != 0 and i not in allowed for i, x in enumerate(vec)):
        return MemberNotIn("abelianization", vec)

    ctx = coxeter_context(G)
    M = ctx.image(w)
    W_ab = ctx.dihedral_subgroup(a, b)
    if M not in W_ab:
        return MemberNotIn("coxeter")

    # budgeted search for a rewriting of w into the subalphabet
    rs = rewrite_system(G)
    parents = {w: None}
    frontier = [w]
    states = 1
    while frontier and states < budget.max_states:
        nxt = []
        for u in frontier:
            for u2, step in rs.neighbors(u, budget.max_len):
                if u2 in parents:
                    continue
                parents[u2] = (u, step)
                states += 1
                if all(name in (a, b) for name, _ in u2):
                    steps = []
                    cur = u2
                    while parents[cur] is not None:
                        prev, st = parents[cur]
                        steps.append(st)
                        cur = prev
                    steps.reverse()
                    verdict = MemberIn(u2, tuple(pre_steps) + tuple(steps))
                    assert replay_trace(G, w_orig, verdict.witness, verdict.trace)
                    return verdict
                nxt.append(u2)
                if states >= budget.max_states:
                    break
        frontier = nxt
    return Unknown("budget exhausted", states)
