"""Exact arithmetic in the ring Z[2cos(pi/L)].

All Coxeter-matrix computations in this package happen over the subring of the
reals generated by the numbers 2cos(pi/m) for the edge labels m of a
presentation graph.  Taking L = lcm of the labels, every such number is an
integer polynomial in c = 2cos(pi/L) (via the Dickson/Chebyshev identity
D_j(2cos t) = 2cos(jt)), and c itself is an algebraic *integer*: its minimal
polynomial is monic with integer coefficients.  Elements of Z[c] are therefore
represented as integer coefficient vectors in the power basis 1, c, ...,
c^(d-1), and addition/multiplication never leave the integers.  Equality is
coefficient-wise, which makes elements usable as dict keys; this is what the
coset-identification tables in the Deligne-ball builder rely on.

The minimal polynomial of 2cos(pi/L) is extracted from the cyclotomic
polynomial Phi_{2L}: writing k = deg(Phi_{2L})/2, palindromicity gives
Phi(z)/z^k = a_k + sum_j a_{k+j} (z^j + z^-j), and substituting x = z + 1/z
turns each z^j + z^-j into the Dickson polynomial D_j(x).
"""

from __future__ import annotations

import math
from functools import lru_cache


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_divexact(p, q):
    """Exact division of integer polynomials (remainder must be zero)."""
    p = list(p)
    dq = len(q) - 1
    out = [0] * (len(p) - dq)
    for i in range(len(out) - 1, -1, -1):
        coef = p[i + dq]
        assert coef % q[-1] == 0, "non-exact polynomial division"
        c = coef // q[-1]
        out[i] = c
        if c:
            for j, b in enumerate(q):
                p[i + j] -= c * b
    assert all(x == 0 for x in p), "non-zero remainder in exact division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


def _dickson_polys(kmax: int) -> list[list[int]]:
    """D_0..D_kmax with D_j(2cos t) = 2cos(jt): D_0=2, D_1=x, D_j=x*D_{j-1}-D_{j-2}."""
    polys = [[2], [0, 1]]
    for _ in range(2, kmax + 1):
        prev, prev2 = polys[-1], polys[-2]
        nxt = [0] + list(prev)
        for i, b in enumerate(prev2):
            nxt[i] -= b
        polys.append(nxt)
    return polys[: kmax + 1]


def minimal_poly_2cos(L: int) -> tuple[int, ...]:
    """Monic integer minimal polynomial of 2cos(pi/L), ascending coefficients."""
    if L == 1:
        return (2, 1)  # 2cos(pi) = -2
    if L == 2:
        return (0, 1)  # 2cos(pi/2) = 0
    phi = cyclotomic_poly(2 * L)
    k = (len(phi) - 1) // 2
    dick = _dickson_polys(k)
    out = [0] * (k + 1)
    out[0] = phi[k]
    for j in range(1, k + 1):
        for i, b in enumerate(dick[j]):
            out[i] += phi[k + j] * b
    assert out[-1] == 1, "minimal polynomial not monic"
    return tuple(out)


class CosineRing:
    """The ring Z[2cos(pi/L)], elements stored as integer tuples of length `degree`.

    Elements are plain tuples so they hash and compare structurally; the ring
    object carries the reduction data.  Only +, -, * are provided: everything
    downstream (reflection matrices, coset keys) is integral.
    """

    def __init__(self, L: int):
        self.L = L
        mp = minimal_poly_2cos(L)
        self.minpoly = mp
        self.degree = len(mp) - 1
        d = self.degree
        self.zero = (0,) * d
        self.one = tuple([1] + [0] * (d - 1)) if d >= 1 else ()
        # rows[i] = x^(d+i) reduced mod minpoly, as a length-d integer vector
        rows = []
        # x^d = -(mp[0] + mp[1] x + ... + mp[d-1] x^(d-1))
        cur = [-mp[i] for i in range(d)]
        rows.append(tuple(cur))
        for _ in range(d - 2):
            shifted = [0] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(d):
                    shifted[i] += top * rows[0][i]
            cur = shifted
            rows.append(tuple(cur))
        self._rows = rows
        self._cos_float = 2.0 * math.cos(math.pi / L)

    def from_int(self, n: int) -> tuple[int, ...]:
        return tuple([n] + [0] * (self.degree - 1))

    def add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def sub(self, u, v):
        return tuple(a - b for a, b in zip(u, v))

    def neg(self, u):
        return tuple(-a for a in u)

    def mul(self, u, v):
        d = self.degree
        conv = [0] * (2 * d - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    conv[i + j] += a * b
        out = conv[:d]
        rows = self._rows
        for i in range(d - 1):
            c = conv[d + i]
            if c:
                row = rows[i]
                for j in range(d):
                    out[j] += c * row[j]
        return tuple(out)

    def scale(self, n: int, u):
        return tuple(n * a for a in u)

    def two_cos_pi_over(self, m: int) -> tuple[int, ...]:
        """The element 2cos(pi/m); requires m | L."""
        assert self.L % m == 0, f"label {m} does not divide ring level {self.L}"
        j = self.L // m
        return self.eval_int_poly(_dickson_polys(j)[j])

    def eval_int_poly(self, poly):
        """Evaluate an integer polynomial at the ring generator 2cos(pi/L)."""
        gen = self._gen()
        acc = self.zero
        power = self.one
        for coef in poly:
            if coef:
                acc = self.add(acc, self.scale(coef, power))
            power = self.mul(power, gen)
        return acc

    def _gen(self):
        if self.degree == 1:
            # x reduces to the rational root -minpoly[0] of the linear minpoly
            return (-self.minpoly[0],)
        g = [0] * self.degree
        g[1] = 1
        return tuple(g)

    def to_float(self, u) -> float:
        acc = 0.0
        for a in reversed(u):
            acc = acc * self._cos_float + a
        return acc

    def __repr__(self):
        return f"CosineRing(L={self.L}, degree={self.degree})"


def ring_for_labels(labels) -> CosineRing:
    L = 1
    for m in labels:
        L = L * m // math.gcd(L, m)
    return CosineRing(L)


# ---------------------------------------------------------------------------
# Matrices over a CosineRing (tuples of tuples of coefficient tuples).


def mat_identity(ring: CosineRing, n: int):
    return tuple(
        tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)
    )


def mat_mul(ring: CosineRing, A, B):
    n = len(A)
    Bt = tuple(zip(*B))
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(n):
            Bj = Bt[j]
            acc = ring.zero
            for k in range(n):
                a = Ai[k]
                if any(a):
                    acc = ring.add(acc, ring.mul(a, Bj[k]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_eq(A, B) -> bool:
    return A == B
