"""Exact word problem for dihedral Artin groups via left-greedy normal forms.

The dihedral Artin group on generators a, b with label m is a Garside group
whose Garside element is the alternating product Delta = aba... (m letters,
equal to bab... by the defining relation).  Its simple elements are the
strictly alternating positive words of length 0..m; a proper simple (length
strictly between 0 and m) is determined by its first letter and its length,
and its left divisors are exactly its prefixes.  Every element has a unique
expression

    Delta^p . s_1 s_2 ... s_k      (p integer, s_i proper simples)

where consecutive factors are left-weighted, which here reduces to: the last
letter of s_i equals the first letter of s_{i+1}.  Multiplying a normal form
by a generator or an inverse generator is constant-time bookkeeping on the
factor list; conjugation by Delta swaps the two generators when m is odd and
is trivial when m is even.

Normal forms make equality, coset questions for <a> and <b>, and shortlex
canonical representatives exactly decidable, which is what the Deligne-ball
builder leans on for all identifications inside a single dihedral chart.
"""

from __future__ import annotations

from dataclasses import dataclass


def _alt(start: int, length: int) -> tuple[int, ...]:
    """Alternating letter-index word: start, 1-start, start, ... (`length` letters)."""
    return tuple((start + i) % 2 for i in range(length))


def _last_letter(start: int, length: int) -> int:
    return (start + length - 1) % 2


@dataclass(frozen=True)
class DihedralNF:
    """Left-greedy normal form Delta^power . factors, factors as (start, length)."""

    pair: tuple[str, str]
    m: int
    power: int
    factors: tuple  # tuple of (start_letter 0|1, 1 <= length < m)

    def key(self):
        return (self.power, self.factors)

    def is_identity(self) -> bool:
        return self.power == 0 and not self.factors

    def canonical_length(self) -> int:
        return len(self.factors)


class DihedralEngine:
    """Normal forms, equality, canonical words and coset representatives for
    one dihedral Artin group.  Words are tuples of (generator name, sign)."""

    def __init__(self, a: str, b: str, m: int):
        assert m >= 2
        self.pair = (a, b)
        self.m = m
        self._names = (a, b)
        self._index = {a: 0, b: 1}
        # shortlex letter order: a, a^-1, b, b^-1
        self._letters = ((a, 1), (a, -1), (b, 1), (b, -1))
        self._canonical_cache: dict = {}
        self._coset_cache: dict = {}
        self._enum_words: list = []
        self._enum_seen: dict = {}
        self._enum_frontier: list = []
        self._enum_len = -1

    # -- normal form computation ---------------------------------------------

    def _tau_factors(self, factors: list) -> list:
        if self.m % 2 == 0:
            return factors
        return [(1 - s, l) for (s, l) in factors]

    def _mul_pos(self, power: int, factors: list, x: int):
        """Multiply Delta^power . factors by the positive atom x, in place-ish."""
        if not factors:
            factors.append((x, 1))
            return power
        s, l = factors[-1]
        if _last_letter(s, l) == x:
            factors.append((x, 1))
            return power
        if l + 1 < self.m:
            factors[-1] = (s, l + 1)
            return power
        # the factor completes to Delta: pull it across the earlier factors
        factors.pop()
        factors[:] = self._tau_factors(factors)
        return power + 1

    def _mul_neg(self, power: int, factors: list, x: int):
        """Multiply by the inverse atom x^-1."""
        if factors:
            s, l = factors[-1]
            if _last_letter(s, l) == x:
                if l == 1:
                    factors.pop()
                else:
                    factors[-1] = (s, l - 1)
                return power
        # x^-1 = (x^-1 Delta) Delta^-1, and x^-1 Delta alternates from the
        # other letter with m-1 letters
        for y in _alt(1 - x, self.m - 1):
            power = self._mul_pos(power, factors, y)
        factors[:] = self._tau_factors(factors)
        return power - 1

    def normal_form(self, word) -> DihedralNF:
        power = 0
        factors: list = []
        for name, sign in word:
            x = self._index[name]
            if sign > 0:
                power = self._mul_pos(power, factors, x)
            else:
                power = self._mul_neg(power, factors, x)
        nf = DihedralNF(self.pair, self.m, power, tuple(factors))
        self._check(nf)
        return nf

    def _check(self, nf: DihedralNF):
        prev_last = None
        for s, l in nf.factors:
            assert 1 <= l < self.m, "factor length out of range"
            if prev_last is not None:
                assert prev_last == s, "factors not left-weighted"
            prev_last = _last_letter(s, l)

    def to_word(self, nf: DihedralNF):
        """Re-expand a normal form into a word (Delta spelled from letter 0)."""
        out = []
        delta = [(self._names[i], 1) for i in _alt(0, self.m)]
        if nf.power >= 0:
            out.extend(delta * nf.power)
        else:
            inv = [(n, -s) for (n, s) in reversed(delta)]
            out.extend(inv * (-nf.power))
        for s, l in nf.factors:
            out.extend((self._names[i], 1) for i in _alt(s, l))
        return tuple(out)

    # -- derived decisions -----------------------------------------------------

    def equal(self, w1, w2) -> bool:
        return self.normal_form(w1).key() == self.normal_form(w2).key()

    def is_identity(self, word) -> bool:
        return self.normal_form(word).is_identity()

    def power_of(self, word, t: str):
        """If word represents t^k return k, else None."""
        k = sum(sign for _, sign in word)
        tk = ((t, 1),) * k if k >= 0 else ((t, -1),) * (-k)
        return k if self.normal_form(word).key() == self.normal_form(tk).key() else None

    # -- shortlex enumeration ---------------------------------------------------

    def _grow_enum(self, upto: int):
        """Extend the shortlex BFS of reduced words to length `upto`.

        Visits words in shortlex order, so the first word reaching an element
        is that element's canonical representative.
        """
        if self._enum_len < 0:
            empty = ()
            self._enum_words.append(empty)
            self._enum_seen[self.normal_form(empty).key()] = empty
            self._enum_frontier = [empty]
            self._enum_len = 0
        while self._enum_len < upto:
            nxt = []
            for w in self._enum_frontier:
                for letter in self._letters:
                    if w and w[-1][0] == letter[0] and w[-1][1] == -letter[1]:
                        continue  # freely cancelling suffix
                    w2 = w + (letter,)
                    nxt.append(w2)
                    key = self.normal_form(w2).key()
                    if key not in self._enum_seen:
                        self._enum_seen[key] = w2
                        self._enum_words.append(w2)
            self._enum_frontier = nxt
            self._enum_len += 1

    def elements_up_to(self, length: int):
        """Canonical (shortlex-least) words of all elements with a
        representative of at most `length` letters, in shortlex order."""
        self._grow_enum(length)
        return [w for w in self._enum_words if len(w) <= length]

    def canonical_word(self, word):
        """Shortlex-least word representing the same element."""
        nf_key = self.normal_form(word).key()
        cached = self._canonical_cache.get(nf_key)
        if cached is not None:
            return cached
        for upto in range(len(word) + 1):
            self._grow_enum(upto)
            found = self._enum_seen.get(nf_key)
            if found is not None and len(found) <= upto:
                self._canonical_cache[nf_key] = found
                return found
        raise AssertionError("enumeration to len(word) must contain the element")

    def coset_rep(self, word, t: str):
        """Shortlex-least representative of the left coset word.<t>.

        Two words get the same output iff they differ by a right factor t^k.
        """
        assert t in self._names
        nf_key = self.normal_form(word).key()
        ck = (nf_key, t)
        cached = self._coset_cache.get(ck)
        if cached is not None:
            return cached
        w_ht = sum(sign for _, sign in word)
        scanned = 0
        for upto in range(len(word) + 1):
            self._grow_enum(upto)
            while scanned < len(self._enum_words):
                u = self._enum_words[scanned]
                if len(u) > upto:
                    break
                scanned += 1
                # word in u<t>  iff  u^-1 word = t^k, and k is forced by height
                k = w_ht - sum(sign for _, sign in u)
                tk = ((t, 1),) * k if k >= 0 else ((t, -1),) * (-k)
                if self.normal_form(u + tk).key() == nf_key:
                    self._coset_cache[ck] = u
                    return u
        raise AssertionError("coset representative search must succeed")
