"""The hyperoctahedral group W_m as signed permutations of {1-m, ..., m}.

W_m is generated by the transpositions s_1, ..., s_(m-1) together with
eps_1, the sign flip switching 1 and 1-l at l=1.  Every element commutes
with l -> 1-l, so it is stored by its images on 1, ..., m only.  Words
use the letters 1..m-1 for s_k and the letter 0 for eps_1.

Lengths come from a breadth-first closure over the generators rather
than an inversion count, and the canonical reduced word of w is produced
by peeling minimal coset representatives along the parabolic chain
W_0 < W_1 < ... < W_m.  The fixed representative words are

    [m-1, m-2, ..., k]          k = 1..m   (empty word at k = m)
    [m-1, ..., 1, 0, 1, ..., j-1]   j = 1..m

and their minimality is asserted against the BFS table at import of the
rank table.  Symmetric groups (needed for the plain-sequence algebras and
for parabolic subgroups W_m x S_m') reuse the same machinery with the
sign-flip generator disabled.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

EPS = 0  # word letter for eps_1


class IndexOutOfRange(IndexError):
    pass


class RankMismatch(ValueError):
    pass


class RankTooLarge(ValueError):
    pass


class SignedPerm:
    """Element of W_m given by the images (w(1), ..., w(m))."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        self.images = tuple(images)

    @property
    def rank(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(m: int) -> "SignedPerm":
        return SignedPerm(range(1, m + 1))

    @staticmethod
    def gen(letter: int, m: int) -> "SignedPerm":
        """The generator s_letter, or eps_1 for letter == EPS."""
        if letter == EPS:
            if m < 1:
                raise IndexOutOfRange("eps_1 needs rank >= 1")
            return SignedPerm((0,) + tuple(range(2, m + 1)))  # 1 -> 0 means 1 -> 1-1
        if not 1 <= letter <= m - 1:
            raise IndexOutOfRange("no generator s_%d in rank %d" % (letter, m))
        img = list(range(1, m + 1))
        img[letter - 1], img[letter] = img[letter], img[letter - 1]
        return SignedPerm(img)

    def __call__(self, l: int) -> int:
        """w(l) for l in {1-m, ..., m}; w(0) = 1 - w(1)."""
        m = self.rank
        if not (1 - m <= l <= m):
            raise IndexOutOfRange("index %d outside {%d..%d}" % (l, 1 - m, m))
        if l >= 1:
            v = self.images[l - 1]
        else:
            v = 1 - self.images[-l]  # w(1-l') = 1 - w(l')
        return v

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        """(v * w)(l) = v(w(l))."""
        if self.rank != other.rank:
            raise RankMismatch("composing elements of different ranks")
        return SignedPerm(self(other.images[l]) for l in range(self.rank))

    def inverse(self) -> "SignedPerm":
        m = self.rank
        img = [0] * m
        for l in range(1, m + 1):
            v = self.images[l - 1]
            if v >= 1:
                img[v - 1] = l
            else:
                img[-v] = 1 - l  # w(l) = v <= 0 means w(1-l) = 1-v >= 1
        return SignedPerm(img)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.rank + 1))

    def is_positive(self) -> bool:
        """True when the element lies in the symmetric subgroup."""
        return all(v >= 1 for v in self.images)

    def fixes_last(self) -> bool:
        return self.images[-1] == self.rank

    def restrict(self, m: int) -> "SignedPerm":
        """Restriction to W_m for an element fixing m+1, ..., rank pointwise."""
        if any(self.images[l] != l + 1 for l in range(m, self.rank)):
            raise ValueError("element does not fix %d.. pointwise" % (m + 1,))
        return SignedPerm(self.images[:m])

    def extend(self, m: int) -> "SignedPerm":
        """Inclusion W_rank < W_m fixing the new letters."""
        if m < self.rank:
            raise RankMismatch("cannot extend to a smaller rank")
        return SignedPerm(self.images + tuple(range(self.rank + 1, m + 1)))

    def act_full(self, full: Sequence) -> tuple:
        """Permute a full tuple indexed by l = 1-m, ..., m: (w t)_l = t_(w^-1 l)."""
        m = self.rank
        if len(full) != 2 * m:
            raise RankMismatch("tuple length %d, expected %d" % (len(full), 2 * m))
        winv = self.inverse()
        return tuple(full[winv(l) + m - 1] for l in range(1 - m, m + 1))

    def key(self):
        return self.images

    def __hash__(self):
        return hash(self.images)

    def __eq__(self, other):
        return isinstance(other, SignedPerm) and self.images == other.images

    def __repr__(self):
        return "SignedPerm%r" % (self.images,)


def word_to_perm(word: Sequence[int], m: int) -> SignedPerm:
    """Evaluate a word left-to-right: [a, b] means s_a * s_b."""
    w = SignedPerm.identity(m)
    for letter in word:
        w = w * SignedPerm.gen(letter, m)
    return w


class GroupTable:
    """Fully enumerated W_m (or S_m), with lengths and canonical words."""

    def __init__(self, m: int, signed: bool = True):
        if m > 6:
            raise RankTooLarge("rank %d exceeds the resource guard (6)" % m)
        self.m = m
        self.signed = signed
        self.letters = self._letters(m)
        self._lengths: dict[tuple, int] = {}
        self._parent: dict[tuple, tuple | None] = {}
        self._bfs()
        self.elements = sorted(
            (SignedPerm(k) for k in self._lengths), key=lambda w: (self._lengths[w.key()], w.key())
        )
        self._canon: dict[tuple, tuple] = {}
        if signed:
            self._check_chain_words()

    def _letters(self, m: int) -> tuple:
        letters = tuple(range(1, m)) + ((EPS,) if self.signed and m >= 1 else ())
        return letters

    def _bfs(self):
        e = SignedPerm.identity(self.m)
        self._lengths[e.key()] = 0
        self._parent[e.key()] = None
        frontier = [e]
        gens = [(a, SignedPerm.gen(a, self.m)) for a in self.letters]
        while frontier:
            nxt = []
            for w in frontier:
                for a, g in gens:
                    u = w * g
                    if u.key() not in self._lengths:
                        self._lengths[u.key()] = self._lengths[w.key()] + 1
                        self._parent[u.key()] = (w.key(), a)
                        nxt.append(u)
            frontier = nxt

    def length(self, w: SignedPerm) -> int:
        return self._lengths[w.key()]

    def order(self) -> int:
        return len(self._lengths)

    def some_reduced_word(self, w: SignedPerm) -> tuple:
        """A reduced word from the BFS predecessor chain."""
        word = []
        k = w.key()
        while self._parent[k] is not None:
            k, a = self._parent[k]
            word.append(a)
        return tuple(reversed(word))

    def all_reduced_words(self, w: SignedPerm) -> list[tuple]:
        @lru_cache(maxsize=None)
        def rec(key: tuple) -> tuple:
            u = SignedPerm(key)
            lu = self._lengths[key]
            if lu == 0:
                return ((),)
            out = []
            for a in self.letters:
                prev = u * SignedPerm.gen(a, self.m)
                if self._lengths[prev.key()] == lu - 1:
                    out.extend(word + (a,) for word in rec(prev.key()))
            return tuple(out)

        return list(rec(w.key()))

    # -- canonical words along the parabolic chain --------------------------

    @staticmethod
    def chain_rep_words(n: int, signed: bool = True) -> list[tuple]:
        """Fixed words for the minimal representatives of W_(n-1) \\ W_n."""
        words = [tuple(range(n - 1, k - 1, -1)) for k in range(n, 0, -1)]
        if signed:
            words += [
                tuple(range(n - 1, 0, -1)) + (EPS,) + tuple(range(1, j))
                for j in range(1, n + 1)
            ]
        return words

    def _check_chain_words(self):
        if self.m > 4:
            return
        for n in range(1, self.m + 1):
            for word in self.chain_rep_words(n, self.signed):
                w = word_to_perm(word, self.m)
                assert self._lengths[w.key()] == len(word), (
                    "chain word %r is not reduced at rank %d" % (word, n)
                )

    def canonical_word(self, w: SignedPerm) -> tuple:
        """The canonical reduced word of w; length-additive along the chain."""
        if w.key() in self._canon:
            return self._canon[w.key()]
        word = self._canonical_word_rec(w, self.m)
        assert len(word) == self._lengths[w.key()], "canonical word not reduced"
        self._canon[w.key()] = word
        return word

    def _canonical_word_rec(self, w: SignedPerm, n: int) -> tuple:
        if n == 0 or w.is_identity():
            return ()
        for dword in self.chain_rep_words(n, self.signed):
            d = word_to_perm(dword, n)
            u = w * d.inverse()
            if u.fixes_last():
                rest = self._canonical_word_rec(u.restrict(n - 1), n - 1)
                return rest + dword
        raise AssertionError("no chain representative matched")  # pragma: no cover

    def chain_factor(self, w: SignedPerm) -> tuple[SignedPerm, SignedPerm, tuple]:
        """w = u * d with u in W_(m-1), d a chain representative; returns (u, d, word-of-d)."""
        n = self.m
        for dword in self.chain_rep_words(n, self.signed):
            d = word_to_perm(dword, n)
            u = w * d.inverse()
            if u.fixes_last():
                return u, d, dword
        raise AssertionError("no chain representative matched")  # pragma: no cover


@lru_cache(maxsize=None)
def W(m: int) -> GroupTable:
    return GroupTable(m, signed=True)


@lru_cache(maxsize=None)
def S(m: int) -> GroupTable:
    return GroupTable(m, signed=False)


def group_table(m: int, signed: bool) -> GroupTable:
    return W(m) if signed else S(m)


def act_index(w: SignedPerm, l: int) -> int:
    return w(l)


def length(w: SignedPerm) -> int:
    return W(w.rank).length(w)


def enumerate_group(m: int) -> list[SignedPerm]:
    return list(W(m).elements)


def canonical_word(w: SignedPerm) -> tuple:
    return W(w.rank).canonical_word(w)


class ParabolicData:
    """Minimal representatives D_(m,m') of W_(m,m') \\ W_(m+m') with factorization."""

    def __init__(self, m: int, mp: int, signed: bool = True):
        mpp = m + mp
        self.m, self.mp, self.mpp = m, mp, mpp
        self.table = group_table(mpp, signed)
        sub_letters = []
        if m >= 1:
            sub_letters += list(range(1, m))
            if signed:
                sub_letters.append(EPS)
        sub_letters += list(range(m + 1, mpp))
        self.subgroup = self._closure(sub_letters)
        self.reps = self._minimal_reps()
        self._rep_of: dict[tuple, SignedPerm] = {}
        for d in self.reps:
            for u in self.subgroup:
                self._rep_of[(u * d).key()] = d

    def _closure(self, letters) -> list[SignedPerm]:
        gens = [SignedPerm.gen(a, self.mpp) for a in letters]
        seen = {SignedPerm.identity(self.mpp).key()}
        frontier = [SignedPerm.identity(self.mpp)]
        out = [SignedPerm.identity(self.mpp)]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    u = w * g
                    if u.key() not in seen:
                        seen.add(u.key())
                        out.append(u)
                        nxt.append(u)
            frontier = nxt
        return out

    def _minimal_reps(self) -> list[SignedPerm]:
        assigned: set[tuple] = set()
        reps = []
        for w in self.table.elements:  # sorted by length, then key
            if w.key() in assigned:
                continue
            coset = [u * w for u in self.subgroup]
            lw = self.table.length(w)
            same = [v for v in coset if self.table.length(v) == lw]
            assert same == [w], "minimal coset representative is not unique"
            reps.append(w)
            assigned.update(v.key() for v in coset)
        return reps

    def factor(self, w: SignedPerm) -> tuple[SignedPerm, SignedPerm]:
        """w = u * d with u in the parabolic subgroup, d minimal; lengths add."""
        d = self._rep_of[w.key()]
        u = w * d.inverse()
        assert self.table.length(w) == self.table.length(u) + self.table.length(d)
        return u, d


@lru_cache(maxsize=None)
def parabolic(m: int, mp: int, signed: bool = True) -> ParabolicData:
    return ParabolicData(m, mp, signed)


def coset_reps(m: int, mp: int, signed: bool = True) -> list[SignedPerm]:
    return list(parabolic(m, mp, signed).reps)


def parabolic_factor(w: SignedPerm, m: int, mp: int, signed: bool = True):
    if w.rank != m + mp:
        raise RankMismatch("element rank %d, parabolic %d+%d" % (w.rank, m, mp))
    return parabolic(m, mp, signed).factor(w)
