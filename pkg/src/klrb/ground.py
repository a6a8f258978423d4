"""Exact ground arithmetic.

Rationals, multivariate polynomials in the variables k(1), ..., k(m),
rational functions with factored denominators, Laurent polynomials in v,
quantum integers, and evaluation of rational expressions on commuting
nilpotent matrices.

The index convention k(1-l) = -k(l) is applied at construction time, so
polynomials only ever store the variables k(1), ..., k(m).  Terms are
ordered in graded lexicographic order (total degree first, then the
exponent of k(1), k(2), ... with larger first), which fixes a canonical
textual rendering.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import Mat

Q = Fraction

Rational = Fraction  # arbitrary-precision rationals from the standard library


class DivisionByZero(ZeroDivisionError):
    pass


class InternalDivisionFailure(ArithmeticError):
    """An exact division that is guaranteed by theory failed: arithmetic bug."""


class SingularDenominator(ArithmeticError):
    def __init__(self, factor):
        self.factor = factor
        super().__init__("denominator is not invertible: %s" % (factor,))


class NonCommuting(ValueError):
    pass


def rat(s) -> Fraction:
    """Parse 'num/den' (or pass through numbers) into a Fraction."""
    return Q(s)


def rat_str(x: Fraction) -> str:
    return str(x)


def _gl_key(exps: tuple) -> tuple:
    # graded lex: higher total degree first, then lexicographically larger
    return (sum(exps), exps)


class Poly:
    """Polynomial in nvars variables over Q, graded-lex normal form."""

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction]):
        self.nvars = nvars
        self.terms = {e: Q(c) for e, c in terms.items() if c != 0}
        self._key = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(nvars: int, c) -> "Poly":
        c = Q(c)
        return Poly(nvars, {(0,) * nvars: c} if c else {})

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars, {})

    @staticmethod
    def one(nvars: int) -> "Poly":
        return Poly.const(nvars, 1)

    @staticmethod
    def kappa(l: int, nvars: int) -> "Poly":
        """The variable k(l); indices l <= 0 resolve through k(1-l) = -k(l)."""
        sign = 1
        if l <= 0:
            l, sign = 1 - l, -1
        if not 1 <= l <= nvars:
            raise IndexError("kappa index %d out of range for %d variables" % (l, nvars))
        e = tuple(1 if i == l - 1 else 0 for i in range(nvars))
        return Poly(nvars, {e: Q(sign)})

    # -- structure ---------------------------------------------------------

    def key(self):
        if self._key is None:
            self._key = (self.nvars, tuple(sorted(self.terms.items())))
        return self._key

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, Poly) and self.key() == other.key()

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Q(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def lead(self) -> tuple[tuple, Fraction]:
        e = max(self.terms, key=_gl_key)
        return e, self.terms[e]

    def monic(self) -> tuple["Poly", Fraction]:
        """(self / leadcoeff, leadcoeff)."""
        if self.is_zero():
            return self, Q(1)
        _, c = self.lead()
        return self.scale(Q(1) / c), c

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("mixing polynomials in different rings")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Q(0)) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = Q(c)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Q(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Poly; use RatFun")
        out = Poly.one(self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def monomial_content(self) -> tuple[tuple, "Poly"]:
        """Split off the largest monomial dividing self: (exponents, rest)."""
        if self.is_zero():
            return (0,) * self.nvars, self
        content = [min(e[i] for e in self.terms) for i in range(self.nvars)]
        if not any(content):
            return tuple(content), self
        rest = Poly(self.nvars, {
            tuple(a - b for a, b in zip(e, content)): c
            for e, c in self.terms.items()})
        return tuple(content), rest

    def exact_div(self, d: "Poly") -> "Poly | None":
        """self / d if the division is exact in the polynomial ring, else None."""
        if d.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if self.is_zero():
            return self
        le, lc = d.lead()
        q_terms: dict[tuple, Fraction] = {}
        r = self
        while not r.is_zero():
            re, rc = r.lead()
            qe = tuple(a - b for a, b in zip(re, le))
            if any(a < 0 for a in qe):
                return None
            qc = rc / lc
            q_terms[qe] = q_terms.get(qe, Q(0)) + qc
            r = r - d * Poly(self.nvars, {qe: qc})
        return Poly(self.nvars, q_terms)

    # -- actions and evaluation ---------------------------------------------

    def apply_index_map(self, image: Sequence[int]) -> "Poly":
        """Substitute k(l) -> k(image[l-1]), resolving signs for image <= 0.

        This is the ring automorphism induced by a signed permutation.
        """
        plan = []
        for l in range(1, self.nvars + 1):
            t = image[l - 1]
            sign = 1
            if t <= 0:
                t, sign = 1 - t, -1
            plan.append((t - 1, sign))
        terms: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            sgn = 1
            for pos, exp in enumerate(e):
                if exp:
                    tgt, sign = plan[pos]
                    ne[tgt] += exp
                    if sign < 0 and exp % 2:
                        sgn = -sgn
            ne_t = tuple(ne)
            terms[ne_t] = terms.get(ne_t, Q(0)) + sgn * c
        return Poly(self.nvars, terms)

    def eval_scalars(self, vals: Sequence[Fraction]) -> Fraction:
        out = Q(0)
        for e, c in self.terms.items():
            t = c
            for v, exp in zip(vals, e):
                t *= Q(v) ** exp
            out += t
        return out

    def eval_mats(self, mats: Sequence[Mat]) -> Mat:
        n = mats[0].nrows
        out = Mat.zeros(n, n)
        pow_cache = [{0: Mat.identity(n)} for _ in mats]
        for e, c in self.terms.items():
            term = Mat.identity(n).scale(c)
            for idx, exp in enumerate(e):
                if exp:
                    cache = pow_cache[idx]
                    if exp not in cache:
                        cache[exp] = mats[idx] ** exp
                    term = term @ cache[exp]
            out = out + term
        return out

    def substitute(self, values: Sequence["Poly"]) -> "Poly":
        """Substitute k(l) -> values[l-1] (polynomials in another ring)."""
        nv = values[0].nvars
        out = Poly.zero(nv)
        for e, c in self.terms.items():
            term = Poly.const(nv, c)
            for idx, exp in enumerate(e):
                for _ in range(exp):
                    term = term * values[idx]
            out = out + term
        return out

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_gl_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                "k%d" % (i + 1) if exp == 1 else "k%d^%d" % (i + 1, exp)
                for i, exp in enumerate(e) if exp
            )
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (rat_str(c), mono))
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    __repr__ = __str__


class RatFun:
    """Rational function num / prod(f^e) with monic nonconstant factors f.

    The denominator is kept factored; reduction peels factors that divide
    the numerator exactly.  This is closed under the arithmetic the skew
    algebra needs (all its denominators are products of linear forms) and
    keeps every cancellation required by the Hecke transport formulas
    exact, with no general polynomial gcd.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping[Poly, int] | None = None):
        self.num = num
        self.den = {}
        # split monomial content off every factor so single-variable
        # cancellations stay visible to the reducer
        for f, e in (den or {}).items():
            content, rest = f.monomial_content()
            for idx, a in enumerate(content):
                if a:
                    var = Poly.kappa(idx + 1, f.nvars)
                    self.den[var] = self.den.get(var, 0) + a * e
            if not rest.is_constant():
                self.den[rest] = self.den.get(rest, 0) + e
            else:
                c = rest.constant_term()
                if c != 1:
                    self.num = self.num.scale(Q(1) / c ** e)
        self._reduce()

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_poly(p: Poly) -> "RatFun":
        return RatFun(p)

    @staticmethod
    def const(nvars: int, c) -> "RatFun":
        return RatFun(Poly.const(nvars, c))

    @staticmethod
    def from_den_poly(num: Poly, den: Poly) -> "RatFun":
        """num / den for an arbitrary nonzero denominator polynomial."""
        return RatFun.from_den_factors(num, [den])

    @staticmethod
    def from_den_factors(num: Poly, factors: Iterable[Poly]) -> "RatFun":
        """num / prod(factors); keeping the factors separate preserves the
        cancellations the reduction can see."""
        den: dict[Poly, int] = {}
        for f in factors:
            if f.is_zero():
                raise DivisionByZero("zero denominator factor")
            if f.is_constant():
                num = num.scale(Q(1) / f.constant_term())
                continue
            fm, c = f.monic()
            num = num.scale(Q(1) / c)
            den[fm] = den.get(fm, 0) + 1
        return RatFun(num, den)

    # -- normalization -------------------------------------------------------

    def _reduce(self):
        if self.num.is_zero():
            self.den = {}
            return
        for f in list(self.den):
            e = self.den[f]
            while e > 0:
                q = self.num.exact_div(f)
                if q is None:
                    break
                self.num = q
                e -= 1
            if e:
                self.den[f] = e
            else:
                del self.den[f]

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise InternalDivisionFailure("not a polynomial: %s" % self)
        return self.num

    def den_poly(self) -> Poly:
        out = Poly.one(self.nvars)
        for f, e in self.den.items():
            out = out * f ** e
        return out

    def key(self):
        return (self.num.key(), tuple(sorted((f.key(), e) for f, e in self.den.items())))

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun.const(self.nvars, other)
        if self.key() == other.key():
            return True
        # cross-multiplied comparison catches unpeeled representations
        return (self.num * other.den_poly()) == (other.num * self.den_poly())

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        return RatFun.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        den: dict[Poly, int] = dict(self.den)
        for f, e in other.den.items():
            den[f] = max(den.get(f, 0), e)
        a = self.num
        for f, e in den.items():
            need = e - self.den.get(f, 0)
            if need:
                a = a * f ** need
        b = other.num
        for f, e in den.items():
            need = e - other.den.get(f, 0)
            if need:
                b = b * f ** need
        return RatFun(a + b, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return RatFun(self.num * other.num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        num = self.den_poly()
        nmonic, c = self.num.monic()
        num = num.scale(Q(1) / c)
        den = {} if nmonic.is_constant() else {nmonic: 1}
        return RatFun(num, den)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFun.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- group action and evaluation --------------------------------------------

    def apply_index_map(self, image: Sequence[int]) -> "RatFun":
        num = self.num.apply_index_map(image)
        den: dict[Poly, int] = {}
        for f, e in self.den.items():
            g = f.apply_index_map(image)
            gm, c = g.monic()
            num = num.scale((Q(1) / c) ** e)
            den[gm] = den.get(gm, 0) + e
        return RatFun(num, den)

    def eval_mats(self, mats: Sequence[Mat]) -> Mat:
        """Evaluate on commuting matrices; denominator factors must be invertible."""
        out = self.num.eval_mats(mats)
        for f, e in self.den.items():
            fm = f.eval_mats(mats)
            try:
                finv = fm.inverse()
            except ValueError:
                raise SingularDenominator(f) from None
            for _ in range(e):
                out = out @ finv
        return out

    def __str__(self):
        if not self.den:
            return str(self.num)
        dens = " * ".join(
            "(%s)" % f if e == 1 else "(%s)^%d" % (f, e)
            for f, e in sorted(self.den.items(), key=lambda fe: fe[0].key())
        )
        return "(%s) / %s" % (self.num, dens)

    __repr__ = __str__


class LaurentV:
    """Laurent polynomial in v over Q."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        self.terms = {d: Q(c) for d, c in (terms or {}).items() if c != 0}

    @staticmethod
    def zero() -> "LaurentV":
        return LaurentV()

    @staticmethod
    def one() -> "LaurentV":
        return LaurentV({0: 1})

    @staticmethod
    def v_power(d: int, c=1) -> "LaurentV":
        return LaurentV({d: Q(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentV({0: other})
        return isinstance(other, LaurentV) and self.terms == other.terms

    def _coerce(self, other) -> "LaurentV":
        if isinstance(other, LaurentV):
            return other
        return LaurentV({0: Q(other)})

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms.get(d, Q(0)) + c
        return LaurentV(terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentV({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict[int, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                terms[d1 + d2] = terms.get(d1 + d2, Q(0)) + c1 * c2
        return LaurentV(terms)

    __rmul__ = __mul__

    def shift(self, d: int) -> "LaurentV":
        """Multiply by v^d (the class of a grading shift by d)."""
        return LaurentV({e + d: c for e, c in self.terms.items()})

    def bar(self) -> "LaurentV":
        """The bar involution v -> 1/v."""
        return LaurentV({-d: c for d, c in self.terms.items()})

    def exact_div(self, other: "LaurentV") -> "LaurentV | None":
        """self / other when the quotient is again a Laurent polynomial."""
        if other.is_zero():
            raise DivisionByZero("Laurent division by zero")
        if self.is_zero():
            return LaurentV.zero()
        r = dict(self.terms)
        dmax = max(other.terms)
        dc = other.terms[dmax]
        qd_floor = min(self.terms) - min(other.terms)
        q: dict[int, Fraction] = {}
        while r:
            rmax = max(r)
            qd, qc = rmax - dmax, r[rmax] / dc
            if qd < qd_floor:
                return None
            q[qd] = qc
            for d, c in other.terms.items():
                nd = d + qd
                nc = r.get(nd, Q(0)) - qc * c
                if nc:
                    r[nd] = nc
                elif nd in r:
                    del r[nd]
            if r and max(r) >= rmax:
                return None
        return LaurentV(q)

    def eval_at_one(self) -> Fraction:
        return sum(self.terms.values(), Q(0))

    def min_deg(self) -> int:
        return min(self.terms)

    def max_deg(self) -> int:
        return max(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms, reverse=True):
            c = self.terms[d]
            if d == 0:
                parts.append(rat_str(c))
            else:
                vp = "v" if d == 1 else "v^%d" % d
                if c == 1:
                    parts.append(vp)
                elif c == -1:
                    parts.append("-" + vp)
                else:
                    parts.append("%s*%s" % (rat_str(c), vp))
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    __repr__ = __str__


ONE_MINUS_V2 = LaurentV({0: 1, 2: -1})


def quantum_integer(n: int) -> LaurentV:
    """<n> = v^(n-1) + v^(n-3) + ... + v^(1-n)."""
    if n < 0:
        raise ValueError("quantum integer of a negative argument")
    return LaurentV({n + 1 - 2 * l: Q(1) for l in range(1, n + 1)})


def quantum_factorial(n: int) -> LaurentV:
    out = LaurentV.one()
    for l in range(1, n + 1):
        out = out * quantum_integer(l)
    return out


def quantum_binomial(m: int, n: int) -> LaurentV:
    """<m+n 'choose' n> = <m+n>! / (<m>! <n>!), exactly."""
    if m < 0 or n < 0:
        raise ValueError("quantum binomial of negative arguments")
    num = quantum_factorial(m + n)
    den = quantum_factorial(m) * quantum_factorial(n)
    q = num.exact_div(den)
    if q is None:
        raise InternalDivisionFailure("quantum binomial (%d, %d) did not divide" % (m, n))
    return q


def eval_nilpotent(expr: RatFun | Poly, mats: Sequence[Mat]) -> Mat:
    """Evaluate a rational expression in k(1..m) on commuting matrices.

    Inverses are taken exactly; a denominator factor that fails to be an
    invertible matrix raises SingularDenominator naming the factor.
    """
    if isinstance(expr, Poly):
        expr = RatFun(expr)
    if len(mats) != expr.nvars:
        raise ValueError("expected %d matrices, got %d" % (expr.nvars, len(mats)))
    for a, b in itertools.combinations(mats, 2):
        if not a.commutes_with(b):
            raise NonCommuting("input matrices do not commute")
    return expr.eval_mats(mats)
