"""Quivers with involution, weights, dimension vectors and sequences.

Vertices are opaque string ids, optionally carrying a nonzero rational
value (they always do for quivers built from affine Hecke parameter
data, where the id is the canonical rendering of the value).  A quiver
with involution must have no 1-loops, a fixed-point-free involution
theta, and arrow multiplicities satisfying h(i, j) = h(theta(j), theta(i)).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ground import Poly, Q, rat
from .weyl import SignedPerm


class QuiverError(ValueError):
    pass


class ForbiddenVertex(QuiverError):
    pass


class NotThetaStable(QuiverError):
    pass


class DegenerateParameter(QuiverError):
    pass


class ThetaFixedPoint(QuiverError):
    pass


class OneLoop(QuiverError):
    pass


class ArrowAsymmetry(QuiverError):
    pass


class NotThetaSymmetric(QuiverError):
    pass


class ValueMissing(QuiverError):
    pass


class QuiverConfigError(ValueError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__("line %d: %s" % (line, msg))


def _vid(x: Fraction) -> str:
    return str(x)


class QuiverWithInvolution:
    def __init__(self, vertices: Sequence[str], h: Mapping[tuple, int],
                 theta: Mapping[str, str], lam: Mapping[str, int],
                 values: Mapping[str, Fraction] | None = None):
        self.vertices = tuple(sorted(vertices))
        self.h = {k: int(v) for k, v in h.items() if v}
        self.theta_map = dict(theta)
        self.lam = {i: int(lam.get(i, 0)) for i in self.vertices}
        self.values = dict(values or {})
        self._validate()

    def _validate(self):
        errors = []
        vs = set(self.vertices)
        for (a, b), n in self.h.items():
            if a not in vs or b not in vs:
                errors.append(QuiverError("arrow endpoint not a vertex: %s -> %s" % (a, b)))
            if a == b:
                errors.append(OneLoop("1-loop at vertex %s" % a))
            if n < 0:
                errors.append(QuiverError("negative multiplicity on %s -> %s" % (a, b)))
        for i in self.vertices:
            if i not in self.theta_map:
                errors.append(QuiverError("theta undefined on %s" % i))
            elif self.theta_map[i] not in vs:
                errors.append(QuiverError("theta(%s) is not a vertex" % i))
            elif self.theta_map[self.theta_map[i]] != i:
                errors.append(QuiverError("theta is not an involution at %s" % i))
            elif self.theta_map[i] == i:
                errors.append(ThetaFixedPoint("theta fixes vertex %s" % i))
        if not errors:
            for a, b in itertools.product(self.vertices, repeat=2):
                if self.arrows(a, b) != self.arrows(self.theta(b), self.theta(a)):
                    errors.append(ArrowAsymmetry(
                        "h(%s,%s) != h(theta(%s),theta(%s))" % (a, b, b, a)))
        for i, l in self.lam.items():
            if l < 0:
                errors.append(QuiverError("negative weight at %s" % i))
        if errors:
            if len(errors) > 1:
                errors[0].args = ("; ".join(str(e) for e in errors),)
            raise errors[0]

    # -- basic accessors ---------------------------------------------------

    def theta(self, i: str) -> str:
        return self.theta_map[i]

    def arrows(self, i: str, j: str) -> int:
        return self.h.get((i, j), 0)

    def cartan(self, i: str, j: str) -> int:
        if i == j:
            return 2
        return -self.arrows(i, j) - self.arrows(j, i)

    def weight(self, i: str) -> int:
        return self.lam[i]

    def value(self, i: str) -> Fraction:
        if i not in self.values:
            raise ValueMissing("vertex %s carries no rational value" % i)
        return self.values[i]

    def has_values(self) -> bool:
        return all(i in self.values for i in self.vertices)

    def Q_poly(self, i: str, j: str) -> Poly:
        """Q_(i,j)(u, v) as a polynomial in two variables u = k1, v = k2."""
        if i == j:
            return Poly.zero(2)
        u = Poly.kappa(1, 2)
        v = Poly.kappa(2, 2)
        out = (u - v) ** (-self.cartan(i, j))
        if self.arrows(i, j) % 2:
            out = -out
        return out

    def __repr__(self):
        return "QuiverWithInvolution(%d vertices)" % len(self.vertices)


def build_from_hecke_B(values: Iterable, p, q) -> QuiverWithInvolution:
    """Quiver of a type-B parameter datum: arrows p^2 i -> i, theta(i) = 1/i,
    weight 1 exactly on the vertices q and -q."""
    vals = sorted({rat(x) for x in values})
    p, q = rat(p), rat(q)
    return _build_window(vals, p, lam_vertices={q, -q}, double=False)


def build_from_hecke_C(values: Iterable, p, q0, q1) -> QuiverWithInvolution:
    """Type-C variant: the weight is supported on -q0 and q1, doubled when
    -q0 = q1."""
    vals = sorted({rat(x) for x in values})
    p, q0, q1 = rat(p), rat(q0), rat(q1)
    if q0 in (1, -1) or q1 in (1, -1):
        raise DegenerateParameter("q0, q1 must differ from 1 and -1")
    if -q0 == q1:
        return _build_window(vals, p, lam_vertices={q1}, double=True)
    return _build_window(vals, p, lam_vertices={-q0, q1}, double=False)


def _build_window(vals: list[Fraction], p: Fraction, lam_vertices: set,
                  double: bool) -> QuiverWithInvolution:
    if p in (1, -1):
        raise DegenerateParameter("p must differ from 1 and -1")
    if any(x in (1, -1) for x in vals):
        raise ForbiddenVertex("the values 1 and -1 are not allowed as vertices")
    if any(x == 0 for x in vals):
        raise ForbiddenVertex("0 is not allowed as a vertex")
    vset = set(vals)
    for x in vals:
        if 1 / x not in vset:
            raise NotThetaStable("value set is not closed under inversion: %s" % x)
    ids = [_vid(x) for x in vals]
    values = {_vid(x): x for x in vals}
    h = {}
    for a, b in itertools.product(vals, repeat=2):
        if a == p * p * b:
            h[(_vid(a), _vid(b))] = 1
    theta = {_vid(x): _vid(1 / x) for x in vals}
    mult = 2 if double else 1
    lam = {_vid(x): (mult if x in lam_vertices else 0) for x in vals}
    return QuiverWithInvolution(ids, h, theta, lam, values)


def build_abstract(vertices: Sequence[str], h: Mapping[tuple, int],
                   theta: Mapping[str, str], lam: Mapping[str, int],
                   values: Mapping[str, Fraction] | None = None) -> QuiverWithInvolution:
    return QuiverWithInvolution(vertices, h, theta, lam, values)


# -- dimension vectors and sequences --------------------------------------


class DimVector:
    """Map vertex -> nonnegative integer, sparse."""

    __slots__ = ("counts",)

    def __init__(self, counts: Mapping[str, int]):
        self.counts = {i: int(n) for i, n in counts.items() if n}
        if any(n < 0 for n in self.counts.values()):
            raise QuiverError("negative dimension vector entry")

    def total(self) -> int:
        return sum(self.counts.values())

    def get(self, i: str) -> int:
        return self.counts.get(i, 0)

    def is_theta_symmetric(self, quiver: QuiverWithInvolution) -> bool:
        return all(self.get(quiver.theta(i)) == n for i, n in self.counts.items())

    def key(self):
        return tuple(sorted(self.counts.items()))

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, DimVector) and self.counts == other.counts

    def dot(self, other: "DimVector", quiver: QuiverWithInvolution) -> int:
        """Bilinear form induced by the Cartan pairing of vertices."""
        return sum(n * m * quiver.cartan(i, j)
                   for i, n in self.counts.items()
                   for j, m in other.counts.items())

    def __str__(self):
        if not self.counts:
            return "0"
        return ",".join("%s:%d" % (i, n) for i, n in sorted(self.counts.items()))

    @staticmethod
    def parse(s: str) -> "DimVector":
        counts: dict[str, int] = {}
        if s.strip():
            for part in s.split(","):
                i, _, n = part.partition(":")
                counts[i.strip()] = counts.get(i.strip(), 0) + (int(n) if n else 1)
        return DimVector(counts)


class ThetaSequence:
    """Sequence (i_(1-m), ..., i_m) with i_(1-l) = theta(i_l); stores the right half."""

    __slots__ = ("right", "quiver")

    def __init__(self, right: Sequence[str], quiver: QuiverWithInvolution):
        self.right = tuple(right)
        self.quiver = quiver

    @property
    def rank(self) -> int:
        return len(self.right)

    def full(self) -> tuple:
        th = self.quiver.theta
        return tuple(th(i) for i in reversed(self.right)) + self.right

    def entry(self, l: int) -> str:
        """i_l for l in {1-m, ..., m}."""
        if 1 <= l <= self.rank:
            return self.right[l - 1]
        if 1 - self.rank <= l <= 0:
            return self.quiver.theta(self.right[-l])
        raise IndexError("sequence index %d out of range" % l)

    def content(self) -> DimVector:
        counts: dict[str, int] = {}
        for i in self.full():
            counts[i] = counts.get(i, 0) + 1
        return DimVector(counts)

    def act(self, w: SignedPerm) -> "ThetaSequence":
        full = w.act_full(self.full())
        return ThetaSequence(full[self.rank:], self.quiver)

    def key(self):
        return self.right

    def __hash__(self):
        return hash(self.right)

    def __eq__(self, other):
        return isinstance(other, ThetaSequence) and self.right == other.right

    def __str__(self):
        return ",".join(self.full())

    __repr__ = __str__


def act_sequence(w: SignedPerm, seq: ThetaSequence) -> ThetaSequence:
    """w(i) = i o w^(-1); the result satisfies the theta symmetry again."""
    return seq.act(w)


def sequences(quiver: QuiverWithInvolution, nu: DimVector) -> list[ThetaSequence]:
    """All of the theta-sequences with content nu, deterministically ordered."""
    if not nu.is_theta_symmetric(quiver):
        raise NotThetaSymmetric("dimension vector is not theta-symmetric: %s" % nu)
    if nu.total() % 2:
        raise NotThetaSymmetric("theta-symmetric dimension vector must have even size")
    if nu.total() > 12:
        raise QuiverError("|nu| = %d exceeds the resource guard (12)" % nu.total())
    m = nu.total() // 2
    out = []
    for right in itertools.product(quiver.vertices, repeat=m):
        seq = ThetaSequence(right, quiver)
        if seq.content() == nu:
            out.append(seq)
    return out


def plain_sequences(quiver: QuiverWithInvolution, nu: DimVector) -> list[tuple]:
    """All plain sequences with content nu (the type-A side)."""
    if nu.total() > 12:
        raise QuiverError("|nu| = %d exceeds the resource guard (12)" % nu.total())
    out = []
    for tup in itertools.product(quiver.vertices, repeat=nu.total()):
        counts: dict[str, int] = {}
        for i in tup:
            counts[i] = counts.get(i, 0) + 1
        if DimVector(counts) == nu:
            out.append(tup)
    return out


def theta_dimvectors(quiver: QuiverWithInvolution, m: int) -> list[DimVector]:
    """All theta-symmetric nu with |nu| = 2m, deterministically ordered."""
    out = []
    for right in itertools.combinations_with_replacement(quiver.vertices, m):
        counts: dict[str, int] = {}
        for i in right:
            counts[i] = counts.get(i, 0) + 1
            counts[quiver.theta(i)] = counts.get(quiver.theta(i), 0) + 1
        dv = DimVector(counts)
        if dv not in out:
            out.append(dv)
    return sorted(out, key=lambda d: d.key())


# -- configuration files ---------------------------------------------------


def parse_quiver_config(text: str) -> QuiverWithInvolution:
    """Parse the quiver config format.

    Sections: [hecke] with keys family/values/p/q (or q0, q1), or the
    explicit sections [vertices], [arrows] ("a -> b : n"), [theta]
    ("a <-> b"), [lambda] ("a = n").  Errors carry 1-based line numbers.
    """
    section = None
    hecke: dict[str, str] = {}
    vertices: list[str] = []
    h: dict[tuple, int] = {}
    theta: dict[str, str] = {}
    lam: dict[str, int] = {}
    values: dict[str, Fraction] = {}
    saw_explicit = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("hecke", "vertices", "arrows", "theta", "lambda"):
                raise QuiverConfigError(ln, "unknown section [%s]" % section)
            if section != "hecke":
                saw_explicit = True
            continue
        if section is None:
            raise QuiverConfigError(ln, "content before any section header")
        if section == "hecke":
            key, eq, val = line.partition("=")
            if not eq:
                raise QuiverConfigError(ln, "expected key = value")
            hecke[key.strip().lower()] = val.strip()
        elif section == "vertices":
            parts = [p.strip() for p in line.split("=")]
            vid = parts[0]
            vertices.append(vid)
            if len(parts) == 2:
                try:
                    values[vid] = rat(parts[1])
                except (ValueError, ZeroDivisionError):
                    raise QuiverConfigError(ln, "bad vertex value %r" % parts[1]) from None
        elif section == "arrows":
            head, _, mult = line.partition(":")
            a, arrow, b = head.partition("->")
            if not arrow:
                raise QuiverConfigError(ln, "expected 'a -> b [: n]'")
            try:
                n = int(mult.strip()) if mult.strip() else 1
            except ValueError:
                raise QuiverConfigError(ln, "bad multiplicity %r" % mult.strip()) from None
            h[(a.strip(), b.strip())] = h.get((a.strip(), b.strip()), 0) + n
        elif section == "theta":
            a, arrow, b = line.partition("<->")
            if not arrow:
                raise QuiverConfigError(ln, "expected 'a <-> b'")
            theta[a.strip()] = b.strip()
            theta[b.strip()] = a.strip()
        elif section == "lambda":
            a, eq, n = line.partition("=")
            if not eq:
                raise QuiverConfigError(ln, "expected 'vertex = weight'")
            try:
                lam[a.strip()] = int(n.strip())
            except ValueError:
                raise QuiverConfigError(ln, "bad weight %r" % n.strip()) from None
    if hecke and saw_explicit:
        raise QuiverConfigError(1, "[hecke] cannot be combined with explicit sections")
    if hecke:
        try:
            return build_from_hecke_params(hecke)
        except (QuiverError, ValueError, ZeroDivisionError) as e:
            raise QuiverConfigError(1, str(e)) from None
    if not vertices:
        raise QuiverConfigError(1, "no vertices defined")
    try:
        return build_abstract(vertices, h, theta, lam, values)
    except QuiverError as e:
        raise QuiverConfigError(1, str(e)) from None


def build_from_hecke_params(params: Mapping[str, str]) -> QuiverWithInvolution:
    family = params.get("family", "B").upper()
    try:
        vals = [rat(x) for x in params["values"].split(",")]
        p = rat(params["p"])
        if family == "B":
            return build_from_hecke_B(vals, p, rat(params["q"]))
        if family == "C":
            return build_from_hecke_C(vals, p, rat(params["q0"]), rat(params["q1"]))
    except KeyError as e:
        raise QuiverError("missing hecke parameter %s" % e) from None
    raise QuiverError("unknown hecke family %r" % family)
