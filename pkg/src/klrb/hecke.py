"""Affine Hecke algebras of types B and C: transport of graded modules.

The dictionary fixes, once and for all,

    f(k) = (1 + k/2) / (1 - k/2),      g(X) = 2 (X - 1) / (X + 1),

a rational series with f(k) f(-k) = 1 and f(k) = 1 + k modulo k^2.  The
balanced normalization is forced: the sign-flip generator conjugates
k -> -k, so a coefficient-times-pi operator can interchange X and X^(-1)
on neighbouring blocks only when f(-k) = f(k)^(-1); with the naive
choice 1 + k no operator of that shape satisfies the rank-0 quadratic
relation once k^2 acts nontrivially.  Every coefficient stays a rational
function of the nilpotent k-matrices whose denominator has an invertible
constant term, so everything evaluates exactly with no truncation.

On each block the operators take the shape

    X_l = i_l^(-1) f(k_l),      T = A(k) sigma + B(k),

with A and B depending on the local case (equal, linked by p^2, or
generic neighbours for T_k with k >= 1; the weight cases of the rank-0
generator for T_0).  A is invertible on the block, which is also how the
inverse transport recovers sigma and pi from a Hecke module after
splitting it into simultaneous generalized eigenspaces of the X_l.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .fmod import GradedModule, cached_algebra
from .ground import Poly, Q, RatFun, SingularDenominator, rat
from .linalg import Mat, SpanBasis
from .quiver import DimVector, QuiverWithInvolution
from .weyl import EPS


class DegenerateParameter(ValueError):
    pass


class ParameterMismatch(ValueError):
    pass


class EigenvalueOutsideWindow(ArithmeticError):
    pass


class NonSplitSpectrum(ArithmeticError):
    pass


class MissingVertexValue(ValueError):
    pass


class HeckeParams:
    """family 'B' carries (p, q); family 'C' carries (p, q0, q1)."""

    def __init__(self, family: str, p, q=None, q0=None, q1=None):
        self.family = family
        self.p = rat(p)
        if family == "B":
            self.q0 = self.q1 = rat(q)
        elif family == "C":
            self.q0, self.q1 = rat(q0), rat(q1)
        else:
            raise ValueError("family must be 'B' or 'C'")
        for name, val in (("p", self.p), ("q0", self.q0), ("q1", self.q1)):
            if val in (1, -1):
                raise DegenerateParameter("%s = %s is excluded" % (name, val))

    @property
    def q(self) -> Fraction:
        if self.q0 != self.q1:
            raise ParameterMismatch("q is only defined for family B")
        return self.q0

    def __repr__(self):
        if self.family == "B":
            return "HeckeParams(B, p=%s, q=%s)" % (self.p, self.q0)
        return "HeckeParams(C, p=%s, q0=%s, q1=%s)" % (self.p, self.q0, self.q1)


class HeckeModule:
    """Matrices X_1..X_m (invertible, commuting) and T_0..T_(m-1)."""

    def __init__(self, family: str, m: int, X: Sequence[Mat], T: Sequence[Mat]):
        self.family = family
        self.m = m
        self.X = list(X)
        self.T = list(T)
        self.dim = X[0].nrows if X else (T[0].nrows if T else 0)

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        return "HeckeModule(%s, m=%d, dim=%d)" % (self.family, self.m, self.dim)


def check_quiver_params(quiver: QuiverWithInvolution, params: HeckeParams):
    """The quiver must be the one attached to (values, p) with the weight
    of (6.2) resp. (A.2); transport tables silently depend on this."""
    if not quiver.has_values():
        raise MissingVertexValue("transport needs vertex values")
    p = params.p
    for a, b in itertools.product(quiver.vertices, repeat=2):
        expected = 1 if quiver.value(a) == p * p * quiver.value(b) else 0
        if quiver.arrows(a, b) != expected:
            raise ParameterMismatch(
                "arrow count h(%s,%s) does not match p = %s" % (a, b, p))
    for a in quiver.vertices:
        v = quiver.value(a)
        if params.family == "B":
            expected = 1 if v in (params.q, -params.q) else 0
        elif -params.q0 == params.q1:
            expected = 2 if v == params.q1 else 0
        else:
            expected = 1 if v in (-params.q0, params.q1) else 0
        if quiver.weight(a) != expected:
            raise ParameterMismatch(
                "weight at %s does not match the parameter datum" % a)


# -- coefficient tables ------------------------------------------------------


def _f(m: int, l: int) -> RatFun:
    """The balanced series f(k_l) = (1 + k_l/2) / (1 - k_l/2)."""
    half = Poly.kappa(l, m).scale(Fraction(1, 2))
    return RatFun.from_den_factors(Poly.one(m) + half, [Poly.one(m) - half])


def _Tk_coeffs(quiver, params: HeckeParams, m: int, seq_entry, k: int):
    """(A, B) with T_k = A sigma_k + B on the block; A evaluated on the
    target block, B on the source block."""
    p = params.p
    fk, fk1 = _f(m, k), _f(m, k + 1)
    kdiff = RatFun(Poly.kappa(k, m) - Poly.kappa(k + 1, m))
    ik = quiver.value(seq_entry(k))
    ik1 = quiver.value(seq_entry(k + 1))
    if ik1 == ik:
        A = (fk * p - fk1 * (1 / p)) * kdiff / (fk - fk1)
        B = RatFun(Poly.const(m, p))
    elif ik1 == p * p * ik:
        # divide factor by factor so the k-difference stays cancellable
        A = (fk - fk1) / (fk * (1 / p) - fk1 * p) / kdiff
        B = fk1 * (1 / p ** 2 - 1) / (fk * p - fk1 * (1 / p))
    else:
        A = (fk * (p * ik) - fk1 * (ik1 / p)) / (fk * ik - fk1 * ik1)
        B = fk1 * ((1 / p - p) * ik) / (fk * ik1 - fk1 * ik)
    return A, B


def _T0_coeffs_B(quiver, params: HeckeParams, m: int, i1_value: Fraction):
    q = params.q
    one = RatFun(Poly.one(m))
    k1 = RatFun(Poly.kappa(1, m))
    f2 = _f(m, 1) ** 2
    if i1_value in (q, -q):
        A = (f2 - one) / (one * (1 / q) - f2 * q) / k1
        B = f2 * (1 / q ** 2 - 1) / (one * q - f2 * (1 / q))
    else:
        i = i1_value
        A = (one * q - f2 * (i * i / q)) / (one - f2 * (i * i))
        B = (one * (q - 1 / q)) / (one - f2.inverse() * (i * i))
    return A, B


def _T0_coeffs_C(quiver, params: HeckeParams, m: int, i1_value: Fraction):
    q0, q1 = params.q0, params.q1
    one = RatFun(Poly.one(m))
    k1 = RatFun(Poly.kappa(1, m))
    f1 = _f(m, 1)
    f2 = f1 * f1
    i = i1_value
    if i == -q0 and i == q1:
        A = (f1 - one) ** 2 / (f2 * q1 - one * (1 / q1)) / k1 / k1
        B = (f2 * (1 / (q0 * q1) - 1) + f1 * 2) / (f2 * (1 / q1) - one * q1)
    elif i == q1:
        A = (f1 * q1 + one * q0) * (f1 - one) / (one - f2 * (q1 * q1)) / k1
        B = (f2 * (q0 - 1 / q1) + f1 * (q1 - q0)) / (f2 - one * (q1 * q1))
    elif i == -q0:
        A = (f1 * q0 + one * q1) * (one - f1) / (f2 * q0 - one * (1 / q0)) / k1 * (1 / q1)
        B = (f2 * (q1 - 1 / q0) - f1 * (q1 - q0)) / ((f2 * (1 / q0) - one * q0) * q1)
    else:
        A = (f1 * i + one * q0) * (f1 * i - one * q1) / ((f2 * (i * i) - one) * q1)
        B = (f2 * (q0 * q1 - 1) + f1 * ((q1 - q0) * i)) / ((f2 - one * (i * i)) * q1)
    return A, B


# -- transport ----------------------------------------------------------------


class _Layout:
    """Fixed enumeration of a module's total basis, block by block."""

    def __init__(self, M: GradedModule):
        self.seqs = M.block_seqs()
        self.offs = {}
        off = 0
        for s in self.seqs:
            self.offs[s] = off
            off += M.block_dim(s)
        self.total = off

    def place(self, big: list[list], tgt: tuple, src: tuple, mat: Mat):
        ro, co = self.offs[tgt], self.offs[src]
        for r in range(mat.nrows):
            for c in range(mat.ncols):
                if mat[r, c]:
                    big[ro + r][co + c] += mat[r, c]


def transport(M: GradedModule, params: HeckeParams) -> HeckeModule:
    """The exact dictionary from a graded module with nilpotent k-action
    to a Hecke module of the matching family."""
    quiver = M.quiver
    check_quiver_params(quiver, params)
    m = M.m
    if M.is_zero():
        return HeckeModule(params.family, m,
                           [Mat.zeros(0, 0)] * m, [Mat.zeros(0, 0)] * max(m, 0))
    alg = M.algebra()
    lay = _Layout(M)
    X = []
    for l in range(1, m + 1):
        big = [[Q(0)] * lay.total for _ in range(lay.total)]
        for seq in lay.seqs:
            il = quiver.value(alg.entry(seq, l))
            mat = _f(m, l).eval_mats(M.kappa_mats(seq)).scale(1 / il)
            lay.place(big, seq, seq, mat)
        X.append(Mat(big))
    T = []
    if m >= 1:
        big = [[Q(0)] * lay.total for _ in range(lay.total)]
        for seq in lay.seqs:
            val1 = quiver.value(alg.entry(seq, 1))
            if params.family == "B":
                A, B = _T0_coeffs_B(quiver, params, m, val1)
            else:
                A, B = _T0_coeffs_C(quiver, params, m, val1)
            tgt = alg.act(alg.gen_perm(EPS), seq)
            pimat = M.gen_matrix("pi", 0, seq)
            if M.block_dim(tgt):
                lay.place(big, tgt, seq, A.eval_mats(M.kappa_mats(tgt)) @ pimat)
            lay.place(big, seq, seq, B.eval_mats(M.kappa_mats(seq)))
        T.append(Mat(big))
    for k in range(1, m):
        big = [[Q(0)] * lay.total for _ in range(lay.total)]
        for seq in lay.seqs:
            A, B = _Tk_coeffs(quiver, params, m,
                              lambda l, s=seq: alg.entry(s, l), k)
            tgt = alg.act(alg.gen_perm(k), seq)
            smat = M.gen_matrix("sigma", k, seq)
            if M.block_dim(tgt):
                lay.place(big, tgt, seq, A.eval_mats(M.kappa_mats(tgt)) @ smat)
            lay.place(big, seq, seq, B.eval_mats(M.kappa_mats(seq)))
        T.append(Mat(big))
    return HeckeModule(params.family, m, X, T)


def transport_B(M: GradedModule, params: HeckeParams) -> HeckeModule:
    if params.family != "B":
        raise ParameterMismatch("transport_B needs family-B parameters")
    return transport(M, params)


def transport_C(M: GradedModule, params: HeckeParams) -> HeckeModule:
    if params.family != "C":
        raise ParameterMismatch("transport_C needs family-C parameters")
    return transport(M, params)


# -- relation verification -------------------------------------------------------


class HeckeReport:
    def __init__(self):
        self.entries: list[tuple[str, bool]] = []

    def record(self, tag: str, ok: bool):
        self.entries.append((tag, ok))

    @property
    def failures(self):
        return [t for t, ok in self.entries if not ok]

    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = ["hecke relations checked: %d, failed: %d"
                 % (len(self.entries), len(self.failures))]
        lines.extend("FAIL %s" % t for t in self.failures)
        return "\n".join(lines)


def verify_hecke(H: HeckeModule, params: HeckeParams) -> HeckeReport:
    rep = HeckeReport()
    if H.is_zero() or H.m == 0:
        return rep
    n = H.dim
    I = Mat.identity(n)
    p = params.p
    Xinv = []
    for l, X in enumerate(H.X, start=1):
        try:
            Xinv.append(X.inverse())
            rep.record("(a) X%d invertible" % l, True)
        except ValueError:
            rep.record("(a) X%d invertible" % l, False)
            return rep
    for l in range(H.m):
        for lp in range(l + 1, H.m):
            rep.record("(a) X%dX%d commute" % (l + 1, lp + 1),
                       H.X[l] @ H.X[lp] == H.X[lp] @ H.X[l])
    if H.m >= 2:
        a = H.T[0] @ H.T[1]
        b = H.T[1] @ H.T[0]
        rep.record("(b) (T0T1)^2=(T1T0)^2", a @ a == b @ b)
    for k in range(2, H.m):
        rep.record("(b) braid T%dT%dT%d" % (k, k - 1, k),
                   H.T[k] @ H.T[k - 1] @ H.T[k]
                   == H.T[k - 1] @ H.T[k] @ H.T[k - 1])
    for k in range(H.m):
        for kp in range(k + 2, H.m):
            rep.record("(b) T%dT%d commute" % (k, kp),
                       H.T[k] @ H.T[kp] == H.T[kp] @ H.T[k])
    if params.family == "B":
        rep.record("(c) T0 X1^-1 T0 = X1",
                   H.T[0] @ Xinv[0] @ H.T[0] == H.X[0])
    else:
        q0, q1 = params.q0, params.q1
        lhs = H.T[0] @ Xinv[0] - H.X[0] @ H.T[0]
        rhs = H.X[0].scale(1 / q1 - q0) + I.scale(q0 / q1 - 1)
        rep.record("(c) T0 X1^-1 - X1 T0", lhs == rhs)
    for k in range(1, H.m):
        rep.record("(c) T%dX%dT%d = X%d" % (k, k, k, k + 1),
                   H.T[k] @ H.X[k - 1] @ H.T[k] == H.X[k])
    for k in range(H.m):
        for l in range(1, H.m + 1):
            if l in (k, k + 1):
                continue
            rep.record("(c) T%dX%d commute" % (k, l),
                       H.T[k] @ H.X[l - 1] == H.X[l - 1] @ H.T[k])
    for k in range(1, H.m):
        rep.record("(d) quadratic T%d" % k,
                   (H.T[k] - I.scale(p)) @ (H.T[k] + I.scale(1 / p))
                   == Mat.zeros(n, n))
    rep.record("(d) quadratic T0",
               (H.T[0] - I.scale(params.q0)) @ (H.T[0] + I.scale(1 / params.q1))
               == Mat.zeros(n, n))
    return rep


# -- inverse transport -------------------------------------------------------------


def _generalized_eigenbasis(H: HeckeModule, quiver: QuiverWithInvolution):
    """Simultaneous generalized eigenspaces of the X_l, labelled by right
    halves over the window; errors if the spectrum escapes the window."""
    n = H.dim
    per_l = []
    for l in range(H.m):
        spaces = {}
        covered = 0
        for a in quiver.vertices:
            x = quiver.value(a)
            mat = (H.X[l].scale(x) - Mat.identity(n)) ** n
            ker = mat.nullspace()
            if ker:
                spaces[a] = ker
                covered += len(ker)
        if covered < n:
            raise EigenvalueOutsideWindow(
                "X_%d has spectrum outside the window" % (l + 1))
        if covered > n:
            raise NonSplitSpectrum("X_%d eigenspaces overlap" % (l + 1))
        per_l.append(spaces)
    blocks: dict[tuple, list] = {}
    for right in itertools.product(quiver.vertices, repeat=H.m):
        basis = per_l[0].get(right[0])
        if basis is None:
            continue
        current = [list(v) for v in basis]
        ok = True
        for l in range(1, H.m):
            other = per_l[l].get(right[l])
            if other is None:
                ok = False
                break
            current = _intersect(current, [list(v) for v in other], n)
            if not current:
                ok = False
                break
        if ok and current:
            blocks[right] = current
    if sum(len(v) for v in blocks.values()) != n:
        raise NonSplitSpectrum("simultaneous eigenspaces do not fill the module")
    return blocks


def _intersect(A: list, B: list, n: int) -> list:
    """Intersection of two spans of column vectors in Q^n."""
    if not A or not B:
        return []
    cols = [list(v) for v in A] + [[-x for x in v] for v in B]
    stacked = Mat(list(map(list, zip(*cols))), ncols=len(cols))
    sb = SpanBasis()
    for sol in stacked.nullspace():
        vec = [sum(sol[j] * A[j][r] for j in range(len(A))) for r in range(n)]
        if any(vec):
            sb.add(vec)
    return [list(v) for v in sb.vectors()]


def _coords(basis: list, vec: list) -> list | None:
    mat = Mat(list(map(list, zip(*basis))), ncols=len(basis))
    return mat.solve(vec)


def inverse_transport(H: HeckeModule, params: HeckeParams,
                      quiver: QuiverWithInvolution) -> GradedModule:
    """Reconstruct the graded module: blocks from the X-spectrum, k from
    g(i X) = i X - 1, and sigma / pi by inverting the on-block dictionary
    T = A sigma + B (A is invertible on every block)."""
    check_quiver_params(quiver, params)
    m = H.m
    blocks = _generalized_eigenbasis(H, quiver)
    counts: dict[str, int] = {}
    first = None
    for right in blocks:
        c: dict[str, int] = {}
        for a in right:
            c[a] = c.get(a, 0) + 1
            c[quiver.theta(a)] = c.get(quiver.theta(a), 0) + 1
        if first is None:
            first = c
        elif c != first:
            raise NonSplitSpectrum("blocks carry different dimension vectors")
    nu = DimVector(first or {})
    alg = cached_algebra(quiver, nu, "B")
    n = H.dim

    kappa: dict[int, dict[tuple, Mat]] = {l: {} for l in range(1, m + 1)}
    kmats: dict[tuple, list[Mat]] = {}
    for seq, basis in blocks.items():
        nb = len(basis)
        mats = []
        for l in range(1, m + 1):
            il = quiver.value(alg.entry(seq, l))
            y = H.X[l - 1].scale(il)
            # k_l = g(i_l X_l) = 2 (i_l X_l - 1)(i_l X_l + 1)^(-1)
            op = (y - Mat.identity(n)).scale(2) @ (y + Mat.identity(n)).inverse()
            cols = []
            for v in basis:
                img = [sum(op[r, c] * v[c] for c in range(n)) for r in range(n)]
                coords = _coords(basis, img)
                if coords is None:
                    raise NonSplitSpectrum("k-action does not preserve a block")
                cols.append(coords)
            mats.append(Mat(list(map(list, zip(*cols))), ncols=nb))
            kappa[l][seq] = mats[-1]
        kmats[seq] = mats

    def solve_generator(Tmat: Mat, coeffs_for):
        table: dict[tuple, Mat] = {}
        for seq, basis in blocks.items():
            A, B, tgt = coeffs_for(seq)
            tbasis = blocks.get(tgt)
            Bm = B.eval_mats(kmats[seq])
            smat_cols = []
            for ci, v in enumerate(basis):
                img = [sum(Tmat[r, c] * v[c] for c in range(n)) for r in range(n)]
                # subtract the diagonal part: B acts block-locally
                for j in range(len(basis)):
                    bc = Bm[j, ci]
                    if bc:
                        for r in range(n):
                            img[r] -= bc * basis[j][r]
                if tbasis is None:
                    if any(img):
                        raise NonSplitSpectrum("generator leaves the block lattice")
                    smat_cols.append([])
                    continue
                coords = _coords(tbasis, img)
                if coords is None:
                    raise NonSplitSpectrum("generator leaves the block lattice")
                smat_cols.append(coords)
            if tbasis is not None:
                Am = A.eval_mats(kmats[tgt])
                raw = Mat(list(map(list, zip(*smat_cols))), ncols=len(basis))
                table[seq] = Am.inverse() @ raw
            else:
                table[seq] = Mat.zeros(0, len(basis))
        return table

    sigma: dict[int, dict[tuple, Mat]] = {}
    for k in range(1, m):
        def coeffs_k(seq, k=k):
            A, B = _Tk_coeffs(quiver, params, m,
                              lambda l, s=seq: alg.entry(s, l), k)
            return A, B, alg.act(alg.gen_perm(k), seq)
        sigma[k] = solve_generator(H.T[k], coeffs_k)
    pi: dict[tuple, Mat] = {}
    if m >= 1:
        def coeffs_0(seq):
            val1 = quiver.value(alg.entry(seq, 1))
            if params.family == "B":
                A, B = _T0_coeffs_B(quiver, params, m, val1)
            else:
                A, B = _T0_coeffs_C(quiver, params, m, val1)
            return A, B, alg.act(alg.gen_perm(EPS), seq)
        pi = solve_generator(H.T[0], coeffs_0)

    grading = {seq: [0] * len(basis) for seq, basis in blocks.items()}
    return GradedModule(quiver, nu, grading, kappa, sigma, pi, graded=False)


def eigen_dimensions(H: HeckeModule, quiver: QuiverWithInvolution) -> dict[str, int]:
    """Dimension of the generalized (value of i)^(-1)-eigenspace of X_m per
    vertex, the Hecke side of the restriction-functor comparison."""
    out = {}
    if H.m == 0 or H.is_zero():
        return {a: 0 for a in quiver.vertices}
    n = H.dim
    for a in quiver.vertices:
        x = quiver.value(a)
        mat = (H.X[H.m - 1].scale(x) - Mat.identity(n)) ** n
        out[a] = len(mat.nullspace())
    return out


def check_Ei_compat(M: GradedModule, params: HeckeParams) -> HeckeReport:
    """Blocks ending in i on the graded side match the generalized
    eigenspaces of X_m on the Hecke side, vertex by vertex."""
    rep = HeckeReport()
    H = transport(M, params)
    eig = eigen_dimensions(H, M.quiver)
    for a in M.quiver.vertices:
        klr_dim = sum(len(degs) for seq, degs in M.blocks.items() if seq[-1:] == (a,))
        rep.record("E_%s dimensions %d = %d" % (a, klr_dim, eig[a]),
                   klr_dim == eig[a])
    return rep


def intertwiner(H: HeckeModule, params: HeckeParams, k: int) -> Mat:
    """The intertwining operator phi_k; localization can legitimately fail
    on a module, reported as SingularDenominator."""
    n = H.dim
    I = Mat.identity(n)
    p = params.p
    if k != 0:
        num = H.X[k - 1] - H.X[k]
        den = H.X[k - 1].scale(p) - H.X[k].scale(1 / p)
        tk = H.T[k] - I.scale(p)
    elif params.family == "B":
        xinv2 = (H.X[0] @ H.X[0]).inverse()
        num = xinv2 - I
        den = xinv2.scale(params.q) - I.scale(1 / params.q)
        tk = H.T[0] - I.scale(params.q)
    else:
        x2 = H.X[0] @ H.X[0]
        num = (x2 - I).scale(params.q1)
        den = (H.X[0] + I.scale(params.q0)) @ (H.X[0] - I.scale(params.q1))
        tk = H.T[0] - I.scale(params.q0)
    try:
        deninv = den.inverse()
    except ValueError:
        raise SingularDenominator("intertwiner denominator at k=%d" % k) from None
    return I + deninv @ num @ tk


# -- hecke module files --------------------------------------------------------


class HeckeFileError(ValueError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__("line %d: %s" % (line, msg))


def hecke_to_text(H: HeckeModule) -> str:
    lines = ["[hecke-module]",
             "family = %s" % H.family,
             "rank = %d" % H.m,
             "dim = %d" % H.dim]
    for l, X in enumerate(H.X, start=1):
        lines.append("[X %d]" % l)
        for r in range(X.nrows):
            for c in range(X.ncols):
                if X[r, c]:
                    lines.append("%d %d %s" % (r, c, X[r, c]))
    for k, T in enumerate(H.T):
        lines.append("[T %d]" % k)
        for r in range(T.nrows):
            for c in range(T.ncols):
                if T[r, c]:
                    lines.append("%d %d %s" % (r, c, T[r, c]))
    return "\n".join(lines) + "\n"


def hecke_from_text(text: str) -> HeckeModule:
    family, m, dim = "B", None, None
    cur = None
    data: dict[tuple, dict] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            head = line[1:-1].strip()
            if head == "hecke-module":
                cur = ("meta",)
            else:
                parts = head.split()
                if len(parts) != 2 or parts[0] not in ("X", "T"):
                    raise HeckeFileError(ln, "unknown section [%s]" % head)
                cur = (parts[0], int(parts[1]))
                data.setdefault(cur, {})
            continue
        if cur is None:
            raise HeckeFileError(ln, "content before any section")
        if cur == ("meta",):
            key, eq, val = line.partition("=")
            if not eq:
                raise HeckeFileError(ln, "expected key = value")
            key = key.strip().lower()
            if key == "family":
                family = val.strip().upper()
            elif key == "rank":
                m = int(val.strip())
            elif key == "dim":
                dim = int(val.strip())
            else:
                raise HeckeFileError(ln, "unknown key %r" % key)
        else:
            parts = line.split()
            if len(parts) != 3:
                raise HeckeFileError(ln, "expected 'row col value'")
            try:
                data[cur][(int(parts[0]), int(parts[1]))] = Q(parts[2])
            except (ValueError, ZeroDivisionError):
                raise HeckeFileError(ln, "bad matrix triple") from None
    if m is None or dim is None:
        raise HeckeFileError(1, "missing rank or dim")

    def build(key):
        entries = data.get(key, {})
        rows = [[Q(0)] * dim for _ in range(dim)]
        for (r, c), v in entries.items():
            if r >= dim or c >= dim:
                raise HeckeFileError(1, "entry out of range in %s" % (key,))
            rows[r][c] = v
        return Mat(rows, ncols=dim)

    X = [build(("X", l)) for l in range(1, m + 1)]
    T = [build(("T", k)) for k in range(m)]
    return HeckeModule(family, m, X, T)
