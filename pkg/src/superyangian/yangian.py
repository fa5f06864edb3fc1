"""The super Yangian Y(gl_{M|N}): generator matrix, morphisms, central series
z(u) and the quantum Berezinian."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Any, Callable, Iterable, Sequence

from . import perm
from .ncalg import (CENTRAL, YANG, YANG2, NCPoly, RewriteRules, apply_morphism, decode, family, level,
                    recopy, sym_parity, t_sym)
from .series import (EXACT, BiLaurent, SeriesMatrix, TruncSeries, expand_rational, generic_matrix)
from .tensor import (SuperContext, SuperTensor, a_operator, frak_i, mul, numeric_inverse, super_permutation)

MAX_DIM = 5
MAX_ORDER = 6

HOM_KINDS = ("mu_f", "shift_lambda", "conj_B", "rho", "psi")
ANTI_KINDS = ("theta", "tau", "antipode")

_rules_cache: dict[tuple[int, int], RewriteRules] = {}


def rules_for(ctx: SuperContext) -> RewriteRules:
    """Shared rule set per shape; rules and normal forms are memoized inside."""
    key = (ctx.M, ctx.N)
    hit = _rules_cache.get(key)
    if hit is None:
        hit = _rules_cache.setdefault(key, RewriteRules(ctx))
    return hit


def check_bounds(M: int, N: int, D: int) -> None:
    if M < 0 or N < 0 or M + N < 2:
        raise ValueError("need M, N >= 0 and M + N >= 2")
    if M + N > MAX_DIM or not 1 <= D <= MAX_ORDER:
        raise ValueError(f"shape ({M}|{N}) with D={D} outside M+N <= {MAX_DIM}, 1 <= D <= {MAX_ORDER}")


def counit(p: Any) -> Any:
    """Evaluate t_ij^(r) -> 0 (central symbols are kept)."""
    if not isinstance(p, NCPoly):
        return p
    return NCPoly({w: c for w, c in p.terms.items() if all(family(s) == CENTRAL for s in w)})


def series_counit(s: TruncSeries) -> TruncSeries:
    return s.map(counit)


class Yangian:
    """Y(gl_{M|N}) truncated at order D: T(u) = 1 + sum_{r<=D} t^(r) u^{-r}."""

    def __init__(self, M: int, N: int, D: int, *, check: bool = True):
        if check:
            check_bounds(M, N, D)
        self.ctx = SuperContext(M, N)
        self.M, self.N, self.D = M, N, D
        self.rules = rules_for(self.ctx)
        self.T = generic_matrix(self.ctx, D, t_sym)

    @property
    def n(self) -> int:
        return self.M + self.N

    def generators(self, max_level: int | None = None) -> list[int]:
        top = self.D if max_level is None else max_level
        return [t_sym(i, j, r) for r in range(1, top + 1) for i in self.ctx.indices for j in self.ctx.indices]

    def nf(self, x: Any) -> Any:
        if isinstance(x, TruncSeries):
            return x.map(self.rules.normal_form)
        if isinstance(x, SeriesMatrix):
            return x.normal_form(self.rules)
        if isinstance(x, NCPoly):
            return self.rules.normal_form(x)
        return x

    def is_zero(self, s: TruncSeries) -> bool:
        return not self.nf(s)

    @cached_property
    def T_inv(self) -> SeriesMatrix:
        return self.T.inverse()

    @cached_property
    def T_star(self) -> SeriesMatrix:
        return self.T_inv.transpose_t()

    # central series z(u) ------------------------------------------------

    def z_contraction(self, i: int, j: int) -> TruncSeries:
        """sum_k t~_kj(u) t_ik(u+M-N)."""
        shifted = self.T.shift(self.M - self.N)
        acc = TruncSeries({}, self.D)
        for k in self.ctx.indices:
            acc = acc + self.T_inv[k, j] * shifted[i, k]
        return acc

    def z_contraction_alt(self, i: int, j: int) -> TruncSeries:
        """sum_k t_kj(u+M-N) t~_ik(u)."""
        shifted = self.T.shift(self.M - self.N)
        acc = TruncSeries({}, self.D)
        for k in self.ctx.indices:
            acc = acc + shifted[k, j] * self.T_inv[i, k]
        return acc

    @cached_property
    def z(self) -> TruncSeries:
        """z(u), after checking both contractions give delta_ij z(u)."""
        ref = self.nf(self.z_contraction(1, 1))
        for i in self.ctx.indices:
            for j in self.ctx.indices:
                for form in (self.z_contraction, self.z_contraction_alt):
                    got = self.nf(form(i, j))
                    want = ref if i == j else TruncSeries({}, ref.prec)
                    if not (got - want).truncate(min(got.prec, ref.prec)).coeffs == {}:
                        raise ArithmeticError(f"central contraction pattern broken at ({i},{j})")
        return ref

    # quantum Berezinian --------------------------------------------------

    def berezinian_explicit(self) -> TruncSeries:
        """Product of the signed sum over S_M of t-entries and over S_N of t~-entries."""
        M, N = self.M, self.N
        even = TruncSeries.const(NCPoly.const(1), self.D)
        if M:
            even = TruncSeries({}, self.D)
            cols = [self.T.shift(M - N - a) for a in range(1, M + 1)]
            for sigma in perm.enumerate_perms(M):
                term = TruncSeries.const(NCPoly.const(perm.sign(sigma)), self.D)
                for a in range(1, M + 1):
                    term = term * cols[a - 1][sigma[a - 1], a]
                even = even + term
        odd = TruncSeries.const(NCPoly.const(1), self.D)
        if N:
            odd = TruncSeries({}, self.D)
            rows = [self.T_inv.shift(-N + a - 1) for a in range(1, N + 1)]
            for sigma in perm.enumerate_perms(N):
                term = TruncSeries.const(NCPoly.const(perm.sign(sigma)), self.D)
                for a in range(1, N + 1):
                    term = term * rows[a - 1][M + a, M + sigma[a - 1]]
                odd = odd + term
        return even * odd

    def ladder(self) -> list[Fraction]:
        """Shifts w_i - u of the fusion arguments."""
        M, N = self.M, self.N
        return [Fraction(M - N - i) if i <= M else Fraction(-M - N - 1 + i) for i in range(1, M + N + 1)]

    def fusion_factors(self) -> list[SeriesMatrix]:
        out = []
        for i, c in enumerate(self.ladder(), start=1):
            out.append(self.T.shift(c) if i <= self.M else self.T_star.shift(c))
        return out

    def _fused_column(self, factors: Sequence[SeriesMatrix], cols: tuple[int, ...]) -> SuperTensor:
        m = len(factors)
        vec = SuperTensor(self.ctx, m, {(cols, cols): TruncSeries.const(NCPoly.const(1), self.D)})
        for slot in range(m, 0, -1):
            vec = mul(factors[slot - 1].to_tensor(m, slot), vec)
        return vec

    def berezinian_fusion(self) -> TruncSeries:
        """Scalar by which I A T_1(w_1)...T*_{M+N}(w_{M+N}) I acts on the ordered vector."""
        return fused_scalar(self.ctx, self.M, self.N, self._fused_column(self.fusion_factors(),
                                                                          tuple(self.ctx.indices)), self.rules)

    def berezinian_supertrace(self) -> tuple[TruncSeries, Fraction]:
        """(Str(I A T...T*), Str(I A)); the Berezinian is their ratio."""
        ctx = self.ctx
        m = self.n
        proj = mul(frak_i(ctx), a_operator(ctx))
        factors = self.fusion_factors()
        pattern = [[i for i in ctx.indices if ctx.par[i] == (0 if s < self.M else 1)] for s in range(m)]
        total = TruncSeries({}, self.D)
        norm = Fraction(0)
        for cols in product(*pattern):
            col = self._fused_column(factors, cols)
            img = mul(proj, col)
            sgn = (-1) ** sum(ctx.par[c] for c in cols)
            v = img.entries.get((cols, cols))
            if v is not None:
                total = total + v * Fraction(sgn)
            norm += sgn * proj.entries.get((cols, cols), 0)
        return total, norm

    # morphisms -----------------------------------------------------------

    def image_matrix(self, kind: str, param: Any = None, prec: int | None = None) -> SeriesMatrix:
        """The matrix whose (i,j) entry carries the images of t_ij^(r) as coefficients."""
        D = self.D if prec is None else prec
        Y = self if D == self.D else Yangian(self.M, self.N, D, check=False)
        T = Y.T
        if kind == "mu_f":
            f = param if param is not None else TruncSeries.const(Fraction(1), D)
            return T.scale(f.truncate(D))
        if kind == "shift_lambda":
            return T.shift(-Fraction(param or 0))
        if kind == "conj_B":
            B = param
            Binv = numeric_inverse(B, self.n)
            return SeriesMatrix.constant(self.ctx, B, D) * T * SeriesMatrix.constant(self.ctx, Binv, D)
        if kind == "theta":
            return T.at(-1)
        if kind == "tau":
            return T.transpose_t()
        if kind == "antipode":
            return Y.T_inv
        if kind == "rho":
            return T.transpose_t().at(-1)
        if kind == "psi":
            return Y.T_star
        raise ValueError(f"unknown morphism kind {kind!r}")

    def morphism(self, kind: str, param: Any = None, prec: int | None = None) -> Callable[[int], NCPoly]:
        """Generator-image map for one of the named (anti-)automorphisms."""
        mat = self.image_matrix(kind, param, prec)

        def images(code: int) -> NCPoly:
            fam, r, i, j = decode(code)
            if fam == CENTRAL:
                return NCPoly.gen(code)
            if fam != YANG:
                raise KeyError("morphisms act on the first generator family only")
            c = mat[i, j].coefficient(r)
            return c if isinstance(c, NCPoly) else NCPoly.const(c)

        return images

    def apply(self, kind: str, x: Any, param: Any = None, prec: int | None = None) -> Any:
        """Apply a named morphism to a polynomial or coefficientwise to a series."""
        anti = kind in ANTI_KINDS
        if isinstance(x, TruncSeries):
            top = max((p.max_word_level() for p in x.coeffs.values() if isinstance(p, NCPoly)), default=1)
            images = self.morphism(kind, param, max(top, prec or 1))
            return x.map(lambda p: apply_morphism(p, images, self.ctx, anti, self.rules) if isinstance(p, NCPoly) else p)
        top = max(x.max_word_level(), 1)
        images = self.morphism(kind, param, max(top, prec or 1))
        return apply_morphism(x, images, self.ctx, anti, self.rules)

    # relation checks -----------------------------------------------------

    def cleared_rtt(self) -> SuperTensor:
        """(u-v-P) T1(u) T2(v) - T2(v) T1(u) (u-v-P) with free-word coefficients."""
        ctx = self.ctx
        t1 = bilaurent_slot(self.T, 2, 1, "u")
        t2 = bilaurent_slot(self.T, 2, 2, "v")
        rc = cleared_r(ctx, 2, 1, 2, {(1, 0): 1, (0, 1): -1}, -1)
        return mul(mul(rc, t1), t2) - mul(mul(t2, t1), rc)

    # coproduct -----------------------------------------------------------

    def coproduct_images(self) -> Callable[[int], NCPoly]:
        """Delta(t_ij^(r)) = sum_{p+q=r} sum_k (-1)^{(|i|+|k|)(|k|+|j|)} t_ik^(p) (x) t_kj^(q)."""
        par = self.ctx.par

        def images(code: int) -> NCPoly:
            fam, r, i, j = decode(code)
            if fam == CENTRAL:
                return NCPoly.gen(code)
            out = NCPoly()
            for k in self.ctx.indices:
                s = -1 if (par[i] ^ par[k]) & (par[k] ^ par[j]) else 1
                for p in range(0, r + 1):
                    q = r - p
                    left = NCPoly.gen(t_sym(i, k, p)) if p else (NCPoly.const(1) if i == k else None)
                    right = NCPoly.gen(recopy(t_sym(k, j, q), YANG2)) if q else (NCPoly.const(1) if k == j else None)
                    if left is None or right is None:
                        continue
                    out = out + (left * right) * s
            return out

        return images

    def coproduct(self, x: NCPoly) -> NCPoly:
        return apply_morphism(x, self.coproduct_images(), self.ctx, False, self.rules)

    # Gauss decomposition -------------------------------------------------

    def gauss(self) -> tuple[SeriesMatrix, SeriesMatrix, SeriesMatrix]:
        return self.T.gauss_decompose()


def fused_scalar(ctx: SuperContext, p: int, q: int, column: SuperTensor, rules: RewriteRules | None,
                 cols: tuple[int, ...] | None = None) -> TruncSeries:
    """Read the scalar c with I A X e = c * I A e from the column X e.

    Raises if I A X e is not proportional to I A e.
    """
    m = p + q
    cols = tuple(range(1, m + 1)) if cols is None else cols
    proj = mul(frak_i(ctx, p, q), a_operator(ctx, p, q))
    img = mul(proj, column)
    ref = proj.column(cols)
    base = ref.entries.get((cols, cols))
    if not base:
        raise ArithmeticError("reference vector has no diagonal component")
    scalar = img.entries.get((cols, cols))
    if scalar is None:
        prec = min((v.prec for v in img.entries.values()), default=EXACT)
        scalar = TruncSeries({}, prec)
    scalar = scalar * (1 / Fraction(base))
    if rules is not None:
        scalar = scalar.map(rules.normal_form)
    for (r, c), v in img.entries.items():
        expect = Fraction(ref.entries.get((r, c), 0))
        diff = v - scalar * expect
        if rules is not None:
            diff = diff.map(rules.normal_form)
        if diff:
            raise ArithmeticError(f"fused image is not proportional to the reference vector at {r}")
    return scalar


def bilaurent_slot(mat: SeriesMatrix, m: int, slot: int, var: str) -> SuperTensor:
    conv = BiLaurent.from_u if var == "u" else BiLaurent.from_v
    return SuperTensor.embed(mat.ctx, m, slot, {k: conv(v) for k, v in mat.entries.items()})


def cleared_r(ctx: SuperContext, m: int, a: int, b: int, poly: dict[tuple[int, int], Any], p_coeff: Any,
              p_tensor: SuperTensor | None = None) -> SuperTensor:
    """poly(u, v) * 1 + p_coeff * P_ab (or a supplied variant of P) with BiLaurent coefficients."""
    pt = p_tensor if p_tensor is not None else super_permutation(ctx, m, a, b)
    scalar = BiLaurent.poly(poly)
    ident = SuperTensor.identity(ctx, m, scalar)
    return ident + pt.map_coeffs(lambda c: BiLaurent.poly({(0, 0): Fraction(c) * p_coeff}))


def bilaurent_tensor_is_zero(x: SuperTensor, rules: RewriteRules) -> tuple[bool, Any]:
    """Normalize every coefficient; return (ok, first mismatch)."""
    for key in sorted(x.entries):
        bl = x.entries[key]
        for cell in sorted(bl.coeffs):
            v = bl.coeffs[cell]
            if isinstance(v, NCPoly):
                v = rules.normal_form(v)
            if v:
                return False, (key, cell, v)
    return True, None


def tensor_window(x: SuperTensor) -> tuple[int, int]:
    wins = [v.win for v in x.entries.values()]
    return (min(w[0] for w in wins), min(w[1] for w in wins)) if wins else (EXACT, EXACT)
