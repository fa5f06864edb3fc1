"""Twisted super Yangian computed inside Y(gl_{M|N}) through the embedding
S(u) = T(u) G0 T^t(-u), together with its extended version.

The bracket fusion ``<X_1, ..., X_p> <X~_{p+1}, ..., X~_{p+q}>`` is written
for an arbitrary pair (X, X^{-1}) of series matrices, so the same engine
yields the twisted Berezinian, quantum minors and their images under the
maps varpi and psi_K.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Sequence

from . import perm
from .ncalg import NCPoly, RewriteRules, apply_morphism, c_sym, decode, s_sym, super_commutator
from .series import (EXACT, BiLaurent, SeriesMatrix, TruncSeries, expand_rational, generic_matrix, linear_inverse)
from .tensor import (SuperContext, SuperTensor, a_operator, frak_i, g0_matrix, j_matrix, mul, numeric_inverse,
                     partial_transpose_iota, partial_transpose_t, super_permutation)
from .yangian import (Yangian, bilaurent_slot, bilaurent_tensor_is_zero, check_bounds, cleared_r, fused_scalar,
                      tensor_window)

MODES = ("strict", "extended")
C_RULES = ("negated", "recursion", "definition")


def half(x: int) -> Fraction:
    return Fraction(x, 2)


@dataclass(frozen=True)
class Ladder:
    """Spectral offsets u_i - u per slot and the shift h in X~(-u_i - h)."""

    offsets: tuple[Fraction, ...]
    h: Fraction

    @classmethod
    def berezinian(cls, M: int, N: int, p: int | None = None, q: int | None = None) -> "Ladder":
        """First p even and first q odd rungs of the (M|N) Berezinian ladder."""
        p = M if p is None else p
        q = N if q is None else q
        h = half(M - N)
        even = [Fraction(M - N - i) for i in range(1, p + 1)]
        odd = [Fraction(-N - 1 + b) - h for b in range(1, q + 1)]
        return cls(tuple(even + odd), h)

    @classmethod
    def own(cls, p: int, q: int) -> "Ladder":
        """The ladder a (p|q) algebra would use for its own Berezinian."""
        return cls.berezinian(p, q)

    def shifted(self, c: Fraction) -> "Ladder":
        return Ladder(tuple(a + c for a in self.offsets), self.h)


def cleared_quaternary(S: SeriesMatrix, form: str = "t") -> SuperTensor:
    """(u-v-P) S1 (u+v+P^{x1}) S2 - S2 (u+v+P^{x2}) S1 (u-v-P) for x = t.

    With ``form='iota'`` both sides use P^{iota_1}, the relation for calS.
    """
    lhs, rhs = quaternary_sides(S, form)
    return lhs - rhs


def quaternary_window(S: SeriesMatrix) -> tuple[int, int]:
    """Certified (u, v) window of the cleared quaternary relation for S."""
    return tensor_window(quaternary_sides(S, "t")[0])


def quaternary_sides(S: SeriesMatrix, form: str = "t") -> tuple[SuperTensor, SuperTensor]:
    ctx = S.ctx
    s1 = bilaurent_slot(S, 2, 1, "u")
    s2 = bilaurent_slot(S, 2, 2, "v")
    P = super_permutation(ctx, 2, 1, 2)
    if form == "t":
        p1, p2 = partial_transpose_t(P, 1), partial_transpose_t(P, 2)
    elif form == "iota":
        p1 = p2 = partial_transpose_iota(P, 1)
    else:
        raise ValueError("form must be 't' or 'iota'")
    r = cleared_r(ctx, 2, 1, 2, {(1, 0): 1, (0, 1): -1}, -1)
    rt1 = cleared_r(ctx, 2, 1, 2, {(1, 0): 1, (0, 1): 1}, 1, p1)
    rt2 = cleared_r(ctx, 2, 1, 2, {(1, 0): 1, (0, 1): 1}, 1, p2)
    return mul(mul(mul(r, s1), rt1), s2), mul(mul(mul(s2, rt2), s1), r)


def symmetry_deviation(S: SeriesMatrix, form: str = "t") -> SeriesMatrix:
    """2u (J S^t(-u) - S(u)) - S(u) + S(-u), or 2u (S^iota(-u) - S(u)) - S(u) + S(-u)."""
    two_u = TruncSeries({-1: Fraction(2)}, EXACT)
    if form == "t":
        lhs = SeriesMatrix.constant(S.ctx, j_matrix(S.ctx)) * S.transpose_t().at(-1)
    elif form == "iota":
        lhs = S.transpose_iota().at(-1)
    else:
        raise ValueError("form must be 't' or 'iota'")
    return (lhs - S).scale(two_u) - S + S.at(-1)


def first_deviation(dev: SeriesMatrix) -> tuple[bool, Any]:
    """(True, None) for a zero matrix, else (False, (entry, order, coefficient)) of the first nonzero term."""
    for key in sorted(dev.entries):
        v = dev.entries[key]
        if v:
            k = min(v.coeffs)
            return False, (key, k, v.coeffs[k])
    return True, None


def iota_permutation(ctx: SuperContext, m: int, i: int, j: int) -> SuperTensor:
    return partial_transpose_iota(super_permutation(ctx, m, i, j), i)


def bracket_column(ctx: SuperContext, X: SeriesMatrix, Xinv: SeriesMatrix, p: int, q: int, ladder: Ladder,
                   cols: Sequence[int], prec: int) -> SuperTensor:
    """<X_1..X_p> <X~_{p+1}..X~_{p+q}> applied to e_{cols}.

    X_i = X(u_i), X~_i = X^{-1}(-u_i - h) and the interleaved factors are
    R^iota_ij(-u_i-u_j) = 1 + P^{iota_i}_ij / (u_i + u_j).
    """
    m = p + q
    a = ladder.offsets
    if len(a) != m or len(cols) != m:
        raise ValueError("ladder and column lengths must equal p + q")
    factors: list[tuple[str, Any]] = []

    def block(slots: range, mats: Callable[[int], SeriesMatrix]) -> None:
        sl = list(slots)
        for idx, i in enumerate(sl):
            factors.append(("mat", (i, mats(i))))
            for j in sl[idx + 1:]:
                factors.append(("r", (i, j)))

    block(range(1, p + 1), lambda i: X.shift(a[i - 1]))
    block(range(p + 1, m + 1), lambda i: Xinv.at(-1, -a[i - 1] - ladder.h))
    one = TruncSeries.const(NCPoly.const(1), prec)
    vec = SuperTensor(ctx, m, {(tuple(cols), tuple(cols)): one})
    for kind, data in reversed(factors):
        if kind == "mat":
            slot, mat = data
            vec = mul(mat.to_tensor(m, slot), vec)
        else:
            i, j = data
            coef = linear_inverse(2, a[i - 1] + a[j - 1], prec)
            pi = iota_permutation(ctx, m, i, j).map_coeffs(lambda c, coef=coef: coef * Fraction(c))
            vec = vec + mul(pi, vec)
    return vec


def minor_from_column(ctx: SuperContext, p: int, q: int, column: SuperTensor, ks: Sequence[int],
                      ls: Sequence[int]) -> TruncSeries:
    """Component e_ks of I A^{(p|q)} (column computed on e_ls)."""
    img = mul(mul(frak_i(ctx, p, q), a_operator(ctx, p, q)), column)
    hit = img.entries.get((tuple(ks), tuple(ls)))
    if hit is None:
        prec = min((v.prec for v in column.entries.values()), default=EXACT)
        return TruncSeries({}, prec)
    return hit


def validate_split(ctx: SuperContext, p: int, q: int, idx: Sequence[int]) -> None:
    if len(idx) != p + q:
        raise ValueError("index list length must be p + q")
    for pos, i in enumerate(idx):
        want = 0 if pos < p else 1
        if not 1 <= i <= ctx.n or ctx.par[i] != want:
            raise ValueError(f"index {i} at position {pos + 1} violates the ({p}|{q}) block split")


class TwistedModel:
    """S(u) = c(u) T(u) G0 T^t(-u) and calS(u) = c(u) T(u) T^iota(-u).

    In strict mode c = 1; in extended mode c(u) = 1 + sum c^(r) u^{-r} with
    free central symbols, which keeps the quaternary relation and breaks
    the symmetry relation.
    """

    def __init__(self, M: int, N: int, D: int, mode: str = "strict", *, check: bool = True):
        if N % 2:
            raise ValueError("the twisted layer needs N even")
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if check:
            check_bounds(M, N, D)
        self.M, self.N, self.D, self.mode = M, N, D, mode
        self.Y = Yangian(M, N, D, check=False)
        self.ctx = self.Y.ctx
        self.rules = self.Y.rules

    @property
    def n(self) -> int:
        return self.M + self.N

    @cached_property
    def c(self) -> TruncSeries:
        if self.mode == "strict":
            return TruncSeries.const(NCPoly.const(1), EXACT)
        coeffs: dict[int, Any] = {0: NCPoly.const(1)}
        coeffs.update({r: NCPoly.gen(c_sym(r)) for r in range(1, self.D + 1)})
        return TruncSeries(coeffs, self.D)

    @cached_property
    def G0(self) -> SeriesMatrix:
        return SeriesMatrix.constant(self.ctx, g0_matrix(self.ctx))

    @cached_property
    def G0_inv(self) -> SeriesMatrix:
        return SeriesMatrix.constant(self.ctx, numeric_inverse(g0_matrix(self.ctx), self.n))

    @cached_property
    def S(self) -> SeriesMatrix:
        T = self.Y.T
        return (T * self.G0 * T.transpose_t().at(-1)).scale(self.c).normal_form(self.rules)

    @cached_property
    def calS(self) -> SeriesMatrix:
        T = self.Y.T
        return (T * T.transpose_iota().at(-1)).scale(self.c).normal_form(self.rules)

    @cached_property
    def S_inv(self) -> SeriesMatrix:
        return self.S.inverse().normal_form(self.rules)

    @cached_property
    def calS_inv(self) -> SeriesMatrix:
        return self.calS.inverse().normal_form(self.rules)

    def nf(self, x: Any) -> Any:
        return self.Y.nf(x)

    def is_zero(self, s: TruncSeries) -> bool:
        return not self.nf(s)

    def s_entry_formula(self, i: int, j: int) -> TruncSeries:
        """sum_{a,b} (-1)^{|i||j|+|i||a|+|j|+|a|} g_ab t_ia(u) t_jb(-u), times c(u)."""
        par = self.ctx.par
        T = self.Y.T
        Tm = T.at(-1)
        acc = TruncSeries({}, self.D)
        for (a, b), g in g0_matrix(self.ctx).items():
            e = par[i] * par[j] + par[i] * par[a] + par[j] + par[a]
            acc = acc + (T[i, a] * Tm[j, b]) * Fraction((-1) ** e * g)
        return self.nf(self.c * acc)

    def generator_images(self, max_level: int | None = None) -> list[NCPoly]:
        """Normalized s_ij^(r) images for r <= max_level."""
        top = self.D if max_level is None else max_level
        out = []
        for r in range(1, top + 1):
            for (i, j), s in sorted(self.S.entries.items()):
                v = s.coeffs.get(r)
                if v:
                    out.append(v)
        return out

    # defining relations --------------------------------------------------

    def cleared_quaternary(self, form: str = "t", S: SeriesMatrix | None = None) -> SuperTensor:
        if S is None:
            S = self.S if form == "t" else self.calS
        return cleared_quaternary(S, form)

    def verify_quaternary(self, form: str = "t", S: SeriesMatrix | None = None) -> tuple[bool, Any]:
        return bilaurent_tensor_is_zero(self.cleared_quaternary(form, S), self.rules)

    def symmetry_deviation(self, form: str = "t", S: SeriesMatrix | None = None) -> SeriesMatrix:
        if S is None:
            S = self.S if form == "t" else self.calS
        return symmetry_deviation(S, form).normal_form(self.rules)

    def verify_symmetry(self, form: str = "t", S: SeriesMatrix | None = None) -> tuple[bool, Any]:
        return first_deviation(self.symmetry_deviation(form, S))

    # centre -----------------------------------------------------------------

    def z_tw_contraction(self, i: int, j: int, variant: int = 3) -> TruncSeries:
        """variant 3: sum_k sgn s~_jk(-u) s_ki(-u-M+N); variant 4: s_jk(-u-M+N) s~_ki(-u)."""
        par = self.ctx.par
        d = -self.M + self.N
        Sm = self.S.at(-1, d)
        Sinv = self.S_inv.at(-1)
        acc = TruncSeries({}, self.D)
        for k in self.ctx.indices:
            sgn = (-1) ** (par[j] * par[k] + par[i] * par[k] + par[i])
            term = Sinv[j, k] * Sm[k, i] if variant == 3 else Sm[j, k] * Sinv[k, i]
            acc = acc + term * Fraction(sgn)
        return self.nf(acc)

    def contraction_matches(self, variant: int = 3) -> bool:
        """Whether the s-contraction equals delta_ij z_tw(u) for every i, j.

        This holds when M = N; for M != N the contraction is not diagonal.
        """
        ref = self.z_tw
        for i in self.ctx.indices:
            for j in self.ctx.indices:
                want = ref if i == j else TruncSeries({}, ref.prec)
                if self.nf(self.z_tw_contraction(i, j, variant) - want):
                    return False
        return True

    @cached_property
    def z_tw(self) -> TruncSeries:
        """z(u) z(-u-M+N)^{-1}."""
        z = self.Y.z
        return self.nf(z * z.at(-1, -self.M + self.N).inverse())

    def centrality_failures(self, x: NCPoly, scope: Sequence[NCPoly]) -> list[int]:
        return [k for k, g in enumerate(scope) if super_commutator(x, g, self.rules)]

    # twisted Berezinian ------------------------------------------------

    @property
    def ladder(self) -> Ladder:
        return Ladder.berezinian(self.M, self.N)

    def berezinian_tw_fusion(self, X: SeriesMatrix | None = None, Xinv: SeriesMatrix | None = None) -> TruncSeries:
        """Scalar of I A <calS_1..calS_M><calS~_{M+1}..calS~_{M+N}> I on e_1 (x) ... (x) e_{M+N}."""
        X = self.calS if X is None else X
        Xinv = self.calS_inv if Xinv is None else Xinv
        cols = tuple(self.ctx.indices)
        col = bracket_column(self.ctx, X, Xinv, self.M, self.N, self.ladder, cols, self.D)
        return fused_scalar(self.ctx, self.M, self.N, col, self.rules)

    def factorized_form(self) -> TruncSeries:
        """((2u-M-N-1)/(2u-M-1)) B(u) P(u) with P = rho(B)."""
        Y = self.Y
        ber = Y.nf(Y.berezinian_explicit())
        pser = Y.apply("rho", ber)
        scal = expand_rational([-self.M - self.N - 1, 2], [-self.M - 1, 2], self.D)
        return self.nf(scal * ber * pser)

    def natural_entry(self, i: int, j: int, x_offset: Fraction, c_rule: str = "negated") -> TruncSeries:
        """The series s^natural_ij evaluated at u + x_offset.

        With c_y = 1/(2y-M-N+1): ``c_rule='recursion'`` uses c_{x+N},
        ``'definition'`` uses c_{-x+N} and ``'negated'`` uses -c_{x+N}.
        Only ``'negated'`` agrees with the fusion value once N > 0.
        """
        ctx = self.ctx
        M, N = self.M, self.N
        Sinv = self.calS_inv.at(-1, -x_offset)
        if c_rule == "recursion":
            cfrak = linear_inverse(2, 2 * x_offset + N - M + 1, self.D)
        elif c_rule == "definition":
            cfrak = linear_inverse(-2, -2 * x_offset + N - M + 1, self.D)
        elif c_rule == "negated":
            cfrak = linear_inverse(-2, -2 * x_offset + M - N - 1, self.D)
        else:
            raise ValueError(f"c_rule must be one of {C_RULES}")
        th = ctx.theta(i) * ctx.theta(j)
        main = Sinv[i, j] * (cfrak + 1)
        swap = Sinv[ctx.prime(j), ctx.prime(i)] * (cfrak * Fraction(th))
        return main + swap

    def berezinian_tw_explicit(self, c_rule: str = "negated", sign_rule: str = "sgn") -> TruncSeries:
        """Double sum over S_M and S_N with sigma' = omega(sigma).

        Even block: s^iota factors at -w_a for a <= floor(M/2), s at w_a after.
        Odd block: s^natural at w_{M+b} for b <= N/2, s~ at -w_{M+b} after.
        ``sign_rule`` is 'sgn' for sgn(sigma sigma') or 'even-trivial' to drop
        it on the even block.
        """
        M, N = self.M, self.N
        D = self.D
        w = [Fraction(M - N - i) for i in range(1, M + 1)] + [Fraction(-N - 1 + b) for b in range(1, N + 1)]
        one = TruncSeries.const(NCPoly.const(1), D)
        even = one
        if M:
            m = M // 2
            calS = self.calS
            calS_iota = calS.transpose_iota()
            mats = [calS_iota.at(-1, -w[a - 1]) if a <= m else calS.shift(w[a - 1]) for a in range(1, M + 1)]
            even = TruncSeries({}, D)
            for sigma in perm.enumerate_perms(M):
                sp = perm.omega(sigma)
                sgn = 1 if sign_rule == "even-trivial" else perm.sign(sigma) * perm.sign(sp)
                term = one * Fraction(sgn)
                for a in range(1, M + 1):
                    term = term * mats[a - 1][sigma[a - 1], sp[a - 1]]
                even = even + term
        odd = one
        if N:
            n = N // 2
            Sinv = self.calS_inv
            odd = TruncSeries({}, D)
            cache: dict[tuple[int, int, int], TruncSeries] = {}

            def factor(b: int, i: int, j: int) -> TruncSeries:
                key = (b, i, j)
                if key not in cache:
                    x = w[M + b - 1]
                    cache[key] = self.natural_entry(i, j, x, c_rule) if b <= n else Sinv.at(-1, -x)[i, j]
                return cache[key]

            for sigma in perm.enumerate_perms(N):
                sp = perm.omega(sigma)
                term = one * Fraction(perm.sign(sigma) * perm.sign(sp))
                for b in range(1, N + 1):
                    term = term * factor(b, M + sigma[b - 1], M + sp[b - 1])
                odd = odd + term
        return self.nf(even * odd)

    def liouville_scalar(self) -> TruncSeries:
        M, N = self.M, self.N
        num = poly_mul([-M - N - 1, 2], [-M + 1, 2])
        den = poly_mul([-M - N + 1, 2], [-M - 1, 2])
        return expand_rational(num, den, self.D)

    def liouville_tw_residual(self, btw: TruncSeries | None = None) -> TruncSeries:
        """z_tw(u) B^tw(u) - scalar(u) B^tw(u+1)."""
        btw = self.berezinian_tw_fusion() if btw is None else btw
        return self.nf(self.z_tw * btw - self.liouville_scalar() * btw.shift(1))

    # quantum minors ----------------------------------------------------

    def quantum_minor(self, p: int, q: int, ks: Sequence[int], ls: Sequence[int], ladder: Ladder | None = None,
                      X: SeriesMatrix | None = None, Xinv: SeriesMatrix | None = None) -> TruncSeries:
        validate_split(self.ctx, p, q, ks)
        validate_split(self.ctx, p, q, ls)
        X = self.calS if X is None else X
        Xinv = self.calS_inv if Xinv is None else Xinv
        ladder = Ladder.berezinian(self.M, self.N, p, q) if ladder is None else ladder
        col = bracket_column(self.ctx, X, Xinv, p, q, ladder, ls, self.D)
        return self.nf(minor_from_column(self.ctx, p, q, col, ks, ls))

    # extended algebra ------------------------------------------------

    def e_tensor(self, order: str = "left") -> SuperTensor:
        """calS~_2(-u) R(2u) calS_1(u) P^iota, or P^iota calS_1(u) R(2u) calS~_2(-u)."""
        ctx = self.ctx
        P = super_permutation(ctx, 2, 1, 2)
        pi = partial_transpose_iota(P, 1)
        r2u = SuperTensor.identity(ctx, 2, TruncSeries.const(Fraction(1))) + P.map_coeffs(
            lambda c: TruncSeries({1: Fraction(-1, 2) * Fraction(c)}, EXACT))
        s1 = self.calS.to_tensor(2, 1)
        s2 = self.calS_inv.at(-1).to_tensor(2, 2)
        if order == "left":
            return mul(mul(mul(s2, r2u), s1), pi)
        return mul(mul(mul(pi, s1), r2u), s2)

    def e_series(self, order: str = "left") -> TruncSeries:
        """Read E(u) from E(u) P^iota, checking proportionality."""
        ctx = self.ctx
        pi = partial_transpose_iota(super_permutation(ctx, 2, 1, 2), 1)
        x = self.e_tensor(order).map_coeffs(lambda s: self.nf(s))
        key0 = sorted(pi.entries)[0]
        val = x.entries.get(key0, TruncSeries({}, self.D)) * (1 / Fraction(pi.entries[key0]))
        keys = set(x.entries) | set(pi.entries)
        for key in keys:
            got = x.entries.get(key, TruncSeries({}, self.D))
            if self.nf(got - val * Fraction(pi.entries.get(key, 0))):
                raise ArithmeticError(f"image is not proportional to P^iota at {key}")
        return self.nf(val)

    def e_closed_form(self) -> SeriesMatrix:
        """(calS^iota(u) - calS(u)/(2u)) calS(-u)^{-1}."""
        half_u = TruncSeries({1: Fraction(1, 2)}, EXACT)
        left = self.calS.transpose_iota() - self.calS.scale(half_u)
        return (left * self.calS_inv.at(-1)).normal_form(self.rules)

    def e_expected(self) -> TruncSeries:
        strict = TruncSeries({0: Fraction(1), 1: Fraction(-1, 2)}, EXACT)
        if self.mode == "strict":
            return strict.truncate(self.D)
        return self.nf(self.c * self.c.at(-1).inverse() * strict)

    # varpi and psi_K ----------------------------------------------------

    def varpi_pair(self, X: SeriesMatrix | None = None, Xinv: SeriesMatrix | None = None
                   ) -> tuple[SeriesMatrix, SeriesMatrix]:
        """Images of (calS(u), calS~(u)) under calS(u) -> calS~(-u-(M-N)/2)."""
        X = self.calS if X is None else X
        Xinv = self.calS_inv if Xinv is None else Xinv
        h = half(self.M - self.N)
        return Xinv.at(-1, -h), X.at(-1, -h)

    def mu_tw(self, f: TruncSeries) -> SeriesMatrix:
        return self.S.scale(f).normal_form(self.rules)

    def mu_tw_preserves(self, f: TruncSeries) -> tuple[bool, bool]:
        """(quaternary, symmetry) relations for f(u) S(u); the second needs f(u) = f(-u)."""
        img = self.mu_tw(f)
        return self.verify_quaternary("t", img)[0], self.verify_symmetry("t", img)[0]


def psi_matrix(X: SeriesMatrix, K: int, small_ctx: SuperContext, rules: RewriteRules) -> SeriesMatrix:
    """Schur complement D - C A^{-1} B of the leading K x K block, taken at u - K/2 and relabelled K+i -> i.

    Products are graded.  ``X`` may be any (K+M|N) generator matrix, so
    images can be fed back in to compose the maps.
    """
    if K == 0:
        return X
    block = list(range(1, K + 1))
    mapping = {K + i: i for i in small_ctx.indices}
    schur = X.schur_complement(block).normal_form(rules)
    return schur.shift(-half(K)).relabel(small_ctx, mapping)


def psi_pair(big: TwistedModel, K: int, small_ctx: SuperContext) -> tuple[SeriesMatrix, SeriesMatrix]:
    """psi_K images of (calS(u), calS~(u)) for the (M|N) algebra inside the (K+M|N) model."""
    if big.M < K or big.N != small_ctx.N or big.M - K != small_ctx.M:
        raise ValueError("psi_K needs a (K+M|N) model for an (M|N) algebra")
    if K == 0:
        return big.calS, big.calS_inv
    X = psi_matrix(big.calS, K, small_ctx, big.rules)
    return X, X.inverse().normal_form(big.rules)


def psi_block_of_inverse(big: TwistedModel, K: int, small_ctx: SuperContext) -> SeriesMatrix:
    """Lower-right block of calS~ at u - K/2, the expected psi_K image of calS~."""
    rest = [i for i in big.ctx.indices if i > K]
    mapping = {K + i: i for i in small_ctx.indices}
    return big.calS_inv.submatrix(rest, rest).shift(-half(K)).relabel(small_ctx, mapping)


def pair_fusion(model_ctx: SuperContext, M: int, N: int, D: int, X: SeriesMatrix, Xinv: SeriesMatrix,
                rules: RewriteRules) -> TruncSeries:
    """Twisted Berezinian of an (M|N) algebra evaluated on a generator pair (X, X^{-1})."""
    col = bracket_column(model_ctx, X, Xinv, M, N, Ladder.berezinian(M, N), tuple(model_ctx.indices), D)
    return fused_scalar(model_ctx, M, N, col, rules)


def free_varpi_images(ctx: SuperContext, D: int) -> Callable[[int], NCPoly]:
    """varpi on free symbols s_ij^(r): coefficients of calS~(-u-(M-N)/2) for a generic free matrix."""
    X = generic_matrix(ctx, D, s_sym)
    img = X.inverse().at(-1, -half(ctx.M - ctx.N))

    def images(code: int) -> NCPoly:
        _, r, i, j = decode(code)
        c = img[i, j].coefficient(r)
        return c if isinstance(c, NCPoly) else NCPoly.const(c)

    return images


def poly_mul(a: Sequence[Any], b: Sequence[Any]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * Fraction(y)
    return out


def psi_composition_gap(M: int, K1: int, K2: int, N: int, D: int, mode: str = "extended") -> SeriesMatrix:
    """psi_{K1}(psi_{K2}) minus psi_{K1+K2} on the generator matrix, inside the (K1+K2+M|N) model."""
    big = TwistedModel(K1 + K2 + M, N, D, mode, check=False)
    mid = SuperContext(K1 + M, N)
    small = SuperContext(M, N)
    step = psi_matrix(psi_matrix(big.calS, K2, mid, big.rules), K1, small, big.rules)
    direct = psi_matrix(big.calS, K1 + K2, small, big.rules)
    return (step - direct).normal_form(big.rules)


def commutant_failures(big: TwistedModel, K: int, small_ctx: SuperContext, levels: int = 1) -> tuple[int, int]:
    """Count psi_K image coefficients that fail to supercommute with s_ab^(r), a, b <= K, r <= levels."""
    X, _ = psi_pair(big, K, small_ctx)
    bad = total = 0
    for a in range(1, K + 1):
        for b in range(1, K + 1):
            for r in range(1, levels + 1):
                g = big.calS[a, b].coeffs.get(r)
                if not isinstance(g, NCPoly):
                    continue
                for s in X.entries.values():
                    for x in s.coeffs.values():
                        if isinstance(x, NCPoly) and x.symbols():
                            total += 1
                            if super_commutator(g, x, big.rules):
                                bad += 1
    return bad, total


def block_relation_holds(big: TwistedModel, K: int) -> bool:
    """Whether the lower-right block of calS, relabelled, satisfies the (M|N) iota-quaternary relation.

    This is what makes the block embedding s_ij -> s_{K+i,K+j} a homomorphism.
    """
    small = SuperContext(big.M - K, big.N)
    rest = [i for i in big.ctx.indices if i > K]
    block = big.calS.submatrix(rest, rest).relabel(small, {K + i: i for i in small.indices})
    return bilaurent_tensor_is_zero(cleared_quaternary(block, "iota"), big.rules)[0]


@dataclass
class SylvesterReport:
    lhs: TruncSeries
    rhs: TruncSeries
    residual: TruncSeries

    @property
    def holds(self) -> bool:
        return not self.residual


def sylvester(M: int, K: int, N: int, D: int, mode: str = "extended", shift: Fraction | None = None,
              ladder: str = "full") -> SylvesterReport:
    """psi_K(B_{M|N}(u)) against B_{K+M|N}(u+c) (S^{1..K}_{1..K}(u+c))^{-1}, c = 3K/2 by default.

    ``ladder`` picks the spectral ladder of the K x K even minor: 'full'
    uses the (K+M|N) Berezinian ladder, 'own' the (K|0) one.
    """
    big = TwistedModel(K + M, N, D, mode, check=False)
    small = SuperContext(M, N)
    X, Xinv = psi_pair(big, K, small)
    lhs = pair_fusion(small, M, N, D, X, Xinv, big.rules)
    c = Fraction(3 * K, 2) if shift is None else Fraction(shift)
    lad = Ladder.berezinian(K + M, N, K, 0) if ladder == "full" else Ladder.own(K, 0)
    idx = tuple(range(1, K + 1))
    minor = big.quantum_minor(K, 0, idx, idx, ladder=lad)
    rhs = big.nf(big.berezinian_tw_fusion().shift(c) * minor.shift(c).inverse())
    return SylvesterReport(lhs, rhs, big.nf(lhs - rhs))


def km_zero_product(tm: TwistedModel, arg: Fraction | None = None) -> TruncSeries:
    """B(u) varpi(B)(-u + arg); arg defaults to -(3M-5N)/2 + 1.  Expected to equal 1."""
    M, N = tm.M, tm.N
    arg = -half(3 * M - 5 * N) + 1 if arg is None else Fraction(arg)
    b = tm.berezinian_tw_fusion()
    v, vinv = tm.varpi_pair()
    vb = pair_fusion(tm.ctx, M, N, tm.D, v, vinv, tm.rules)
    return tm.nf(b * vb.at(-1, arg))


def is_scalar_series(s: TruncSeries) -> bool:
    return all(not isinstance(v, NCPoly) or not v.symbols() for v in s.coeffs.values())
