"""Truncated Laurent series in u^{-1} (one and two variables) and graded
matrices of such series.

Every series records a watermark ``prec``: coefficients of u^{-k} with
k <= prec are exact, everything beyond is unknown and never stored.  Each
operation derives the watermark of its result from those of its inputs,
so equality checks automatically restrict to what is certified.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Any, Callable, Iterable, Mapping, Sequence

from .ncalg import NCPoly, RewriteRules
from .tensor import SuperContext, SuperTensor, numeric_inverse

EXACT = 10**6
LO_MIN = -2


def gen_binom(a: int, j: int) -> Fraction:
    """Binomial coefficient C(a, j) for any integer a and j >= 0."""
    num = 1
    for t in range(j):
        num *= a - t
    return Fraction(num, factorial(j))


def _is_scalar(c: Any) -> bool:
    return isinstance(c, (int, Fraction))


def _scalar_value(c: Any) -> Fraction | None:
    if _is_scalar(c):
        return Fraction(c)
    if isinstance(c, NCPoly) and all(not w for w in c.terms):
        return c.constant_term()
    return None


class TruncSeries:
    """sum_k coeffs[k] u^{-k}, exact for k <= prec."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Mapping[int, Any] | None = None, prec: int = EXACT):
        self.prec = prec
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v and k <= prec}
        if self.coeffs and min(self.coeffs) < LO_MIN:
            raise ValueError(f"positive powers beyond u^{-LO_MIN} are not supported")

    @classmethod
    def _raw(cls, coeffs: dict[int, Any], prec: int) -> "TruncSeries":
        out = cls.__new__(cls)
        out.coeffs = coeffs
        out.prec = prec
        return out

    @classmethod
    def const(cls, c: Any, prec: int = EXACT) -> "TruncSeries":
        return cls({0: c}, prec)

    @classmethod
    def polynomial(cls, coeffs: Sequence[Any]) -> "TruncSeries":
        """Exact polynomial sum_i coeffs[i] u^i (degree <= 2)."""
        return cls({-i: Fraction(c) for i, c in enumerate(coeffs)}, EXACT)

    @property
    def lo(self) -> int:
        return min(self.coeffs) if self.coeffs else self.prec + 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, k: int) -> Any:
        if k > self.prec:
            raise ValueError(f"coefficient u^-{k} beyond watermark {self.prec}")
        return self.coeffs.get(k, Fraction(0))

    def truncate(self, prec: int) -> "TruncSeries":
        prec = min(prec, self.prec)
        return TruncSeries._raw({k: v for k, v in self.coeffs.items() if k <= prec}, prec)

    def __add__(self, other: Any) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        prec = min(self.prec, other.prec)
        out = {k: v for k, v in self.coeffs.items() if k <= prec}
        for k, v in other.coeffs.items():
            if k > prec:
                continue
            if k in out:
                s = out[k] + v
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return TruncSeries._raw(out, prec)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries._raw({k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other: Any) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other)
        return self + (-other)

    def __rsub__(self, other: Any) -> "TruncSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return TruncSeries._raw({k: r for k, v in self.coeffs.items() if (r := v * other)}, self.prec)
        prec = min(self.prec + other.lo, other.prec + self.lo)
        out: dict[int, Any] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = k1 + k2
                if k > prec:
                    continue
                p = v1 * v2
                if k in out:
                    out[k] = out[k] + p
                else:
                    out[k] = p
        return TruncSeries._raw({k: v for k, v in out.items() if v}, prec)

    def __rmul__(self, other: Any) -> "TruncSeries":
        return TruncSeries._raw({k: r for k, v in self.coeffs.items() if (r := other * v)}, self.prec)

    def map(self, f: Callable[[Any], Any]) -> "TruncSeries":
        return TruncSeries(({k: f(v) for k, v in self.coeffs.items()}), self.prec)

    def shift(self, c: Any) -> "TruncSeries":
        """Substitute u -> u + c."""
        c = Fraction(c)
        if c == 0:
            return self
        out: dict[int, Any] = {}
        for k, v in self.coeffs.items():
            j = 0
            while k + j <= self.prec:
                b = gen_binom(-k, j) * c**j
                if b:
                    key = k + j
                    term = b * v
                    out[key] = out[key] + term if key in out else term
                elif k < 0 and j > -k:
                    break
                j += 1
        return TruncSeries({k: v for k, v in out.items()}, self.prec)

    def negate_arg(self) -> "TruncSeries":
        """Substitute u -> -u."""
        return TruncSeries._raw({k: (-v if k % 2 else v) for k, v in self.coeffs.items()}, self.prec)

    def at(self, sign: int, c: Any = 0) -> "TruncSeries":
        """The series evaluated at sign*u + c (sign = +-1)."""
        if sign == 1:
            return self.shift(c)
        if sign == -1:
            return self.negate_arg().shift(-Fraction(c))
        raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse of a series with invertible scalar constant term."""
        if self.coeffs and min(self.coeffs) < 0:
            raise ValueError("cannot invert a series with positive powers")
        a0 = _scalar_value(self.coeffs.get(0, 0))
        if not a0:
            raise ZeroDivisionError("constant term is not an invertible scalar")
        inv0 = 1 / a0
        b: dict[int, Any] = {0: inv0}
        for k in range(1, self.prec + 1):
            acc = None
            for j in range(1, k + 1):
                aj = self.coeffs.get(j)
                bk = b.get(k - j)
                if aj is None or bk is None or not aj or not bk:
                    continue
                p = aj * bk
                acc = p if acc is None else acc + p
            if acc is not None and acc:
                b[k] = -inv0 * acc
        return TruncSeries(b, self.prec)

    def eq_window(self, other: "TruncSeries") -> bool:
        return not (self - other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.eq_window(other)

    def __repr__(self) -> str:
        return f"TruncSeries(prec={self.prec}, {self.render()})"

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            body = v.render() if isinstance(v, NCPoly) else str(v)
            parts.append(f"u^{-k}: {body}" if k else body)
        return "; ".join(parts)


def expand_rational(num: Sequence[Any], den: Sequence[Any], prec: int) -> TruncSeries:
    """Expansion at u = infinity of (sum num[i] u^i) / (sum den[i] u^i).

    At most two positive powers of u are allowed in the result.
    """
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    while num and num[-1] == 0:
        num.pop()
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return TruncSeries({}, prec)
    e, d = len(num) - 1, len(den) - 1
    lo = d - e
    if lo < LO_MIN:
        raise ValueError("improper rational function beyond the allowed window")
    # in x = 1/u: f = x^{lo} * phat(x) / qhat(x)
    phat = [num[e - i] for i in range(e + 1)]
    qhat = [den[d - i] for i in range(d + 1)]
    out: dict[int, Fraction] = {}
    quot: list[Fraction] = []
    for i in range(max(0, prec - lo + 1)):
        acc = phat[i] if i < len(phat) else Fraction(0)
        for j in range(1, min(i, d) + 1):
            acc -= qhat[j] * quot[i - j]
        quot.append(acc / qhat[0])
        if quot[-1]:
            out[lo + i] = quot[-1]
    return TruncSeries(out, prec)


def linear_inverse(a: Any, b: Any, prec: int) -> TruncSeries:
    """Expansion of 1 / (a u + b)."""
    return expand_rational([1], [b, a], prec)


class BiLaurent:
    """sum coeffs[(a, b)] u^{-a} v^{-b}, exact on the box a <= win[0], b <= win[1].

    ``lo`` is a structural lower bound on the powers that may occur.
    """

    __slots__ = ("coeffs", "win", "lo")

    def __init__(self, coeffs: Mapping[tuple[int, int], Any], win: tuple[int, int], lo: tuple[int, int]):
        self.win = win
        self.lo = lo
        self.coeffs = {k: v for k, v in coeffs.items() if v and k[0] <= win[0] and k[1] <= win[1]}
        if lo[0] < LO_MIN or lo[1] < LO_MIN:
            raise ValueError("positive powers beyond the allowed window")

    @classmethod
    def from_u(cls, s: TruncSeries) -> "BiLaurent":
        return cls({(k, 0): v for k, v in s.coeffs.items()}, (s.prec, EXACT), (s.lo, 0))

    @classmethod
    def from_v(cls, s: TruncSeries) -> "BiLaurent":
        return cls({(0, k): v for k, v in s.coeffs.items()}, (EXACT, s.prec), (0, s.lo))

    @classmethod
    def poly(cls, terms: Mapping[tuple[int, int], Any]) -> "BiLaurent":
        """Exact polynomial: keys are (i, j) meaning u^i v^j."""
        coeffs = {(-i, -j): Fraction(c) for (i, j), c in terms.items()}
        lo = (min((a for a, _ in coeffs), default=0), min((b for _, b in coeffs), default=0))
        return cls(coeffs, (EXACT, EXACT), (min(lo[0], 0), min(lo[1], 0)))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: Any) -> "BiLaurent":
        if not isinstance(other, BiLaurent):
            other = BiLaurent({(0, 0): other}, (EXACT, EXACT), (0, 0))
        win = (min(self.win[0], other.win[0]), min(self.win[1], other.win[1]))
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return BiLaurent(out, win, (min(self.lo[0], other.lo[0]), min(self.lo[1], other.lo[1])))

    __radd__ = __add__

    def __neg__(self) -> "BiLaurent":
        return BiLaurent({k: -v for k, v in self.coeffs.items()}, self.win, self.lo)

    def __sub__(self, other: Any) -> "BiLaurent":
        return self + (-other)

    def __mul__(self, other: Any) -> "BiLaurent":
        if not isinstance(other, BiLaurent):
            return BiLaurent({k: v * other for k, v in self.coeffs.items()}, self.win, self.lo)
        win = (min(self.win[0] + other.lo[0], other.win[0] + self.lo[0]),
               min(self.win[1] + other.lo[1], other.win[1] + self.lo[1]))
        out: dict[tuple[int, int], Any] = {}
        for (a1, b1), v1 in self.coeffs.items():
            for (a2, b2), v2 in other.coeffs.items():
                a, b = a1 + a2, b1 + b2
                if a > win[0] or b > win[1]:
                    continue
                p = v1 * v2
                key = (a, b)
                out[key] = out[key] + p if key in out else p
        return BiLaurent(out, win, (self.lo[0] + other.lo[0], self.lo[1] + other.lo[1]))

    def __rmul__(self, other: Any) -> "BiLaurent":
        return BiLaurent({k: other * v for k, v in self.coeffs.items()}, self.win, self.lo)

    def map(self, f: Callable[[Any], Any]) -> "BiLaurent":
        return BiLaurent({k: f(v) for k, v in self.coeffs.items()}, self.win, self.lo)

    def window_cells(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.lo[0], self.win[0] + 1) for b in range(self.lo[1], self.win[1] + 1)]


# graded matrices of series --------------------------------------------

class SeriesMatrix:
    """Matrix of series with rows/cols labelled by superspace indices.

    Products follow (XY)_il = sum_j (-1)^{(|i|+|j|)(|j|+|l|)} x_ij y_jl.
    """

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: SuperContext, rows: Sequence[int], cols: Sequence[int],
                 entries: Mapping[tuple[int, int], TruncSeries]):
        self.ctx = ctx
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.entries = {k: v for k, v in entries.items() if v or v.prec < EXACT}

    @classmethod
    def identity(cls, ctx: SuperContext, labels: Sequence[int] | None = None, prec: int = EXACT) -> "SeriesMatrix":
        labels = tuple(ctx.indices) if labels is None else tuple(labels)
        return cls(ctx, labels, labels, {(i, i): TruncSeries.const(Fraction(1), prec) for i in labels})

    @classmethod
    def constant(cls, ctx: SuperContext, matrix: Mapping[tuple[int, int], Any], prec: int = EXACT) -> "SeriesMatrix":
        labels = tuple(ctx.indices)
        return cls(ctx, labels, labels, {k: TruncSeries.const(Fraction(v), prec) for k, v in matrix.items()})

    @property
    def prec(self) -> int:
        return min((v.prec for v in self.entries.values()), default=EXACT)

    def entry(self, i: int, j: int) -> TruncSeries:
        hit = self.entries.get((i, j))
        return hit if hit is not None else TruncSeries({}, self.prec)

    def __getitem__(self, key: tuple[int, int]) -> TruncSeries:
        return self.entry(*key)

    def _par(self, i: int) -> int:
        return self.ctx.par[i]

    def map(self, f: Callable[[TruncSeries], TruncSeries]) -> "SeriesMatrix":
        return SeriesMatrix(self.ctx, self.rows, self.cols, {k: f(v) for k, v in self.entries.items()})

    def map_coeffs(self, f: Callable[[Any], Any]) -> "SeriesMatrix":
        return self.map(lambda s: s.map(f))

    def normal_form(self, rules: RewriteRules) -> "SeriesMatrix":
        return self.map_coeffs(rules.normal_form)

    def truncate(self, prec: int) -> "SeriesMatrix":
        return self.map(lambda s: s.truncate(prec))

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return SeriesMatrix(self.ctx, self.rows, self.cols, out)

    def __neg__(self) -> "SeriesMatrix":
        return self.map(lambda s: -s)

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return self + (-other)

    def scale(self, f: TruncSeries | Fraction) -> "SeriesMatrix":
        """Multiply every entry on the left by an even central series f."""
        return self.map(lambda s: f * s)

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.cols != other.rows:
            raise ValueError("inner labels do not match")
        out: dict[tuple[int, int], TruncSeries] = {}
        by_row: dict[int, list[tuple[int, TruncSeries]]] = {}
        for (j, l), y in other.entries.items():
            by_row.setdefault(j, []).append((l, y))
        for (i, j), x in self.entries.items():
            pij = self._par(i) ^ self._par(j)
            for l, y in by_row.get(j, ()):
                p = x * y
                if pij & (self._par(j) ^ self._par(l)):
                    p = -p
                key = (i, l)
                out[key] = out[key] + p if key in out else p
        return SeriesMatrix(self.ctx, self.rows, other.cols, out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SeriesMatrix":
        rs, cs = set(rows), set(cols)
        return SeriesMatrix(self.ctx, rows, cols,
                            {k: v for k, v in self.entries.items() if k[0] in rs and k[1] in cs})

    def relabel(self, ctx: SuperContext, mapping: Mapping[int, int]) -> "SeriesMatrix":
        """Rename labels (parities must agree) and move to another context."""
        for a, b in mapping.items():
            if self.ctx.par[a] != ctx.par[b]:
                raise ValueError("relabelling changes parity")
        return SeriesMatrix(ctx, [mapping[i] for i in self.rows], [mapping[j] for j in self.cols],
                            {(mapping[i], mapping[j]): v for (i, j), v in self.entries.items()})

    def shift(self, c: Any) -> "SeriesMatrix":
        return self.map(lambda s: s.shift(c))

    def at(self, sign: int, c: Any = 0) -> "SeriesMatrix":
        return self.map(lambda s: s.at(sign, c))

    def coefficient_matrix(self, k: int) -> dict[tuple[int, int], Any]:
        return {key: c for key, v in self.entries.items() if (c := v.coeffs.get(k))}

    def inverse(self) -> "SeriesMatrix":
        """Two-sided inverse through the recursion B_k = -C^{-1} sum_{j>=1} X_j B_{k-j}."""
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        labels = self.rows
        pos = {lab: idx + 1 for idx, lab in enumerate(labels)}
        const: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in self.entries.items():
            if v.coeffs and min(v.coeffs) < 0:
                raise ValueError("cannot invert a matrix with positive powers")
            c0 = v.coeffs.get(0)
            if c0 is None:
                continue
            sv = _scalar_value(c0)
            if sv is None:
                raise ZeroDivisionError("constant term is not a scalar matrix")
            if sv:
                const[(pos[i], pos[j])] = sv
        inv_local = numeric_inverse(const, len(labels))
        cinv = {(labels[a - 1], labels[b - 1]): v for (a, b), v in inv_local.items()}
        prec = self.prec
        xs = {k: self.coefficient_matrix(k) for k in range(1, prec + 1)}
        bs: list[dict[tuple[int, int], Any]] = [cinv]
        par = self._par
        for k in range(1, prec + 1):
            acc: dict[tuple[int, int], Any] = {}
            for j in range(1, k + 1):
                _graded_mat_mul_into(acc, xs[j], bs[k - j], par)
            bk: dict[tuple[int, int], Any] = {}
            _graded_mat_mul_into(bk, cinv, acc, par)
            bs.append({key: -v for key, v in bk.items() if v})
        out = {}
        for i in labels:
            for j in labels:
                out[(i, j)] = TruncSeries({k: b[(i, j)] for k, b in enumerate(bs) if (i, j) in b}, prec)
        return SeriesMatrix(self.ctx, labels, labels, out)

    def transpose_t(self) -> "SeriesMatrix":
        """X^t_ij = (-1)^{|i||j|+|j|} X_ji."""
        out = {}
        for (j, i), v in self.entries.items():
            pi, pj = self._par(i), self._par(j)
            out[(i, j)] = -v if (pi & pj) ^ pj else v
        return SeriesMatrix(self.ctx, self.cols, self.rows, out)

    def transpose_iota(self) -> "SeriesMatrix":
        """x^iota_ij = (-1)^{|i||j|+|i|} theta_i theta_j x_{j'i'}."""
        ctx = self.ctx
        if set(self.rows) != set(ctx.indices) or set(self.cols) != set(ctx.indices):
            raise ValueError("iota needs the full index set")
        out = {}
        for i in ctx.indices:
            for j in ctx.indices:
                v = self.entries.get((ctx.prime(j), ctx.prime(i)))
                if v is None:
                    continue
                pi, pj = self._par(i), self._par(j)
                s = (-1 if (pi & pj) ^ pi else 1) * ctx.theta(i) * ctx.theta(j)
                out[(i, j)] = v if s > 0 else -v
        return SeriesMatrix(ctx, ctx.indices, ctx.indices, out)

    def to_tensor(self, m: int, slot: int) -> SuperTensor:
        return SuperTensor.embed(self.ctx, m, slot, dict(self.entries))

    def eq_window(self, other: "SeriesMatrix") -> bool:
        d = self - other
        return not any(v for v in d.entries.values())

    def quasi_determinant(self, i: int, j: int) -> TruncSeries:
        """|X|^{ij} = x_ij - r_i^j (X^{ij})^{-1} c_j^i."""
        rows = [r for r in self.rows if r != i]
        cols = [c for c in self.cols if c != j]
        if len(rows) != len(cols):
            raise ValueError("quasi-determinant needs a square matrix")
        if not rows:
            return self.entry(i, j)
        minor_inv = self.submatrix(rows, cols).inverse()
        r = self.submatrix([i], cols)
        c = self.submatrix(rows, [j])
        corr = (r * minor_inv * c).entry(i, j)
        return self.entry(i, j) - corr

    def schur_complement(self, block: Sequence[int]) -> "SeriesMatrix":
        """D - C A^{-1} B where A is the block on the given labels."""
        rest = [r for r in self.rows if r not in block]
        a = self.submatrix(block, block)
        b = self.submatrix(block, rest)
        c = self.submatrix(rest, block)
        d = self.submatrix(rest, rest)
        return d - c * a.inverse() * b

    def gauss_decompose(self) -> tuple["SeriesMatrix", "SeriesMatrix", "SeriesMatrix"]:
        """X = F * D * E with F lower unitriangular, D diagonal, E upper unitriangular."""
        labels = list(self.rows)
        if labels != list(self.cols):
            raise ValueError("gauss decomposition needs matching row and column labels")
        prec = self.prec
        f_ent: dict[tuple[int, int], TruncSeries] = {}
        d_ent: dict[tuple[int, int], TruncSeries] = {}
        e_ent: dict[tuple[int, int], TruncSeries] = {}
        for idx, k in enumerate(labels):
            head = labels[:idx]
            tail = labels[idx:]
            if head:
                sc = self.schur_complement(head)
            else:
                sc = self.submatrix(tail, tail)
            dk = sc.entry(k, k)
            dinv = dk.inverse()
            d_ent[(k, k)] = dk
            f_ent[(k, k)] = TruncSeries.const(Fraction(1), prec)
            e_ent[(k, k)] = TruncSeries.const(Fraction(1), prec)
            for j in labels[idx + 1:]:
                e_ent[(k, j)] = dinv * sc.entry(k, j)
                f_ent[(j, k)] = sc.entry(j, k) * dinv
        lab = tuple(labels)
        return (SeriesMatrix(self.ctx, lab, lab, f_ent), SeriesMatrix(self.ctx, lab, lab, d_ent),
                SeriesMatrix(self.ctx, lab, lab, e_ent))


def _graded_mat_mul_into(acc: dict[tuple[int, int], Any], x: Mapping[tuple[int, int], Any],
                         y: Mapping[tuple[int, int], Any], par: Callable[[int], int]) -> None:
    by_row: dict[int, list[tuple[int, Any]]] = {}
    for (j, l), v in y.items():
        by_row.setdefault(j, []).append((l, v))
    for (i, j), a in x.items():
        pij = par(i) ^ par(j)
        for l, b in by_row.get(j, ()):
            p = a * b
            if pij & (par(j) ^ par(l)):
                p = -p
            key = (i, l)
            if key in acc:
                s = acc[key] + p
                if s:
                    acc[key] = s
                else:
                    del acc[key]
            elif p:
                acc[key] = p


def generic_matrix(ctx: SuperContext, prec: int, symbol: Callable[[int, int, int], int],
                   labels: Iterable[int] | None = None) -> SeriesMatrix:
    """delta_ij + sum_{r=1}^{prec} x_ij^(r) u^{-r} with x_ij^(r) = symbol(i, j, r)."""
    labels = tuple(ctx.indices) if labels is None else tuple(labels)
    out = {}
    for i in labels:
        for j in labels:
            coeffs: dict[int, Any] = {r: NCPoly.gen(symbol(i, j, r)) for r in range(1, prec + 1)}
            if i == j:
                coeffs[0] = NCPoly.const(1)
            out[(i, j)] = TruncSeries(coeffs, prec)
    return SeriesMatrix(ctx, labels, labels, out)


def series_normal_form(s: TruncSeries, rules: RewriteRules) -> TruncSeries:
    return s.map(rules.normal_form)


def series_is_zero(s: TruncSeries, rules: RewriteRules | None = None) -> bool:
    if rules is None:
        return not s
    return not series_normal_form(s, rules)


def first_nonzero(s: TruncSeries, rules: RewriteRules | None = None) -> tuple[int, Any] | None:
    for k in sorted(s.coeffs):
        v = s.coeffs[k]
        if rules is not None and isinstance(v, NCPoly):
            v = rules.normal_form(v)
        if v:
            return k, v
    return None
