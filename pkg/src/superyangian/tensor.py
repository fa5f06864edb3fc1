"""Z2-graded tensor calculus on End(V)^{(x)m} (x) A.

An element is stored as a sparse map from (row multi-index, column
multi-index) to a coefficient in A, meaning the simple tensor
E_{r1 c1} (x) ... (x) E_{rm cm} (x) a.  The coefficient ring is duck-typed:
anything supporting ``+``, ``-``, ``*`` and truthiness works, which covers
``Fraction``, noncommutative polynomials and truncated series.

Coefficient parities are not stored per entry.  A tensor carries a total
parity and every coefficient's parity is recovered as
``total + sum(|r_k| + |c_k|)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import perm

Index = tuple[int, ...]
Key = tuple[Index, Index]


@dataclass(frozen=True)
class SuperContext:
    """Index data for the superspace C^{M|N} with basis e_1..e_{M+N}."""

    M: int
    N: int

    def __post_init__(self) -> None:
        if self.M < 0 or self.N < 0 or self.M + self.N < 1:
            raise ValueError(f"bad dimensions ({self.M}|{self.N})")

    @property
    def n(self) -> int:
        return self.M + self.N

    @property
    def indices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def par(self) -> tuple[int, ...]:
        # par[i] for 1-based i; slot 0 unused
        return (0,) + tuple(0 if i <= self.M else 1 for i in self.indices)

    def parity(self, i: int) -> int:
        self._check(i)
        return self.par[i]

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexError(f"index {i} outside 1..{self.n}")

    def _require_even_n(self) -> None:
        if self.N % 2:
            raise ValueError(f"the twisted data needs even N, got N={self.N}")

    def theta(self, i: int) -> int:
        self._require_even_n()
        self._check(i)
        return 1 if i <= self.M + self.N // 2 else -1

    def prime(self, i: int) -> int:
        self._require_even_n()
        self._check(i)
        return self.M + 1 - i if i <= self.M else 2 * self.M + self.N + 1 - i


def _zero_free(entries: Mapping[Key, Any]) -> dict[Key, Any]:
    return {k: v for k, v in entries.items() if v}


class SuperTensor:
    """Immutable sparse element of End(V)^{(x)m} (x) A."""

    __slots__ = ("ctx", "m", "entries", "parity")

    def __init__(self, ctx: SuperContext, m: int, entries: Mapping[Key, Any], parity: int = 0):
        self.ctx = ctx
        self.m = m
        self.entries = _zero_free(entries)
        self.parity = parity % 2

    # construction -----------------------------------------------------

    @classmethod
    def identity(cls, ctx: SuperContext, m: int, one: Any = Fraction(1)) -> "SuperTensor":
        return cls(ctx, m, {(b, b): one for b in product(ctx.indices, repeat=m)})

    @classmethod
    def embed(cls, ctx: SuperContext, m: int, slot: int, matrix: Mapping[tuple[int, int], Any],
              parity: int = 0) -> "SuperTensor":
        """X_slot = sum E_ij (at slot) (x) x_ij, identity on the other slots."""
        if not 1 <= slot <= m:
            raise IndexError(f"slot {slot} outside 1..{m}")
        s = slot - 1
        out: dict[Key, Any] = {}
        for rest in product(ctx.indices, repeat=m - 1):
            for (i, j), x in matrix.items():
                rows = rest[:s] + (i,) + rest[s:]
                cols = rest[:s] + (j,) + rest[s:]
                out[(rows, cols)] = x
        return cls(ctx, m, out, parity)

    @classmethod
    def unit(cls, ctx: SuperContext, i: int, j: int, slot: int, m: int) -> "SuperTensor":
        ctx._check(i)
        ctx._check(j)
        return cls.embed(ctx, m, slot, {(i, j): Fraction(1)})

    # arithmetic -------------------------------------------------------

    def _same_shape(self, other: "SuperTensor") -> None:
        if self.m != other.m or self.ctx != other.ctx:
            raise ValueError("tensor arity or context mismatch")

    def __add__(self, other: "SuperTensor") -> "SuperTensor":
        self._same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return SuperTensor(self.ctx, self.m, out, self.parity)

    def __neg__(self) -> "SuperTensor":
        return SuperTensor(self.ctx, self.m, {k: -v for k, v in self.entries.items()}, self.parity)

    def __sub__(self, other: "SuperTensor") -> "SuperTensor":
        return self + (-other)

    def scale(self, c: Any) -> "SuperTensor":
        """Multiply every coefficient on the left by an even scalar c."""
        return SuperTensor(self.ctx, self.m, {k: c * v for k, v in self.entries.items()}, self.parity)

    def map_coeffs(self, f: Callable[[Any], Any]) -> "SuperTensor":
        return SuperTensor(self.ctx, self.m, {k: f(v) for k, v in self.entries.items()}, self.parity)

    def __mul__(self, other: "SuperTensor") -> "SuperTensor":
        return mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperTensor):
            return NotImplemented
        return self.m == other.m and self.ctx == other.ctx and self.entries == other.entries

    def __repr__(self) -> str:
        return f"SuperTensor(m={self.m}, nnz={len(self.entries)})"

    def column(self, cols: Index) -> "SuperTensor":
        return SuperTensor(self.ctx, self.m, {k: v for k, v in self.entries.items() if k[1] == cols},
                           self.parity)


def mul(x: SuperTensor, y: SuperTensor) -> SuperTensor:
    """Graded product (e_1..e_m (x) a)(f_1..f_m (x) b).

    Each f_k travels left past e_{k+1}..e_m and a, which gives the sign
    (-1)^{|f_k| (|x| + |e_1| + ... + |e_k|)} once |a| is expressed through
    the total parity |x|.
    """
    x._same_shape(y)
    par = x.ctx.par
    m = x.m
    by_row: dict[Index, list[tuple[Index, Any, tuple[int, ...]]]] = {}
    for (r, c), b in y.entries.items():
        fpar = tuple(par[r[k]] ^ par[c[k]] for k in range(m))
        by_row.setdefault(r, []).append((c, b, fpar))
    out: dict[Key, Any] = {}
    for (r, c), a in x.entries.items():
        hits = by_row.get(c)
        if not hits:
            continue
        prefix = []
        acc = x.parity
        for k in range(m):
            acc ^= par[r[k]] ^ par[c[k]]
            prefix.append(acc)
        for c2, b, fpar in hits:
            s = 0
            for k in range(m):
                if fpar[k] and prefix[k]:
                    s ^= 1
            v = a * b
            if s:
                v = -v
            key = (r, c2)
            if key in out:
                out[key] = out[key] + v
            else:
                out[key] = v
    return SuperTensor(x.ctx, m, out, x.parity ^ y.parity)


def product_of(factors: Sequence[SuperTensor]) -> SuperTensor:
    acc = factors[0]
    for f in factors[1:]:
        acc = mul(acc, f)
    return acc


# standard tensors ------------------------------------------------------

def super_permutation(ctx: SuperContext, m: int, a: int, b: int) -> SuperTensor:
    """P_ab = sum_{ij} (-1)^{|j|} E_ij (slot a) E_ji (slot b)."""
    if a == b or not (1 <= a <= m and 1 <= b <= m):
        raise IndexError(f"bad slots ({a},{b}) for arity {m}")
    a, b = min(a, b), max(a, b)
    out: dict[Key, Any] = {}
    for rest in product(ctx.indices, repeat=m):
        for i in ctx.indices:
            for j in ctx.indices:
                rows = list(rest)
                cols = list(rest)
                rows[a - 1], cols[a - 1] = i, j
                rows[b - 1], cols[b - 1] = j, i
                key = (tuple(rows), tuple(cols))
                out[key] = Fraction(-1 if ctx.par[j] else 1)
    return SuperTensor(ctx, m, out)


def r_matrix(ctx: SuperContext, m: int, a: int, b: int, arg: Fraction | int) -> SuperTensor:
    """R_ab(arg) = 1 - P_ab / arg at a rational point."""
    arg = Fraction(arg)
    if arg == 0:
        raise ZeroDivisionError("R-matrix argument must be nonzero")
    return SuperTensor.identity(ctx, m) - super_permutation(ctx, m, a, b).scale(1 / arg)


def transpose_sign(ctx: SuperContext, i: int, j: int) -> int:
    """Sign in t(E_ij) = (-1)^{|i||j|+|i|} E_ji."""
    pi, pj = ctx.par[i], ctx.par[j]
    return -1 if (pi & pj) ^ pi else 1


def partial_transpose_t(x: SuperTensor, slot: int) -> SuperTensor:
    """Apply X_ij -> (-1)^{|i||j|+|j|} X_ji on one tensor slot.

    On matrix units this is E_ij -> (-1)^{|i||j|+|i|} E_ji.
    """
    s = slot - 1
    out: dict[Key, Any] = {}
    for (r, c), v in x.entries.items():
        i, j = r[s], c[s]
        rows = r[:s] + (j,) + r[s + 1:]
        cols = c[:s] + (i,) + c[s + 1:]
        out[(rows, cols)] = v if transpose_sign(x.ctx, i, j) > 0 else -v
    return SuperTensor(x.ctx, x.m, out, x.parity)


def iota_sign(ctx: SuperContext, a: int, b: int) -> int:
    """Sign in iota(E_ab) = sign * E_{b'a'}."""
    pa, pb = ctx.par[a], ctx.par[b]
    s = -1 if (pa & pb) ^ pb else 1
    return s * ctx.theta(ctx.prime(a)) * ctx.theta(ctx.prime(b))


def partial_transpose_iota(x: SuperTensor, slot: int) -> SuperTensor:
    """Apply x_ij -> (-1)^{|i||j|+|i|} theta_i theta_j x_{j'i'} on one slot."""
    s = slot - 1
    ctx = x.ctx
    out: dict[Key, Any] = {}
    for (r, c), v in x.entries.items():
        a, b = r[s], c[s]
        rows = r[:s] + (ctx.prime(b),) + r[s + 1:]
        cols = c[:s] + (ctx.prime(a),) + c[s + 1:]
        out[(rows, cols)] = v if iota_sign(ctx, a, b) > 0 else -v
    return SuperTensor(ctx, x.m, out, x.parity)


def partial_supertrace(x: SuperTensor, slot: int) -> SuperTensor:
    """Str on one slot: E_ij -> (-1)^{|i|} delta_ij; arity drops by one."""
    s = slot - 1
    out: dict[Key, Any] = {}
    for (r, c), v in x.entries.items():
        if r[s] != c[s]:
            continue
        key = (r[:s] + r[s + 1:], c[:s] + c[s + 1:])
        v = -v if x.ctx.par[r[s]] else v
        out[key] = out[key] + v if key in out else v
    return SuperTensor(x.ctx, x.m - 1, out, x.parity)


def supertrace(x: SuperTensor) -> Any:
    """Full supertrace, returned as a coefficient (or 0)."""
    for slot in range(x.m, 0, -1):
        x = partial_supertrace(x, slot)
    return x.entries.get(((), ()), 0)


def apply_to_vector(x: SuperTensor, cols: Index) -> dict[Index, Any]:
    """Image of e_{c1} (x) ... (x) e_{cm} with coefficients written on the right.

    The Koszul rule gives (e_1..e_m (x) a)(v_1..v_m) =
    (-1)^{sum_{k<l} |e_l||v_k| + |a||v|} e_1 v_1 (x) ... (x) a.
    """
    par = x.ctx.par
    cols = tuple(cols)
    if len(cols) != x.m:
        raise ValueError("basis vector length does not match tensor arity")
    vpar = [par[c] for c in cols]
    vtot = sum(vpar) % 2
    out: dict[Index, Any] = {}
    for (r, c), v in x.entries.items():
        if c != cols:
            continue
        epar = [par[r[k]] ^ par[c[k]] for k in range(x.m)]
        s = 0
        seen = 0
        for k in range(x.m):
            s ^= epar[k] & seen
            seen ^= vpar[k]
        apar = (x.parity + sum(epar)) % 2
        s ^= apar & vtot
        out[r] = -v if s else v
    return {k: v for k, v in out.items() if v}


# symmetrizers and projectors -----------------------------------------

def perm_operator(ctx: SuperContext, m: int, sigma: Sequence[int], slots: Sequence[int]) -> SuperTensor:
    """Image of sigma in S_k acting on the listed slots, via products of P's."""
    acc = SuperTensor.identity(ctx, m)
    for k in perm.reduced_word(sigma):
        acc = mul(acc, super_permutation(ctx, m, slots[k - 1], slots[k]))
    return acc


def _group_sum(ctx: SuperContext, m: int, slots: Sequence[int], signed: bool) -> SuperTensor:
    k = len(slots)
    if k <= 1:
        return SuperTensor.identity(ctx, m)
    acc: dict[Key, Any] = {}
    for sigma in perm.enumerate_perms(k):
        op = perm_operator(ctx, m, sigma, slots)
        c = perm.sign(sigma) if signed else 1
        for key, v in op.entries.items():
            acc[key] = acc.get(key, 0) + c * v
    return SuperTensor(ctx, m, acc)


def antisymmetrizer(ctx: SuperContext, m: int, slots: Sequence[int] | None = None) -> SuperTensor:
    """G = sum sgn(sigma) pi(sigma) over permutations of the given slots."""
    return _group_sum(ctx, m, list(slots) if slots is not None else list(range(1, m + 1)), True)


def symmetrizer(ctx: SuperContext, m: int, slots: Sequence[int] | None = None) -> SuperTensor:
    """H = sum pi(sigma) over permutations of the given slots."""
    return _group_sum(ctx, m, list(slots) if slots is not None else list(range(1, m + 1)), False)


def fused_r_product(ctx: SuperContext, points: Sequence[Fraction]) -> SuperTensor:
    """R_{m-1,m} (R_{m-2,m} R_{m-2,m-1}) ... (R_{1m} ... R_{12}) with R_ij = R_ij(u_i - u_j)."""
    m = len(points)
    acc = SuperTensor.identity(ctx, m)
    for i in range(m - 1, 0, -1):
        for j in range(m, i, -1):
            acc = mul(acc, r_matrix(ctx, m, i, j, Fraction(points[i - 1]) - Fraction(points[j - 1])))
    return acc


def block_projector(ctx: SuperContext, m: int, pattern: Sequence[int]) -> SuperTensor:
    """Product of per-slot projections onto e_i with |i| = pattern[slot]."""
    out: dict[Key, Any] = {}
    choices = [[i for i in ctx.indices if ctx.par[i] == p] for p in pattern]
    for b in product(*choices):
        out[(b, b)] = Fraction(1)
    return SuperTensor(ctx, m, out)


def frak_i(ctx: SuperContext, p: int | None = None, q: int | None = None) -> SuperTensor:
    """Projection onto even vectors in the first p slots and odd ones in the next q."""
    p = ctx.M if p is None else p
    q = ctx.N if q is None else q
    return block_projector(ctx, p + q, [0] * p + [1] * q)


def a_operator(ctx: SuperContext, p: int | None = None, q: int | None = None) -> SuperTensor:
    """G^{(p)} on slots 1..p times H^{(q)} on slots p+1..p+q."""
    p = ctx.M if p is None else p
    q = ctx.N if q is None else q
    m = p + q
    g = antisymmetrizer(ctx, m, range(1, p + 1))
    h = symmetrizer(ctx, m, range(p + 1, m + 1))
    return mul(g, h)


def scalar_matrix_tensor(ctx: SuperContext, matrix: Mapping[tuple[int, int], Fraction],
                         slot: int = 1, m: int = 1) -> SuperTensor:
    return SuperTensor.embed(ctx, m, slot, {k: Fraction(v) for k, v in matrix.items()})


def g0_matrix(ctx: SuperContext) -> dict[tuple[int, int], Fraction]:
    """The block anti-diagonal matrix sum (-1)^{|i|} theta_i E_{i i'}."""
    return {(i, ctx.prime(i)): Fraction((-1) ** ctx.par[i] * ctx.theta(i)) for i in ctx.indices}


def j_matrix(ctx: SuperContext) -> dict[tuple[int, int], Fraction]:
    return {(i, i): Fraction((-1) ** ctx.par[i]) for i in ctx.indices}


def numeric_inverse(matrix: Mapping[tuple[int, int], Fraction], n: int) -> dict[tuple[int, int], Fraction]:
    """Exact inverse of an n x n rational matrix given sparsely (1-based)."""
    import sympy

    mat = sympy.Matrix(n, n, lambda i, j: sympy.Rational(str(Fraction(matrix.get((i + 1, j + 1), 0)))))
    if mat.det() == 0:
        raise ZeroDivisionError("singular constant matrix")
    inv = mat.inv()
    out = {}
    for i in range(n):
        for j in range(n):
            v = inv[i, j]
            if v != 0:
                out[(i + 1, j + 1)] = Fraction(int(v.p), int(v.q))
    return out


def factorial_fraction(k: int) -> Fraction:
    return Fraction(factorial(k))


def all_basis(ctx: SuperContext, m: int) -> Iterable[Index]:
    return product(ctx.indices, repeat=m)
