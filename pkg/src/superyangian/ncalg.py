"""Noncommutative polynomials in Yangian generators and their PBW normal form.

Symbols are packed into integers whose natural order is the PBW order:
central symbols first, then generators t_ij^(r) ordered by (r, i, j).  A
second copy of the generators (used for the tensor square Y (x) Y) sorts
after the first, and a family of free symbols s_ij^(r) with no relations
is available for computations in a free algebra.

The commutation rules are not typed in.  They are read off from the
(u - v)-cleared RTT relation expanded with :mod:`superyangian.tensor`.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .tensor import SuperContext, SuperTensor, mul, super_permutation

Word = tuple[int, ...]

CENTRAL, YANG, YANG2, FREE = 0, 1, 2, 3
_FAM_SHIFT, _R_SHIFT, _I_SHIFT = 40, 16, 8
_FAMILY_NAMES = {CENTRAL: "c", YANG: "t", YANG2: "t2", FREE: "s"}


def sym(family: int, r: int, i: int = 0, j: int = 0) -> int:
    if r < 1:
        raise ValueError("generator level must be positive")
    return (family << _FAM_SHIFT) | (r << _R_SHIFT) | (i << _I_SHIFT) | j


def t_sym(i: int, j: int, r: int) -> int:
    return sym(YANG, r, i, j)


def c_sym(r: int) -> int:
    return sym(CENTRAL, r)


def s_sym(i: int, j: int, r: int) -> int:
    return sym(FREE, r, i, j)


def decode(code: int) -> tuple[int, int, int, int]:
    """(family, r, i, j) of a packed symbol."""
    return (code >> _FAM_SHIFT, (code >> _R_SHIFT) & 0xFFFFFF, (code >> _I_SHIFT) & 0xFF, code & 0xFF)


def family(code: int) -> int:
    return code >> _FAM_SHIFT


def level(code: int) -> int:
    return (code >> _R_SHIFT) & 0xFFFFFF


def recopy(code: int, fam: int) -> int:
    return (fam << _FAM_SHIFT) | (code & ((1 << _FAM_SHIFT) - 1))


def sym_parity(code: int, ctx: SuperContext) -> int:
    fam, _, i, j = decode(code)
    if fam == CENTRAL:
        return 0
    return ctx.par[i] ^ ctx.par[j]


def sym_name(code: int) -> str:
    fam, r, i, j = decode(code)
    if fam == CENTRAL:
        return f"c[{r}]"
    return f"{_FAMILY_NAMES[fam]}[{i},{j},{r}]"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class NCPoly:
    """Sparse linear combination of words with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Any] | None = None):
        self.terms: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[tuple(w)] = Fraction(c)

    @classmethod
    def const(cls, c: Any) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def gen(cls, code: int, coeff: Any = 1) -> "NCPoly":
        return cls({(code,): coeff})

    @classmethod
    def _raw(cls, terms: dict[Word, Fraction]) -> "NCPoly":
        out = cls.__new__(cls)
        out.terms = terms
        return out

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def _coerce(self, other: Any) -> "NCPoly":
        if isinstance(other, NCPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return NCPoly.const(other)
        return NotImplemented

    def __add__(self, other: Any) -> "NCPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v += c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: Any) -> "NCPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "NCPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return NCPoly()
            return NCPoly._raw({w: c * other for w, c in self.terms.items()})
        if not isinstance(other, NCPoly):
            return NotImplemented
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w)
                out[w] = c1 * c2 if v is None else v + c1 * c2
        return NCPoly._raw({w: c for w, c in out.items() if c})

    def __rmul__(self, other: Any) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other: Any) -> "NCPoly":
        return self * (1 / Fraction(other))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NCPoly.const(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def parity(self, ctx: SuperContext) -> int:
        """Common parity of all words; raises on inhomogeneous input."""
        ps = {sum(sym_parity(s, ctx) for s in w) % 2 for w in self.terms}
        if len(ps) > 1:
            raise ValueError("inhomogeneous polynomial")
        return ps.pop() if ps else 0

    def max_word_level(self) -> int:
        return max((level(s) for w in self.terms for s in w), default=0)

    def symbols(self) -> set[int]:
        return {s for w in self.terms for s in w}

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            body = "*".join(sym_name(s) for s in w)
            if not body:
                parts.append(_frac_str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{_frac_str(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"NCPoly({self.render()})"


ONE = NCPoly.const(1)


def _acc(out: dict[Word, Fraction], w: Word, c: Fraction) -> None:
    v = out.get(w)
    if v is None:
        out[w] = c
    else:
        v += c
        if v:
            out[w] = v
        else:
            del out[w]


class CutoffExceeded(RuntimeError):
    pass


class RewriteRules:
    """Commutation rules of Y(gl_{M|N}) and the PBW normal form they induce.

    Rules for a pair of generators are derived on first use and memoized,
    together with normal forms of words.  Derivation expands the
    (u-v)-cleared RTT relation in the tensor algebra with free-word
    coefficients and telescopes the coefficient identities down to a single
    super-commutator.
    """

    def __init__(self, ctx: SuperContext, level_bound: int = 40):
        self.ctx = ctx
        self.level_bound = level_bound
        self._lock = threading.RLock()
        self._rules: dict[tuple[int, int], tuple[int, dict[Word, Fraction]]] = {}
        self._squares: dict[int, dict[Word, Fraction]] = {}
        self._nf_cache: dict[Word, dict[Word, Fraction]] = {}
        self._ins_cache: dict[tuple[int, Word], dict[Word, Fraction]] = {}
        self._lterm: dict[tuple[int, int], SuperTensor] = {}
        self._coef_mats: dict[int, SuperTensor] = {}
        self._p = super_permutation(ctx, 2, 1, 2)

    # derivation -------------------------------------------------------

    def _coef_matrix(self, r: int, slot: int) -> SuperTensor:
        key = r * 4 + slot
        hit = self._coef_mats.get(key)
        if hit is None:
            if r == 0:
                mat = {(i, i): ONE for i in self.ctx.indices}
            else:
                mat = {(i, j): NCPoly.gen(t_sym(i, j, r)) for i in self.ctx.indices for j in self.ctx.indices}
            hit = SuperTensor.embed(self.ctx, 2, slot, mat)
            self._coef_mats[key] = hit
        return hit

    def _l_term(self, p: int, q: int) -> SuperTensor:
        """Coefficient of u^-p v^-q coming from the P-terms of the cleared relation:
        -P T1^(p) T2^(q) + T2^(q) T1^(p) P."""
        hit = self._lterm.get((p, q))
        if hit is None:
            t1, t2 = self._coef_matrix(p, 1), self._coef_matrix(q, 2)
            hit = mul(mul(t2, t1), self._p) - mul(self._p, mul(t1, t2))
            self._lterm[(p, q)] = hit
        return hit

    def _commutation_identity(self, r: int, s: int, i: int, j: int, k: int, l: int) -> NCPoly:
        # Telescoping the u^-p v^-q coefficients of the cleared relation along
        # p + q = r + s - 1 leaves T1^(r)T2^(s) - T2^(s)T1^(r) + sum of P-terms = 0
        # (the boundary term with T^(0) = 1 cancels identically).
        t1, t2 = self._coef_matrix(r, 1), self._coef_matrix(s, 2)
        comm = mul(t1, t2) - mul(t2, t1)
        key = ((i, k), (j, l))
        total = comm.entries.get(key, NCPoly())
        for a in range(r):
            total = total + self._l_term(r - 1 - a, s + a).entries.get(key, NCPoly())
        return total

    def _derive(self, x: int, y: int) -> None:
        _, r, i, j = decode(x)
        _, s, k, l = decode(y)
        if max(r, s) > self.level_bound:
            raise CutoffExceeded(f"level {max(r, s)} above bound {self.level_bound}")
        ident = self._commutation_identity(r, s, i, j, k, l)
        xy, yx = (x, y), (y, x)
        alpha = ident.terms.get(xy, Fraction(0))
        rest = {w: c for w, c in ident.terms.items() if w not in (xy, yx)}
        if x == y:
            if not alpha:
                raise AssertionError("odd square missing from the derived identity")
            corr = self.normal_form(NCPoly._raw({w: -c / alpha for w, c in rest.items()}))
            self._squares[x] = corr.terms
            return
        beta = ident.terms.get(yx, Fraction(0))
        sgn = -1 if (sym_parity(x, self.ctx) & sym_parity(y, self.ctx)) else 1
        if not alpha or beta != -alpha * sgn:
            raise AssertionError(f"unexpected shape of derived identity for {sym_name(x)},{sym_name(y)}")
        corr = self.normal_form(NCPoly._raw({w: -c / alpha for w, c in rest.items()}))
        self._rules[(x, y)] = (sgn, corr.terms)

    def rule(self, x: int, y: int) -> tuple[int, dict[Word, Fraction]]:
        """(s, corr) with x*y = s*y*x + corr, for x > y."""
        hit = self._rules.get((x, y))
        if hit is not None:
            return hit
        fx, fy = family(x), family(y)
        if fx == CENTRAL or fy == CENTRAL:
            return (1, {})
        if fx != fy:
            sgn = -1 if (sym_parity(x, self.ctx) & sym_parity(y, self.ctx)) else 1
            return (sgn, {})
        if fx == YANG2:
            s, corr = self.rule(recopy(x, YANG), recopy(y, YANG))
            return (s, {tuple(recopy(a, YANG2) for a in w): c for w, c in corr.items()})
        with self._lock:
            if (x, y) not in self._rules:
                self._derive(x, y)
        return self._rules[(x, y)]

    def square(self, x: int) -> dict[Word, Fraction]:
        """x*x for an odd generator, as a normal-form polynomial."""
        if family(x) == YANG2:
            corr = self.square(recopy(x, YANG))
            return {tuple(recopy(a, YANG2) for a in w): c for w, c in corr.items()}
        hit = self._squares.get(x)
        if hit is None:
            with self._lock:
                if x not in self._squares:
                    self._derive(x, x)
            hit = self._squares[x]
        return hit

    def commutator_rule(self, x: int, y: int) -> NCPoly:
        """The derived super-commutator [x, y] for generators x > y."""
        if x == y:
            return NCPoly._raw(dict(self.square(x))) * 2
        return NCPoly._raw(dict(self.rule(x, y)[1]))

    # normal form ------------------------------------------------------

    def _is_odd(self, x: int) -> bool:
        return bool(sym_parity(x, self.ctx))

    def _nf(self, w: Word) -> dict[Word, Fraction]:
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        if len(w) <= 1:
            res = {w: Fraction(1)}
        else:
            res = {}
            for v, c in self._nf(w[1:]).items():
                for z, d in self._insert(w[0], v).items():
                    _acc(res, z, c * d)
        self._nf_cache[w] = res
        return res

    def _insert(self, x: int, v: Word) -> dict[Word, Fraction]:
        """Normal form of x*v for a normal word v."""
        if not v or x < v[0]:
            return {(x,) + v: Fraction(1)}
        key = (x, v)
        hit = self._ins_cache.get(key)
        if hit is not None:
            return hit
        y = v[0]
        res: dict[Word, Fraction] = {}
        if x == y:
            if not self._is_odd(x):
                res = {(x,) + v: Fraction(1)}
            else:
                for p, c in self.square(x).items():
                    for z, d in self._nf(p + v[1:]).items():
                        _acc(res, z, c * d)
        else:
            s, corr = self.rule(x, y)
            for z, d in self._insert(x, v[1:]).items():
                for z2, d2 in self._insert(y, z).items():
                    _acc(res, z2, s * d * d2)
            for p, c in corr.items():
                for z, d in self._nf(p + v[1:]).items():
                    _acc(res, z, c * d)
        self._ins_cache[key] = res
        return res

    def normal_form(self, p: NCPoly | Fraction) -> NCPoly:
        if not isinstance(p, NCPoly):
            return NCPoly.const(p)
        out: dict[Word, Fraction] = {}
        for w, c in p.terms.items():
            if any(family(s) == FREE for s in w):
                _acc(out, w, c)
                continue
            for z, d in self._nf(w).items():
                _acc(out, z, c * d)
        return NCPoly._raw(out)

    def is_normal(self, w: Word) -> bool:
        for a, b in zip(w, w[1:]):
            if a > b or (a == b and self._is_odd(a)):
                return False
        return True

    def normal_form_stepwise(self, p: NCPoly, strategy: str = "leftmost", max_steps: int = 200000) -> NCPoly:
        """Plain rewriting without memo tables; used to cross-check confluence.

        ``strategy`` picks the leftmost or rightmost reducible adjacent pair.
        """
        work = dict(p.terms)
        steps = 0
        while True:
            target = None
            for w in work:
                if not self.is_normal(w):
                    target = w
                    break
            if target is None:
                return NCPoly._raw(work)
            steps += 1
            if steps > max_steps:
                raise RuntimeError("rewrite step budget exhausted")
            c = work.pop(target)
            positions = range(len(target) - 1)
            if strategy == "rightmost":
                positions = reversed(positions)
            for pos in positions:
                a, b = target[pos], target[pos + 1]
                if a > b or (a == b and self._is_odd(a)):
                    break
            head, tail = target[:pos], target[pos + 2:]
            if a == b:
                repl = self.square(a)
            else:
                s, corr = self.rule(a, b)
                repl = dict(corr)
                _acc(repl, (b, a), Fraction(s))
            for w, d in repl.items():
                _acc(work, head + w + tail, c * d)


def super_commutator(x: NCPoly, y: NCPoly, rules: RewriteRules) -> NCPoly:
    """xy - (-1)^{|x||y|} yx in normal form."""
    px, py = x.parity(rules.ctx), y.parity(rules.ctx)
    d = x * y - (y * x) * (-1 if px & py else 1)
    return rules.normal_form(d)


def word_parity(w: Word, ctx: SuperContext) -> int:
    return sum(sym_parity(s, ctx) for s in w) % 2


def apply_morphism(p: NCPoly, images: Callable[[int], NCPoly], ctx: SuperContext,
                   anti: bool = False, rules: RewriteRules | None = None) -> NCPoly:
    """Extend symbol images multiplicatively, or reverse-multiplicatively with
    the Koszul sign (-1)^{sum_{a<b} |x_a||x_b|} when ``anti`` is set."""
    cache: dict[int, NCPoly] = {}

    def img(s: int) -> NCPoly:
        hit = cache.get(s)
        if hit is None:
            hit = images(s)
            if hit is None:
                raise KeyError(f"missing image for {sym_name(s)}")
            cache[s] = hit
        return hit

    out = NCPoly()
    for w, c in p.terms.items():
        seq = list(w)
        sgn = 1
        if anti:
            pars = [sym_parity(s, ctx) for s in seq]
            odd_pairs = 0
            count = 0
            for q in pars:
                if q:
                    odd_pairs += count
                    count += 1
            sgn = -1 if odd_pairs % 2 else 1
            seq.reverse()
        term = NCPoly.const(c * sgn)
        for s in seq:
            term = term * img(s)
        if rules is not None:
            term = rules.normal_form(term)
        out = out + term
    return out if rules is None else rules.normal_form(out)


def collect_symbols(polys: Iterable[NCPoly]) -> set[int]:
    out: set[int] = set()
    for p in polys:
        out |= p.symbols()
    return out
