from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from superyangian.tensor import (SuperContext, SuperTensor, a_operator, antisymmetrizer, apply_to_vector, frak_i,
                                 fused_r_product, g0_matrix, mul, numeric_inverse, partial_supertrace,
                                 partial_transpose_iota, partial_transpose_t, r_matrix, super_permutation,
                                 supertrace, symmetrizer)

SHAPES = [(1, 1), (1, 2), (2, 1), (2, 2)]
EVEN_N = [(1, 2), (2, 2), (0, 2), (3, 0)]
nonzero = st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(lambda x: x != 0)


def sparse_tensor(ctx, m, draw_entries):
    return SuperTensor(ctx, m, draw_entries)


@st.composite
def random_matrix(draw, ctx):
    idx = list(ctx.indices)
    keys = draw(st.lists(st.tuples(st.sampled_from(idx), st.sampled_from(idx)), max_size=6, unique=True))
    vals = draw(st.lists(nonzero, min_size=len(keys), max_size=len(keys)))
    return SuperTensor(ctx, 1, {((i,), (j,)): v for (i, j), v in zip(keys, vals)})


@pytest.mark.parametrize("M,N", SHAPES)
@given(u=nonzero, v=nonzero)
def test_yang_baxter(M, N, u, v):
    if u + v == 0:
        return
    ctx = SuperContext(M, N)
    lhs = mul(mul(r_matrix(ctx, 3, 1, 2, u), r_matrix(ctx, 3, 1, 3, u + v)), r_matrix(ctx, 3, 2, 3, v))
    rhs = mul(mul(r_matrix(ctx, 3, 2, 3, v), r_matrix(ctx, 3, 1, 3, u + v)), r_matrix(ctx, 3, 1, 2, u))
    assert lhs == rhs


def test_ybe_fixed_point():
    ctx = SuperContext(1, 1)
    lhs = mul(mul(r_matrix(ctx, 3, 1, 2, 2), r_matrix(ctx, 3, 1, 3, 7)), r_matrix(ctx, 3, 2, 3, 5))
    rhs = mul(mul(r_matrix(ctx, 3, 2, 3, 5), r_matrix(ctx, 3, 1, 3, 7)), r_matrix(ctx, 3, 1, 2, 2))
    assert lhs == rhs


def test_permutation_on_basis_vectors():
    ctx = SuperContext(1, 1)
    P = super_permutation(ctx, 2, 1, 2)
    assert apply_to_vector(P, (1, 2)) == {(2, 1): 1}
    assert apply_to_vector(P, (2, 2)) == {(2, 2): -1}
    assert mul(P, P) == SuperTensor.identity(ctx, 2)


def test_r_matrix_unitarity_value():
    ctx = SuperContext(1, 2)
    prod = mul(r_matrix(ctx, 2, 1, 2, 3), r_matrix(ctx, 2, 1, 2, -3))
    assert prod == SuperTensor.identity(ctx, 2).scale(Fraction(8, 9))
    with pytest.raises(ZeroDivisionError):
        r_matrix(ctx, 2, 1, 2, 0)


@pytest.mark.parametrize("M,N", [(1, 2), (2, 2), (0, 2)])
@given(u=nonzero)
def test_r_iota_unitarity(M, N, u):
    if u == M - N:
        return
    ctx = SuperContext(M, N)
    a = partial_transpose_iota(r_matrix(ctx, 2, 1, 2, u), 1)
    b = partial_transpose_iota(r_matrix(ctx, 2, 1, 2, -u + M - N), 1)
    assert mul(a, b) == SuperTensor.identity(ctx, 2)


def test_transpose_follows_matrix_unit_formula():
    # E_ij -> (-1)^{|i||j|+|i|} E_ji: the sign comes from the row parity
    ctx = SuperContext(1, 1)
    e12 = SuperTensor.unit(ctx, 1, 2, 1, 1)
    e21 = SuperTensor.unit(ctx, 2, 1, 1, 1)
    assert partial_transpose_t(e12, 1) == e21
    assert partial_transpose_t(e21, 1) == e12.scale(-1)
    e22 = SuperTensor.unit(ctx, 2, 2, 1, 1)
    assert partial_transpose_t(e22, 1) == e22


@pytest.mark.parametrize("M,N", EVEN_N)
def test_iota_is_an_involution(M, N):
    ctx = SuperContext(M, N)
    x = SuperTensor(ctx, 1, {((i,), (j,)): Fraction(i + 3 * j, 7) for i in ctx.indices for j in ctx.indices})
    assert partial_transpose_iota(partial_transpose_iota(x, 1), 1) == x
    one = SuperTensor.identity(ctx, 1)
    assert partial_transpose_iota(one, 1) == one


def test_p_transpose_identity():
    ctx = SuperContext(1, 2)
    P = super_permutation(ctx, 2, 1, 2)
    Pt1 = partial_transpose_t(P, 1)
    J1 = SuperTensor.embed(ctx, 2, 1, {(i, i): Fraction((-1) ** ctx.par[i]) for i in ctx.indices})
    assert mul(P, Pt1) == mul(J1, Pt1)
    assert mul(P, Pt1) == mul(partial_transpose_t(P, 2), P)


def test_g0_intertwines_transposed_permutations():
    ctx = SuperContext(1, 2)
    G = g0_matrix(ctx)
    g1, g2 = SuperTensor.embed(ctx, 2, 1, G), SuperTensor.embed(ctx, 2, 2, G)
    P = super_permutation(ctx, 2, 1, 2)
    assert mul(mul(g1, partial_transpose_t(P, 1)), g2) == mul(mul(g2, partial_transpose_t(P, 2)), g1)
    assert mul(mul(P, g1), g2) == mul(mul(g2, g1), P)


def test_supertraces():
    ctx = SuperContext(1, 1)
    assert supertrace(SuperTensor.identity(ctx, 1)) == 0
    assert supertrace(SuperTensor.identity(SuperContext(2, 1), 1)) == 1
    P = super_permutation(ctx, 2, 1, 2)
    assert partial_supertrace(P, 2) == SuperTensor.identity(ctx, 1)
    e = mul(SuperTensor.unit(ctx, 1, 1, 1, 2), SuperTensor.unit(ctx, 2, 2, 2, 2))
    assert supertrace(e) == -1


@pytest.mark.parametrize("M,N", SHAPES)
@pytest.mark.parametrize("m", [2, 3, 4])
def test_group_idempotents(M, N, m):
    ctx = SuperContext(M, N)
    for build in (antisymmetrizer, symmetrizer):
        x = build(ctx, m)
        assert mul(x, x) == x.scale(factorial(m))


def test_antisymmetrizer_two_slots():
    ctx = SuperContext(2, 1)
    assert antisymmetrizer(ctx, 2) == SuperTensor.identity(ctx, 2) - super_permutation(ctx, 2, 1, 2)
    assert apply_to_vector(antisymmetrizer(ctx, 2), (1, 1)) == {}


@pytest.mark.parametrize("M,N", SHAPES)
@pytest.mark.parametrize("m", [2, 3, 4])
def test_fusion_formula(M, N, m):
    ctx = SuperContext(M, N)
    assert fused_r_product(ctx, [Fraction(m - i) for i in range(1, m + 1)]) == antisymmetrizer(ctx, m)
    assert fused_r_product(ctx, [Fraction(i) for i in range(1, m + 1)]) == symmetrizer(ctx, m)


@pytest.mark.parametrize("M,N", SHAPES)
def test_projectors(M, N):
    ctx = SuperContext(M, N)
    I = frak_i(ctx)
    A = a_operator(ctx)
    assert mul(I, I) == I
    assert mul(I, A) == mul(A, I)


def test_antisymmetrizer_on_permuted_even_vectors():
    ctx = SuperContext(3, 0)
    G = antisymmetrizer(ctx, 3)
    base = apply_to_vector(G, (1, 2, 3))
    for sigma, sgn in (((2, 1, 3), -1), ((2, 3, 1), 1), ((3, 2, 1), -1)):
        got = apply_to_vector(G, sigma)
        assert got == {k: sgn * v for k, v in base.items()}


@given(st.data())
def test_mul_is_associative(data):
    ctx = SuperContext(1, 2)
    x, y, z = (data.draw(random_matrix(ctx)) for _ in range(3))
    assert mul(mul(x, y), z) == mul(x, mul(y, z))


def test_numeric_inverse():
    ctx = SuperContext(1, 2)
    G = g0_matrix(ctx)
    Gi = numeric_inverse(G, 3)
    prod = mul(SuperTensor.embed(ctx, 1, 1, G), SuperTensor.embed(ctx, 1, 1, Gi))
    assert prod == SuperTensor.identity(ctx, 1)
    with pytest.raises(ZeroDivisionError):
        numeric_inverse({(1, 1): Fraction(1)}, 2)


def test_bad_context():
    with pytest.raises(ValueError):
        SuperContext(0, 0)
    with pytest.raises(ValueError):
        SuperContext(1, 1).theta(1)
