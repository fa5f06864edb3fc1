from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from superyangian import perm


def perms(max_m=6):
    return st.integers(1, max_m).flatmap(lambda m: st.permutations(list(range(1, m + 1))).map(tuple))


def pairs(max_m=5):
    return st.integers(1, max_m).flatmap(
        lambda m: st.tuples(st.permutations(list(range(1, m + 1))).map(tuple),
                            st.permutations(list(range(1, m + 1))).map(tuple)))


@given(pairs())
def test_sign_is_a_homomorphism(st_pair):
    s, t = st_pair
    assert perm.sign(perm.compose(s, t)) == perm.sign(s) * perm.sign(t)


@given(perms())
def test_inverse_composes_to_identity(s):
    ident = tuple(range(1, len(s) + 1))
    assert perm.compose(s, perm.inverse(s)) == ident
    assert perm.compose(perm.inverse(s), s) == ident


@given(perms())
def test_reduced_word_rebuilds_the_permutation(s):
    word = perm.reduced_word(s)
    assert len(word) == perm.inversions(s)
    acc = tuple(range(1, len(s) + 1))
    for k in word:
        swap = list(range(1, len(s) + 1))
        swap[k - 1], swap[k] = swap[k], swap[k - 1]
        acc = perm.compose(acc, tuple(swap))
    assert acc == tuple(s)


@given(perms(5))
def test_epsilon_on_homogeneous_parities(s):
    assert perm.epsilon(s, [1] * len(s)) == perm.sign(s)
    assert perm.epsilon(s, [0] * len(s)) == 1


def test_epsilon_examples():
    assert perm.epsilon((2, 1), (1, 1)) == -1
    assert perm.epsilon((2, 1), (0, 0)) == 1
    assert perm.epsilon((2, 3, 1), (1, 1, 1)) == 1


def test_epsilon_rejects_mixed_parities():
    with pytest.raises(ValueError):
        perm.epsilon((2, 1), (0, 1))


def test_enumeration_is_lexicographic_and_complete():
    got = list(perm.enumerate_perms(4))
    assert got == sorted(got) and len(set(got)) == 24
    with pytest.raises(ValueError):
        perm.enumerate_perms(0)


def test_sign_rejects_non_permutations():
    with pytest.raises(ValueError):
        perm.sign((1, 1, 2))


def test_omega_examples():
    assert perm.omega((1, 2)) == perm.omega((2, 1))
    assert perm.omega((1, 2, 3)) == (2, 1, 3)
    assert perm.omega((4, 3, 2, 1)) == (1, 2, 3, 4)


@pytest.mark.parametrize("p", range(2, 7))
def test_omega_is_total_and_ends_in_the_top_label(p):
    for s in permutations(range(1, p + 1)):
        out = perm.omega(s)
        assert sorted(out) == list(range(1, p + 1))
        assert out[-1] == p
