"""Symmetric-group helpers: enumeration, signs, the graded sign and the
pair-folding projection used to index the explicit twisted Berezinian."""

from __future__ import annotations

from itertools import permutations
from typing import Iterator, Sequence

Perm = tuple[int, ...]

MAX_SIZE = 8


def _check(sigma: Sequence[int]) -> None:
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"not a permutation in one-line notation: {tuple(sigma)}")


def enumerate_perms(m: int) -> Iterator[Perm]:
    """All permutations of 1..m in lexicographic order."""
    if not 1 <= m <= MAX_SIZE:
        raise ValueError(f"permutation size {m} outside 1..{MAX_SIZE}")
    return permutations(range(1, m + 1))


def compose(sigma: Sequence[int], tau: Sequence[int]) -> Perm:
    """(sigma o tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t - 1] for t in tau)


def inverse(sigma: Sequence[int]) -> Perm:
    out = [0] * len(sigma)
    for pos, val in enumerate(sigma, start=1):
        out[val - 1] = pos
    return tuple(out)


def inversions(sigma: Sequence[int]) -> int:
    return sum(1 for a in range(len(sigma)) for b in range(a + 1, len(sigma)) if sigma[a] > sigma[b])


def sign(sigma: Sequence[int]) -> int:
    _check(sigma)
    return -1 if inversions(sigma) % 2 else 1


def reduced_word(sigma: Sequence[int]) -> list[int]:
    """Adjacent transpositions s_k (k = 1..m-1) with sigma = s_{k1} s_{k2} ... .

    Obtained by bubble-sorting the one-line notation; the word has length
    equal to the inversion count.
    """
    _check(sigma)
    work = list(sigma)
    word: list[int] = []
    changed = True
    while changed:
        changed = False
        for k in range(len(work) - 1):
            if work[k] > work[k + 1]:
                work[k], work[k + 1] = work[k + 1], work[k]
                word.append(k + 1)
                changed = True
    word.reverse()
    return word


def epsilon(sigma: Sequence[int], parities: Sequence[int]) -> int:
    """Graded sign: product of (-1)^{|k||k+1|} over a reduced word.

    Only homogeneous parity vectors are accepted; for mixed vectors the
    value depends on more than the permutation.
    """
    if len(parities) != len(sigma):
        raise ValueError("parity vector length mismatch")
    if any(p not in (0, 1) for p in parities):
        raise ValueError("parities must be bits")
    if len(set(parities)) > 1:
        raise ValueError("epsilon is only defined here for homogeneous parity vectors")
    cur = list(parities)
    out = 1
    for k in reduced_word(sigma):
        if cur[k - 1] and cur[k]:
            out = -out
        cur[k - 1], cur[k] = cur[k], cur[k - 1]
    return out


def omega(sigma: Sequence[int]) -> Perm:
    """Pair-folding projection S_p -> S_p.

    The outermost input pair (sigma(1), sigma(p)) lands on output positions
    1 and p-1; the next pair inward on positions 2 and p-2, and so on, each
    pair mapped by the folding table relative to the set of labels not yet
    consumed.  The largest label p always ends up last.  For odd p the
    unpaired middle input is the last surviving label and all output slots
    are already filled when it is reached.
    """
    _check(sigma)
    p = len(sigma)
    if p == 1:
        return (1,)
    out = [0] * p
    out[p - 1] = p
    current = list(range(1, p + 1))
    lo, hi = 0, p - 1
    olo, ohi = 0, p - 2
    while lo < hi:
        x, y = sigma[lo], sigma[hi]
        q = len(current)
        if q == 2:
            assert olo == ohi
            out[olo] = current[0]
        else:
            top, second, third = current[-1], current[-2], current[-3]
            if top not in (x, y):
                a, b = y, x
            elif {x, y} == {top, second}:
                a, b = second, third
            elif y == top:
                a, b = second, x
            else:
                a, b = y, second
            out[olo], out[ohi] = a, b
        current.remove(x)
        current.remove(y)
        lo, hi, olo, ohi = lo + 1, hi - 1, olo + 1, ohi - 1
    return tuple(out)
