"""Symmetric group combinatorics: words, lengths, parabolics, RSK, rainbows.

Conventions, fixed once:
  * permutations are 0-based one-line tuples, w[i] = image of position i;
  * composition is (v * w)(i) = v(w(i)), so words multiply left to right
    with the rightmost letter acting first;
  * simple transpositions s_i (1 <= i <= n-1) swap positions i, i+1.

Two-sided Kazhdan-Lusztig cells are detected through RSK shapes, which
classify them in type A; no cell machinery beyond RSK lives here.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def simple(i: int, n: int) -> Perm:
    """s_i swapping positions i, i+1 (1-based index)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"simple index {i} out of range for S_{n}")
    w = list(range(n))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def compose(v: Perm, w: Perm) -> Perm:
    """(v * w)(i) = v(w(i))."""
    if len(v) != len(w):
        raise ValueError("size mismatch")
    return tuple(v[w[i]] for i in range(len(w)))


def inverse(w: Perm) -> Perm:
    inv = [0] * len(w)
    for i, wi in enumerate(w):
        inv[wi] = i
    return tuple(inv)


def length(w: Perm) -> int:
    """Coxeter length = inversion count."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def is_involution(w: Perm) -> bool:
    return compose(w, w) == identity_perm(len(w))


def from_word(word: list[int], n: int) -> Perm:
    w = identity_perm(n)
    for i in word:
        w = compose(w, simple(i, n))
    return w


def reduced_word(w: Perm) -> list[int]:
    """Deterministic reduced word via smallest right-descent stripping."""
    w = tuple(w)
    word: list[int] = []
    while True:
        desc = next((i for i in range(len(w) - 1) if w[i] > w[i + 1]), None)
        if desc is None:
            break
        word.append(desc + 1)
        w = compose(w, simple(desc + 1, len(w)))
    word.reverse()
    return word


@dataclass(frozen=True)
class WordOps:
    perm: Perm
    length: int
    reduced: tuple[int, ...]


def word_ops(word_or_perm, n: int | None = None) -> WordOps:
    """Resolve a generator word or permutation into (perm, length, reduced word)."""
    if isinstance(word_or_perm, (list, tuple)) and (not word_or_perm or isinstance(word_or_perm[0], int)) and n is not None:
        w = from_word(list(word_or_perm), n)
    else:
        w = tuple(word_or_perm)
    return WordOps(perm=w, length=length(w), reduced=tuple(reduced_word(w)))


# -- parabolic subgroups -----------------------------------------------------

ParabolicSet = frozenset


def check_parabolic(J, n: int) -> frozenset:
    J = frozenset(J)
    if any(not 1 <= i <= n - 1 for i in J):
        raise ValueError(f"parabolic set {sorted(J)} invalid for S_{n}")
    return J


def blocks(J, n: int) -> list[list[int]]:
    """Connected variable blocks of the parabolic: s_i joins positions i, i+1."""
    J = check_parabolic(J, n)
    out: list[list[int]] = []
    current = [1]
    for pos in range(1, n):
        if pos in J:
            current.append(pos + 1)
        else:
            out.append(current)
            current = [pos + 1]
    out.append(current)
    return out


def longest(J, n: int) -> Perm:
    """Longest element of W_J: reversal within each block."""
    w = list(range(n))
    for block in blocks(J, n):
        lo, hi = block[0] - 1, block[-1] - 1
        w[lo:hi + 1] = reversed(w[lo:hi + 1])
    return tuple(w)


def parabolic_order(J, n: int) -> int:
    out = 1
    for block in blocks(J, n):
        for k in range(2, len(block) + 1):
            out *= k
    return out


def parabolic_elements(J, n: int) -> list[Perm]:
    """All of W_J, enumerated blockwise; sizes stay at desk scale."""
    blks = blocks(J, n)
    out = []
    per_block = [list(itertools.permutations(b)) for b in blks]
    for combo in itertools.product(*per_block):
        w = list(range(n))
        for blk, img in zip(blks, combo):
            for pos, val in zip(blk, img):
                w[pos - 1] = val - 1
        out.append(tuple(w))
    return out


def min_coset_lengths(J, I, n: int) -> list[int]:
    """Lengths of minimal representatives of W_J / W_I, with I inside J."""
    I = check_parabolic(I, n)
    J = check_parabolic(J, n)
    if not I <= J:
        raise ValueError("expected I contained in J")
    out = []
    for w in parabolic_elements(J, n):
        if all(w[i - 1] < w[i] for i in I):  # no right descent in I
            out.append(length(w))
    return sorted(out)


def longest_table(n: int) -> dict[Perm, frozenset]:
    """Map longest(J) -> J over all parabolic subsets."""
    table = {}
    for r in range(n):
        for J in itertools.combinations(range(1, n), r):
            table[longest(J, n)] = frozenset(J)
    return table


# -- RSK ----------------------------------------------------------------------

def rsk_shape(w: Perm) -> tuple[int, ...]:
    """Shape of the RSK insertion tableau of the one-line word."""
    rows: list[list[int]] = []
    for x in w:
        item = x
        for row in rows:
            # find first entry strictly larger
            lo, hi = 0, len(row)
            while lo < hi:
                mid = (lo + hi) // 2
                if row[mid] <= item:
                    lo = mid + 1
                else:
                    hi = mid
            if lo == len(row):
                row.append(item)
                item = None
                break
            row[lo], item = item, row[lo]
        if item is not None:
            rows.append([item])
    return tuple(len(r) for r in rows)


# -- rainbow conjugation search ------------------------------------------------

@dataclass(frozen=True)
class RainbowSolution:
    J: frozenset
    w_J: Perm
    sequence: tuple[int, ...]  # innermost conjugating letter first


def rainbow_peels(d: Perm) -> list[int]:
    """Simple letters s with l(sds) = l(d) - 2 and the RSK shape preserved."""
    n = len(d)
    ld = length(d)
    shape = rsk_shape(d)
    out = []
    for i in range(1, n):
        s = simple(i, n)
        conj = compose(s, compose(d, s))
        if length(conj) == ld - 2 and rsk_shape(conj) == shape:
            out.append(i)
    return out


def rainbow_search(d: Perm, max_k: int) -> list[RainbowSolution]:
    """All (J, sequence) with d = s_k..s_1 w_J s_1..s_k, lengths adding and
    every intermediate conjugate staying in the RSK cell of d."""
    if not is_involution(d):
        raise ValueError("rainbow search requires an involution")
    n = len(d)
    table = longest_table(n)
    solutions: list[RainbowSolution] = []

    def recurse(current: Perm, tail: tuple[int, ...]):
        J = table.get(current)
        if J is not None:
            solutions.append(RainbowSolution(J=J, w_J=current, sequence=tail))
        if len(tail) >= max_k:
            return
        for i in rainbow_peels(current):
            s = simple(i, n)
            recurse(compose(s, compose(current, s)), (i,) + tail)

    recurse(d, ())
    solutions.sort(key=lambda sol: (len(sol.sequence), sol.sequence, tuple(sorted(sol.J))))
    return solutions


# The involution in S_9 all of whose length-dropping simple conjugations
# leave its RSK cell.  Its reduced word is the staircase of descending runs
# [5..1][8..2][8..3][7..4][7..5][8,7][8]; published versions of the word drop
# the s_2 of the first run and then fail to be reduced or an involution.
S9_OBSTRUCTED_WORD = (
    5, 4, 3, 2, 1, 8, 7, 6, 5, 4, 3, 2, 8, 7, 6, 5, 4, 3, 7, 6, 5, 4, 7, 6, 5, 8, 7, 8,
)
S9_OBSTRUCTED_WORD_AS_PRINTED = (
    5, 4, 3, 1, 8, 7, 6, 5, 4, 3, 2, 8, 7, 6, 5, 4, 3, 7, 6, 5, 4, 7, 6, 5, 8, 7, 8,
)
