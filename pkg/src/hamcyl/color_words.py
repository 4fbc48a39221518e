"""Colour words of fixed length and their Catalan counts.

A colour word lists the class labels met while scanning one roll class of
a column.  Three rules shape it:

* P1: the first occurrences of 2, 3, 4, ... come in that order;
* P2: no scattered pattern a..b..a..b with a != b;
* P3: no scattered pattern a..1..a with a != 1.

``P12`` words use letters 2..k+1; ``P123`` words use 1..k+1 and obey all
three rules; ``P123_with_one`` keeps the P123 words containing a 1.
"""

from __future__ import annotations

from enum import Enum
from math import comb
from typing import Iterator


class Variant(str, Enum):
    P12 = "P12"
    P123 = "P123"
    P123_WITH_ONE = "P123_with_one"


Word = tuple[int, ...]


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def _contains(word: Word, pattern: Word) -> bool:
    """True if ``pattern`` occurs in ``word`` as a scattered subsequence."""
    k = 0
    for x in word:
        if x == pattern[k]:
            k += 1
            if k == len(pattern):
                return True
    return False


def iter_words(k: int, variant: Variant | str) -> Iterator[Word]:
    """Words of length ``k`` in lexicographic order, built letter by letter.

    P2 is tracked with a stack of letters that may still recur: reusing a
    letter closes every letter opened after it.  P3 blocks every letter seen
    before the latest 1.
    """
    if k < 0:
        raise ValueError("word length must be non-negative")
    variant = Variant(variant)
    with_one = variant is not Variant.P12
    word: list[int] = []

    def rec(next_new: int, stack: tuple[int, ...], blocked: frozenset[int]) -> Iterator[Word]:
        if len(word) == k:
            if variant is Variant.P123_WITH_ONE and 1 not in word:
                return
            yield tuple(word)
            return
        letters = ([1] if with_one else []) + list(range(2, next_new + 1))
        for x in letters:
            if x == next_new:
                nxt, st = next_new + 1, stack + (x,)
            elif x == 1 and 1 not in stack and 1 not in word:
                nxt, st = next_new, stack + (1,)
            elif x in stack and x not in blocked:
                nxt, st = next_new, stack[: stack.index(x) + 1]
            else:
                continue
            bl = frozenset(word) - {1} if x == 1 else blocked
            word.append(x)
            yield from rec(nxt, st, bl)
            word.pop()

    yield from rec(2, (), frozenset())


def generate_words(k: int, variant: Variant | str) -> set[Word]:
    return set(iter_words(k, variant))


def count_words(k: int, variant: Variant | str) -> int:
    return sum(1 for _ in iter_words(k, variant))


def expected_count(k: int, variant: Variant | str) -> int:
    """Catalan value the count should attain."""
    variant = Variant(variant)
    if variant is Variant.P12:
        return catalan(k)
    if variant is Variant.P123:
        return catalan(k + 1)
    return catalan(k + 1) - catalan(k)


def satisfies(word: Word, variant: Variant | str) -> bool:
    """Direct (non-incremental) check of the variant's rules on a whole word."""
    variant = Variant(variant)
    k = len(word)
    lo = 2 if variant is Variant.P12 else 1
    if any(not lo <= x <= k + 1 for x in word):
        return False
    nxt = 2
    for x in word:
        if x == nxt:
            nxt += 1
        elif x > nxt:
            return False
    letters = set(word)
    if any(a != b and _contains(word, (a, b, a, b)) for a in letters for b in letters):
        return False
    if variant is not Variant.P12 and any(_contains(word, (a, 1, a)) for a in letters - {1}):
        return False
    if variant is Variant.P123_WITH_ONE and 1 not in letters:
        return False
    return True
