"""Test fixtures - small texts and helpers shared by the index tests.

Sizes are kept small so every index kind builds in well under a second with self-checks on.
"""

import random

from kmix.strings import ModifiedFragment

BANANA = b"banana"

# Periodic enough to produce several runs and a non-trivial fragment trie.
FRAGMENT_TEXT = b"abaababaabaab"

# (start, end) pairs over FRAGMENT_TEXT; "aab" repeats, so terminals are shared.
FRAGMENT_SPANS = [(0, 13), (1, 6), (2, 5), (3, 8), (5, 10), (7, 10), (8, 13), (10, 13)]

# Over FRAGMENT_TEXT; "baa" (entry 1) and "b" (entry 2) are not canonical and extend to
# "baaba" and "ba" along the edge of "baabaab".
CANONICAL_SPANS = [(0, 13), (1, 4), (4, 5), (6, 13), (2, 5), (3, 8), (7, 10), (10, 13)]


def fragments(spans=FRAGMENT_SPANS):
    return [ModifiedFragment(s, e) for s, e in spans]


def random_text(n, sigma, seed):
    rng = random.Random(seed)
    letters = bytes(range(ord("a"), ord("a") + sigma))
    return bytes(rng.choice(letters) for _ in range(n))


def patterns_from(text, count, lengths, k, seed):
    """Substrings of `text` with up to k substitutions, mixed with uniform-random strings."""
    rng = random.Random(seed)
    letters = bytes(sorted(set(text)))
    lo, hi = lengths
    out = []
    for i in range(count):
        m = rng.randint(lo, min(hi, len(text)))
        if i % 3 == 2:
            out.append(bytes(rng.choice(letters) for _ in range(m)))
            continue
        start = rng.randrange(len(text) - m + 1)
        chunk = bytearray(text[start : start + m])
        for _ in range(rng.randint(0, k)):
            chunk[rng.randrange(m)] = rng.choice(letters)
        out.append(bytes(chunk))
    return out
