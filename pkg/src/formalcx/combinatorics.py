"""Shuffles, unshuffles and the sign coefficients built from them.

Permutations are stored in one-line notation with 1-based images, so
``images[i-1] == sigma(i)``.
"""

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import factorial, prod


def inversions(seq):
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def parity_sign(seq):
    return -1 if inversions(seq) % 2 else 1


@dataclass(frozen=True)
class SignedPermutation:
    images: tuple
    sign: int

    @classmethod
    def from_images(cls, images):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        return cls(images, parity_sign(images))

    def __len__(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def inverse(self):
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images, 1):
            inv[v - 1] = i
        return SignedPermutation(tuple(inv), self.sign)


def _check_profile(profile):
    profile = tuple(profile)
    if not profile:
        raise ValueError("block profile must be nonempty")
    if any(k < 0 for k in profile):
        raise ValueError(f"block sizes must be non-negative: {profile}")
    return profile


def _block_images(sizes, pool):
    # ordered set partitions of `pool` into consecutive blocks of the given sizes,
    # each block listed increasingly
    if not sizes:
        yield ()
        return
    first, rest = sizes[0], sizes[1:]
    for chosen in combinations(pool, first):
        remaining = [x for x in pool if x not in chosen]
        for tail in _block_images(rest, remaining):
            yield chosen + tail


def block_shuffles(profile):
    """All (k1,...,kn)-shuffles, lexicographic in their images."""
    profile = _check_profile(profile)
    n = sum(profile)
    out = [SignedPermutation.from_images(im)
           for im in _block_images(profile, list(range(1, n + 1)))]
    return sorted(out, key=lambda s: s.images)


def shuffles(p, q):
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    return block_shuffles((p, q))


def unshuffles(p, q):
    return sorted((s.inverse() for s in shuffles(p, q)), key=lambda s: s.images)


def block_unshuffles(profile):
    return sorted((s.inverse() for s in block_shuffles(profile)), key=lambda s: s.images)


def alpha(profile):
    """Signed count of (k1,...,kn)-shuffles; equals 1 on all-zero profiles."""
    return sum(s.sign for s in block_shuffles(profile))


def epsilon_split(primed, doubled):
    """(-1)^(sum_i k''_i (k'_{i+1} + ... + k'_n))."""
    primed, doubled = tuple(primed), tuple(doubled)
    if len(primed) != len(doubled):
        raise ValueError("profiles must have equal length")
    exponent, tail = 0, 0
    for i in range(len(primed) - 1, -1, -1):
        exponent += doubled[i] * tail
        tail += primed[i]
    return -1 if exponent % 2 else 1


def koszul_sign(degrees, order):
    """Sign of rearranging graded factors into the given order.

    ``order[i]`` is the original 0-based position of the factor placed at
    position i.  Only pairs of odd factors that swap contribute.
    """
    odd = [pos for pos in order if degrees[pos] % 2]
    return parity_sign(odd)


def sgn_restricted(sigma, profile):
    """Signature of sigma restricted to the letters j with k_j odd.

    This is the Koszul sign picked up by reordering factors of degrees
    k_1..k_n into the order k_sigma(1), ..., k_sigma(n).
    """
    profile = tuple(profile)
    images = sigma.images if isinstance(sigma, SignedPermutation) else tuple(sigma)
    if len(images) != len(profile):
        raise ValueError("permutation size does not match profile length")
    return koszul_sign(profile, [i - 1 for i in images])


def multiset_counts(indices):
    """Return (prod n_i!, prod n_i) over the multiplicities n_i of the multiset."""
    mult = Counter(indices).values()
    return prod(factorial(n) for n in mult), prod(mult)


def multiset_factorial(indices):
    return multiset_counts(indices)[0]


def set_partitions(items):
    """Unordered set partitions, blocks sorted by their first element."""
    items = list(items)
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        # head is the smallest element, so it opens a new first block or joins one
        yield ((head,),) + part
        for i, block in enumerate(part):
            merged = (head,) + block
            yield tuple(sorted(part[:i] + (merged,) + part[i + 1:], key=lambda b: b[0]))


def compositions(n):
    """Ordered sequences of positive integers summing to n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for tail in compositions(n - first):
            yield (first,) + tail


def profiles(n, total_max):
    """All length-n profiles of non-negative integers with sum <= total_max."""
    def rec(n, budget):
        if n == 0:
            yield ()
            return
        for k in range(budget + 1):
            for tail in rec(n - 1, budget - k):
                yield (k,) + tail
    yield from rec(n, total_max)


def splittings(profile):
    """All pairs (k', k'') with k' + k'' = profile entrywise."""
    def rec(ks):
        if not ks:
            yield (), ()
            return
        for tail1, tail2 in rec(ks[1:]):
            for a in range(ks[0] + 1):
                yield (a,) + tail1, (ks[0] - a,) + tail2
    return sorted(rec(tuple(profile)))
