"""Brute-force arithmetic in the center of small symmetric group algebras.

Used as the independent oracle for the projection homomorphism: class
sums are multiplied by explicit convolution over all of S_n, never via
characters or the Sigma-product being validated.
"""

from __future__ import annotations

from functools import cache
from itertools import permutations as iter_permutations

from qplancherel.partitions import Partition, partitions_of, size

Perm = tuple[int, ...]


def perm_cycle_type(p: Perm) -> Partition:
    n = len(p)
    seen = [False] * n
    lengths = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def compose(p: Perm, q: Perm) -> Perm:
    """Composition applying q first: compose(p, q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


@cache
def perms_by_type(n: int) -> dict[Partition, tuple[Perm, ...]]:
    if n > 8:
        raise ValueError("full enumeration capped at n = 8")
    buckets: dict[Partition, list[Perm]] = {mu: [] for mu in partitions_of(n)}
    for p in iter_permutations(range(n)):
        buckets[perm_cycle_type(p)].append(p)
    return {mu: tuple(ps) for mu, ps in buckets.items()}


@cache
def class_representative(mu: Partition) -> Perm:
    """A fixed permutation with the given full cycle type."""
    n = size(mu)
    out = list(range(n))
    start = 0
    for part in mu:
        for t in range(part):
            out[start + t] = start + (t + 1) % part
        start += part
    return tuple(out)


@cache
def class_product(a_type: Partition, b_type: Partition) -> dict[Partition, int]:
    """Structure constants of class sums: coefficient of each class C in
    (sum over A) * (sum over B), computed by explicit convolution.

    coefficient on C = #{(x, y) in A x B : xy = g} for any fixed g in C;
    the smaller class is the one iterated.
    """
    n = size(a_type)
    if size(b_type) != n:
        raise ValueError("class types must pad to the same rank")
    buckets = perms_by_type(n)
    reps = {mu: class_representative(mu) for mu in partitions_of(n)}
    out: dict[Partition, int] = {}
    a_elems, b_elems = buckets[a_type], buckets[b_type]
    if len(a_elems) <= len(b_elems):
        b_set = set(b_elems)
        for mu, g in reps.items():
            count = 0
            for x in a_elems:
                if compose(invert(x), g) in b_set:
                    count += 1
            if count:
                out[mu] = count
    else:
        a_set = set(a_elems)
        for mu, g in reps.items():
            count = 0
            for y in b_elems:
                if compose(g, invert(y)) in a_set:
                    count += 1
            if count:
                out[mu] = count
    return out
