"""Shared fixtures and independent oracles for the test suite."""

from itertools import permutations

import numpy as np
import pytest

from blockenc.ir import circuit_unitary
from blockenc.mcx import ControlSet


def brute_force_assignment(sources, targets):
    """Exhaustive minimum Hamming-cost bijection over the residual sets."""
    sources = sorted(sources)
    targets = sorted(targets)
    common = set(sources) & set(targets)
    rs = [s for s in sources if s not in common]
    rt = [t for t in targets if t not in common]
    best = None
    for perm in permutations(rt):
        cost = sum(sum(a != b for a, b in zip(s, t)) for s, t in zip(rs, perm))
        if best is None or cost < best:
            best = cost
    return best or 0


def brute_force_unrestricted(sources, targets):
    """Minimum cost over all bijections, without forcing identity on overlaps."""
    sources = sorted(sources)
    best = None
    for perm in permutations(sorted(targets)):
        cost = sum(sum(a != b for a, b in zip(s, t)) for s, t in zip(sources, perm))
        if best is None or cost < best:
            best = cost
    return best


def brute_force_reducible(strings: set[str]) -> bool:
    """A set reduces iff some fixed positions + pattern generate exactly it."""
    P = len(next(iter(strings)))
    size = len(strings)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ValueError("size must be a power of two")
    from itertools import combinations, product
    for fixed in combinations(range(P), P - n):
        for bits in product("01", repeat=P - n):
            gen = set()
            free = [i for i in range(P) if i not in fixed]
            for fb in product("01", repeat=len(free)):
                chars = [""] * P
                for i, c in zip(fixed, bits):
                    chars[i] = c
                for i, c in zip(free, fb):
                    chars[i] = c
                gen.add("".join(chars))
            if gen == strings:
                return True
    return False


def composition_unitary(s2: ControlSet, target: int) -> np.ndarray:
    """Ordered product of the individual fully-controlled X unitaries."""
    from blockenc.ir import Circuit
    from blockenc.mcx import control_gate

    gates = tuple(control_gate(s, target) for s in s2.sorted())
    return circuit_unitary(Circuit(s2.P + 1, gates))


def random_control_set(rng: np.random.Generator, P: int, size: int) -> ControlSet:
    picks = rng.choice(1 << P, size=size, replace=False)
    return ControlSet(P, frozenset(format(int(v), f"0{P}b") for v in picks))


def assert_permutation_matrix(u: np.ndarray):
    """Entries exactly 0/1, one per row and column."""
    assert np.all((u == 0) | (u == 1)), "entries must be exactly 0 or 1"
    assert np.all(u.sum(axis=0) == 1)
    assert np.all(u.sum(axis=1) == 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
