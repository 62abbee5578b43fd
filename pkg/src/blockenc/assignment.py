"""Cost-minimal mapping of an arbitrary control set onto a reducible one.

Given control strings that do not collapse to a single gate, pick fixed bit
positions, build the reducible target set that shares the most frequent
sub-pattern on those positions, and match the leftover sources to leftover
targets with minimum total Hamming distance (a linear assignment problem).
All tie-breaking is deterministic and lexicographic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import BadInput
from .mcx import ControlSet


def hamming(a: str, b: str) -> int:
    """Number of differing positions between two equal-length strings."""
    if len(a) != len(b):
        raise BadInput(f"length mismatch: {a!r} vs {b!r}")
    return sum(ca != cb for ca, cb in zip(a, b))


@dataclass(frozen=True)
class FixedIndexPolicy:
    """How to pick the fixed bit positions for a fused gate."""

    kind: str  # "right_ended" | "left_ended" | "explicit"
    bits: frozenset[int] | None = None

    @classmethod
    def right_ended(cls) -> "FixedIndexPolicy":
        return cls("right_ended")

    @classmethod
    def left_ended(cls) -> "FixedIndexPolicy":
        return cls("left_ended")

    @classmethod
    def explicit(cls, bits) -> "FixedIndexPolicy":
        return cls("explicit", frozenset(bits))

    def resolve(self, P: int, set_size: int) -> frozenset[int]:
        """Bit indices to hold fixed for a size-2^n set over P bits."""
        if set_size & (set_size - 1) or set_size == 0:
            raise BadInput(f"set size {set_size} is not a power of two")
        n_free = set_size.bit_length() - 1
        count = P - n_free
        if count < 0:
            raise BadInput("set larger than the full space")
        if self.kind == "right_ended":
            return frozenset(range(count))
        if self.kind == "left_ended":
            return frozenset(range(P - count, P))
        bits = frozenset(self.bits or ())
        if len(bits) != count or any(not 0 <= b < P for b in bits):
            raise BadInput(f"explicit fixed bits {sorted(bits)} do not fit P={P}, size={set_size}")
        return bits


def _substring(s: str, fixed: frozenset[int]) -> str:
    P = len(s)
    return "".join(s[P - 1 - b] for b in sorted(fixed, reverse=True))


def mode_pattern(s2: ControlSet, fixed: frozenset[int] | set[int]) -> str:
    """Most frequent sub-string of s2 on the fixed positions, smallest on ties."""
    fixed = frozenset(fixed)
    counts: dict[str, int] = {}
    for s in s2.sorted():
        key = _substring(s, fixed)
        counts[key] = counts.get(key, 0) + 1
    best = max(counts.values())
    return min(k for k, v in counts.items() if v == best)


def build_target_set(pattern: str, fixed: frozenset[int] | set[int], P: int) -> ControlSet:
    """All strings matching the pattern on the fixed positions; always reducible."""
    fixed = frozenset(fixed)
    if len(pattern) != len(fixed):
        raise BadInput("pattern length must equal the fixed-position count")
    free = sorted(set(range(P)) - fixed, reverse=True)
    base = ["0"] * P
    for c, b in zip(pattern, sorted(fixed, reverse=True)):
        base[P - 1 - b] = c
    out = set()
    for bits in product("01", repeat=len(free)):
        chars = base[:]
        for c, b in zip(bits, free):
            chars[P - 1 - b] = c
        out.add("".join(chars))
    return ControlSet(P, frozenset(out))


@dataclass(frozen=True)
class Bijection:
    """Source-to-target matching, identity on the shared strings."""

    pairs: tuple[tuple[str, str], ...]  # sorted by source
    cost: int

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(p[0] for p in self.pairs)


def _optimal_cost(cost: np.ndarray) -> int:
    if cost.size == 0:
        return 0
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum())


def solve_assignment(s2: ControlSet, s3: ControlSet) -> Bijection:
    """Minimum-Hamming-cost bijection from s2 onto s3.

    Shared strings map to themselves; the rest is solved as a linear
    assignment problem.  Among cost-optimal solutions the one minimal under
    lexicographic ordering of (source, target) pairs is returned.
    """
    if s2.P != s3.P or len(s2.strings) != len(s3.strings):
        raise BadInput("source and target sets must have equal size and width")
    common = s2.strings & s3.strings
    residual_s = sorted(s2.strings - common)
    residual_t = sorted(s3.strings - common)
    pairs = [(s, s) for s in sorted(common)]
    if residual_s:
        cost = np.array([[hamming(a, b) for b in residual_t] for a in residual_s])
        base = _optimal_cost(cost)
        free = list(range(len(residual_t)))
        spent = 0
        for j, src in enumerate(residual_s):
            for k in free:
                rest_rows = list(range(j + 1, len(residual_s)))
                rest_cols = [c for c in free if c != k]
                tail = _optimal_cost(cost[np.ix_(rest_rows, rest_cols)])
                if spent + cost[j, k] + tail == base:
                    pairs.append((src, residual_t[k]))
                    spent += int(cost[j, k])
                    free.remove(k)
                    break
        total = base
    else:
        total = 0
    return Bijection(tuple(sorted(pairs)), total)
