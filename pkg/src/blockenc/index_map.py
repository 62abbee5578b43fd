"""Shift, delete and insert subcircuits, individually and as fused operations.

A left shift by 2**k increments the matrix register (adding 2**k), realized
as a carry cascade of MCX gates over the top n-k matrix qubits; a right shift
decrements (controls at 0 instead of 1).  Deleting an item in a row flips the
delete qubit under controls on the item slot and the row.  Inserting is a
delete from every row followed by a delete on the wanted rows, which cancels
there.

Fused variants collapse several items or rows into one gate when the control
strings reduce, and otherwise wrap the gate in a coherent permutation that
relocates the strings onto a reducible set first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .assignment import FixedIndexPolicy, build_target_set, mode_pattern, solve_assignment
from .errors import BadInput, BadShift
from .ir import Circuit, Gate, RegisterLayout, embed_gates, mcx
from .mcx import ControlSet, is_reducible
from .permute import PermutationSpec, permute_circuit, permute_inverse, route_permutation


@dataclass(frozen=True)
class ShiftOp:
    """One power-of-two column shift conditioned on a data pattern."""

    pattern: str       # data-register control pattern, may contain X
    direction: str     # "L" | "R"
    amount: int        # power of two, < 2**n


def _cascade_gates(data_pattern: str, direction: str, amount: int,
                   layout: RegisterLayout) -> list[Gate]:
    n = layout.n
    if amount <= 0 or amount & (amount - 1) or amount >= (1 << n):
        raise BadShift(f"shift amount {amount} invalid for n={n}")
    if direction not in ("L", "R"):
        raise BadInput(f"direction must be L or R, got {direction!r}")
    k = amount.bit_length() - 1
    t = "1" if direction == "L" else "0"
    gates = []
    for b in range(n - 1, k - 1, -1):  # matrix bit b, highest first
        matrix = ["X"] * n
        for lower in range(k, b):
            matrix[n - 1 - lower] = t
        target = layout.matrix_qubits[n - 1 - b]
        gates.append(mcx(layout.full_pattern(data=data_pattern,
                                             matrix="".join(matrix)), target))
    return gates


def shift_gates(op: ShiftOp, layout: RegisterLayout) -> Circuit:
    """MCX cascade cyclically shifting the matrix register for matching items."""
    if len(op.pattern) != layout.m:
        raise BadInput("data pattern length must equal the data register size")
    return Circuit(layout.total, tuple(_cascade_gates(op.pattern, op.direction,
                                                      op.amount, layout)))


def _greedy_cubes(strings: list[str]) -> list[str]:
    """Disjoint cover of the strings by sub-cube patterns, largest cube first."""
    from itertools import combinations

    remaining = set(strings)
    width = len(strings[0])
    out = []
    while remaining:
        found = None
        max_f = len(remaining).bit_length() - 1
        for f in range(min(max_f, width), -1, -1):
            cands = []
            for free in combinations(range(width), f):
                groups: dict[str, int] = {}
                for s in remaining:
                    key = "".join("X" if i in free else c for i, c in enumerate(s))
                    groups[key] = groups.get(key, 0) + 1
                cands.extend(k for k, cnt in groups.items() if cnt == (1 << f))
            if cands:
                found = min(cands)
                break
        out.append(found)
        remaining -= {s for s in remaining if _matches(s, found)}
    return out


def _matches(s: str, pattern: str) -> bool:
    return all(p in ("X", c) for c, p in zip(s, pattern))


@dataclass
class SubFusion:
    """One fused gate group: a control pattern, optionally permute-wrapped."""

    control_pattern: str                 # register-local, X on free positions
    permute: Circuit | None = None       # register-local forward permutation
    permute_swaps: int = 0


@dataclass
class FusionPlan:
    """How a set of register patterns is realized as fused gates."""

    mode: str                            # direct | permute | partition | padded | padded-permute
    subgroups: list[SubFusion]
    pads: tuple[str, ...] = ()
    register: str = "data"

    @property
    def permute_gate_count(self) -> int:
        return 2 * sum(g.permute_swaps for g in self.subgroups)

    def core_count(self, core_cost: int) -> int:
        return core_cost * len(self.subgroups)

    def total_count(self, core_cost: int) -> int:
        return self.core_count(core_cost) + self.permute_gate_count


def _permute_subgroup(patterns: list[str], P: int,
                      policy: FixedIndexPolicy) -> SubFusion:
    s2 = ControlSet(P, frozenset(patterns))
    fixed = policy.resolve(P, len(patterns))
    tilde = mode_pattern(s2, fixed)
    s3 = build_target_set(tilde, fixed, P)
    phi = solve_assignment(s2, s3)
    fused = is_reducible(s3).to_pattern()
    plan = route_permutation(phi)
    circ = permute_circuit(PermutationSpec(phi))
    return SubFusion(fused, circ, plan.gate_count)


def plan_fusion(patterns: list[str], P: int, *, zero_slots: tuple[str, ...] = (),
                policy: FixedIndexPolicy | None = None, allow_pad: bool = True,
                allow_permute: bool = True, core_cost: int = 1,
                register: str = "data") -> FusionPlan:
    """Decide how to realize one gate over several control patterns.

    Reducible sets fuse directly.  Irreducible power-of-two sets get a
    permutation wrap.  Other sizes either borrow zero-amplitude slots up to
    the next power of two or fall back to a disjoint cube cover, whichever
    costs fewer gates (ties prefer padding).
    """
    policy = policy or FixedIndexPolicy.right_ended()
    patterns = sorted(patterns)
    size = len(patterns)

    def direct_or_permute(pats: list[str], mode_direct: str, mode_perm: str) -> FusionPlan:
        red = is_reducible(ControlSet(P, frozenset(pats)))
        if red is not None:
            return FusionPlan(mode_direct, [SubFusion(red.to_pattern())], register=register)
        sub = _permute_subgroup(pats, P, policy)
        return FusionPlan(mode_perm, [sub], register=register)

    if size & (size - 1) == 0:
        plan = direct_or_permute(patterns, "direct", "permute")
        if plan.mode == "permute" and not allow_permute:
            cubes = _greedy_cubes(patterns)
            return FusionPlan("partition", [SubFusion(c) for c in cubes], register=register)
        return plan

    partition = FusionPlan("partition",
                           [SubFusion(c) for c in _greedy_cubes(patterns)],
                           register=register)
    need = (1 << size.bit_length()) - size
    if allow_pad and len(zero_slots) >= need:
        pads = tuple(sorted(zero_slots)[:need])
        padded = direct_or_permute(sorted(patterns + list(pads)), "padded", "padded-permute")
        padded.pads = pads
        if padded.mode == "padded-permute" and not allow_permute:
            padded = None
        if padded is not None and padded.total_count(core_cost) <= partition.total_count(core_cost):
            return padded
    return partition


def _wrap(core: list[Gate], sub: SubFusion, layout: RegisterLayout,
          register: str) -> list[Gate]:
    if sub.permute is None or not sub.permute.gates:
        return core
    qmap = layout.data_qubits if register == "data" else layout.matrix_qubits
    fwd = embed_gates(sub.permute.gates, layout.total, list(qmap))
    inv = embed_gates(permute_inverse(sub.permute).gates, layout.total, list(qmap))
    return fwd + core + inv


def combined_shift(items: ControlSet, direction: str, amount: int,
                   layout: RegisterLayout, *, zero_slots: tuple[str, ...] = (),
                   policy: FixedIndexPolicy | None = None,
                   allow_pad: bool = True) -> Circuit:
    """Shift several items at once with one fused cascade where possible.

    The unitary equals the ordered product of the per-item shifts over every
    member, including any borrowed zero slots.
    """
    if items.P != layout.m:
        raise BadInput("item patterns must cover the data register")
    plan = plan_fusion(items.sorted(), layout.m, zero_slots=zero_slots,
                       policy=policy or FixedIndexPolicy.right_ended(),
                       allow_pad=allow_pad,
                       core_cost=layout.n - (amount.bit_length() - 1))
    gates: list[Gate] = []
    for sub in plan.subgroups:
        core = _cascade_gates(sub.control_pattern, direction, amount, layout)
        gates.extend(_wrap(core, sub, layout, "data"))
    return Circuit(layout.total, tuple(gates))


def delete_rows_plan(rows, layout: RegisterLayout,
                     policy: FixedIndexPolicy | None = None) -> FusionPlan:
    """Fusion plan over row index patterns on the matrix register."""
    policy = policy or FixedIndexPolicy.left_ended()
    dim = 1 << layout.n
    rows = sorted(set(rows))
    if any(not 0 <= r < dim for r in rows):
        raise BadInput("row index outside the matrix register")
    if len(rows) == dim:
        return FusionPlan("direct", [SubFusion("X" * layout.n)], register="matrix")
    patterns = [format(r, f"0{layout.n}b") for r in rows]
    return plan_fusion(patterns, layout.n, policy=policy, allow_pad=False,
                       core_cost=1, register="matrix")


def delete_gates(data_pattern: str, rows, layout: RegisterLayout,
                 policy: FixedIndexPolicy | None = None) -> Circuit:
    """Flip the delete qubit for one data pattern on each listed row.

    Reducible row sets collapse to a single gate; irreducible power-of-two
    sets are wrapped in a row permutation; other sizes use a cube cover.
    """
    if not rows:
        return Circuit(layout.total)
    plan = delete_rows_plan(rows, layout, policy)
    gates: list[Gate] = []
    for sub in plan.subgroups:
        core = [mcx(layout.full_pattern(data=data_pattern, matrix=sub.control_pattern),
                    layout.del_qubit)]
        gates.extend(_wrap(core, sub, layout, "matrix"))
    return Circuit(layout.total, tuple(gates))


def insert_gates(data_pattern: str, rows, layout: RegisterLayout,
                 policy: FixedIndexPolicy | None = None) -> Circuit:
    """Insert one item into the listed rows: delete everywhere, then un-delete.

    The leading gate flips the delete qubit with no matrix controls; the
    trailing deletes flip it back on the wanted rows.
    """
    if not rows:
        return Circuit(layout.total)
    all_rows = mcx(layout.full_pattern(data=data_pattern), layout.del_qubit)
    tail = delete_gates(data_pattern, rows, layout, policy)
    return Circuit(layout.total, (all_rows,) + tail.gates)
