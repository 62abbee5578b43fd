"""End-to-end compilation: load amplitudes, relocate items, unload.

Stage order is frozen: state preparation, then all column shifts (grouped by
direction and power of two), then deletions, then insertions, then the
adjoint loader.  Gates within the shift stage commute, as do all gates
targeting the delete qubit, so the grouping never changes the unitary; it
only changes how many gates realize it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from .assignment import Bijection, FixedIndexPolicy, hamming
from .errors import BadInput
from .index_map import FusionPlan, _cascade_gates, _greedy_cubes, _wrap, delete_rows_plan, plan_fusion
from .ingest import DataVector, OperationPlan, SignVector, SparseMatrix, analyze
from .ir import Circuit, Gate, RegisterLayout, embed_gates, mcx
from .permute import PermutationSpec, permute_circuit
from .state_prep import synthesize_prep, synthesize_unprep

log = logging.getLogger("blockenc.pipeline")


@dataclass(frozen=True)
class CompileConfig:
    tolerance: float = 1e-9
    strategy: str | int = "auto"
    data_policy: FixedIndexPolicy = field(default_factory=FixedIndexPolicy.right_ended)
    matrix_policy: FixedIndexPolicy = field(default_factory=FixedIndexPolicy.left_ended)
    zero_pad: bool = True
    skip_index_map: bool = False
    defer_restore: bool = False
    naive: bool = False


@dataclass(frozen=True)
class EncodedCircuit:
    circuit: Circuit
    alpha: float
    layout: RegisterLayout
    stats: dict
    plan: OperationPlan
    data: DataVector
    signs: SignVector
    config: CompileConfig


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def _shift_group_order(plan: OperationPlan) -> list[tuple[str, int, list]]:
    """(direction, power) groups: direction blocks by first item, powers ascending."""
    groups: dict[tuple[str, int], list] = {}
    for it in plan.items:
        if it.direction:
            for p in it.powers:
                groups.setdefault((it.direction, p), []).append(it)
    dir_first = {}
    for (d, _), members in groups.items():
        first = min(m.index for m in members)
        dir_first[d] = min(dir_first.get(d, first), first)
    ordered = sorted(groups, key=lambda key: (dir_first[key[0]], key[0], key[1]))
    return [(d, p, groups[(d, p)]) for d, p in ordered]


def _delete_groups(items) -> list[tuple[tuple[int, ...], list]]:
    """Items sharing an identical deletion row set fuse into one group."""
    groups: dict[tuple[int, ...], list] = {}
    for it in items:
        groups.setdefault(it.delete_rows, []).append(it)
    return sorted(groups.items(), key=lambda kv: min(i.index for i in kv[1]))


def _cube_patterns(items, width: int) -> list[str]:
    if width == 0:
        return [""]
    return _greedy_cubes(sorted(it.pattern for it in items))


class _Assembler:
    """Builds the index-mapping gates plus per-group statistics."""

    def __init__(self, plan: OperationPlan, data: DataVector, layout: RegisterLayout,
                 config: CompileConfig):
        self.plan = plan
        self.layout = layout
        self.config = config
        self.cur = {_bits(v, layout.m): _bits(v, layout.m)
                    for v in range(1 << layout.m)}
        self.slots = tuple(_bits(v, layout.m)
                           for v in range(data.s, 1 << layout.m))
        self.gates: list[Gate] = []
        self.naive_gates: list[Gate] = []
        self.permute_count = 0
        self.shift_groups: list[dict] = []
        self.delete_groups: list[dict] = []
        self.insert_stats: dict = {}

    # -- deferred-restore bookkeeping ---------------------------------------

    def _apply_permute(self, circuit: Circuit) -> None:
        """Track where every data basis state ends up after unrestored swaps."""
        inv = {v: k for k, v in self.cur.items()}
        for g in circuit.gates:
            pos = g.target
            a = list(g.pattern)
            a[pos] = "0"
            b = list(g.pattern)
            b[pos] = "1"
            sa, sb = "".join(a), "".join(b)
            oa, ob = inv.get(sa), inv.get(sb)
            if oa is not None:
                self.cur[oa] = sb
                inv[sb] = oa
            if ob is not None:
                self.cur[ob] = sa
                inv[sa] = ob

    def _emit_fused(self, fp: FusionPlan, core_builder) -> tuple[int, list[int]]:
        """Append a fusion plan's gates; returns (mcx_count, core data widths)."""
        count = 0
        widths = []
        for sub in fp.subgroups:
            core = core_builder(sub.control_pattern)
            widths.append(sum(c != "X" for c in sub.control_pattern))
            if self.config.defer_restore and sub.permute is not None and fp.register == "data":
                fwd = embed_gates(sub.permute.gates, self.layout.total,
                                  list(self.layout.data_qubits))
                self.gates.extend(fwd)
                self.gates.extend(core)
                self._apply_permute(sub.permute)
                count += len(fwd) + len(core)
                self.permute_count += len(fwd)
            else:
                wrapped = _wrap(core, sub, self.layout, fp.register)
                self.gates.extend(wrapped)
                count += len(wrapped)
                self.permute_count += len(wrapped) - len(core)
        return count, widths

    # -- stages --------------------------------------------------------------

    def shifts(self) -> None:
        m, n = self.layout.m, self.layout.n
        for direction, power, members in _shift_group_order(self.plan):
            k = power.bit_length() - 1
            patterns = sorted(self.cur[it.pattern] for it in members)
            slots_now = tuple(sorted(self.cur[s] for s in self.slots))
            fp = plan_fusion(patterns, m, zero_slots=slots_now,
                             policy=self.config.data_policy,
                             allow_pad=self.config.zero_pad, core_cost=n - k)
            builder = lambda pat, d=direction, p=power: _cascade_gates(pat, d, p, self.layout)
            fused_count, widths = self._emit_fused(fp, builder)
            log.debug("shift %s%d: %d members, %s, %d gates",
                      direction, power, len(patterns) + len(fp.pads), fp.mode, fused_count)
            naive_members = patterns + list(fp.pads)
            for pat in naive_members:
                self.naive_gates.extend(_cascade_gates(pat, direction, power, self.layout))
            self.shift_groups.append({
                "op": f"{direction}{power}",
                "items": [it.index for it in sorted(members, key=lambda i: i.index)],
                "pads": [self._slot_index(p) for p in fp.pads],
                "mode": fp.mode,
                "fused_mcx": fused_count,
                "naive_mcx": len(naive_members) * (n - k),
                "fused_data_width": max(widths) if widths else 0,
                "naive_data_width": m,
            })

    def _slot_index(self, current_pattern: str) -> int:
        for orig, cur in self.cur.items():
            if cur == current_pattern:
                return int(orig, 2)
        raise BadInput("unknown pad slot")  # pragma: no cover

    def deletes(self) -> None:
        items = [it for it in self.plan.items if it.mode == "delete" and it.delete_rows]
        for rows, members in _delete_groups(items):
            row_plan = delete_rows_plan(rows, self.layout, self.config.matrix_policy)
            fused_count = 0
            for cube in _cube_patterns([replace(it, pattern=self.cur[it.pattern])
                                        for it in members], self.layout.m):
                builder = lambda pat, c=cube: [
                    mcx(self.layout.full_pattern(data=c, matrix=pat),
                        self.layout.del_qubit)]
                count, _ = self._emit_fused(row_plan, builder)
                fused_count += count
            for it in members:
                for r in sorted(rows):
                    self.naive_gates.append(
                        mcx(self.layout.full_pattern(data=self.cur[it.pattern],
                                                     matrix=format(r, f"0{self.layout.n}b")),
                            self.layout.del_qubit))
            self.delete_groups.append({
                "rows": list(rows),
                "items": [it.index for it in members],
                "mode": row_plan.mode,
                "fused_mcx": fused_count,
                "naive_mcx": len(members) * len(rows),
            })

    def inserts(self) -> None:
        items = [it for it in self.plan.items if it.mode == "insert" and it.insert_rows]
        if not items:
            return
        fused_count = 0
        current = [replace(it, pattern=self.cur[it.pattern]) for it in items]
        for cube in _cube_patterns(current, self.layout.m):
            self.gates.append(mcx(self.layout.full_pattern(data=cube),
                                  self.layout.del_qubit))
            fused_count += 1
        for it in current:
            self.naive_gates.append(mcx(self.layout.full_pattern(data=it.pattern),
                                        self.layout.del_qubit))
        row_stats = []
        for rows, members in _delete_groups(
                [replace(it, delete_rows=it.insert_rows) for it in current]):
            row_plan = delete_rows_plan(rows, self.layout, self.config.matrix_policy)
            for cube in _cube_patterns(members, self.layout.m):
                builder = lambda pat, c=cube: [
                    mcx(self.layout.full_pattern(data=c, matrix=pat),
                        self.layout.del_qubit)]
                count, _ = self._emit_fused(row_plan, builder)
                fused_count += count
            for it in members:
                for r in sorted(rows):
                    self.naive_gates.append(
                        mcx(self.layout.full_pattern(data=it.pattern,
                                                     matrix=format(r, f"0{self.layout.n}b")),
                            self.layout.del_qubit))
            row_stats.append({"rows": list(rows), "count": len(members)})
        self.insert_stats = {
            "items": [it.index for it in items],
            "fused_mcx": fused_count,
            "naive_mcx": len(items) + sum(len(it.insert_rows) for it in items),
            "row_groups": row_stats,
        }

    def restore(self) -> None:
        """Single final permutation sending every item slot home (deferred mode).

        Items already home enter as identity pairs so the router treats their
        slots as settled and never borrows them as intermediate states.
        """
        pairs = tuple(sorted((self.cur[it.pattern], it.pattern)
                             for it in self.plan.items))
        if all(a == b for a, b in pairs):
            return
        cost = sum(hamming(a, b) for a, b in pairs)
        circ = permute_circuit(PermutationSpec(Bijection(pairs, cost)))
        emitted = embed_gates(circ.gates, self.layout.total, list(self.layout.data_qubits))
        self.gates.extend(emitted)
        self.permute_count += len(emitted)


def compile_matrix(matrix: SparseMatrix, config: CompileConfig | None = None) -> EncodedCircuit:
    """Compile a sparse matrix into an explicit block-encoding circuit."""
    config = config or CompileConfig()
    if config.naive and config.defer_restore:
        config = replace(config, defer_restore=False)
    data, signs, plan = analyze(matrix, config.strategy)
    layout = RegisterLayout(data.m, matrix.n)
    prep = synthesize_prep(data, signs)
    unprep = synthesize_unprep(data)

    asm = _Assembler(plan, data, layout, config)
    if not config.skip_index_map:
        asm.shifts()
        asm.deletes()
        asm.inserts()
        if config.defer_restore and not config.naive:
            asm.restore()
    body = asm.naive_gates if config.naive else asm.gates

    gates: list[Gate] = []
    gates += embed_gates(prep.gates, layout.total, list(layout.data_qubits))
    gates += body
    gates += embed_gates(unprep.gates, layout.total, list(layout.data_qubits))
    circuit = Circuit(layout.total, tuple(gates), layout, prep.global_phase)

    stats = _build_stats(circuit, asm, data, plan, config)
    log.info("compiled %dx%d matrix: %d qubits, %d gates, alpha=%g",
             matrix.dim, matrix.dim, layout.total, len(circuit.gates), data.alpha)
    return EncodedCircuit(circuit, data.alpha, layout, stats, plan, data, signs, config)


def _build_stats(circuit: Circuit, asm: _Assembler, data: DataVector,
                 plan: OperationPlan, config: CompileConfig) -> dict:
    counts: dict[str, int] = {}
    widths: dict[int, int] = {}
    for g in circuit.gates:
        counts[g.kind] = counts.get(g.kind, 0) + 1
        if g.kind == "mcx":
            w = sum(c != "X" for c in g.pattern)
            widths[w] = widths.get(w, 0) + 1
    prep_gates = len(circuit.gates) - len(asm.naive_gates if config.naive else asm.gates)
    fused_mcx = len(asm.gates)
    naive_mcx = len(asm.naive_gates)
    return {
        "alpha": data.alpha,
        "qubits": circuit.n_qubits,
        "total_gates": len(circuit.gates),
        "gate_counts": counts,
        "mcx_width_histogram": {str(k): v for k, v in sorted(widths.items())},
        "permutation_gates": 0 if config.naive else asm.permute_count,
        "state_prep_gates": prep_gates,
        "shift_groups": asm.shift_groups,
        "delete_groups": asm.delete_groups,
        "insert": asm.insert_stats,
        "fused_mcx": fused_mcx,
        "naive_mcx": naive_mcx,
        "strategy": plan.strategy,
        "naive": config.naive,
        "skip_index_map": config.skip_index_map,
        "defer_restore": config.defer_restore,
    }


def stats_report(encoded: EncodedCircuit) -> dict:
    """Gate-count report comparing the fused pipeline against per-item gates."""
    s = dict(encoded.stats)
    s["mcx_saving"] = s["naive_mcx"] - s["fused_mcx"]
    return s


def format_stats(encoded: EncodedCircuit) -> str:
    s = stats_report(encoded)
    lines = [
        f"qubits          {s['qubits']}",
        f"alpha           {s['alpha']:.12g}",
        f"total gates     {s['total_gates']}",
        f"gate counts     " + ", ".join(f"{k}={v}" for k, v in sorted(s["gate_counts"].items())),
        f"mcx widths      " + ", ".join(f"{k}:{v}" for k, v in s["mcx_width_histogram"].items()),
        f"permute gates   {s['permutation_gates']}",
        f"index-map mcx   fused={s['fused_mcx']} naive={s['naive_mcx']} saved={s['mcx_saving']}",
    ]
    for g in s["shift_groups"]:
        lines.append(f"  shift {g['op']:>4}  items={g['items']} pads={g['pads']} "
                     f"mode={g['mode']} mcx={g['fused_mcx']} (naive {g['naive_mcx']}) "
                     f"width={g['fused_data_width']} (naive {g['naive_data_width']})")
    for g in s["delete_groups"]:
        lines.append(f"  delete rows={g['rows']} items={g['items']} mode={g['mode']} "
                     f"mcx={g['fused_mcx']} (naive {g['naive_mcx']})")
    if s["insert"]:
        i = s["insert"]
        lines.append(f"  insert items={i['items']} mcx={i['fused_mcx']} (naive {i['naive_mcx']})")
    return "\n".join(lines)
