"""Gate-level circuit representation with exact unitary semantics.

Conventions (used everywhere in the package, documented only here):

- Qubit ``q0`` is drawn at the top of a circuit and holds the MOST significant
  bit of a basis index.  A k-qubit basis state ``|j>`` therefore reads as the
  string ``format(j, f"0{k}b")`` whose character at position ``i`` is the value
  of qubit ``q_i``.
- "Bit index" means significance: bit ``b`` of a width-``k`` string sits at
  string position ``k - 1 - b``.
- Control patterns are strings over ``{"0", "1", "X"}`` of the circuit width;
  ``X`` means no control on that qubit.  A gate's target position must be
  ``X`` in its own pattern.
- ``Circuit.gates`` is ordered with the leftmost (first-applied) gate first,
  so the circuit unitary is ``G_last @ ... @ G_first``.

For a register layout of m data qubits, one delete qubit and n matrix qubits,
the basis index of ``|0>_data |0>_del |j>`` equals ``j``, which places the
encoded block in the top-left corner of the full unitary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadGate, BadInput, TooLarge

MAX_SIM_QUBITS = 12

GATE_KINDS = ("x", "mcx", "ry", "phase", "swap")


@dataclass(frozen=True)
class RegisterLayout:
    """Register split: m data qubits, del_count delete qubits, n matrix qubits."""

    m: int
    n: int
    del_count: int = 1

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.del_count not in (0, 1):
            raise BadInput(f"invalid layout m={self.m} n={self.n} del={self.del_count}")

    @property
    def total(self) -> int:
        return self.m + self.del_count + self.n

    @property
    def flag_count(self) -> int:
        return self.m + self.del_count

    @property
    def data_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.m))

    @property
    def del_qubit(self) -> int | None:
        return self.m if self.del_count else None

    @property
    def matrix_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.m + self.del_count, self.total))

    @property
    def block_dim(self) -> int:
        return 1 << self.n

    def full_pattern(self, data: str | None = None, matrix: str | None = None,
                     del_: str | None = None) -> str:
        """Assemble a full-width pattern from per-register pieces (None -> all X)."""
        d = data if data is not None else "X" * self.m
        e = del_ if del_ is not None else "X" * self.del_count
        j = matrix if matrix is not None else "X" * self.n
        if len(d) != self.m or len(e) != self.del_count or len(j) != self.n:
            raise BadInput("register pattern length mismatch")
        return d + e + j


@dataclass(frozen=True)
class Gate:
    """One primitive gate; construct via the mcx/x/ry/phase/swap helpers."""

    kind: str
    target: int = -1
    pattern: str | None = None
    angle: float = 0.0
    pair: tuple[int, int] | None = None


def mcx(pattern: str, target: int) -> Gate:
    return Gate("mcx", target=target, pattern=pattern)


def x(target: int) -> Gate:
    return Gate("x", target=target)


def ry(angle: float, target: int, pattern: str | None = None) -> Gate:
    return Gate("ry", target=target, pattern=pattern, angle=float(angle))


def phase(angle: float, target: int, pattern: str | None = None) -> Gate:
    return Gate("phase", target=target, pattern=pattern, angle=float(angle))


def swap(qa: int, qb: int, pattern: str | None = None) -> Gate:
    return Gate("swap", pattern=pattern, pair=(qa, qb))


def validate_gate(gate: Gate, width: int) -> None:
    """Raise BadGate if the gate cannot act on a width-qubit circuit."""
    if gate.kind not in GATE_KINDS:
        raise BadGate(f"unknown gate kind {gate.kind!r}")
    if gate.pattern is not None:
        if len(gate.pattern) != width or any(c not in "01X" for c in gate.pattern):
            raise BadGate(f"bad pattern {gate.pattern!r} for width {width}")
    if gate.kind == "swap":
        qa, qb = gate.pair
        if not (0 <= qa < width and 0 <= qb < width) or qa == qb:
            raise BadGate(f"bad swap qubits {gate.pair}")
        if gate.pattern is not None and (gate.pattern[qa] != "X" or gate.pattern[qb] != "X"):
            raise BadGate("swap qubits must be free in the pattern")
        return
    if not 0 <= gate.target < width:
        raise BadGate(f"target {gate.target} out of range for width {width}")
    if gate.pattern is not None and gate.pattern[gate.target] != "X":
        raise BadGate("target qubit must be free in the control pattern")
    if gate.kind in ("ry", "phase") and not math.isfinite(gate.angle):
        raise BadGate(f"non-finite angle {gate.angle}")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits; immutable after construction."""

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    layout: RegisterLayout | None = None
    global_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.layout is not None and self.layout.total != self.n_qubits:
            raise BadGate("layout does not match qubit count")
        for g in self.gates:
            validate_gate(g, self.n_qubits)

    def __len__(self) -> int:
        return len(self.gates)


def _pattern_select(pattern: str | None, width: int) -> tuple[int, int]:
    """Return (mask, value) such that index i matches iff i & mask == value."""
    mask = value = 0
    if pattern:
        for pos, ch in enumerate(pattern):
            if ch == "X":
                continue
            bit = 1 << (width - 1 - pos)
            mask |= bit
            if ch == "1":
                value |= bit
    return mask, value


def apply_gate(state: np.ndarray, gate: Gate, width: int) -> None:
    """Apply a gate in place to a statevector or to the rows of a matrix."""
    dim = 1 << width
    idx = np.arange(dim)
    mask, value = _pattern_select(gate.pattern, width)
    matched = (idx & mask) == value
    if gate.kind in ("x", "mcx"):
        tbit = 1 << (width - 1 - gate.target)
        i0 = idx[matched & ((idx & tbit) == 0)]
        if len(i0) == 0:
            return
        i1 = i0 | tbit
        state[np.concatenate([i0, i1])] = state[np.concatenate([i1, i0])]
    elif gate.kind == "ry":
        tbit = 1 << (width - 1 - gate.target)
        i0 = idx[matched & ((idx & tbit) == 0)]
        i1 = i0 | tbit
        c, s = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        r0 = state[i0].copy()
        state[i0] = c * r0 - s * state[i1]
        state[i1] = s * r0 + c * state[i1]
    elif gate.kind == "phase":
        tbit = 1 << (width - 1 - gate.target)
        i1 = idx[matched & ((idx & tbit) != 0)]
        state[i1] = state[i1] * np.exp(1j * gate.angle)
    elif gate.kind == "swap":
        qa, qb = gate.pair
        abit = 1 << (width - 1 - qa)
        bbit = 1 << (width - 1 - qb)
        sel = idx[matched & ((idx & abit) != 0) & ((idx & bbit) == 0)]
        if len(sel) == 0:
            return
        other = (sel ^ abit) | bbit
        state[np.concatenate([sel, other])] = state[np.concatenate([other, sel])]
    else:  # pragma: no cover - guarded by validate_gate
        raise BadGate(gate.kind)


def gate_unitary(gate: Gate, layout: RegisterLayout | int) -> np.ndarray:
    """Exact unitary of one gate over the full layout."""
    width = layout.total if isinstance(layout, RegisterLayout) else int(layout)
    validate_gate(gate, width)
    u = np.eye(1 << width, dtype=complex)
    apply_gate(u, gate, width)
    return u


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full unitary, first gate applied first (rightmost in the matrix product)."""
    if circuit.n_qubits > MAX_SIM_QUBITS:
        raise TooLarge(f"{circuit.n_qubits} qubits exceeds the {MAX_SIM_QUBITS}-qubit budget")
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for g in circuit.gates:
        apply_gate(u, g, circuit.n_qubits)
    if circuit.global_phase:
        u = u * np.exp(1j * circuit.global_phase)
    return u


def unitarity_residual(u: np.ndarray) -> float:
    d = u.conj().T @ u - np.eye(u.shape[0])
    return float(np.abs(d).max())


def inverse_gate(gate: Gate) -> Gate:
    if gate.kind in ("ry", "phase"):
        return replace(gate, angle=-gate.angle)
    return gate  # x / mcx / swap are self-inverse


def inverse_circuit(circuit: Circuit) -> Circuit:
    gates = tuple(inverse_gate(g) for g in reversed(circuit.gates))
    return Circuit(circuit.n_qubits, gates, circuit.layout, -circuit.global_phase)


def embed_gates(gates, width: int, qubit_map: dict[int, int] | list[int]):
    """Remap gates from a subregister into a wider circuit.

    qubit_map maps local qubit index -> global qubit index.
    """
    if not isinstance(qubit_map, dict):
        qubit_map = {i: q for i, q in enumerate(qubit_map)}
    out = []
    for g in gates:
        pattern = None
        if g.pattern is not None:
            chars = ["X"] * width
            for pos, ch in enumerate(g.pattern):
                if ch != "X":
                    chars[qubit_map[pos]] = ch
            pattern = "".join(chars)
        if g.kind == "swap":
            out.append(Gate("swap", pattern=pattern,
                            pair=(qubit_map[g.pair[0]], qubit_map[g.pair[1]])))
        else:
            out.append(Gate(g.kind, target=qubit_map[g.target], pattern=pattern,
                            angle=g.angle))
    return out


# --- serialization ---------------------------------------------------------

FORMAT_HEADER = "blockenc-ir v1"


def _ctrl_field(pattern: str | None) -> str:
    if pattern is None:
        return ""
    parts = [f"q{i}:{c}" for i, c in enumerate(pattern) if c != "X"]
    if not parts:
        return ""
    return "ctrl=" + ",".join(parts)


def _gate_line(g: Gate) -> str:
    ctrl = _ctrl_field(g.pattern)
    if g.kind == "x":
        return f"x q{g.target}"
    if g.kind == "mcx":
        return f"mcx {ctrl} target=q{g.target}".replace("  ", " ")
    if g.kind in ("ry", "phase"):
        head = f"{g.kind}({g.angle!r})"
        return " ".join(p for p in (head, ctrl, f"q{g.target}") if p)
    if g.kind == "swap":
        return " ".join(p for p in ("swap", ctrl, f"q{g.pair[0]}", f"q{g.pair[1]}") if p)
    raise BadGate(g.kind)  # pragma: no cover


def export_text(circuit: Circuit, metadata: dict | None = None) -> str:
    """Deterministic line-per-gate text form; round-trips through import_text."""
    lines = [FORMAT_HEADER]
    if circuit.layout is not None:
        lines.append(f"layout m={circuit.layout.m} n={circuit.layout.n}")
    else:
        lines.append(f"qubits {circuit.n_qubits}")
    for key in sorted(metadata or {}):
        lines.append(f"{key} {metadata[key]!r}")
    if circuit.global_phase:
        lines.append(f"gphase({circuit.global_phase!r})")
    lines.extend(_gate_line(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_META_KEYS = ("alpha",)


def _parse_ctrl(tok: str, width: int) -> str:
    chars = ["X"] * width
    for part in tok[len("ctrl="):].split(","):
        q, v = part.split(":")
        chars[int(q[1:])] = v
    return "".join(chars)


def import_text(text: str) -> tuple[Circuit, dict]:
    """Parse the text form back into (Circuit, metadata)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != FORMAT_HEADER:
        raise BadInput("missing format header")
    layout = None
    width = None
    meta: dict = {}
    gphase = 0.0
    gates: list[Gate] = []
    for ln in lines[1:]:
        toks = ln.split()
        head = toks[0]
        if head == "layout":
            kv = dict(t.split("=") for t in toks[1:])
            layout = RegisterLayout(int(kv["m"]), int(kv["n"]))
            width = layout.total
        elif head == "qubits":
            width = int(toks[1])
        elif head in _META_KEYS:
            meta[head] = float(toks[1])
        elif head.startswith("gphase("):
            gphase = float(head[len("gphase("):-1])
        else:
            if width is None:
                raise BadInput("gate line before qubit count")
            gates.append(_parse_gate_line(toks, width))
    if width is None:
        raise BadInput("missing qubit count")
    return Circuit(width, tuple(gates), layout, gphase), meta


def _parse_gate_line(toks: list[str], width: int) -> Gate:
    head = toks[0]
    rest = toks[1:]
    pattern = None
    if rest and rest[0].startswith("ctrl="):
        pattern = _parse_ctrl(rest[0], width)
        rest = rest[1:]
    if head == "x":
        return x(int(rest[0][1:]))
    if head == "mcx":
        tgt = next(t for t in rest if t.startswith("target="))
        target = int(tgt[len("target=q"):])
        if pattern is None:
            pattern = "X" * width
        return mcx(pattern, target)
    if head.startswith(("ry(", "phase(")):
        kind = head[:head.index("(")]
        angle = float(head[head.index("(") + 1:-1])
        return Gate(kind, target=int(rest[0][1:]), pattern=pattern, angle=angle)
    if head == "swap":
        return swap(int(rest[0][1:]), int(rest[1][1:]), pattern)
    raise BadInput(f"cannot parse gate line {' '.join(toks)!r}")


def export_json(circuit: Circuit, metadata: dict | None = None) -> str:
    doc = {
        "format": "blockenc-ir",
        "version": 1,
        "qubits": circuit.n_qubits,
        "layout": None if circuit.layout is None else
            {"m": circuit.layout.m, "n": circuit.layout.n},
        "global_phase": circuit.global_phase,
        "metadata": metadata or {},
        "gates": [_gate_dict(g) for g in circuit.gates],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _gate_dict(g: Gate) -> dict:
    d: dict = {"kind": g.kind}
    if g.kind == "swap":
        d["qubits"] = list(g.pair)
    else:
        d["target"] = g.target
    if g.pattern is not None:
        d["pattern"] = g.pattern
    if g.kind in ("ry", "phase"):
        d["angle"] = g.angle
    return d


def import_json(text: str) -> tuple[Circuit, dict]:
    doc = json.loads(text)
    if doc.get("format") != "blockenc-ir" or doc.get("version") != 1:
        raise BadInput("unrecognized circuit JSON")
    layout = None
    if doc.get("layout"):
        layout = RegisterLayout(doc["layout"]["m"], doc["layout"]["n"])
    gates = []
    for d in doc["gates"]:
        if d["kind"] == "swap":
            gates.append(swap(d["qubits"][0], d["qubits"][1], d.get("pattern")))
        else:
            gates.append(Gate(d["kind"], target=d["target"], pattern=d.get("pattern"),
                              angle=d.get("angle", 0.0)))
    circ = Circuit(doc["qubits"], tuple(gates), layout, doc.get("global_phase", 0.0))
    return circ, doc.get("metadata", {})
