"""Dense simulation oracle: rebuild the unitary and compare against the input.

The flag registers (data and delete qubits) are the most significant bits, so
postselecting them on zero reads the encoded block straight out of the
top-left corner of the full unitary.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BadLayout
from .ingest import SparseMatrix
from .ir import Circuit, RegisterLayout, circuit_unitary, unitarity_residual
from .pipeline import EncodedCircuit

UNITARITY_TOL = 1e-10


def extract_block(u: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    """Submatrix at rows and columns where every flag qubit reads zero."""
    if u.shape != (1 << layout.total, 1 << layout.total):
        raise BadLayout(f"operator shape {u.shape} does not match {layout.total} qubits")
    d = layout.block_dim
    return u[:d, :d]


@dataclass
class VerificationReport:
    passed: bool
    max_abs_error: float
    unitarity_residual: float
    tolerance: float
    alpha: float
    dim: int
    worst_cells: list  # [(row, col, error), ...] largest first

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        head = (f"{status}: max |alpha*B - A| = {self.max_abs_error:.3e} "
                f"(tol {self.tolerance:.1e}), unitarity residual "
                f"{self.unitarity_residual:.3e}, alpha = {self.alpha:.12g}")
        cells = ", ".join(f"({r},{c})={e:.2e}" for r, c, e in self.worst_cells[:3])
        return head + (f"\n  worst cells: {cells}" if cells else "")


def verify_circuit(matrix: SparseMatrix, circuit: Circuit, alpha: float,
                   tol: float = 1e-9) -> VerificationReport:
    """Compare alpha times the extracted block against the matrix entrywise."""
    layout = circuit.layout
    if layout is None or layout.n != matrix.n:
        raise BadLayout("circuit layout does not match the matrix dimension")
    u = circuit_unitary(circuit)
    residual = unitarity_residual(u)
    block = extract_block(u, layout)
    err = np.abs(alpha * block - matrix.dense())
    max_err = float(err.max())
    flat = np.argsort(err, axis=None)[::-1][:5]
    worst = [(int(i // err.shape[0]), int(i % err.shape[0]), float(err.flat[i]))
             for i in flat if err.flat[i] > tol]
    passed = max_err <= tol and residual <= UNITARITY_TOL
    return VerificationReport(passed, max_err, residual, tol, alpha,
                              matrix.dim, worst)


def verify(matrix: SparseMatrix, encoded: EncodedCircuit,
           tol: float | None = None) -> VerificationReport:
    """Verify a compiled circuit against its source matrix."""
    if tol is None:
        tol = encoded.config.tolerance
    return verify_circuit(matrix, encoded.circuit, encoded.alpha, tol)
