"""Minimal dense pure-state simulator.

Qubit 0 is the most significant bit of the amplitude index, so the basis
state ``|q0 q1 ... q(n-1)>`` sits at index ``int("q0q1...", 2)``.

Rotations follow ``Ry(t)|0> = cos(t/2)|0> + sin(t/2)|1>``. Measurement
bases are described by a *polarization* angle: ``Basis(a)`` measures in
``{cos a|0> + sin a|1>, -sin a|0> + cos a|1>}``, which is ``Ry(2a)``
applied to the computational basis. Protocol key angles in ``[0, pi)`` are
therefore doubled when they become gates (see :func:`polarization`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, EntangledError, InvalidSizeError, QubitIndexError

MAX_QUBITS = 24
NORM_TOL = 1e-10
ZERO_PROB = 1e-12

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """One of X, Z, H, RY(theta) or CNOT."""

    name: str
    theta: float = 0.0

    def __post_init__(self):
        if self.name not in ("X", "Z", "H", "RY", "CNOT"):
            raise ArgumentError(f"unknown gate {self.name!r}")
        if not math.isfinite(self.theta):
            raise ArgumentError("gate angle must be finite")

    @property
    def arity(self) -> int:
        return 2 if self.name == "CNOT" else 1

    def matrix(self) -> np.ndarray:
        if self.name == "X":
            return _X
        if self.name == "Z":
            return _Z
        if self.name == "H":
            return _H
        if self.name == "RY":
            return ry_matrix(self.theta)
        raise ArgumentError("CNOT has no single-qubit matrix")


X = Gate("X")
Z = Gate("Z")
H = Gate("H")
CNOT = Gate("CNOT")


def Ry(theta: float) -> Gate:
    return Gate("RY", float(theta))


def polarization(angle: float) -> Gate:
    """Gate rotating the polarization of a qubit by ``angle`` (i.e. ``Ry(2*angle)``)."""
    return Ry(2.0 * angle)


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


class BellKind(enum.Enum):
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"

    @classmethod
    def singlet(cls) -> "BellKind":
        return cls.PSI_MINUS


# Outcome (bit on a, bit on b) after CNOT(a, b) then H(a).
_BELL_FROM_BITS = {
    (0, 0): BellKind.PHI_PLUS,
    (1, 0): BellKind.PHI_MINUS,
    (0, 1): BellKind.PSI_PLUS,
    (1, 1): BellKind.PSI_MINUS,
}


@dataclass(frozen=True)
class Basis:
    """Projective single-qubit basis at a polarization angle (radians)."""

    angle: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ArgumentError("basis angle must be finite")

    @property
    def is_computational(self) -> bool:
        return self.angle == 0.0


Computational = Basis(0.0)
Diagonal = Basis(math.pi / 4)


def Rotated(theta: float) -> Basis:
    return Basis(float(theta))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise InvalidSizeError(
                f"{self.num_qubits} qubits need {1 << self.num_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex], normalize: bool = False) -> "StateVector":
        arr = np.asarray(amps, dtype=complex).copy()
        n = int(round(math.log2(arr.size))) if arr.size else 0
        if arr.size == 0 or (1 << n) != arr.size:
            raise InvalidSizeError("amplitude count must be a power of two")
        if normalize:
            arr = arr / np.linalg.norm(arr)
        return cls(n, arr)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self) -> int:
        return self.amplitudes.size


def new_register(n: int) -> StateVector:
    if not isinstance(n, (int, np.integer)) or n < 1 or n > MAX_QUBITS:
        raise InvalidSizeError(f"register size must be in [1, {MAX_QUBITS}], got {n!r}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(int(n), amps)


def basis_state(bits: Sequence[int]) -> StateVector:
    n = len(bits)
    state = new_register(n)
    idx = int("".join(str(int(b)) for b in bits), 2)
    amps = np.zeros_like(state.amplitudes)
    amps[idx] = 1.0
    return StateVector(n, amps)


def bell_state(kind: BellKind) -> StateVector:
    s = _SQRT1_2
    table = {
        BellKind.PHI_PLUS: [s, 0, 0, s],
        BellKind.PHI_MINUS: [s, 0, 0, -s],
        BellKind.PSI_PLUS: [0, s, s, 0],
        BellKind.PSI_MINUS: [0, s, -s, 0],
    }
    return StateVector(2, np.array(table[kind], dtype=complex))


def tensor(*states: StateVector) -> StateVector:
    amps = states[0].amplitudes
    n = states[0].num_qubits
    for st in states[1:]:
        amps = np.kron(amps, st.amplitudes)
        n += st.num_qubits
    if n > MAX_QUBITS:
        raise InvalidSizeError(f"tensor product of {n} qubits exceeds cap {MAX_QUBITS}")
    return StateVector(n, amps)


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.num_qubits != b.num_qubits:
        raise ArgumentError("fidelity needs equal register sizes")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def _check_targets(state: StateVector, targets: Sequence[int]) -> tuple[int, ...]:
    ts = tuple(int(t) for t in targets)
    for t in ts:
        if t < 0 or t >= state.num_qubits:
            raise QubitIndexError(f"qubit {t} out of range for {state.num_qubits}-qubit register")
    if len(set(ts)) != len(ts):
        raise ArgumentError(f"duplicate qubit indices {ts}")
    return ts


def _apply_1q(amps: np.ndarray, n: int, q: int, m: np.ndarray) -> np.ndarray:
    view = amps.reshape(1 << q, 2, 1 << (n - q - 1))
    return np.matmul(m, view).reshape(-1)


def _apply_cnot(amps: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    src = amps.reshape((2,) * n)
    out = src.copy()
    sel = [slice(None)] * n
    sel[control] = 1
    sel = tuple(sel)
    # within the control=1 slice the target axis shifts down by one if it came after control
    axis = target if target < control else target - 1
    out[sel] = np.flip(src[sel], axis=axis)
    return out.reshape(-1)


def apply_gate(state: StateVector, gate: Gate, targets: Sequence[int]) -> StateVector:
    """Apply ``gate`` and return the new state.

    Single-qubit gates act on every listed target. CNOT takes exactly
    ``(control, target)``.
    """
    ts = _check_targets(state, targets)
    n = state.num_qubits
    if gate.name == "CNOT":
        if len(ts) != 2:
            raise ArgumentError("CNOT needs exactly (control, target)")
        amps = _apply_cnot(state.amplitudes, n, ts[0], ts[1])
    else:
        if not ts:
            raise ArgumentError("no target qubits given")
        m = gate.matrix()
        amps = state.amplitudes
        for q in ts:
            amps = _apply_1q(amps, n, q, m)
    return StateVector(n, amps)


def prepare_pair(state: StateVector, a: int, b: int, kind: BellKind) -> StateVector:
    """Entangle two fresh ``|0>`` qubits into the requested Bell state."""
    if a == b:
        raise ArgumentError("a Bell pair needs two distinct qubits")
    _check_targets(state, (a, b))
    view = state.amplitudes.reshape((2,) * state.num_qubits)
    sel = [slice(None)] * state.num_qubits
    sel[a], sel[b] = 0, 0
    if abs(np.sum(np.abs(view[tuple(sel)]) ** 2) - 1.0) > NORM_TOL:
        raise ArgumentError(f"qubits {a} and {b} are not both in |0>")
    out = apply_gate(state, H, (a,))
    out = apply_gate(out, CNOT, (a, b))
    if kind in (BellKind.PSI_PLUS, BellKind.PSI_MINUS):
        out = apply_gate(out, X, (b,))
    if kind in (BellKind.PHI_MINUS, BellKind.PSI_MINUS):
        out = apply_gate(out, Z, (a,))
    return out


def _measure_computational(amps: np.ndarray, n: int, q: int, rng: np.random.Generator):
    view = amps.reshape(1 << q, 2, 1 << (n - q - 1))
    p1 = float(np.sum(np.abs(view[:, 1, :]) ** 2))
    p1 = min(max(p1, 0.0), 1.0)
    if p1 < ZERO_PROB:
        bit = 0
    elif p1 > 1.0 - ZERO_PROB:
        bit = 1
    else:
        bit = 1 if rng.random() < p1 else 0
    out = np.zeros_like(view)
    out[:, bit, :] = view[:, bit, :]
    out = out.reshape(-1)
    return bit, out / np.linalg.norm(out)


def measure(
    state: StateVector,
    targets: Sequence[int],
    basis: Basis,
    rand: np.random.Generator,
) -> tuple[tuple[int, ...], StateVector]:
    """Projectively measure ``targets`` one by one in ``basis``.

    Returns the bits and the collapsed, renormalized state. Bit 0 means
    the ``cos a|0> + sin a|1>`` outcome.
    """
    ts = _check_targets(state, targets)
    n = state.num_qubits
    amps = state.amplitudes
    bits = []
    if basis.angle != 0.0:
        undo = ry_matrix(-2.0 * basis.angle)
        redo = ry_matrix(2.0 * basis.angle)
    for q in ts:
        if basis.angle != 0.0:
            amps = _apply_1q(amps, n, q, undo)
        bit, amps = _measure_computational(amps, n, q, rand)
        if basis.angle != 0.0:
            amps = _apply_1q(amps, n, q, redo)
        bits.append(bit)
    return tuple(bits), StateVector(n, amps)


def measure_bell(
    state: StateVector, a: int, b: int, rand: np.random.Generator
) -> tuple[BellKind, StateVector]:
    if a == b:
        raise ArgumentError("Bell measurement needs two distinct qubits")
    _check_targets(state, (a, b))
    n = state.num_qubits
    amps = _apply_cnot(state.amplitudes, n, a, b)
    amps = _apply_1q(amps, n, a, _H)
    bit_a, amps = _measure_computational(amps, n, a, rand)
    bit_b, amps = _measure_computational(amps, n, b, rand)
    amps = _apply_1q(amps, n, a, _H)
    amps = _apply_cnot(amps, n, a, b)
    return _BELL_FROM_BITS[(bit_a, bit_b)], StateVector(n, amps)


def split_qubits(
    state: StateVector, qubits: Sequence[int], tol: float = 1e-9
) -> tuple[StateVector, StateVector | None]:
    """Factor the group ``qubits`` out of ``state``.

    Returns ``(group_state, rest)``; the group keeps the listed order and
    ``rest`` keeps the original relative order (``None`` when nothing is
    left). Raises :class:`EntangledError` when the group is entangled with
    the rest.
    """
    qs = _check_targets(state, qubits)
    if not qs:
        raise ArgumentError("no qubits to split")
    n = state.num_qubits
    k = len(qs)
    if k == n:
        return permute(state, qs), None
    others = [q for q in range(n) if q not in qs]
    mat = np.transpose(state.amplitudes.reshape((2,) * n), list(qs) + others).reshape(1 << k, -1)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    if s.size > 1 and s[1] > tol:
        raise EntangledError(f"qubits {qs} are entangled with the rest (Schmidt coefficient {s[1]:.3g})")
    group = u[:, 0]
    rest = s[0] * vh[0]
    return (
        StateVector(k, group / np.linalg.norm(group)),
        StateVector(n - k, rest / np.linalg.norm(rest)),
    )


def split_qubit(state: StateVector, q: int, tol: float = 1e-9) -> tuple[StateVector, StateVector | None]:
    return split_qubits(state, (q,), tol)


def permute(state: StateVector, order: Sequence[int]) -> StateVector:
    """Reorder qubits so that new qubit ``i`` is old qubit ``order[i]``."""
    n = state.num_qubits
    if sorted(order) != list(range(n)):
        raise ArgumentError(f"{order} is not a permutation of {n} qubits")
    amps = np.transpose(state.amplitudes.reshape((2,) * n), order).reshape(-1)
    return StateVector(n, amps)
