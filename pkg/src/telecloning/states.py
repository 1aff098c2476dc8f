"""Pure resource states: symmetric states, Bell pairs, telecloning states.

All kets are written in slot order. The M-receiver telecloning state lives on
``(P, A1, ..., A{M-1}, C1, ..., CM)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, sqrt
from typing import Mapping, Sequence

import numpy as np

from telecloning.constants import NORM_TOL
from telecloning.errors import DomainError, ValidationError
from telecloning.linalg import DensityMatrix, SubsystemLayout


@dataclass(frozen=True)
class PureState:
    layout: SubsystemLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.shape[0] != self.layout.dim:
            raise ValidationError(
                f"{v.shape[0]} amplitudes for a layout of dimension {self.layout.dim}"
            )
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm is {norm!r}, expected 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_ket(self.layout, self.amplitudes)

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the computational basis ket given as a bitstring."""
        return complex(self.amplitudes[int(bits, 2)])


@dataclass(frozen=True)
class InputQubit:
    alpha: complex
    beta: complex

    def __post_init__(self):
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1.0) > NORM_TOL:
            raise ValidationError(f"|alpha|^2 + |beta|^2 = {n!r}, expected 1")

    @property
    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    @property
    def density(self) -> np.ndarray:
        v = self.ket
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class DisentangleParams:
    """Real disentangling strengths for the port, every ancilla and each receiver."""

    eta_P: float = 1.0
    eta_A: float = 1.0
    eta_C: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "eta_C", tuple(float(e) for e in self.eta_C))
        for name, val in [("eta_P", self.eta_P), ("eta_A", self.eta_A)] + [
            (f"eta_C[{i}]", e) for i, e in enumerate(self.eta_C)
        ]:
            if isinstance(val, complex) or not 0.0 <= float(val) <= 1.0:
                raise DomainError(f"{name} = {val!r} is not a real number in [0, 1]")

    @classmethod
    def optimal(cls, M: int) -> "DisentangleParams":
        return cls(1.0, 1.0, (1.0,) * M)

    @property
    def M(self) -> int:
        return len(self.eta_C)

    def is_optimal(self) -> bool:
        return self.eta_P == 1.0 and self.eta_A == 1.0 and all(e == 1.0 for e in self.eta_C)

    def slot_map(self) -> dict[str, float]:
        M = self.M
        out = {"P": float(self.eta_P)}
        out.update({f"A{j}": float(self.eta_A) for j in range(1, M)})
        out.update({f"C{i + 1}": e for i, e in enumerate(self.eta_C)})
        return out


def receiver_names(M: int) -> list[str]:
    return [f"C{i}" for i in range(1, M + 1)]


def ancilla_names(M: int) -> list[str]:
    return [f"A{j}" for j in range(1, M)]


def telecloning_layout(M: int) -> SubsystemLayout:
    return SubsystemLayout.qubits("P", *ancilla_names(M), *receiver_names(M))


def _symmetric_vector(a: int, b: int) -> np.ndarray:
    n = a + b
    v = np.zeros(2**n)
    for ones in combinations(range(n), b):
        idx = sum(1 << (n - 1 - k) for k in ones)
        v[idx] = 1.0
    if n:
        v /= sqrt(comb(n, b))
    return v


def symmetric_state(a: int, b: int) -> PureState:
    """Normalised symmetric state of ``a`` zeros and ``b`` ones.

    >>> symmetric_state(1, 1).amplitudes.real.round(4)
    array([0.    , 0.7071, 0.7071, 0.    ])
    """
    if a < 0 or b < 0:
        raise DomainError("symmetric_state needs non-negative counts")
    if a + b == 0:
        raise DomainError("symmetric_state needs at least one qubit")
    layout = SubsystemLayout.qubits(*(f"q{k}" for k in range(1, a + b + 1)))
    return PureState(layout, _symmetric_vector(a, b))


def telecloning_alpha(M: int, j: int) -> float:
    return sqrt(2.0 * (M - j) / (M * (M + 1)))


def telecloning_state(M: int) -> PureState:
    """Optimal 1 -> M telecloning resource on ``(P, A1..A{M-1}, C1..CM)``.

    For ``M = 1`` the ancilla register is empty and the state reduces to the
    Bell pair ``(|00> + |11>)/sqrt(2)``.
    """
    if M < 1:
        raise DomainError(f"receiver count must be >= 1, got {M}")
    ancilla = lambda j: _symmetric_vector(M - j - 1, j)  # noqa: E731
    phi0 = sum(
        telecloning_alpha(M, j) * np.kron(ancilla(j), _symmetric_vector(M - j, j))
        for j in range(M)
    )
    phi1 = sum(
        telecloning_alpha(M, j) * np.kron(ancilla(M - j - 1), _symmetric_vector(j, M - j))
        for j in range(M)
    )
    v = (np.kron([1.0, 0.0], phi0) + np.kron([0.0, 1.0], phi1)) / sqrt(2.0)
    return PureState(telecloning_layout(M), v)


_BELL = {
    1: ((0b00, 1.0), (0b11, 1.0)),
    2: ((0b00, 1.0), (0b11, -1.0)),
    3: ((0b01, 1.0), (0b10, 1.0)),
    4: ((0b01, 1.0), (0b10, -1.0)),
}


def bell_vector(i: int) -> np.ndarray:
    if i not in _BELL:
        raise DomainError(f"Bell index must be in 1..4, got {i!r}")
    v = np.zeros(4, dtype=complex)
    for idx, sign in _BELL[i]:
        v[idx] = sign / sqrt(2.0)
    return v


def bell_state(i: int, names: Sequence[str] = ("q1", "q2")) -> PureState:
    """``|B1>,|B2> = (|00> +- |11>)/sqrt2`` and ``|B3>,|B4> = (|01> +- |10>)/sqrt2``."""
    return PureState(SubsystemLayout.qubits(*names), bell_vector(i))


def disentangle(state: PureState, etas: Mapping[str, float]) -> PureState:
    """Apply ``|0> -> |0>, |1> -> eta|1>`` on the named qubits and renormalise."""
    layout = state.layout
    n = len(layout)
    scale = np.ones(layout.dim)
    for name, eta in etas.items():
        if isinstance(eta, complex) or not 0.0 <= float(eta) <= 1.0:
            raise DomainError(f"eta for {name!r} must be real in [0, 1], got {eta!r}")
        k = layout.index(name)
        if layout.dims[k] != 2:
            raise ValidationError(f"slot {name!r} is not a qubit")
        bit = (np.arange(layout.dim) >> (n - 1 - k)) & 1
        scale = scale * np.where(bit == 1, float(eta), 1.0)
    v = state.amplitudes * scale
    norm = np.linalg.norm(v)
    if norm <= 1e-300:
        raise ValidationError("disentangling removed every amplitude")
    return PureState(layout, v / norm)


def disentangled_telecloning_state(params: DisentangleParams) -> PureState:
    return disentangle(telecloning_state(params.M), params.slot_map())


def two_receiver_normalization(eta_P, eta_A, eta_C1, eta_C2) -> float:
    """Normalisation constant of the disentangled two-receiver state."""
    s = (
        1.0
        + (eta_P * eta_C1) ** 2 / 4
        + (eta_A * eta_C1) ** 2 / 4
        + (eta_P * eta_C2) ** 2 / 4
        + (eta_A * eta_C2) ** 2 / 4
        + (eta_P * eta_A * eta_C1 * eta_C2) ** 2
    )
    return s**-0.5


def two_design_states() -> list[InputQubit]:
    """Eigenstates of sigma_z, sigma_x, sigma_y: an exact qubit 2-design."""
    r = 1.0 / sqrt(2.0)
    return [
        InputQubit(1.0, 0.0),
        InputQubit(0.0, 1.0),
        InputQubit(r, r),
        InputQubit(r, -r),
        InputQubit(r, 1j * r),
        InputQubit(r, -1j * r),
    ]


def concurrence_eta(eta: float) -> float:
    """Concurrence ``2 eta / (1 + eta^2)`` of ``(|01> + eta|10>)/sqrt(1 + eta^2)``."""
    return 2.0 * eta / (1.0 + eta * eta)
