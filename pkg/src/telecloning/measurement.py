"""Unsharp Bell POVM on the (X, P) pair and the resulting Kraus operators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from telecloning.errors import DomainError, ValidationError
from telecloning.linalg import SubsystemLayout, embed_operator, kron_all
from telecloning.states import bell_vector

SIGMA_I = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Bell outcome -> receiver correction. Found by exhaustive search over the
# 24 assignments of {I, X, Y, Z} (see tests/test_measurement.py); it is the
# unique assignment reaching 5/6 on the two-receiver resource at lambda = 1.
CORRECTIONS = {1: SIGMA_I, 2: SIGMA_Z, 3: SIGMA_X, 4: SIGMA_Y}


def check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"sharpness lambda must lie in (0, 1], got {lam!r}")
    return lam


@dataclass(frozen=True)
class WeakBellPOVM:
    lam: float
    elements: tuple[np.ndarray, ...]
    sqrt_elements: tuple[np.ndarray, ...]

    @property
    def spectrum(self) -> tuple[float, float]:
        """(eigenvalue on the Bell vector, threefold eigenvalue on its complement)."""
        return self.lam + (1.0 - self.lam) / 4.0, (1.0 - self.lam) / 4.0


def weak_bell_povm(lam: float) -> WeakBellPOVM:
    """``M_i = lam |B_i><B_i| + (1 - lam)/4 I_4`` for ``i = 1..4``.

    Square roots are built directly in the Bell eigenbasis.
    """
    lam = check_lambda(lam)
    hi, lo = lam + (1.0 - lam) / 4.0, (1.0 - lam) / 4.0
    eye = np.eye(4, dtype=complex)
    elements, roots = [], []
    for i in range(1, 5):
        b = bell_vector(i)
        proj = np.outer(b, b.conj())
        elements.append(lam * proj + lo * eye)
        roots.append(np.sqrt(hi) * proj + np.sqrt(lo) * (eye - proj))
    return WeakBellPOVM(lam, tuple(elements), tuple(roots))


def correction_unitary(outcome: int) -> np.ndarray:
    if outcome not in CORRECTIONS:
        raise DomainError(f"Bell outcome must be in 1..4, got {outcome!r}")
    return CORRECTIONS[outcome].copy()


@dataclass(frozen=True)
class AcceptanceMask:
    """``bits[i]`` is True when the i-th remaining receiver corrects and leaves."""

    bits: tuple[bool, ...]

    def __init__(self, bits: Iterable[bool]):
        object.__setattr__(self, "bits", tuple(bool(b) for b in bits))

    @classmethod
    def refuse_all(cls, M: int) -> "AcceptanceMask":
        return cls((False,) * M)

    @classmethod
    def accept_all(cls, M: int) -> "AcceptanceMask":
        return cls((True,) * M)

    @classmethod
    def accept_only(cls, M: int, i: int) -> "AcceptanceMask":
        return cls(k == i for k in range(M))

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)


@dataclass(frozen=True)
class KrausSet:
    lam: float
    mask: AcceptanceMask
    layout: SubsystemLayout
    ops: tuple[np.ndarray, ...]

    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(total - np.eye(self.layout.dim))))


def receiver_slots(layout: SubsystemLayout) -> list[str]:
    return [n for n in layout.names if n.startswith("C")]


def kraus_set(lam: float, mask: AcceptanceMask, layout: SubsystemLayout) -> KrausSet:
    """Kraus operators ``sqrt(M_k)`` on (X, P), identity on ancillas, ``U_k`` on accepters."""
    povm = weak_bell_povm(lam)
    for name in ("X", "P"):
        layout.index(name)
    receivers = receiver_slots(layout)
    if len(mask) != len(receivers):
        raise ValidationError(
            f"mask has {len(mask)} entries but layout has {len(receivers)} receivers"
        )
    accepting = [c for c, bit in zip(receivers, mask) if bit]
    ops = []
    for k in range(4):
        local = kron_all([povm.sqrt_elements[k]] + [CORRECTIONS[k + 1]] * len(accepting))
        ops.append(embed_operator(local, ["X", "P", *accepting], layout))
    return KrausSet(povm.lam, mask, layout, tuple(ops))
