"""Dense complex linear algebra over labelled qubit registers.

Matrices are plain ``numpy.ndarray`` objects. Tensor order always follows
slot order with the first slot most significant, so the ket ``|01>`` on
layout ``(P, C1)`` has ``P=0`` and ``C1=1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from telecloning.constants import HERMITIAN_TOL, PSD_TOL, TRACE_TOL
from telecloning.errors import NotPSDError, ShapeError, SlotNameError, ValidationError


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered named subsystems, e.g. ``SubsystemLayout.qubits("X", "P", "C1")``."""

    slots: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.slots]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate slot names in {names}")
        for name, dim in self.slots:
            if int(dim) < 1:
                raise ValidationError(f"slot {name!r} has non-positive dimension {dim}")

    @classmethod
    def qubits(cls, *names: str) -> "SubsystemLayout":
        return cls(tuple((name, 2) for name in names))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.slots)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.slots)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=int))

    def __len__(self):
        return len(self.slots)

    def __contains__(self, name):
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SlotNameError(f"unknown slot {name!r}; layout has {list(self.names)}") from None

    def indices(self, names: Iterable[str]) -> list[int]:
        return sorted(self.index(n) for n in names)

    def without(self, names: Iterable[str]) -> "SubsystemLayout":
        drop = set(names)
        for n in drop:
            self.index(n)
        return SubsystemLayout(tuple(s for s in self.slots if s[0] not in drop))

    def prepend(self, name: str, dim: int = 2) -> "SubsystemLayout":
        return SubsystemLayout(((name, dim),) + self.slots)


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = _as_square(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


@dataclass(frozen=True)
class DensityMatrix:
    """A state on ``layout``; validated on construction unless ``check=False``."""

    layout: SubsystemLayout
    mat: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (self.layout.dim, self.layout.dim):
            raise ShapeError(
                f"matrix shape {mat.shape} does not match layout dimension {self.layout.dim}"
            )
        if not np.all(np.isfinite(mat)):
            raise ValidationError("density matrix has non-finite entries")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        if self.check:
            self.validate()

    def validate(self):
        if not is_hermitian(self.mat):
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(self.mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(0.5 * (self.mat + self.mat.conj().T))[0]
        if lo < -PSD_TOL:
            raise NotPSDError(f"density matrix has eigenvalue {lo!r}")

    @classmethod
    def from_ket(cls, layout: SubsystemLayout, amplitudes) -> "DensityMatrix":
        v = np.asarray(amplitudes, dtype=complex)
        return cls(layout, np.outer(v, v.conj()))

    @property
    def names(self) -> tuple[str, ...]:
        return self.layout.names


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices; dimensions multiply."""
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("kron expects two matrices")
    return np.kron(a, b)


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def ptrace_array(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a raw matrix, keeping tensor factors ``keep`` (in order)."""
    n = len(dims)
    keep = sorted(keep)
    drop = [i for i in range(n) if i not in keep]
    t = mat.reshape(tuple(dims) * 2)
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    dk = int(np.prod([dims[i] for i in keep], dtype=int))
    dd = int(np.prod([dims[i] for i in drop], dtype=int))
    t = t.transpose(perm).reshape(dk, dd, dk, dd)
    return np.einsum("ijkj->ik", t)


def partial_trace(rho: DensityMatrix, discard: Iterable[str]) -> DensityMatrix:
    """Trace out the slots named in ``discard``.

    The remaining slots keep their original relative order.
    """
    discard = set(discard)
    drop_idx = rho.layout.indices(discard)
    if len(drop_idx) == len(rho.layout):
        raise ValidationError("cannot discard every slot")
    keep = [i for i in range(len(rho.layout)) if i not in drop_idx]
    out = ptrace_array(rho.mat, rho.layout.dims, keep)
    return DensityMatrix(rho.layout.without(discard), out, check=rho.check)


def ptranspose_array(mat: np.ndarray, dims: Sequence[int], part: Sequence[int]) -> np.ndarray:
    n = len(dims)
    t = mat.reshape(tuple(dims) * 2)
    perm = list(range(2 * n))
    for i in part:
        perm[i], perm[n + i] = perm[n + i], perm[i]
    return t.transpose(perm).reshape(mat.shape)


def partial_transpose(rho: DensityMatrix, part: Iterable[str]) -> np.ndarray:
    """Transpose the tensor factors named in ``part``."""
    idx = rho.layout.indices(set(part))
    if not idx or len(idx) == len(rho.layout):
        raise ValidationError("partial transpose needs a proper, nonempty subset of slots")
    return ptranspose_array(rho.mat, rho.layout.dims, idx)


def herm_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.

    The input is symmetrised as ``(m + m^H)/2`` before decomposition.
    """
    m = _as_square(m)
    if not is_hermitian(m):
        raise ValidationError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = _as_square(m)
    if is_hermitian(m):
        return float(np.sum(np.abs(herm_eig(m)[0])))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def herm_sqrt(m) -> np.ndarray:
    """Positive square root of a PSD matrix.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clamped to zero; anything lower raises
    :class:`NotPSDError`.
    """
    w, v = herm_eig(m)
    if w[0] < -PSD_TOL:
        raise NotPSDError(f"matrix has eigenvalue {w[0]!r} below {-PSD_TOL}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def local_channel(mat: np.ndarray, dims: Sequence[int], ops: np.ndarray, pos: Sequence[int]) -> np.ndarray:
    """``sum_k (K_k (x) I) mat (K_k (x) I)^H`` for a stack ``ops`` acting on factors ``pos``.

    ``ops[k]`` is given on ``pos`` in the listed order. The targets are moved
    to the front once, so the cost scales with ``mat.size`` times the target
    dimension instead of with dense full-space products.
    """
    n = len(dims)
    pos = list(pos)
    rest = [i for i in range(n) if i not in pos]
    order = pos + rest
    dt = int(np.prod([dims[i] for i in pos], dtype=int))
    dr = mat.shape[0] // dt
    ops = np.asarray(ops)
    if ops.ndim != 3 or ops.shape[1:] != (dt, dt):
        raise ShapeError(f"expected a stack of {dt}x{dt} operators, got shape {ops.shape}")
    t = mat.reshape(tuple(dims) * 2).transpose(order + [n + i for i in order]).reshape(dt, -1)
    left = np.matmul(ops, t).reshape(len(ops), dt * dr, dt, dr).transpose(0, 1, 3, 2)
    out = np.matmul(left, ops.conj().transpose(0, 2, 1)[:, None]).sum(axis=0).transpose(0, 2, 1)
    inv = np.argsort(order).tolist()
    out = out.reshape(tuple(dims[i] for i in order) * 2).transpose(inv + [n + i for i in inv])
    return out.reshape(mat.shape)


def embed_operator(op, targets: Sequence[str], layout: SubsystemLayout) -> np.ndarray:
    """Lift ``op`` acting on ``targets`` (in the given order) to the full layout."""
    op = _as_square(op)
    pos = [layout.index(t) for t in targets]
    if len(set(pos)) != len(pos):
        raise ValidationError("embed targets must be distinct")
    dims = layout.dims
    tdim = int(np.prod([dims[p] for p in pos], dtype=int))
    if op.shape[0] != tdim:
        raise ShapeError(f"operator of size {op.shape[0]} does not act on {list(targets)}")
    rest = [i for i in range(len(dims)) if i not in pos]
    rdim = int(np.prod([dims[i] for i in rest], dtype=int))
    full = np.kron(op, np.eye(rdim))
    order = pos + rest
    n = len(dims)
    t = full.reshape(tuple(dims[i] for i in order) * 2)
    inv = [order.index(i) for i in range(n)]
    t = t.transpose(inv + [n + i for i in inv])
    return t.reshape(layout.dim, layout.dim)
