"""Sequential telecloning: rounds of unsharp measurement, acceptance and recycling."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from telecloning import analysis
from telecloning.constants import MAX_RECEIVERS
from telecloning.errors import DomainError, ProtocolExhaustedError, SlotNameError, ValidationError
from telecloning.linalg import DensityMatrix, SubsystemLayout, kron_all, local_channel, ptrace_array
from telecloning.measurement import (
    CORRECTIONS,
    AcceptanceMask,
    check_lambda,
    receiver_slots,
    weak_bell_povm,
)
from telecloning.states import (
    DisentangleParams,
    InputQubit,
    disentangled_telecloning_state,
    two_design_states,
)


@dataclass(frozen=True)
class ChannelState:
    """Shared resource between rounds; ``history`` holds ``(lambda, mask)`` pairs."""

    rho: DensityMatrix
    round_index: int = 0
    history: tuple[tuple[float, AcceptanceMask], ...] = ()

    def __post_init__(self):
        if len(self.history) != self.round_index:
            raise ValidationError("history length must equal round_index")
        if "X" in self.rho.layout:
            raise ValidationError("channel layout must not contain the input slot X")

    @property
    def layout(self) -> SubsystemLayout:
        return self.rho.layout

    @property
    def receivers(self) -> list[str]:
        return receiver_slots(self.rho.layout)

    @property
    def lambdas(self) -> list[float]:
        return [lam for lam, _ in self.history]


def fresh_channel(M: int, etas: DisentangleParams | None = None) -> ChannelState:
    """Round-0 channel holding the (optionally disentangled) telecloning state."""
    if M > MAX_RECEIVERS:
        raise DomainError(f"simulation supports at most {MAX_RECEIVERS} receivers, got {M}")
    if etas is None:
        etas = DisentangleParams.optimal(M)
    if etas.M != M:
        raise ValidationError(f"{etas.M} receiver etas given for {M} receivers")
    return ChannelState(disentangled_telecloning_state(etas).density())


@dataclass(frozen=True)
class RoundSchedule:
    rounds: tuple[tuple[float, AcceptanceMask], ...]

    def __init__(self, rounds: Iterable[tuple[float, AcceptanceMask | Sequence[bool]]]):
        parsed = []
        for lam, mask in rounds:
            if not isinstance(mask, AcceptanceMask):
                mask = AcceptanceMask(mask)
            parsed.append((float(lam), mask))
        object.__setattr__(self, "rounds", tuple(parsed))

    def __len__(self):
        return len(self.rounds)

    def __iter__(self):
        return iter(self.rounds)


@dataclass(frozen=True)
class FidelityReport:
    receiver: str
    round: int
    f_sim: float
    f_closed: float
    abs_diff: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "abs_diff", abs(self.f_sim - self.f_closed))


def _apply_round(mat: np.ndarray, layout: SubsystemLayout, lam: float, mask_bits) -> np.ndarray:
    """Outcome-summed Kraus sandwich of one round.

    Same map as :func:`telecloning.measurement.kraus_set`, applied on the
    touched factors only instead of via full-space operators.
    """
    accepting = [c for c, bit in zip(receiver_slots(layout), mask_bits) if bit]
    targets = [layout.index(n) for n in ("X", "P", *accepting)]
    return local_channel(mat, layout.dims, _local_kraus(lam, len(accepting)), targets)


@lru_cache(maxsize=256)
def _local_kraus(lam: float, n_accepting: int) -> np.ndarray:
    roots = weak_bell_povm(lam).sqrt_elements
    return np.stack(
        [kron_all([roots[k]] + [CORRECTIONS[k + 1]] * n_accepting) for k in range(4)]
    )


def recycle(ch: ChannelState, lam: float, mask: AcceptanceMask | Sequence[bool]) -> ChannelState:
    """One round with the input averaged to ``I/2``; accepting receivers leave."""
    lam = check_lambda(lam)
    mask = mask if isinstance(mask, AcceptanceMask) else AcceptanceMask(mask)
    receivers = ch.receivers
    if not receivers:
        raise ProtocolExhaustedError("no receivers remain in the channel")
    if len(mask) != len(receivers):
        raise ValidationError(f"mask has {len(mask)} entries for {len(receivers)} receivers")
    layout = ch.layout.prepend("X")
    rho_in = np.kron(np.eye(2) / 2.0, ch.rho.mat)
    out = _apply_round(rho_in, layout, lam, mask.bits)
    leaving = {"X"} | {c for c, bit in zip(receivers, mask) if bit}
    keep = [i for i, n in enumerate(layout.names) if n not in leaving]
    reduced = ptrace_array(out, layout.dims, keep)
    reduced = 0.5 * (reduced + reduced.conj().T)
    return ChannelState(
        DensityMatrix(layout.without(leaving), reduced),
        ch.round_index + 1,
        ch.history + ((lam, mask),),
    )


def _receiver_marginal(ch: ChannelState, receiver: str) -> np.ndarray:
    receivers = ch.receivers
    if receiver not in receivers:
        raise SlotNameError(f"receiver {receiver!r} not in channel; present: {receivers}")
    # the round touches only X, P and the correcting receiver, so tracing the
    # rest out first gives the same receiver state
    keep = [ch.layout.index("P"), ch.layout.index(receiver)]
    return ptrace_array(ch.rho.mat, ch.layout.dims, keep)


def _teleport_batch(marg: np.ndarray, lam: float, inputs: np.ndarray) -> np.ndarray:
    """Receiver states for a stack of input densities, on the (X, P, receiver) register."""
    ops = _local_kraus(lam, 1)
    rho = np.einsum("nab,cd->nacbd", inputs, marg).reshape(len(inputs), 8, 8)
    out = np.matmul(np.matmul(ops[:, None], rho[None]), ops.conj().transpose(0, 2, 1)[:, None])
    return np.einsum("niris->nrs", out.sum(axis=0).reshape(len(inputs), 4, 2, 4, 2))


def teleported_state(
    ch: ChannelState, lam: float, receiver: str, qubit: InputQubit
) -> np.ndarray:
    """Outcome-averaged state of ``receiver`` after measurement and its correction."""
    lam = check_lambda(lam)
    return _teleport_batch(_receiver_marginal(ch, receiver), lam, qubit.density[None])[0]


_DESIGN = two_design_states()
_DESIGN_KETS = np.array([q.ket for q in _DESIGN])
_DESIGN_RHOS = np.array([q.density for q in _DESIGN])


def avg_fidelity(ch: ChannelState, lam: float, receiver: str) -> float:
    """Haar-average fidelity, evaluated exactly on the six-state 2-design."""
    lam = check_lambda(lam)
    out = _teleport_batch(_receiver_marginal(ch, receiver), lam, _DESIGN_RHOS)
    vals = np.einsum("ni,nij,nj->n", _DESIGN_KETS.conj(), out, _DESIGN_KETS).real
    return float(np.mean(vals))


def run_schedule(
    M: int, etas: DisentangleParams | None, schedule: RoundSchedule
) -> list[FidelityReport]:
    """Simulate every round and compare each present receiver with its closed form.

    Each report gives the fidelity the receiver obtains if it completes the
    protocol in that round; the channel then recycles according to the mask.
    """
    if len(schedule) == 0:
        raise DomainError("schedule has no rounds")
    if etas is None:
        etas = DisentangleParams.optimal(M)
    ch = fresh_channel(M, etas)
    reports = []
    for n, (lam, mask) in enumerate(schedule, start=1):
        try:
            check_lambda(lam)
        except DomainError as exc:
            raise DomainError(f"round {n}: {exc}") from None
        lambdas = ch.lambdas + [lam]
        for r in ch.receivers:
            f_sim = avg_fidelity(ch, lam, r)
            pref = analysis.receiver_prefactor(M, etas, int(r[1:]))
            f_closed = analysis.fidelity_from_prefactor(pref, lambdas)
            reports.append(FidelityReport(r, n, f_sim, f_closed))
        ch = recycle(ch, lam, mask)
    return reports
