"""Closed-form fidelity recursions, maximal attempting numbers and figure data.

Round-n fidelity of a receiver always has the form::

    f_n = 1/2 + s * P(l_1) * ... * P(l_{n-1}) * l_n

where ``s`` depends only on the resource state and the receiver, and ``P`` is
the depolarising factor a refused round leaves on the port qubit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from telecloning.constants import ABOVE_CLASSICAL_EPS, BOUNDARY_XTOL, CLASSICAL_FIDELITY
from telecloning.errors import DomainError, ValidationError
from telecloning.states import DisentangleParams, concurrence_eta

MAX_ROUNDS = 1000
# float slack when a minimal lambda lands on the sharp limit
LAMBDA_SLACK = 1e-12

PORT = "port"
RECEIVERS_EQUAL = "receivers_equal"
RECEIVERS_UNEQUAL = "receivers_unequal"
PORT_AND_RECEIVERS = "port_and_receivers"
ETA_CASES = (PORT, RECEIVERS_EQUAL, RECEIVERS_UNEQUAL, PORT_AND_RECEIVERS)


def p_kernel(lam: float) -> float:
    """``P(l) = (1 - l + sqrt((1 - l)(1 + 3l))) / 2``, strictly decreasing on [0, 1]."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"P(lambda) needs lambda in [0, 1], got {lam!r}")
    return 0.5 * (1.0 - lam + sqrt((1.0 - lam) * (1.0 + 3.0 * lam)))


def _check_lambdas(lambdas: Sequence[float]) -> list[float]:
    lambdas = [float(x) for x in lambdas]
    if not lambdas:
        raise DomainError("at least one round is required")
    for i, lam in enumerate(lambdas, start=1):
        if not 0.0 < lam <= 1.0:
            raise DomainError(f"round {i}: lambda must lie in (0, 1], got {lam!r}")
    return lambdas


def fidelity_from_prefactor(prefactor: float, lambdas: Sequence[float]) -> float:
    lambdas = _check_lambdas(lambdas)
    acc = prefactor
    for lam in lambdas[:-1]:
        acc *= p_kernel(lam)
    return 0.5 + acc * lambdas[-1]


def optimal_prefactor(M: int) -> float:
    if M < 1:
        raise DomainError(f"receiver count must be >= 1, got {M}")
    return (M + 2) / (6.0 * M)


def closed_fidelity(M: int, lambdas: Sequence[float]) -> float:
    """Round-n fidelity of the optimal M-receiver resource under all-refuse history."""
    return fidelity_from_prefactor(optimal_prefactor(M), lambdas)


def port_prefactor(eta_p: float) -> float:
    """Port-only disentangling: ``1/9 + 4 C(eta) / 18``."""
    return 1.0 / 9.0 + 4.0 * concurrence_eta(eta_p) / 18.0


def receivers_equal_prefactor(eta_c: float) -> float:
    c = eta_c
    return (1 + 2 * c + 2 * c**3 + c**4) / (6.0 * (1 + c**2 + c**4))


def receivers_unequal_prefactor(eta_own: float, eta_other: float) -> float:
    # symmetric denominator; reduces to receivers_equal_prefactor on the diagonal
    a, b = eta_own, eta_other
    num = 1 + 2 * a + 2 * a * b**2 + a**2 * b**2
    den = 2 + a**2 + b**2 + 2 * a**2 * b**2
    return num / (3.0 * den)


def port_and_receivers_prefactor(eta_p: float, eta_c: float) -> float:
    p, c = eta_p, eta_c
    num = 1 + c * p * (2 + 2 * c**2 + c**3 * p)
    den = 6 + 3 * c**2 * (2 * c**2 * p**2 + p**2 + 1)
    return num / den


def _eta_case_prefactor(case: str, params: DisentangleParams, receiver: int) -> float:
    if case not in ETA_CASES:
        raise ValidationError(f"unknown case {case!r}; expected one of {ETA_CASES}")
    if params.M != 2:
        raise ValidationError("disentangled closed forms exist for two receivers only")
    if params.eta_A != 1.0:
        raise ValidationError("disentangled closed forms require eta_A = 1")
    if receiver not in (1, 2):
        raise ValidationError(f"receiver index must be 1 or 2, got {receiver}")
    p = params.eta_P
    c1, c2 = params.eta_C
    if case == PORT:
        if c1 != 1.0 or c2 != 1.0:
            raise ValidationError("port case needs eta_C1 = eta_C2 = 1")
        return port_prefactor(p)
    if case == RECEIVERS_EQUAL:
        if p != 1.0 or c1 != c2:
            raise ValidationError("receivers_equal case needs eta_P = 1 and eta_C1 = eta_C2")
        return receivers_equal_prefactor(c1)
    if case == RECEIVERS_UNEQUAL:
        if p != 1.0:
            raise ValidationError("receivers_unequal case needs eta_P = 1")
        own, other = (c1, c2) if receiver == 1 else (c2, c1)
        return receivers_unequal_prefactor(own, other)
    if c1 != c2:
        raise ValidationError("port_and_receivers case needs eta_C1 = eta_C2")
    return port_and_receivers_prefactor(p, c1)


def closed_fidelity_eta(
    case: str, params: DisentangleParams, lambdas: Sequence[float], receiver: int = 1
) -> float:
    """Round-n fidelity for a disentangled two-receiver resource.

    ``case`` selects which disentangling parameters may differ from one:
    ``"port"`` (eta_P), ``"receivers_equal"`` (eta_C1 = eta_C2),
    ``"receivers_unequal"`` (eta_C1, eta_C2) or ``"port_and_receivers"``
    (eta_P and eta_C1 = eta_C2).
    """
    return fidelity_from_prefactor(_eta_case_prefactor(case, params, receiver), lambdas)


def eta_case(params: DisentangleParams) -> str | None:
    """Closed-form case covering ``params``, or None when only optimal applies."""
    if params.is_optimal():
        return None
    if params.M != 2 or params.eta_A != 1.0:
        raise ValidationError(
            "no closed form for this disentangling pattern (needs M = 2 and eta_A = 1)"
        )
    c1, c2 = params.eta_C
    if params.eta_P != 1.0:
        if c1 == c2 == 1.0:
            return PORT
        if c1 == c2:
            return PORT_AND_RECEIVERS
        raise ValidationError("no closed form for eta_P != 1 with unequal receiver etas")
    return RECEIVERS_EQUAL if c1 == c2 else RECEIVERS_UNEQUAL


def receiver_prefactor(M: int, params: DisentangleParams | None, receiver: int) -> float:
    """Round-one slope ``s`` of receiver ``C{receiver}``."""
    if params is None:
        return optimal_prefactor(M)
    case = eta_case(params)
    if case is None:
        return optimal_prefactor(M)
    return _eta_case_prefactor(case, params, receiver)


def min_lambda(target_f: float, prefactor: float) -> float:
    """Smallest sharpness reaching ``target_f``; may exceed 1 (then unphysical)."""
    if prefactor <= 0:
        raise DomainError(f"prefactor must be positive, got {prefactor!r}")
    if target_f <= 0.5:
        raise DomainError(f"target fidelity must exceed 1/2, got {target_f!r}")
    return (target_f - 0.5) / prefactor


@dataclass(frozen=True)
class ScenarioConfig:
    M: int
    etas: DisentangleParams | None = None
    f_min: float = CLASSICAL_FIDELITY + ABOVE_CLASSICAL_EPS

    def __post_init__(self):
        if self.M < 1:
            raise DomainError(f"receiver count must be >= 1, got {self.M}")
        if self.etas is not None and self.etas.M != self.M:
            raise ValidationError(f"{self.etas.M} receiver etas given for {self.M} receivers")

    def prefactor(self) -> float:
        # the slowest receiver limits every round
        return min(receiver_prefactor(self.M, self.etas, r) for r in range(1, self.M + 1))


@dataclass(frozen=True)
class ManResult:
    man: int
    lambda_schedule: tuple[float, ...] = field(default=())
    first_invalid_lambda: float | None = None


def man_from_prefactor(prefactor: float, f_min: float) -> ManResult:
    if f_min <= 0.5:
        raise DomainError(f"f_min must exceed 1/2, got {f_min!r}")
    acc = prefactor
    schedule = []
    while len(schedule) < MAX_ROUNDS:
        if acc <= 0.0:
            # a sharp round destroys the port correlations
            return ManResult(len(schedule), tuple(schedule), float("inf"))
        lam = min_lambda(f_min, acc)
        if lam > 1.0 + LAMBDA_SLACK:
            return ManResult(len(schedule), tuple(schedule), lam)
        lam = min(lam, 1.0)
        schedule.append(lam)
        acc *= p_kernel(lam)
    raise RuntimeError("MAN did not terminate")


def man(cfg: ScenarioConfig) -> ManResult:
    """Greedy maximal attempting number: each round uses the least sufficient lambda."""
    return man_from_prefactor(cfg.prefactor(), cfg.f_min)


# --- step boundaries ---------------------------------------------------------

FAMILIES = ("f_l", "eta_P", "eta_C")
TABLE_F_MIN = 0.67


def family_function(family: str):
    if family == "f_l":
        s = optimal_prefactor(2)
        return (lambda x: man_from_prefactor(s, x).man), CLASSICAL_FIDELITY + ABOVE_CLASSICAL_EPS, 5.0 / 6.0
    if family == "eta_P":
        return (lambda x: man_from_prefactor(port_prefactor(x), TABLE_F_MIN).man), 1.0, 0.0
    if family == "eta_C":
        return (lambda x: man_from_prefactor(receivers_equal_prefactor(x), TABLE_F_MIN).man), 1.0, 0.0
    raise ValidationError(f"unknown family {family!r}; expected one of {FAMILIES}")


def step_points(fn, start: float, stop: float, xtol: float = BOUNDARY_XTOL) -> list[tuple[int, int, float]]:
    """Locate every step of a monotone integer function between two endpoints.

    Returns ``(value_before, value_after, x)`` triples ordered from ``start``.
    """
    lo_val, hi_val = fn(start), fn(stop)
    step = -1 if hi_val < lo_val else 1
    out = []
    for k in range(lo_val, hi_val, step):
        level = k + step / 2.0
        x = bisect(lambda t: fn(t) - level, start, stop, xtol=xtol)
        out.append((k, k + step, x))
    return out


def man_boundary(family: str) -> list[float]:
    """Parameter values where MAN steps down, for one of ``FAMILIES``.

    ``f_l`` varies the fidelity floor of the optimal two-receiver resource;
    ``eta_P`` and ``eta_C`` vary the disentangling strength at ``f_l = 0.67``.
    """
    fn, start, stop = family_function(family)
    return [x for _, _, x in step_points(fn, start, stop)]


# --- figure data ---------------------------------------------------------------

FIGURES = ("2", "3", "4a", "4b", "5")


def lambda_from_f1(f1: float, M: int = 2) -> float:
    lam = min_lambda(f1, optimal_prefactor(M))
    return 1.0 if 1.0 < lam <= 1.0 + LAMBDA_SLACK else lam


def _linspace(a: float, b: float, n: int) -> list[float]:
    return [float(x) for x in np.linspace(a, b, n)]


def _f3_map(f1: float, f2: float) -> float:
    l1 = lambda_from_f1(f1)
    p1 = p_kernel(l1)
    if p1 <= 0.0:
        return float("nan")
    l2 = min_lambda(f2, p1 / 3.0)
    if l2 > 1.0 + 1e-12:
        return float("nan")
    return closed_fidelity(2, [l1, min(l2, 1.0), 1.0])


def figure_data(fig_id: str, grid: int) -> tuple[list[str], list[tuple]]:
    """Deterministic samples behind one figure; returns ``(headers, rows)``."""
    fig_id = str(fig_id)
    if fig_id.startswith("fig"):
        fig_id = fig_id[3:]
    if fig_id not in FIGURES:
        raise ValidationError(f"unknown figure {fig_id!r}; expected one of {FIGURES}")
    if grid < 2:
        raise DomainError(f"grid must be >= 2, got {grid}")
    lo_f, hi_f = CLASSICAL_FIDELITY, 5.0 / 6.0

    if fig_id == "2":
        s = optimal_prefactor(2)
        xs = _linspace(lo_f + ABOVE_CLASSICAL_EPS, hi_f, grid)
        return ["f_l", "MAN"], [(x, man_from_prefactor(s, x).man) for x in xs]

    if fig_id == "3":
        from telecloning.entanglement import first_recycled_entanglement

        rows = []
        for f1 in _linspace(lo_f, hi_f, grid):
            l1 = lambda_from_f1(f1)
            f2 = closed_fidelity(2, [l1, 1.0])
            e = first_recycled_entanglement(l1)
            rows.append((f1, f2, e["P_C1"], e["P_ACC"], e["P_A"], e["delta"]))
        return ["f1", "f2_max", "LN_P_C1", "LN_P_AC1C2", "LN_P_A", "delta_LN"], rows

    if fig_id == "4a":
        rows = [(f1, f2, _f3_map(f1, f2)) for f1 in _linspace(lo_f, hi_f, grid) for f2 in _linspace(lo_f, hi_f, grid)]
        return ["f1", "f2", "f3"], rows

    if fig_id == "4b":
        from telecloning.entanglement import ln_recycled_closed

        rows = []
        for f1 in _linspace(lo_f, hi_f, grid):
            for f2 in _linspace(lo_f, hi_f, grid):
                try:
                    ln = ln_recycled_closed(2, f1, f2, "P_C1")
                except DomainError:
                    ln = float("nan")
                rows.append((f1, f2, ln))
        return ["f1", "f2", "LN_P_C1"], rows

    rows = []
    for eta in _linspace(0.0, 1.0, grid):
        rows.append(
            (
                eta,
                man_from_prefactor(port_prefactor(eta), TABLE_F_MIN).man,
                man_from_prefactor(receivers_equal_prefactor(eta), TABLE_F_MIN).man,
            )
        )
    return ["eta", "MAN_port", "MAN_receivers"], rows
