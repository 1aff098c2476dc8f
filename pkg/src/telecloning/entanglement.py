"""Negativity, logarithmic negativity and the LN monogamy score.

Also carries closed-form LN values for the first and second recycled
two-receiver channels, parameterised by the fidelities already demanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2, sqrt
from typing import Iterable, Sequence, Union

import numpy as np

from telecloning.errors import DomainError, ValidationError
from telecloning.linalg import DensityMatrix, herm_eig, partial_trace, partial_transpose

# tolerance on fidelity arguments of the closed forms
_F_SLACK = 1e-12


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset[str]
    side_b: frozenset[str]

    def __init__(self, side_a: Iterable[str], side_b: Iterable[str]):
        a, b = frozenset(side_a), frozenset(side_b)
        if not a or not b:
            raise ValidationError("both sides of a bipartition must be nonempty")
        if a & b:
            raise ValidationError(f"bipartition sides overlap on {sorted(a & b)}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    def check(self, rho: DensityMatrix):
        names = set(rho.layout.names)
        if self.side_a | self.side_b != names:
            raise ValidationError(
                f"bipartition {sorted(self.side_a)}:{sorted(self.side_b)} "
                f"does not cover layout {list(rho.layout.names)}"
            )


def _pt_spectrum(rho: DensityMatrix, bip: Bipartition) -> np.ndarray:
    bip.check(rho)
    return herm_eig(partial_transpose(rho, bip.side_a))[0]


def negativity(rho: DensityMatrix, bip: Bipartition) -> float:
    """``(||rho^T_A||_1 - 1) / 2``: the summed magnitude of negative PT eigenvalues."""
    w = _pt_spectrum(rho, bip)
    return max(0.0, (float(np.sum(np.abs(w))) - 1.0) / 2.0)


def log_negativity(rho: DensityMatrix, bip: Bipartition) -> float:
    """``log2 ||rho^T_A||_1``."""
    return log2(2.0 * negativity(rho, bip) + 1.0)


def ln_between(rho: DensityMatrix, side_a: Iterable[str], side_b: Iterable[str]) -> float:
    """LN of the marginal on ``side_a | side_b`` across that split."""
    a, b = set(side_a), set(side_b)
    rest = set(rho.layout.names) - a - b
    red = partial_trace(rho, rest) if rest else rho
    return log_negativity(red, Bipartition(a, b))


Group = Union[str, Sequence[str]]


@dataclass(frozen=True)
class MonogamyQuery:
    nodal: str
    others: tuple[tuple[str, ...], ...]

    def __init__(self, nodal: str, others: Sequence[Group]):
        groups = tuple((g,) if isinstance(g, str) else tuple(g) for g in others)
        flat = [n for g in groups for n in g]
        if nodal in flat:
            raise ValidationError(f"nodal party {nodal!r} also listed among the others")
        if len(set(flat)) != len(flat):
            raise ValidationError("monogamy groups overlap")
        object.__setattr__(self, "nodal", nodal)
        object.__setattr__(self, "others", groups)


def monogamy_score(rho: DensityMatrix, q: MonogamyQuery) -> float:
    """LN between the nodal party and all others, minus the pairwise LN sum."""
    for name in [q.nodal] + [n for g in q.others for n in g]:
        rho.layout.index(name)
    everyone = [n for g in q.others for n in g]
    total = ln_between(rho, [q.nodal], everyone)
    return total - sum(ln_between(rho, [q.nodal], g) for g in q.others)


def first_recycled_entanglement(lam1: float) -> dict[str, float]:
    """Numerical LN values of the all-refuse recycled two-receiver channel."""
    from telecloning.protocol import fresh_channel, recycle

    ch = recycle(fresh_channel(2), lam1, (False, False))
    rho = ch.rho
    out = {
        "P_C1": ln_between(rho, ["P"], ["C1"]),
        "P_C2": ln_between(rho, ["P"], ["C2"]),
        "P_A": ln_between(rho, ["P"], ["A1"]),
        "P_ACC": ln_between(rho, ["P"], ["A1", "C1", "C2"]),
    }
    out["delta"] = out["P_ACC"] - out["P_A"] - out["P_C1"] - out["P_C2"]
    return out


# --- closed forms --------------------------------------------------------------


def p_of_fidelity(f1: float) -> float:
    """Port depolarising factor after a round tuned to fidelity ``f1`` (two receivers)."""
    a = max(5.0 - 6.0 * f1, 0.0)
    return 0.25 * (a + _sqrt_checked(a * (18.0 * f1 - 7.0), "(5 - 6 f1)(18 f1 - 7)"))


def _sqrt_checked(x: float, what: str) -> float:
    if x < -_F_SLACK:
        raise DomainError(f"{what} is negative ({x!r}); fidelity outside reachable range")
    return sqrt(max(x, 0.0))


def _log_from_signed(expr: float, denom: float) -> float:
    # expr is positive exactly when the partial transpose stays PSD
    return log2(1.0 + max(0.0, -expr / denom))


def ln_recycled_closed(rnd: int, f1: float, f2: float | None = None, which: str = "P_C1") -> float:
    """Closed-form LN of the recycled two-receiver channel.

    ``rnd = 1`` is the channel left after one refused round tuned to ``f1``;
    ``rnd = 2`` additionally needs the second-round fidelity ``f2``.
    ``which`` is ``"P_C1"`` (port vs one receiver) or ``"P_ACC"`` (port vs the
    rest). Values are clamped to zero once the state becomes PPT.
    """
    if which not in ("P_C1", "P_ACC"):
        raise ValidationError(f"which must be 'P_C1' or 'P_ACC', got {which!r}")
    if not 2.0 / 3.0 - _F_SLACK <= f1 <= 5.0 / 6.0 + _F_SLACK:
        raise DomainError(f"f1 must lie in [2/3, 5/6], got {f1!r}")
    x1 = _sqrt_checked(2.5 - 3 * f1, "2.5 - 3 f1") * _sqrt_checked(9 * f1 - 3.5, "9 f1 - 3.5")

    if rnd == 1:
        inner = _sqrt_checked((2.5 - 3 * f1) * (3 * f1 - 0.5 + x1), "radicand")
        if which == "P_C1":
            return _log_from_signed(0.5 + 3 * f1 - x1 - 2 * sqrt(2.0) * inner, 6.0)
        return _log_from_signed(-0.5 + 3 * f1 - x1 - 2 * sqrt(2.0) * inner, 4.0)

    if rnd != 2:
        raise DomainError(f"round must be 1 or 2, got {rnd!r}")
    if f2 is None:
        raise DomainError("round 2 needs f2")
    pf = p_of_fidelity(f1)
    if pf <= 0.0:
        raise DomainError(f"a sharp first round (f1 = {f1!r}) leaves nothing to recycle")
    x3 = (3 * f2 - 1.5) / pf
    if not -_F_SLACK <= x3 <= 1.0 + _F_SLACK:
        raise DomainError(f"f2 = {f2!r} is not reachable after f1 = {f1!r}")
    x3 = min(max(x3, 0.0), 1.0)
    x2 = _sqrt_checked(1 - x3, "1 - X3") * _sqrt_checked(1 + (9 * f2 - 4.5) / pf, "1 + 3 X3")
    root = _sqrt_checked(
        (3 * f1 - 2.5) * (3 * f1 - 0.5 + x1) * (x3 - 1) * (1 + x2 + x3), "radicand"
    )
    cross = (3 * f1 - 2.5 - x1) * (x2 - x3)
    if which == "P_C1":
        return _log_from_signed(3.5 + 3 * f1 - x1 + cross - 4 * root, 12.0)
    return _log_from_signed(1.5 + 3 * f1 - x1 + cross - 4 * root, 8.0)
