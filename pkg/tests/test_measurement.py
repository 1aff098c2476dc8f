from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telecloning.errors import DomainError, ValidationError
from telecloning.linalg import SubsystemLayout, herm_sqrt
from telecloning.measurement import (
    CORRECTIONS,
    SIGMA_I,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    AcceptanceMask,
    correction_unitary,
    kraus_set,
    weak_bell_povm,
)
from telecloning.states import bell_vector, telecloning_layout, telecloning_state, two_design_states

PAULIS = {"I": SIGMA_I, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


def sharp_fidelity(M, table):
    """Average fidelity of C1 after a sharp Bell measurement, by direct contraction."""
    psi = telecloning_state(M).amplitudes.reshape(2, -1)  # (P, rest)
    n_rest = 2 * M - 1
    c1 = M - 1  # position of C1 inside the rest
    vals = []
    for q in two_design_states():
        total = np.zeros((2, 2), dtype=complex)
        for k in range(4):
            b = bell_vector(k + 1).reshape(2, 2)  # (X, P)
            w = np.einsum("xp,x,pr->r", b.conj(), q.ket, psi).reshape((2,) * n_rest)
            w = np.moveaxis(w, c1, 0).reshape(2, -1)
            u = table[k]
            total += u @ (w @ w.conj().T) @ u.conj().T
        vals.append((q.ket.conj() @ total @ q.ket).real)
    return float(np.mean(vals))


def test_calibration_search_is_unique():
    scores = {}
    for perm in permutations("IXYZ"):
        scores[perm] = sharp_fidelity(2, [PAULIS[p] for p in perm])
    best = max(scores.values())
    winners = [p for p, s in scores.items() if abs(s - best) < 1e-12]
    assert best == pytest.approx(5 / 6, abs=1e-12)
    assert winners == [("I", "Z", "X", "Y")]
    table = [CORRECTIONS[k] for k in range(1, 5)]
    assert all(np.array_equal(a, PAULIS[p]) for a, p in zip(table, winners[0]))


def test_calibration_three_receivers():
    assert sharp_fidelity(3, [CORRECTIONS[k] for k in range(1, 5)]) == pytest.approx(7 / 9, abs=1e-12)


def test_correction_table_entries():
    assert np.array_equal(correction_unitary(1), np.eye(2))
    with pytest.raises(DomainError):
        correction_unitary(0)


# --- POVM -----------------------------------------------------------------------------


def test_povm_spectrum_half():
    povm = weak_bell_povm(0.5)
    w = np.sort(np.linalg.eigvalsh(povm.elements[0]))
    assert np.allclose(w, [0.125, 0.125, 0.125, 0.625])
    assert povm.spectrum == pytest.approx((0.625, 0.125))


def test_povm_sharp_limit_is_bell_projectors():
    povm = weak_bell_povm(1.0)
    for i, m in enumerate(povm.elements, start=1):
        b = bell_vector(i)
        assert np.allclose(m, np.outer(b, b.conj()))


def test_povm_unsharp_limit():
    povm = weak_bell_povm(1e-12)
    for m in povm.elements:
        assert np.allclose(m, np.eye(4) / 4, atol=1e-11)


@pytest.mark.parametrize("lam", [0.0, -0.1, 1.0000001, float("nan")])
def test_povm_rejects_lambda(lam):
    with pytest.raises(DomainError):
        weak_bell_povm(lam)


@settings(max_examples=50, deadline=None)
@given(lam=st.floats(1e-6, 1.0))
def test_povm_completeness_and_roots(lam):
    povm = weak_bell_povm(lam)
    assert np.allclose(sum(povm.elements), np.eye(4), atol=1e-12)
    for m, r in zip(povm.elements, povm.sqrt_elements):
        assert np.allclose(r @ r, m, atol=1e-12)
        # eigendecomposition route gives the same root; near lambda = 1 the
        # small eigenvalues make that route accurate only to about sqrt(eps)
        assert np.allclose(r, herm_sqrt(m), atol=1e-7)


# --- masks and Kraus sets --------------------------------------------------------------


def test_mask_constructors():
    assert AcceptanceMask.refuse_all(2).bits == (False, False)
    assert AcceptanceMask.accept_all(3).bits == (True, True, True)
    assert AcceptanceMask.accept_only(3, 1).bits == (False, True, False)


def test_kraus_refuse_all_sharp_is_bell_projector():
    lay = telecloning_layout(2).prepend("X")
    ks = kraus_set(1.0, AcceptanceMask.refuse_all(2), lay)
    for i, k in enumerate(ks.ops, start=1):
        b = bell_vector(i)
        assert np.allclose(k, np.kron(np.outer(b, b.conj()), np.eye(8)))


@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("lam", [0.2, 0.6, 1.0])
def test_kraus_completeness(M, lam):
    lay = telecloning_layout(M).prepend("X")
    masks = [AcceptanceMask.refuse_all(M), AcceptanceMask.accept_all(M)]
    masks += [AcceptanceMask.accept_only(M, i) for i in range(M)]
    for mask in masks:
        assert kraus_set(lam, mask, lay).completeness_error() < 1e-12


def test_kraus_mask_length_mismatch():
    lay = telecloning_layout(2).prepend("X")
    with pytest.raises(ValidationError):
        kraus_set(0.5, AcceptanceMask((True,)), lay)


def test_kraus_needs_measured_pair():
    with pytest.raises(KeyError):
        kraus_set(0.5, AcceptanceMask((False,)), SubsystemLayout.qubits("P", "C1"))
