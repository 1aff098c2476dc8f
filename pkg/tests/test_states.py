from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telecloning.errors import DomainError, ValidationError
from telecloning.linalg import SubsystemLayout
from telecloning.states import (
    DisentangleParams,
    InputQubit,
    PureState,
    bell_state,
    bell_vector,
    concurrence_eta,
    disentangle,
    disentangled_telecloning_state,
    symmetric_state,
    telecloning_alpha,
    telecloning_state,
    two_design_states,
    two_receiver_normalization,
)


def ket(bits):
    v = np.zeros(2 ** len(bits))
    v[int(bits, 2)] = 1.0
    return v


# --- symmetric states -------------------------------------------------------------


def test_symmetric_examples():
    assert np.allclose(symmetric_state(2, 0).amplitudes, ket("00"))
    assert np.allclose(symmetric_state(1, 1).amplitudes, (ket("01") + ket("10")) / sqrt(2))
    expect = (ket("001") + ket("010") + ket("100")) / sqrt(3)
    assert np.allclose(symmetric_state(2, 1).amplitudes, expect)


@pytest.mark.parametrize("a,b", [(3, 2), (1, 4), (0, 3), (4, 0)])
def test_symmetric_support_is_fixed_weight(a, b):
    v = symmetric_state(a, b).amplitudes
    weights = np.array([bin(i).count("1") for i in range(v.size)])
    assert np.all(v[weights != b] == 0)
    assert np.count_nonzero(v) == comb(a + b, b)


def test_symmetric_errors():
    with pytest.raises(DomainError):
        symmetric_state(0, 0)
    with pytest.raises(DomainError):
        symmetric_state(-1, 2)


# --- telecloning resource ---------------------------------------------------------


def test_telecloning_m1_is_bell_pair():
    s = telecloning_state(1)
    assert s.layout.names == ("P", "C1")
    assert np.allclose(s.amplitudes, bell_vector(1))


def test_telecloning_m2_explicit_form():
    a, b = sqrt(2 / 3), sqrt(1 / 6)
    zero = a * ket("000") + b * ket("101") + b * ket("110")
    one = a * ket("111") + b * ket("001") + b * ket("010")
    expect = (np.kron(ket("0"), zero) + np.kron(ket("1"), one)) / sqrt(2)
    s = telecloning_state(2)
    assert s.layout.names == ("P", "A1", "C1", "C2")
    assert np.allclose(s.amplitudes, expect, atol=1e-15)


@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_telecloning_alpha_amplitudes(M):
    s = telecloning_state(M)
    n_anc = M - 1
    assert sum(telecloning_alpha(M, j) ** 2 for j in range(M)) == pytest.approx(1.0)
    for j in range(M):
        # leftmost j ancillas and leftmost j receivers set, P = 0
        bits = "0" + "1" * j + "0" * (n_anc - j) + "1" * j + "0" * (M - j)
        expect = telecloning_alpha(M, j) / sqrt(2 * comb(n_anc, j) * comb(M, j))
        assert s.amplitude(bits) == pytest.approx(expect, abs=1e-14)


@pytest.mark.parametrize("M", [2, 3, 4])
def test_telecloning_flip_symmetry(M):
    # the |1>_P branch is the bitwise complement of the |0>_P branch
    v = telecloning_state(M).amplitudes
    n = 2 * M
    full = (1 << n) - 1
    assert np.allclose(v, v[[i ^ full for i in range(v.size)]])


@pytest.mark.parametrize("M", [2, 3])
def test_telecloning_receiver_permutation_invariance(M):
    v = telecloning_state(M).amplitudes.reshape((2,) * (2 * M))
    first_c = M  # P plus M-1 ancillas precede the receivers
    perm = list(range(2 * M))
    perm[first_c], perm[first_c + 1] = perm[first_c + 1], perm[first_c]
    assert np.allclose(v, v.transpose(perm))


def test_telecloning_errors():
    with pytest.raises(DomainError):
        telecloning_state(0)


# --- Bell states --------------------------------------------------------------------


def test_bell_examples():
    assert np.allclose(bell_vector(1), (ket("00") + ket("11")) / sqrt(2))
    assert np.allclose(bell_vector(3), (ket("01") + ket("10")) / sqrt(2))
    gram = np.array([[bell_vector(i).conj() @ bell_vector(j) for j in range(1, 5)] for i in range(1, 5)])
    assert np.allclose(gram, np.eye(4))
    assert bell_state(2, ("X", "P")).layout.names == ("X", "P")
    with pytest.raises(DomainError):
        bell_vector(5)


# --- disentangling -------------------------------------------------------------------


def test_disentangle_identity():
    s = telecloning_state(2)
    out = disentangle(s, DisentangleParams.optimal(2).slot_map())
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_disentangle_bell3():
    eta = 0.3
    out = disentangle(bell_state(3), {"q1": eta})
    expect = (ket("01") + eta * ket("10")) / sqrt(1 + eta**2)
    assert np.allclose(out.amplitudes, expect)


def test_disentangle_all_zero():
    s = PureState(SubsystemLayout.qubits("q"), ket("1"))
    with pytest.raises(ValidationError):
        disentangle(s, {"q": 0.0})


def test_disentangle_rejects_bad_eta():
    with pytest.raises(DomainError):
        disentangle(bell_state(1), {"q1": 1.5})
    with pytest.raises(DomainError):
        DisentangleParams(0.5j, 1.0, (1.0, 1.0))
    with pytest.raises(DomainError):
        DisentangleParams(1.0, 1.0, (-0.1,))


def test_two_receiver_normalization_optimal():
    # all etas 1: the unnormalised state has norm sqrt(3)
    assert two_receiver_normalization(1, 1, 1, 1) == pytest.approx(1 / sqrt(3))


@settings(max_examples=40, deadline=None)
@given(
    etas=st.tuples(*[st.floats(0.05, 1.0) for _ in range(4)]),
)
def test_two_receiver_normalization_matches_state(etas):
    eP, eA, e1, e2 = etas
    raw = (
        ket("0000")
        + eA * e2 / 2 * ket("0101")
        + eA * e1 / 2 * ket("0110")
        + eP * eA * e1 * e2 * ket("1111")
        + eP * e2 / 2 * ket("1001")
        + eP * e1 / 2 * ket("1010")
    )
    s = disentangled_telecloning_state(DisentangleParams(eP, eA, (e1, e2)))
    assert np.allclose(s.amplitudes, two_receiver_normalization(eP, eA, e1, e2) * raw, atol=1e-14)


# --- 2-design and concurrence ---------------------------------------------------------


def test_two_design_first_moment():
    mean = sum(q.density for q in two_design_states()) / 6
    assert np.allclose(mean, np.eye(2) / 2)


def _design_fidelity(kraus):
    vals = []
    for q in two_design_states():
        out = sum(k @ q.density @ k.conj().T for k in kraus)
        vals.append((q.ket.conj() @ out @ q.ket).real)
    return float(np.mean(vals))


def test_two_design_trivial_channels():
    assert _design_fidelity([np.eye(2)]) == pytest.approx(1.0)
    paulis = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    assert _design_fidelity([p / 2 for p in paulis]) == pytest.approx(0.5)


def test_two_design_matches_entanglement_fidelity(rng):
    # Haar-average fidelity is (2 F_e + 1) / 3 with F_e = sum |tr K|^2 / 4
    for _ in range(20):
        g = rng.normal(size=(8, 2)) + 1j * rng.normal(size=(8, 2))
        iso, _ = np.linalg.qr(g)
        kraus = [iso[2 * k : 2 * k + 2, :] for k in range(4)]
        fe = sum(abs(np.trace(k)) ** 2 for k in kraus) / 4
        assert _design_fidelity(kraus) == pytest.approx((2 * fe + 1) / 3, abs=1e-12)


def test_input_qubit_validation():
    with pytest.raises(ValidationError):
        InputQubit(1.0, 1.0)


@pytest.mark.parametrize("eta", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_concurrence_matches_schmidt(eta):
    v = (ket("01") + eta * ket("10")) / sqrt(1 + eta**2)
    s = np.linalg.svd(v.reshape(2, 2), compute_uv=False)
    assert concurrence_eta(eta) == pytest.approx(2 * s[0] * s[1], abs=1e-14)


def test_concurrence_endpoints():
    assert concurrence_eta(1.0) == 1.0
    assert concurrence_eta(0.0) == 0.0
