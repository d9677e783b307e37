import numpy as np
import pytest
from scipy.linalg import sqrtm
from scipy.stats import unitary_group

from altchain.errors import NumericalIntegrityError
from altchain.model import ModelParams, build_terms, build_couplings
from altchain import exact_diag as ed
from altchain.free_fermion import FreeFermionHandle
from altchain.entanglement import (two_site_rdm, concurrence, pair_concurrence,
                                   TwoSiteRDM)

# frozen concurrences for the dense-oracle chains of test_exact_diag
ORACLE_OPEN8_C34 = 0.20738084607759
ORACLE_OPEN8_C35 = 0.10321474045454
ORACLE_PERIODIC6_C34 = 0.14638638815742


def bell():
    v = np.zeros(4)
    v[0] = v[3] = 1 / np.sqrt(2)
    return np.outer(v, v)


def werner(p):
    v = np.zeros(4)
    v[1], v[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    return p * np.outer(v, v) + (1 - p) * np.eye(4) / 4


class DictProvider:
    """Correlator lookup table standing in for a solver handle."""

    def __init__(self, n_sites, mags, corrs):
        self.n_sites = n_sites
        self.energy = 0.0
        self.converged = True
        self._m, self._c = mags, corrs

    def magnetization(self, a, i):
        return self._m.get((a, i), 0.0)

    def correlator(self, a, i, b, j):
        return self._c.get((a, i, b, j), 0.0)


def test_bell_state_concurrence_is_one():
    assert concurrence(bell()).value == pytest.approx(1.0, abs=1e-10)


def test_maximally_mixed_is_zero():
    assert concurrence(np.eye(4) / 4).value == pytest.approx(0.0, abs=1e-10)


def test_product_state_is_zero():
    rho = np.zeros((4, 4))
    rho[0, 0] = 1.0
    assert concurrence(rho).value == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_closed_form(p):
    expected = max(0.0, (3 * p - 1) / 2)
    assert concurrence(werner(p)).value == pytest.approx(expected, abs=1e-10)


def test_local_unitary_invariance():
    rng = np.random.default_rng(5)
    rho = werner(0.7)
    c0 = concurrence(rho).value
    for _ in range(50):
        U = np.kron(unitary_group.rvs(2, random_state=rng),
                    unitary_group.rvs(2, random_state=rng))
        assert concurrence(U @ rho @ U.conj().T).value == pytest.approx(
            c0, abs=1e-9)


def test_matches_spin_flip_sqrt_construction():
    # the rho*rho_tilde eigenvalue route must agree with the literal
    # R = sqrt(sqrt(rho) rho_tilde sqrt(rho)) definition
    rng = np.random.default_rng(8)
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    for _ in range(10):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        R = sqrtm(sqrtm(rho) @ (yy @ rho.conj() @ yy) @ sqrtm(rho))
        lam = np.sort(np.real(np.linalg.eigvals(R)))[::-1]
        expected = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
        assert concurrence(rho).value == pytest.approx(expected, abs=1e-8)


def test_product_state_rdm():
    p = DictProvider(2, {("z", 1): 1.0, ("z", 2): 1.0}, {("z", 1, "z", 2): 1.0})
    rdm = two_site_rdm(p, 1, 2)
    assert np.allclose(rdm.rho, np.diag([1.0, 0, 0, 0]), atol=1e-12)


def test_ghz_pair_rdm():
    # GHZ of N=4: pair RDM is an equal classical mixture of |00> and |11>
    amps = np.zeros(16)
    amps[0] = amps[15] = 1 / np.sqrt(2)
    gs = ed.StateVector(amplitudes=amps, n_sites=4)
    h = ed.ExactDiagHandle(ed.GroundStateResult(state=gs, energy=0.0, gap=1.0,
                                                parity_sector="even"))
    rdm = two_site_rdm(h, 1, 2)
    assert np.allclose(rdm.rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-12)


def test_full_tomography_equals_partial_trace():
    p = ModelParams(gamma=0.7, lambda_=0.9, alpha=0.8, beta=1.2, kappa=0.3,
                    n_sites=8)
    gs = ed.ground_state(build_terms(p))
    rdm = two_site_rdm(ed.ExactDiagHandle(gs), 3, 5, mode="full_tomography")
    # direct partial trace, bit k holds site k+1, bit value 1 = spin down
    rho = np.zeros((4, 4), dtype=complex)
    amps = gs.state.amplitudes
    for idx in range(256):
        si, sj = (idx >> 2) & 1, (idx >> 4) & 1
        base = idx & ~0b10100
        for ti in (0, 1):
            for tj in (0, 1):
                jdx = base | (ti << 2) | (tj << 4)
                rho[2 * si + sj, 2 * ti + tj] += amps[idx] * np.conj(amps[jdx])
    assert np.abs(rdm.rho - rho).max() < 1e-9


@pytest.mark.parametrize("pair,expected", [
    ((3, 4), ORACLE_OPEN8_C34), ((3, 5), ORACLE_OPEN8_C35)])
def test_frozen_concurrence_open_chain(pair, expected):
    p = ModelParams(gamma=0.7, lambda_=0.9, alpha=0.8, beta=1.2, kappa=0.3,
                    n_sites=8)
    h = ed.ExactDiagHandle(ed.ground_state(build_terms(p)))
    assert pair_concurrence(h, *pair).value == pytest.approx(expected, abs=1e-9)


def test_frozen_concurrence_periodic_chain():
    p = ModelParams(gamma=1.0, lambda_=1.1, alpha=1.3, beta=0.7, kappa=-0.4,
                    n_sites=6, boundary="periodic")
    h = ed.ExactDiagHandle(ed.ground_state(build_terms(p)))
    assert pair_concurrence(h, 3, 4).value == pytest.approx(
        ORACLE_PERIODIC6_C34, abs=1e-9)
    assert pair_concurrence(h, 3, 5).value == pytest.approx(0.0, abs=1e-9)


def test_symmetric_mode_matches_full_tomography():
    p = ModelParams(gamma=1.0, lambda_=1.0, n_sites=24)
    h = FreeFermionHandle(build_couplings(p), 1.0)
    full = concurrence(two_site_rdm(h, 11, 13, mode="full_tomography")).value
    sym = concurrence(two_site_rdm(h, 11, 13, mode="symmetric_eq3")).value
    assert sym == pytest.approx(full, abs=1e-10)


def test_swap_symmetry():
    p = ModelParams(gamma=1.0, lambda_=0.9, n_sites=10)
    h = ed.ExactDiagHandle(ed.ground_state(build_terms(p)))
    assert pair_concurrence(h, 4, 6).value == pytest.approx(
        pair_concurrence(h, 6, 4).value, abs=1e-10)


def test_same_site_pair_rejected():
    p = DictProvider(2, {}, {})
    with pytest.raises(ValueError):
        two_site_rdm(p, 1, 1)


def test_unknown_mode_rejected():
    p = DictProvider(2, {}, {})
    with pytest.raises(ValueError):
        two_site_rdm(p, 1, 2, mode="eq5")


def test_bad_trace_raises_integrity_error():
    bad = DictProvider(2, {}, {})

    class Broken(DictProvider):
        def correlator(self, a, i, b, j):
            return 3.0 if (a, b) == ("z", "z") else 0.0

    # an RDM assembled from inconsistent correlators has negative eigenvalues
    with pytest.raises(NumericalIntegrityError):
        two_site_rdm(Broken(2, {}, {}), 1, 2)
    del bad


def test_concurrence_bounds_on_ground_states():
    for lam in (0.3, 1.0, 1.7):
        p = ModelParams(gamma=1.0, lambda_=lam, n_sites=10)
        h = ed.ExactDiagHandle(ed.ground_state(build_terms(p)))
        c = pair_concurrence(h, 5, 6)
        assert 0.0 <= c.value <= 1.0
