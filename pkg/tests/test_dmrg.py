import numpy as np
import pytest

from altchain.errors import CapabilityError, ConfigurationError
from altchain.model import ModelParams, build_terms, build_couplings, TermList
from altchain import exact_diag as ed
from altchain.free_fermion import FreeFermionHandle
from altchain.entanglement import pair_concurrence
from altchain import dmrg


FAST = dmrg.DmrgConfig(max_bond=32, sweeps=8, noise_schedule=(1e-6, 0.0))


def test_config_validation():
    with pytest.raises(ConfigurationError):
        dmrg.DmrgConfig(max_bond=1)
    with pytest.raises(ConfigurationError):
        dmrg.DmrgConfig(energy_tol=0.0)
    with pytest.raises(ConfigurationError):
        dmrg.DmrgConfig(sweeps=0)


@pytest.mark.parametrize("kwargs", [
    dict(gamma=1.0, n_sites=4),
    dict(gamma=0.4, kappa=0.3, alpha=0.7, beta=1.3, n_sites=6),
    dict(gamma=0.0, kappa=-0.5, alpha=1.2, beta=0.8, n_sites=5),
])
def test_mpo_dense_matches_hamiltonian(kwargs):
    terms = build_terms(ModelParams(lambda_=0.9, **kwargs))
    dense = ed.CompiledHamiltonian(terms).dense()
    assert np.abs(dmrg.mpo_to_dense(dmrg.mpo_build(terms)) - dense).max() < 1e-12


def test_mpo_field_only_chain():
    terms = TermList(n_sites=3, terms=((-1.0, {1: "z"}), (-2.0, {2: "z"}),
                                       (-0.5, {3: "z"})))
    dense = dmrg.mpo_to_dense(dmrg.mpo_build(terms))
    expected = ed.CompiledHamiltonian(terms).dense()
    assert np.abs(dense - expected).max() == 0.0


def test_mpo_matches_on_random_product_states():
    p = ModelParams(gamma=0.6, lambda_=1.1, kappa=0.3, n_sites=6)
    terms = build_terms(p)
    H = dmrg.mpo_to_dense(dmrg.mpo_build(terms))
    Href = ed.CompiledHamiltonian(terms).dense()
    rng = np.random.default_rng(2)
    for _ in range(20):
        vecs = [rng.standard_normal(2) for _ in range(6)]
        psi = np.ones(1)
        for v in vecs:
            psi = np.kron(v / np.linalg.norm(v), psi)
        assert psi @ H @ psi == pytest.approx(psi @ Href @ psi, abs=1e-10)


def test_mpo_rejects_long_range_terms():
    terms = TermList(n_sites=5, terms=((1.0, {1: "x", 4: "x"}),))
    with pytest.raises(CapabilityError):
        dmrg.mpo_build(terms)
    periodic = build_terms(ModelParams(n_sites=6, boundary="periodic"))
    with pytest.raises(CapabilityError):
        dmrg.mpo_build(periodic)


def test_mpo_rejects_odd_y_terms():
    terms = TermList(n_sites=3, terms=((1.0, {1: "y", 2: "z"}),))
    with pytest.raises(CapabilityError):
        dmrg.mpo_build(terms)


def test_two_site_chain_is_exact():
    terms = build_terms(ModelParams(gamma=0.8, lambda_=1.3, n_sites=2))
    psi, energy, diag = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), FAST)
    dense = np.linalg.eigvalsh(ed.CompiledHamiltonian(terms).dense())
    assert energy == pytest.approx(dense[0], abs=1e-12)
    assert psi.bond_dims() == (2,)


def test_ground_state_matches_exact_diag():
    p = ModelParams(gamma=1.0, lambda_=1.0, kappa=0.4, n_sites=12)
    terms = build_terms(p)
    gs = ed.ground_state(terms)
    h = dmrg.DmrgHandle(terms=terms, config=dmrg.DmrgConfig(max_bond=64))
    assert h.energy == pytest.approx(gs.energy, abs=1e-8)
    eh = ed.ExactDiagHandle(gs)
    for a in "xyz":
        for b in "xyz":
            assert h.correlator(a, 5, b, 6) == pytest.approx(
                eh.correlator(a, 5, b, 6), abs=1e-6)


def test_uniform_ising_matches_free_fermion():
    p = ModelParams(gamma=1.0, lambda_=1.0, n_sites=32)
    h = dmrg.DmrgHandle(params=p, config=dmrg.DmrgConfig(max_bond=64))
    hff = FreeFermionHandle(build_couplings(p), 1.0)
    assert h.energy == pytest.approx(hff.energy, abs=1e-7)
    assert h.correlator("x", 15, "x", 17) == pytest.approx(
        hff.correlator("x", 15, "x", 17), abs=1e-6)


def test_variational_bound_and_monotonic_sweeps():
    terms = build_terms(ModelParams(kappa=0.3, lambda_=0.8, n_sites=10))
    gs = ed.ground_state(terms)
    psi, energy, diag = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), FAST)
    assert energy >= gs.energy - 1e-10
    # monotone non-increasing once the noise schedule has hit zero
    quiet = diag.sweep_energies[len(FAST.noise_schedule):]
    for a, b in zip(quiet, quiet[1:]):
        assert b <= a + 1e-12


def test_norm_and_bond_cap():
    terms = build_terms(ModelParams(lambda_=1.0, n_sites=14))
    cfg = dmrg.DmrgConfig(max_bond=8, sweeps=6, noise_schedule=(0.0,))
    psi, _, _ = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), cfg)
    assert psi.norm() == pytest.approx(1.0, abs=1e-10)
    assert max(psi.bond_dims()) <= 8


def test_canonical_form_at_center():
    terms = build_terms(ModelParams(lambda_=0.9, n_sites=8))
    psi, _, _ = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), FAST)
    c = psi.center
    for k in range(c):
        t = psi.tensors[k]
        m = t.reshape(-1, t.shape[2])
        assert np.allclose(m.T @ m, np.eye(t.shape[2]), atol=1e-10)
    for k in range(c + 1, psi.n_sites):
        t = psi.tensors[k]
        m = t.reshape(t.shape[0], -1)
        assert np.allclose(m @ m.T, np.eye(t.shape[0]), atol=1e-10)


def test_nonconvergence_is_flagged_not_raised():
    terms = build_terms(ModelParams(lambda_=1.0, n_sites=12))
    cfg = dmrg.DmrgConfig(max_bond=16, sweeps=1, noise_schedule=(0.0,))
    _, _, diag = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), cfg)
    assert diag.converged is False


def test_product_mps_zz_correlator():
    up = np.zeros((1, 2, 1))
    up[0, 0, 0] = 1.0
    psi = dmrg.MPS([up.copy() for _ in range(6)])
    for i in range(1, 6):
        assert dmrg.mps_correlator(psi, "z", i, "z", i + 1) == pytest.approx(1.0)
        assert dmrg.mps_magnetization(psi, "z", i) == pytest.approx(1.0)


def test_correlators_are_gauge_invariant():
    terms = build_terms(ModelParams(lambda_=1.1, n_sites=8))
    psi, _, _ = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), FAST)
    before = dmrg.mps_correlator(psi, "x", 3, "x", 5)
    rng = np.random.default_rng(4)
    k = 3
    d = psi.tensors[k].shape[2]
    g = rng.standard_normal((d, d)) + np.eye(d) * 2
    ginv = np.linalg.inv(g)
    psi.tensors[k] = np.einsum("apb,bc->apc", psi.tensors[k], g)
    psi.tensors[k + 1] = np.einsum("cb,bpa->cpa", ginv, psi.tensors[k + 1])
    after = dmrg.mps_correlator(psi, "x", 3, "x", 5)
    assert after == pytest.approx(before, abs=1e-8)


def test_checkpoint_round_trip(tmp_path):
    terms = build_terms(ModelParams(lambda_=0.8, n_sites=6))
    psi, energy, _ = dmrg.dmrg_ground_state(dmrg.mpo_build(terms), FAST)
    path = tmp_path / "state.npz"
    dmrg.save_checkpoint(path, psi, energy)
    back, e = dmrg.load_checkpoint(path)
    assert e == pytest.approx(energy)
    for a, b in zip(psi.tensors, back.tensors):
        assert np.allclose(a, b)
    assert back.center == psi.center


def test_checkpoint_version_guard(tmp_path):
    path = tmp_path / "bad.npz"
    np.savez(path, version=99, n_sites=2, center=0, energy=0.0)
    with pytest.raises(ConfigurationError):
        dmrg.load_checkpoint(path)


def test_warm_start_converges_quickly():
    p1 = ModelParams(lambda_=0.9, n_sites=12)
    h1 = dmrg.DmrgHandle(params=p1, config=FAST)
    terms2 = build_terms(p1.replace(**{"lambda": 0.95}))
    cfg = dmrg.DmrgConfig(max_bond=32, sweeps=8, noise_schedule=(0.0,))
    psi, energy, diag = dmrg.dmrg_ground_state(dmrg.mpo_build(terms2), cfg,
                                               initial=h1.mps)
    assert diag.converged
    gs = ed.ground_state(terms2)
    assert energy == pytest.approx(gs.energy, abs=1e-8)


def test_broken_symmetry_detection_and_symmetrization():
    p = ModelParams(gamma=1.0, lambda_=2.5, n_sites=16)
    h = dmrg.DmrgHandle(params=p, config=dmrg.DmrgConfig(max_bond=48))
    gs = ed.ground_state(build_terms(p))
    eh = ed.ExactDiagHandle(gs)
    # either the run stayed symmetric (tiny values) or the collapse was
    # detected and the parity-odd observables were zeroed
    assert abs(h.magnetization("x", 8)) < 1e-6
    assert abs(h.correlator("x", 8, "z", 9)) < 1e-6
    assert pair_concurrence(h, 8, 9).value == pytest.approx(
        pair_concurrence(eh, 8, 9).value, abs=1e-5)
