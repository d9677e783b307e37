"""Two-site DMRG ground-state engine for open chains with range <= 2 terms.

The Hamiltonian TermList is compiled into a finite-state-machine MPO whose
channels carry the x (and y) operators across one or two sites.  All MPO
tensors are kept real by routing y-pairs through i*sigma_y, which flips the
sign of the pair coefficient.  The variational state is a matrix product
state updated two sites at a time with a Lanczos local solve, singular-value
truncation, and a decaying noise schedule to escape local minima near the
transition.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as sla

from .errors import CapabilityError, ConfigurationError
from .free_fermion import is_symmetry_zero
from .model import TermList, ModelParams, build_terms

PAULI = {
    "i": np.eye(2),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "y": np.array([[0.0, 1.0], [-1.0, 0.0]]),   # i*sigma_y, keeps the MPO real
    "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}

DENSE_SOLVE_MAX = 400        # local dimension below which a dense eigh is cheaper
BROKEN_SYMMETRY_TOL = 1e-3   # |<sigma^x_center>| above this flags a collapsed state
CHECKPOINT_VERSION = 1


@dataclass
class DmrgConfig:
    """Knobs for one DMRG run; defaults are overkill for N ~ 59 chains."""

    max_bond: int = 128
    sweeps: int = 12
    energy_tol: float = 1e-9
    truncation_cutoff: float = 1e-12
    noise_schedule: tuple = (1e-5, 1e-6, 1e-7, 0.0)
    seed: int = 7

    def __post_init__(self):
        if self.max_bond < 2:
            raise ConfigurationError("max_bond must be >= 2")
        if not self.energy_tol > 0:
            raise ConfigurationError("energy_tol must be positive")
        if self.sweeps < 1:
            raise ConfigurationError("need at least one sweep")


@dataclass
class Diagnostics:
    sweep_energies: list = field(default_factory=list)
    truncation_errors: list = field(default_factory=list)
    bond_dims: tuple = ()
    converged: bool = False


class MPS:
    """Open-boundary matrix product state; tensors are (left, phys, right)."""

    def __init__(self, tensors, center=0):
        self.tensors = list(tensors)
        self.center = center

    @property
    def n_sites(self):
        return len(self.tensors)

    def bond_dims(self):
        return tuple(t.shape[2] for t in self.tensors[:-1])

    def norm(self):
        e = np.ones((1, 1))
        for t in self.tensors:
            e = np.einsum("ab,apc,bpd->cd", e, t, t, optimize=True)
        return float(np.sqrt(abs(e[0, 0])))

    def copy(self):
        return MPS([t.copy() for t in self.tensors], self.center)


def random_mps(n_sites, bond_dim, seed):
    """Seeded random right-canonical MPS with norm 1."""
    rng = np.random.default_rng(seed)
    dims = [1] + [min(bond_dim, 2 ** min(k, n_sites - k)) for k in range(1, n_sites)] + [1]
    tensors = [rng.standard_normal((dims[k], 2, dims[k + 1])) for k in range(n_sites)]
    # sweep right to left, QR-orthogonalizing each site
    for k in range(n_sites - 1, 0, -1):
        dl, _, dr = tensors[k].shape
        q, r = np.linalg.qr(tensors[k].reshape(dl, 2 * dr).T)
        tensors[k] = q.T.reshape(-1, 2, dr)
        tensors[k - 1] = np.einsum("apb,cb->apc", tensors[k - 1], r, optimize=True)
    tensors[0] /= np.linalg.norm(tensors[0])
    return MPS(tensors, center=0)


@dataclass
class MPO:
    """FSM matrix product operator; tensors are (wl, wr, phys_out, phys_in)."""

    tensors: list

    @property
    def n_sites(self):
        return len(self.tensors)


def mpo_build(terms: TermList) -> MPO:
    """Compile a range <= 2 TermList into an exact FSM MPO.

    Channel allocation: between sites s and s+1 a channel exists for every
    (start site, axis) pair still in flight; terms sharing a start operator
    share its channel.  Terms with an odd number of y operators would force
    complex tensors and are rejected.
    """
    n = terms.n_sites
    prepared = []
    for coeff, ops in terms:
        sites = sorted(ops)
        if sites[-1] - sites[0] > 2:
            raise CapabilityError(
                "MPO compilation handles interaction range <= 2 only "
                "(periodic wrap terms and longer strings are unsupported)")
        n_y = sum(1 for a in ops.values() if a == "y")
        if n_y % 2 == 1:
            raise CapabilityError("terms with an odd number of y operators "
                                  "have imaginary matrix elements")
        # sigma_y = -i * (i sigma_y): a y-pair flips the coefficient sign
        prepared.append((coeff * (-1.0) ** (n_y // 2), {s: ops[s] for s in sites}))

    # channels[b] maps a key to its row/column index on the bond after site b+1
    channels = [dict() for _ in range(n + 1)]
    for b in range(n + 1):
        channels[b]["ready"] = 0
        channels[b]["done"] = 1
    for coeff, ops in prepared:
        sites = sorted(ops)
        if len(sites) == 2:
            for b in range(sites[0], sites[1]):
                key = (sites[0], ops[sites[0]])
                channels[b].setdefault(key, len(channels[b]))

    tensors = []
    for site in range(1, n + 1):
        left, right = channels[site - 1], channels[site]
        W = np.zeros((len(left), len(right), 2, 2))
        W[left["ready"], right["ready"]] = PAULI["i"]
        W[left["done"], right["done"]] = PAULI["i"]
        for coeff, ops in prepared:
            sites = sorted(ops)
            if site == sites[0] == sites[-1]:
                W[left["ready"], right["done"]] += coeff * PAULI[ops[site]]
            elif site == sites[0]:
                key = (site, ops[site])
                # shared channel: terms with the same start operator emit once
                W[left["ready"], right[key]] = PAULI[ops[site]]
            elif site == sites[-1]:
                key = (sites[0], ops[sites[0]])
                W[left[key], right["done"]] += coeff * PAULI[ops[site]]
            elif sites[0] < site < sites[-1]:
                key = (sites[0], ops[sites[0]])
                W[left[key], right[key]] = PAULI["i"]
        tensors.append(W)

    # boundary slices: start in the "ready" row, finish in the "done" column
    tensors[0] = tensors[0][:1]
    tensors[-1] = tensors[-1][:, 1:2]
    return MPO(tensors)


def mpo_to_dense(mpo: MPO) -> np.ndarray:
    """Contract an MPO to a dense matrix (small chains, testing only)."""
    m = np.ones((1, 1, 1))   # (wl, dim_out, dim_in)
    for W in mpo.tensors:
        m = np.einsum("wab,wvpq->vpaqb", m, W, optimize=True)
        v, p, a, q, b = m.shape
        m = m.reshape(v, p * a, q * b)
    return m[0]


def _contract_left(L, T, W):
    t = np.einsum("xwy,ypz->xwpz", L, T, optimize=True)
    t = np.einsum("xwpz,wvsp->xvsz", t, W, optimize=True)
    return np.einsum("xvsz,xsb->bvz", t, T, optimize=True)


def _contract_right(R, T, W):
    t = np.einsum("ypz,bwz->ypbw", T, R, optimize=True)
    t = np.einsum("ypbw,vwsp->ysbv", t, W, optimize=True)
    return np.einsum("ysbv,xsb->xvy", t, T, optimize=True)


def _effective_matvec(L, W1, W2, R, theta):
    # tensordot chain; index comments use L(x,w,y), W(w,v,s,p), R(b,u,z)
    t = np.tensordot(L, theta, axes=(2, 0))               # x w p q b
    t = np.tensordot(t, W1, axes=((1, 2), (0, 3)))        # x q b v s
    t = np.tensordot(t, W2, axes=((1, 3), (3, 0)))        # x b s u t
    return np.tensordot(t, R, axes=((1, 3), (2, 1)))      # x s t b


def _local_ground(L, W1, W2, R, theta0, tol):
    """Lowest eigenpair of the two-site effective Hamiltonian."""
    shape = theta0.shape
    dim = theta0.size
    if dim <= DENSE_SOLVE_MAX:
        H = np.einsum("xwy,wvsp,vutq,buz->xstbypqz", L, W1, W2, R,
                      optimize=True).reshape(dim, dim)
        w, v = np.linalg.eigh((H + H.T) / 2.0)
        return float(w[0]), v[:, 0].reshape(shape)
    op = sla.LinearOperator(
        (dim, dim),
        matvec=lambda x: _effective_matvec(L, W1, W2, R, x.reshape(shape)).ravel())
    v0 = theta0.ravel()
    v0 = v0 / np.linalg.norm(v0)
    w, v = sla.eigsh(op, k=1, which="SA", v0=v0, tol=tol)
    return float(w[0]), v[:, 0].reshape(shape)


def _split_theta(theta, direction, max_bond, cutoff):
    """SVD split of the optimized two-site tensor, truncated and renormalized."""
    dl, _, _, dr = theta.shape
    U, s, Vt = np.linalg.svd(theta.reshape(dl * 2, 2 * dr), full_matrices=False)
    total = float((s ** 2).sum())
    keep = len(s)
    tail = 0.0
    while keep > 1 and tail + s[keep - 1] ** 2 <= cutoff * total:
        tail += s[keep - 1] ** 2
        keep -= 1
    keep = min(keep, max_bond)
    trunc = float((s[keep:] ** 2).sum() / total)
    s = s[:keep] / np.linalg.norm(s[:keep])
    U, Vt = U[:, :keep], Vt[:keep]
    if direction == "right":
        A = U.reshape(dl, 2, keep)
        B = (s[:, None] * Vt).reshape(keep, 2, dr)
    else:
        A = (U * s).reshape(dl, 2, keep)
        B = Vt.reshape(keep, 2, dr)
    return A, B, trunc


def dmrg_ground_state(mpo: MPO, config: DmrgConfig = None, initial: MPS = None):
    """Variational ground-state search; returns (MPS, energy, Diagnostics).

    One sweep is a full left-to-right plus right-to-left pass of two-site
    updates.  Convergence requires the energy change between successive
    noise-free sweeps to drop below energy_tol; running out of sweeps sets
    converged=False on the diagnostics instead of raising.
    """
    config = config or DmrgConfig()
    n = mpo.n_sites
    if initial is not None:
        psi = initial.copy()
        # the noise sweeps only exist to kick a random start out of local
        # minima; a supplied state goes straight to quiet sweeps, which
        # keeps warm-started continuation runs at the converged bond size
        config = dataclasses.replace(config, noise_schedule=(0.0,))
    else:
        psi = random_mps(n, min(8, config.max_bond), config.seed)
    rng = np.random.default_rng(config.seed + 1)
    W = mpo.tensors
    # relative ARPACK tolerance; warm-started solves then stop early
    solve_tol = config.energy_tol * 1e-2

    Ls = [np.ones((1, 1, 1))] * n
    Rs = [np.ones((1, 1, 1))] * n
    for k in range(n - 2, -1, -1):
        Rs[k] = _contract_right(Rs[k + 1], psi.tensors[k + 1], W[k + 1])

    diag = Diagnostics()
    prev_energy = None
    prev_noise = None
    for sweep in range(config.sweeps):
        noise = (config.noise_schedule[sweep]
                 if sweep < len(config.noise_schedule) else 0.0)
        worst_trunc = 0.0
        energy = None
        bonds = list(range(n - 1)) + list(range(n - 2, -1, -1))
        directions = ["right"] * (n - 1) + ["left"] * (n - 1)
        for b, direction in zip(bonds, directions):
            theta0 = np.einsum("apb,bqc->apqc", psi.tensors[b],
                               psi.tensors[b + 1], optimize=True)
            energy, theta = _local_ground(Ls[b], W[b], W[b + 1], Rs[b + 1],
                                          theta0, solve_tol)
            if noise > 0.0:
                theta = theta + noise * rng.standard_normal(theta.shape)
                theta /= np.linalg.norm(theta)
            A, B, trunc = _split_theta(theta, direction,
                                       config.max_bond, config.truncation_cutoff)
            psi.tensors[b], psi.tensors[b + 1] = A, B
            worst_trunc = max(worst_trunc, trunc)
            if direction == "right":
                psi.center = b + 1
                if b + 1 < n - 1:
                    Ls[b + 1] = _contract_left(Ls[b], psi.tensors[b], W[b])
            else:
                psi.center = b
                if b > 0:
                    Rs[b] = _contract_right(Rs[b + 1], psi.tensors[b + 1], W[b + 1])
        diag.sweep_energies.append(energy)
        diag.truncation_errors.append(worst_trunc)
        if (prev_energy is not None and noise == 0.0 and prev_noise == 0.0
                and abs(energy - prev_energy) < config.energy_tol):
            diag.converged = True
            break
        prev_energy, prev_noise = energy, noise

    diag.bond_dims = psi.bond_dims()
    return psi, diag.sweep_energies[-1], diag


def _expectation(psi: MPS, ops: dict) -> float:
    """<psi| prod_i O_i |psi> with identities elsewhere; ops is 1-based."""
    e = np.ones((1, 1), dtype=complex)
    for k, t in enumerate(psi.tensors):
        o = ops.get(k + 1)
        if o is None:
            e = np.einsum("ab,apc,bpd->cd", e, t.conj(), t, optimize=True)
        else:
            e = np.einsum("ab,apc,pq,bqd->cd", e, t.conj(), o, t, optimize=True)
    return float(np.real(e[0, 0]))


_SPIN = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def mps_magnetization(psi: MPS, a: str, i: int) -> float:
    """<sigma^a_i>, 1-based site."""
    if not 1 <= i <= psi.n_sites:
        raise ValueError(f"site {i} outside chain")
    return _expectation(psi, {i: _SPIN[a]})


def mps_correlator(psi: MPS, a: str, i: int, b: str, j: int) -> float:
    """<sigma^a_i sigma^b_j> for i < j, 1-based sites."""
    if not i < j:
        raise ValueError("mps_correlator requires i < j")
    if i < 1 or j > psi.n_sites:
        raise ValueError("site index outside chain")
    return _expectation(psi, {i: _SPIN[a], j: _SPIN[b]})


def save_checkpoint(path, psi: MPS, energy: float):
    """Tensor dump for warm restarts along a parameter sweep."""
    payload = {f"tensor_{k}": t for k, t in enumerate(psi.tensors)}
    np.savez_compressed(path, version=CHECKPOINT_VERSION,
                        n_sites=psi.n_sites, center=psi.center,
                        energy=energy, **payload)


def load_checkpoint(path):
    with np.load(path) as data:
        if int(data["version"]) != CHECKPOINT_VERSION:
            raise ConfigurationError(
                f"checkpoint version {int(data['version'])} not supported")
        n = int(data["n_sites"])
        psi = MPS([data[f"tensor_{k}"] for k in range(n)],
                  center=int(data["center"]))
        return psi, float(data["energy"])


class DmrgHandle:
    """GroundStateHandle backed by a converged MPS.

    In the ferromagnetic phase DMRG may collapse onto a symmetry-broken
    state; when |<sigma^x>| at the chain center exceeds BROKEN_SYMMETRY_TOL
    the parity-odd correlators are zeroed, which is equivalent to averaging
    every two-site RDM with its spin-flipped image.
    """

    solver_name = "dmrg"

    def __init__(self, params: ModelParams = None, config: DmrgConfig = None,
                 terms: TermList = None, initial: MPS = None,
                 beta_on_odd: bool = False):
        if terms is None:
            terms = build_terms(params, beta_on_odd)
        self.mps, self.energy, self.diagnostics = dmrg_ground_state(
            mpo_build(terms), config, initial)
        self.n_sites = terms.n_sites
        self.converged = self.diagnostics.converged
        center = (self.n_sites + 1) // 2
        self.symmetry_broken = abs(
            mps_magnetization(self.mps, "x", center)) > BROKEN_SYMMETRY_TOL

    def magnetization(self, a: str, i: int) -> float:
        if self.symmetry_broken and a in "xy":
            return 0.0
        return mps_magnetization(self.mps, a, i)

    def correlator(self, a: str, i: int, b: str, j: int) -> float:
        if i > j:
            a, i, b, j = b, j, a, i
        if self.symmetry_broken and is_symmetry_zero(a, b):
            return 0.0
        return mps_correlator(self.mps, a, i, b, j)
