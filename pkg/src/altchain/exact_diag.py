"""Reference ground-state solver on the full 2^N Hilbert space.

Basis convention: computational index idx has bit k (little-endian) equal
to the state of site k+1, with bit 0 meaning spin up along z
(sigma^z = +1).  Hamiltonians are applied term-by-term via bit
operations; the dense matrix is only materialized for n_sites <= 10.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
from scipy.sparse.linalg import LinearOperator, eigsh, ArpackNoConvergence

from .errors import CapabilityError, SolverError
from .model import TermList

MAX_SITES = 20
DENSE_MAX_SITES = 10
DEGENERACY_TOL = 1e-10

_AX_FLIP = {"x": True, "y": True, "z": False}
_AX_SIGN = {"x": False, "y": True, "z": True}


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_sites: int


@dataclass
class GroundStateResult:
    state: StateVector
    energy: float
    gap: float
    parity_sector: str  # even | odd | mixed


def _compile_term(coeff, sites_axes, n_sites):
    """Reduce a Pauli string to (complex coeff, flip mask, sign mask)."""
    flip = 0
    sign = 0
    n_y = 0
    for site, ax in sites_axes.items():
        if not 1 <= site <= n_sites:
            raise ValueError(f"site {site} out of range")
        bit = 1 << (site - 1)
        if _AX_FLIP[ax]:
            flip |= bit
        if _AX_SIGN[ax]:
            sign |= bit
        if ax == "y":
            n_y += 1
    full = coeff * (1j ** n_y)
    if n_y % 2 == 0:
        full = full.real  # even y-count keeps the term real
    return full, flip, sign, n_y


class CompiledHamiltonian:
    """Matrix-free application of a TermList to state vectors."""

    def __init__(self, terms: TermList):
        self.n_sites = terms.n_sites
        self.dim = 1 << terms.n_sites
        self._idx = np.arange(self.dim, dtype=np.uint64)
        self._terms = [_compile_term(c, sa, terms.n_sites) for c, sa in terms]
        self.is_real = all(t[3] % 2 == 0 for t in self._terms)

    def _phases(self, coeff, sign):
        par = np.bitwise_count(self._idx & np.uint64(sign)) & 1
        return coeff * (1.0 - 2.0 * par)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """H @ v for a vector or a stack of column vectors."""
        out = np.zeros_like(v, dtype=complex if not self.is_real else v.dtype)
        for coeff, flip, sign, _ in self._terms:
            amp = self._phases(coeff, sign)
            if not self.is_real:
                amp = amp.astype(complex)
            elif np.iscomplexobj(v):
                amp = amp.astype(complex)
            src = amp * v.T if v.ndim > 1 else amp * v
            if flip:
                tgt = (self._idx ^ np.uint64(flip)).astype(np.int64)
                if v.ndim > 1:
                    out[tgt] += src.T
                else:
                    out[tgt] += src
            else:
                out += src.T if v.ndim > 1 else src
        return out

    def dense(self) -> np.ndarray:
        return self.apply(np.eye(self.dim))

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator((self.dim, self.dim),
                              matvec=self.apply, dtype=np.float64)


def parity_diagonal(n_sites: int) -> np.ndarray:
    """Diagonal of P = prod_i sigma^z_i in the computational basis."""
    idx = np.arange(1 << n_sites, dtype=np.uint64)
    return 1.0 - 2.0 * (np.bitwise_count(idx) & np.uint64(1)).astype(float)


def _resolve_degenerate(vecs: np.ndarray, pdiag: np.ndarray):
    """Pick the even-parity combination from a (near-)degenerate subspace."""
    # parity operator restricted to the subspace; P is diagonal in the basis
    sub = vecs.T.conj() @ (pdiag[:, None] * vecs)
    w, u = la.eigh(sub)
    order = np.argsort(-w)  # parity +1 candidates first
    choice = vecs @ u[:, order[0]]
    sector = "even" if w[order[0]] > 0.5 else ("odd" if w[order[0]] < -0.5 else "mixed")
    return choice, sector


def _sector_of(vec: np.ndarray, pdiag: np.ndarray) -> str:
    p = float(np.real(np.vdot(vec, pdiag * vec)))
    if p > 1.0 - 1e-8:
        return "even"
    if p < -1.0 + 1e-8:
        return "odd"
    return "mixed"


def ground_state(terms: TermList, n_sites: int | None = None) -> GroundStateResult:
    """Lowest eigenstate; even-parity representative when degenerate."""
    if n_sites is None:
        n_sites = terms.n_sites
    if n_sites > MAX_SITES:
        raise CapabilityError(
            f"exact diagonalization limited to {MAX_SITES} sites, got {n_sites}")
    ham = CompiledHamiltonian(terms)
    dim = ham.dim

    if n_sites <= DENSE_MAX_SITES:
        energies, vectors = la.eigh(ham.dense())
    else:
        k = min(6, dim - 2)
        rng = np.random.default_rng(12345)
        v0 = rng.standard_normal(dim)
        try:
            energies, vectors = eigsh(ham.as_linear_operator(), k=k,
                                      which="SA", v0=v0, maxiter=5000)
        except ArpackNoConvergence as exc:
            raise SolverError(f"Lanczos did not converge: {exc}") from exc
        order = np.argsort(energies)
        energies, vectors = energies[order], vectors[:, order]

    e0 = float(energies[0])
    gap = float(energies[1] - energies[0])
    pdiag = parity_diagonal(n_sites)

    degenerate = np.flatnonzero(energies - e0 < DEGENERACY_TOL)
    if len(degenerate) > 1:
        vec, sector = _resolve_degenerate(vectors[:, degenerate], pdiag)
    else:
        vec = vectors[:, 0]
        sector = _sector_of(vec, pdiag)
    vec = np.real_if_close(vec / la.norm(vec))

    residual = la.norm(ham.apply(vec) - e0 * vec)
    if residual > 1e-9:
        raise SolverError(f"eigenpair residual {residual:.3e} exceeds 1e-9")

    return GroundStateResult(state=StateVector(np.asarray(vec), n_sites),
                             energy=e0, gap=max(gap, 0.0), parity_sector=sector)


def low_spectrum(terms: TermList, n_sites: int | None = None, k: int = 6):
    """Lowest k energies with parity labels, for level-cross inspection."""
    if n_sites is None:
        n_sites = terms.n_sites
    if n_sites > MAX_SITES:
        raise CapabilityError(f"spectrum limited to {MAX_SITES} sites")
    ham = CompiledHamiltonian(terms)
    k = min(k, ham.dim - 2)
    if n_sites <= DENSE_MAX_SITES:
        energies, vectors = la.eigh(ham.dense())
        energies, vectors = energies[:k], vectors[:, :k]
    else:
        rng = np.random.default_rng(12345)
        energies, vectors = eigsh(ham.as_linear_operator(), k=k, which="SA",
                                  v0=rng.standard_normal(ham.dim), maxiter=5000)
        order = np.argsort(energies)
        energies, vectors = energies[order], vectors[:, order]
    pdiag = parity_diagonal(n_sites)
    out = []
    for m in range(k):
        v = vectors[:, m]
        out.append({"energy": float(energies[m]),
                    "parity": float(np.real(np.vdot(v, pdiag * v)))})
    return out


def _expect_string(state: StateVector, sites_axes: dict) -> float:
    coeff, flip, sign, n_y = _compile_term(1.0, sites_axes, state.n_sites)
    v = state.amplitudes
    idx = np.arange(v.size, dtype=np.uint64)
    par = np.bitwise_count(idx & np.uint64(sign)) & 1
    amp = coeff * (1.0 - 2.0 * par) * v
    if flip:
        tgt = (idx ^ np.uint64(flip)).astype(np.int64)
        w = np.zeros(v.size, dtype=amp.dtype)
        w[tgt] = amp
    else:
        w = amp
    val = np.vdot(v, w)
    if abs(val.imag) > 1e-10:
        raise SolverError(f"correlator has imaginary part {val.imag:.3e}")
    return float(val.real)


def correlator(state: StateVector, a: str, i: int, b: str, j: int) -> float:
    """<sigma^a_i sigma^b_j> on the given state (i != j, 1-based)."""
    if i == j:
        raise ValueError("i == j: use magnetization for one-site averages")
    return _expect_string(state, {i: a, j: b})


def magnetization(state: StateVector, a: str, i: int) -> float:
    """<sigma^a_i> on the given state."""
    return _expect_string(state, {i: a})


class ExactDiagHandle:
    """GroundStateHandle backed by the full state vector."""

    solver_name = "exact"

    def __init__(self, result: GroundStateResult):
        self.result = result
        self.n_sites = result.state.n_sites
        self.energy = result.energy
        self.converged = True

    def magnetization(self, a: str, i: int) -> float:
        return magnetization(self.result.state, a, i)

    def correlator(self, a: str, i: int, b: str, j: int) -> float:
        return correlator(self.result.state, a, i, b, j)
