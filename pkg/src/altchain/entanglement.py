"""Two-site reduced density matrices and Wootters concurrence.

The RDM basis is {|00>, |01>, |10>, |11>} with 0 = spin up along z and the
first label belonging to site i.  Concurrence is computed from the
eigenvalues of rho * rho_tilde, which shares its spectrum with the
spin-flipped operator R = sqrt(sqrt(rho) rho_tilde sqrt(rho)) but avoids
matrix square roots of near-singular rho.
"""

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .errors import NumericalIntegrityError

SIGMA = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_YY = np.kron(SIGMA["y"], SIGMA["y"])

EQ3_PAIRS = (("z", "i"), ("i", "z"), ("x", "x"), ("y", "y"), ("z", "z"))

RDM_EIG_CLIP = 1e-8          # below this (negative) the RDM is unphysical
CONC_EIG_CLIP = 1e-10        # float-noise clip for eigenvalues of rho*rho_tilde
CONC_EIG_ERROR = 1e-6


class GroundStateHandle(Protocol):
    """Solver-agnostic access to one- and two-point Pauli correlators."""

    n_sites: int
    energy: float
    converged: bool

    def magnetization(self, a: str, i: int) -> float: ...

    def correlator(self, a: str, i: int, b: str, j: int) -> float: ...


@dataclass
class TwoSiteRDM:
    rho: np.ndarray
    pair: tuple
    pauli_expansion: dict      # (a, b) -> <sigma^a_i sigma^b_j>
    clip_applied: float = 0.0


@dataclass
class ConcurrenceResult:
    value: float
    lambdas: tuple
    clip_applied: float = 0.0


def _expansion(provider, i: int, j: int, mode: str) -> dict:
    pairs = EQ3_PAIRS if mode == "symmetric_eq3" else [
        (a, b) for a in "ixyz" for b in "ixyz" if (a, b) != ("i", "i")]
    coeffs = {("i", "i"): 1.0}
    for a, b in pairs:
        if a == "i":
            coeffs[(a, b)] = provider.magnetization(b, j)
        elif b == "i":
            coeffs[(a, b)] = provider.magnetization(a, i)
        else:
            coeffs[(a, b)] = provider.correlator(a, i, b, j)
    return coeffs


def two_site_rdm(provider, i: int, j: int,
                 mode: str = "full_tomography") -> TwoSiteRDM:
    """Reconstruct rho_{i,j} from correlators.

    full_tomography uses all 16 Pauli coefficients; symmetric_eq3 keeps only
    the identity, the two z magnetizations and the three diagonal pair
    correlators (valid under the parity-symmetric ground-state convention).
    """
    if i == j:
        raise ValueError("two_site_rdm needs two distinct sites")
    if mode not in ("full_tomography", "symmetric_eq3"):
        raise ValueError(f"unknown mode {mode!r}")
    coeffs = _expansion(provider, i, j, mode)
    rho = np.zeros((4, 4), dtype=complex)
    for (a, b), c in coeffs.items():
        rho += c * np.kron(SIGMA[a], SIGMA[b])
    rho /= 4.0
    rho = (rho + rho.conj().T) / 2.0

    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-10:
        raise NumericalIntegrityError(f"RDM trace {tr} deviates from 1")

    w, v = np.linalg.eigh(rho)
    clip = 0.0
    if w.min() < -RDM_EIG_CLIP:
        raise NumericalIntegrityError(
            f"RDM eigenvalue {w.min():.3e} below -{RDM_EIG_CLIP:.0e}")
    if w.min() < 0.0:
        clip = float(-w[w < 0].sum())
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho /= np.trace(rho).real
    return TwoSiteRDM(rho=rho, pair=(i, j), pauli_expansion=coeffs,
                      clip_applied=clip)


def concurrence(rdm) -> ConcurrenceResult:
    """Wootters concurrence C = max(0, l1 - l2 - l3 - l4)."""
    rho = rdm.rho if isinstance(rdm, TwoSiteRDM) else np.asarray(rdm, dtype=complex)
    clip_in = rdm.clip_applied if isinstance(rdm, TwoSiteRDM) else 0.0
    rho_tilde = _YY @ rho.conj() @ _YY
    w = np.linalg.eigvals(rho @ rho_tilde)
    w = np.real(w)
    if w.min() < -CONC_EIG_ERROR:
        raise NumericalIntegrityError(
            f"rho*rho_tilde eigenvalue {w.min():.3e}: RDM was not physical")
    clip = clip_in + float(-w[w < -CONC_EIG_CLIP].sum())
    lambdas = np.sqrt(np.clip(w, 0.0, None))
    lambdas = np.sort(lambdas)[::-1]
    value = max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    return ConcurrenceResult(value=float(value), lambdas=tuple(lambdas),
                             clip_applied=clip)


def pair_concurrence(provider, i: int, j: int) -> ConcurrenceResult:
    """Concurrence of the pair (i, j) in full tomography mode."""
    return concurrence(two_site_rdm(provider, i, j, mode="full_tomography"))
