"""Chain parameterization: per-bond couplings, per-site fields, Pauli terms.

The chain is a spin-1/2 XY model with alternating nearest-neighbour bonds
(J1 = J on odd bonds, J2 = alpha*J on even bonds), a site-alternating
transverse field (h on odd sites, beta*h on even sites) and a uniform
next-nearest-neighbour coupling J3 = kappa*J.  Everything downstream
(exact diagonalization, free fermions, DMRG) consumes the tables built
here.  Sites and bonds are labelled 1-based.

Normalization: J is fixed to 1 and the per-site field is h = 1/lambda, so
the quantum critical point of the uniform transverse Ising chain sits at
lambda = 1 (with the -J x x bond coefficient used here, the matching
field is 1/lambda, not 1/(2 lambda)).
"""

from dataclasses import dataclass, field, asdict
import json

from .errors import ConfigurationError

AXES = ("x", "y", "z")
BOUNDARIES = ("open", "periodic")


@dataclass(frozen=True)
class ModelParams:
    """Full physical parameterization of one chain instance.

    gamma   -- anisotropy in [0, 1]; 1 is the transverse Ising limit
    lambda_ -- reduced coupling J/2h, > 0 (JSON key: "lambda")
    alpha   -- dimerisation ratio J2/J1
    beta    -- field alternation ratio
    kappa   -- frustration ratio J3/J1 (sign selects F-F vs F-AF)
    """

    gamma: float = 1.0
    lambda_: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    kappa: float = 0.0
    n_sites: int = 12
    boundary: str = "open"

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ConfigurationError(f"unknown boundary {self.boundary!r}")
        if self.n_sites < 2:
            raise ConfigurationError("n_sites must be >= 2")
        if self.boundary == "periodic" and self.kappa != 0.0 and self.n_sites < 5:
            raise ConfigurationError(
                "periodic chains with next-nearest bonds need n_sites >= 5")
        if not self.lambda_ > 0:
            raise ConfigurationError("lambda must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError("gamma must lie in [0, 1]")

    @property
    def h(self) -> float:
        """Field strength on odd sites (J = 1, critical at lambda = 1)."""
        return 1.0 / self.lambda_

    def replace(self, **kwargs) -> "ModelParams":
        d = self.to_dict()
        if "lambda_" in kwargs:
            kwargs["lambda"] = kwargs.pop("lambda_")
        d.update(kwargs)
        return ModelParams.from_dict(d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        d = dict(d)
        if "lambda" in d:
            d["lambda_"] = d.pop("lambda")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "ModelParams":
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True)
class BondTable:
    """Explicit couplings and fields, 1-based sites.

    nn_couplings:  list of (i, j, J) with j the nn partner of i
    nnn_couplings: list of (i, j, J) at distance 2
    fields:        list of (i, h_i)
    """

    n_sites: int
    boundary: str
    nn_couplings: tuple
    nnn_couplings: tuple
    fields: tuple


@dataclass(frozen=True)
class TermList:
    """Expanded Pauli-string Hamiltonian: (coefficient, {site: axis})."""

    n_sites: int
    terms: tuple

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


def _nn_coupling(site: int, alpha: float) -> float:
    # bond (2i-1, 2i) carries J1 = 1, bond (2i, 2i+1) carries J2 = alpha
    return 1.0 if site % 2 == 1 else alpha


def build_couplings(params: ModelParams, beta_on_odd: bool = False) -> BondTable:
    """Expand ModelParams into the alternating bond/field table.

    beta_on_odd swaps which sublattice carries the beta-scaled field
    (default: odd sites carry h, even sites carry beta*h).
    """
    n = params.n_sites
    periodic = params.boundary == "periodic"
    h = params.h

    nn = []
    for i in range(1, n + 1 if periodic else n):
        j = i % n + 1
        nn.append((i, j, _nn_coupling(i, params.alpha)))

    nnn = []
    if params.kappa != 0.0:
        for i in range(1, n + 1 if periodic else n - 1):
            j = (i + 1) % n + 1
            nnn.append((i, j, params.kappa))

    fields = []
    for i in range(1, n + 1):
        odd = i % 2 == 1
        scale = params.beta if (odd == beta_on_odd) else 1.0
        fields.append((i, scale * h))

    return BondTable(n_sites=n, boundary=params.boundary,
                     nn_couplings=tuple(nn), nnn_couplings=tuple(nnn),
                     fields=tuple(fields))


def hamiltonian_terms(bonds: BondTable, gamma: float) -> TermList:
    """Pauli-term expansion of the Hamiltonian.

    Per bond J_ij: -((1+gamma)/2) J_ij x_i x_j and -((1-gamma)/2) J_ij y_i y_j
    (the y term is dropped at gamma = 1).  Per site: -h_i z_i.
    """
    cx = -(1.0 + gamma) / 2.0
    cy = -(1.0 - gamma) / 2.0
    terms = []
    for i, j, J in tuple(bonds.nn_couplings) + tuple(bonds.nnn_couplings):
        terms.append((cx * J, {i: "x", j: "x"}))
        if gamma != 1.0:
            terms.append((cy * J, {i: "y", j: "y"}))
    for i, h in bonds.fields:
        terms.append((-h, {i: "z"}))
    return TermList(n_sites=bonds.n_sites, terms=tuple(terms))


def build_terms(params: ModelParams, beta_on_odd: bool = False) -> TermList:
    """Convenience composition of build_couplings and hamiltonian_terms."""
    return hamiltonian_terms(build_couplings(params, beta_on_odd), params.gamma)
