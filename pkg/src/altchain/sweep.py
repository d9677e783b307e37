"""Parameter sweeps over the chain model: solver routing, presets, CSV/JSON.

A sweep varies one parameter (lambda, alpha, beta or kappa) over a grid,
computes the ground state per point with the requested solver, measures the
concurrence of the requested pairs and collects one row per (point, pair).
Presets regenerate the standard figure families: nearest-neighbour curves
over bond/field alternation, the next-nearest-neighbour curve with its
threshold scan, and the frustrated-coupling family.
"""

from dataclasses import dataclass, field, asdict
import concurrent.futures
import json
import os
import time

import numpy as np

from .errors import ConfigurationError
from .model import ModelParams, build_couplings, build_terms
from .exact_diag import MAX_SITES, ground_state, ExactDiagHandle
from .free_fermion import FreeFermionHandle
from .dmrg import DmrgConfig, DmrgHandle
from .entanglement import pair_concurrence

VARY_NAMES = ("lambda", "alpha", "beta", "kappa")
SOLVERS = ("exact", "free_fermion", "dmrg", "auto")
PAIR_LABELS = ("nn_J1", "nn_J2", "nnn")
CSV_COLUMNS = ("vary_name", "vary_value", "pair", "i", "j", "concurrence",
               "energy", "solver", "converged", "clip", "seconds")
WORKERS_ENV = "ALTCHAIN_WORKERS"

AUTO_FREE_FERMION_MIN_SITES = 20
AUTO_EXACT_MAX_SITES = 14


def default_lambda_grid():
    """Coarse [0.2, 2.0] grid refined to step 0.01 around the transition."""
    coarse = np.linspace(0.2, 2.0, 37)
    fine = np.arange(0.85, 1.15 + 1e-12, 0.01)
    return tuple(float(v) for v in
                 np.unique(np.round(np.concatenate([coarse, fine]), 10)))


def make_grid(grid):
    """Normalize (start, stop, points) or an explicit list to a tuple."""
    if len(grid) == 3 and isinstance(grid[2], int) and not isinstance(grid[2], bool):
        start, stop, points = grid
        values = tuple(float(v) for v in np.linspace(start, stop, points))
    else:
        values = tuple(float(v) for v in grid)
    if len(values) < 2:
        raise ConfigurationError("grid needs at least 2 points")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigurationError("grid must be strictly increasing")
    return values


def resolve_pair(label: str, n_sites: int, edge_pairs: bool = False):
    """Map a pair label to 1-based sites.

    Center labels pick the central bond carrying coupling J1 (odd first
    site), its J2 neighbour, and the NNN pair across both; edge_pairs
    selects the literal chain-start pairs instead.
    """
    if label.startswith("custom"):
        try:
            i, j = (int(v) for v in label[label.index("(") + 1:
                                          label.index(")")].split(","))
        except (ValueError, IndexError):
            raise ConfigurationError(f"malformed pair label {label!r}")
        if not (1 <= i < j <= n_sites):
            raise ConfigurationError(f"pair {label!r} outside 1..{n_sites}")
        return i, j
    if label not in PAIR_LABELS:
        raise ConfigurationError(f"unknown pair label {label!r}")
    if edge_pairs:
        return {"nn_J1": (1, 2), "nn_J2": (2, 3), "nnn": (1, 3)}[label]
    m = n_sites // 2
    if m % 2 == 0:
        m -= 1
    offsets = {"nn_J1": (0, 1), "nn_J2": (1, 2), "nnn": (0, 2)}[label]
    i, j = m + offsets[0], m + offsets[1]
    if j > n_sites:
        raise ConfigurationError(f"chain too short for center pair {label!r}")
    return i, j


@dataclass(frozen=True)
class SweepSpec:
    """One curve: a base model, one varied parameter, pairs to measure."""

    base: ModelParams
    vary: str
    grid: tuple
    pairs: tuple = ("nn_J1",)
    solver: str = "auto"
    dmrg: DmrgConfig = field(default_factory=DmrgConfig)
    output_path: str = None
    seed: int = 7
    adiabatic: bool = False
    edge_pairs: bool = False
    beta_on_odd: bool = False
    deterministic_timing: bool = False

    def __post_init__(self):
        if self.vary not in VARY_NAMES:
            raise ConfigurationError(f"unknown vary parameter {self.vary!r}")
        if self.solver not in SOLVERS:
            raise ConfigurationError(f"unknown solver {self.solver!r}")
        object.__setattr__(self, "grid", make_grid(self.grid))
        object.__setattr__(self, "pairs", tuple(self.pairs))
        for label in self.pairs:
            resolve_pair(label, self.base.n_sites, self.edge_pairs)

    def point_params(self, value: float) -> ModelParams:
        key = "lambda_" if self.vary == "lambda" else self.vary
        return self.base.replace(**{key: value})

    def to_dict(self) -> dict:
        d = {"base": self.base.to_dict(), "vary": self.vary,
             "grid": list(self.grid), "pairs": list(self.pairs),
             "solver": self.solver, "dmrg": asdict(self.dmrg),
             "output_path": self.output_path, "seed": self.seed,
             "adiabatic": self.adiabatic, "edge_pairs": self.edge_pairs,
             "beta_on_odd": self.beta_on_odd,
             "deterministic_timing": self.deterministic_timing}
        d["dmrg"]["noise_schedule"] = list(self.dmrg.noise_schedule)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        d = dict(d)
        d["base"] = ModelParams.from_dict(d["base"])
        if "dmrg" in d and isinstance(d["dmrg"], dict):
            cfg = dict(d["dmrg"])
            if "noise_schedule" in cfg:
                cfg["noise_schedule"] = tuple(cfg["noise_schedule"])
            d["dmrg"] = DmrgConfig(**cfg)
        if "grid" in d:
            d["grid"] = tuple(d["grid"])
        return cls(**d)


@dataclass
class Row:
    vary_name: str
    vary_value: float
    pair: str
    i: int
    j: int
    concurrence: float
    energy: float
    solver: str
    converged: bool
    clip: float
    seconds: float


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.rows)

    def column(self, name, pair=None):
        rows = [r for r in self.rows if pair is None or r.pair == pair]
        return [getattr(r, name) for r in rows]


def _route_solver(solver: str, params: ModelParams) -> str:
    if solver != "auto":
        return solver
    if params.kappa == 0.0 and params.n_sites > AUTO_FREE_FERMION_MIN_SITES:
        return "free_fermion"
    if params.n_sites <= AUTO_EXACT_MAX_SITES:
        return "exact"
    return "dmrg"


def _validate_routing(spec: SweepSpec):
    """Reject capability mismatches before any ground state is computed."""
    for value in spec.grid:
        params = spec.point_params(value)
        solver = _route_solver(spec.solver, params)
        if solver == "free_fermion" and params.kappa != 0.0:
            raise ConfigurationError(
                "free_fermion cannot handle kappa != 0; use exact or dmrg")
        if solver == "exact" and params.n_sites > MAX_SITES:
            raise ConfigurationError(
                f"exact solver is limited to {MAX_SITES} sites")
        if solver == "dmrg" and params.boundary != "open":
            raise ConfigurationError("dmrg handles open chains only")


def _make_handle(solver, params, spec, initial=None):
    if solver == "exact":
        return ExactDiagHandle(ground_state(build_terms(params, spec.beta_on_odd)))
    if solver == "free_fermion":
        return FreeFermionHandle(build_couplings(params, spec.beta_on_odd),
                                 params.gamma)
    return DmrgHandle(params=params, config=spec.dmrg,
                      beta_on_odd=spec.beta_on_odd, initial=initial)


def _point_rows(spec: SweepSpec, value: float, initial=None):
    t0 = time.perf_counter()
    params = spec.point_params(value)
    solver = _route_solver(spec.solver, params)
    handle = _make_handle(solver, params, spec, initial)
    rows = []
    for label in sorted(spec.pairs):
        i, j = resolve_pair(label, params.n_sites, spec.edge_pairs)
        c = pair_concurrence(handle, i, j)
        seconds = 0.0 if spec.deterministic_timing else time.perf_counter() - t0
        rows.append(Row(vary_name=spec.vary, vary_value=value, pair=label,
                        i=i, j=j, concurrence=c.value, energy=handle.energy,
                        solver=solver, converged=bool(handle.converged),
                        clip=c.clip_applied, seconds=seconds))
    mps = getattr(handle, "mps", None)
    return rows, mps


def _point_worker(args):
    spec_dict, value = args
    rows, _ = _point_rows(SweepSpec.from_dict(spec_dict), value)
    return rows


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Execute one sweep; rows come back sorted by (vary value, pair label).

    Adiabatic mode runs the grid serially in ascending order and reuses each
    converged MPS as the next starting point; otherwise grid points are
    independent and dispatched to a worker pool when the environment asks
    for one.
    """
    _validate_routing(spec)
    rows = []
    workers = worker_count()
    if spec.adiabatic:
        mps = None
        for value in spec.grid:
            point, mps = _point_rows(spec, value, initial=mps)
            rows.extend(point)
    elif workers > 1:
        jobs = [(spec.to_dict(), value) for value in spec.grid]
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            for point in pool.map(_point_worker, jobs):
                rows.extend(point)
    else:
        for value in spec.grid:
            point, _ = _point_rows(spec, value)
            rows.extend(point)
    rows.sort(key=lambda r: (r.vary_value, r.pair))
    result = SweepResult(spec=spec, rows=rows)
    if spec.output_path:
        fmt = "json" if spec.output_path.endswith(".json") else "csv"
        emit(result, fmt, spec.output_path)
    return result


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def emit(result: SweepResult, fmt: str, path) -> None:
    """Write rows as CSV (fixed column contract) or JSON to a path or stream."""
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"unknown output format {fmt!r}")
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for r in result.rows:
            lines.append(",".join(_fmt(getattr(r, c)) for c in CSV_COLUMNS))
        text = "\n".join(lines) + "\n"
    else:
        payload = {"columns": list(CSV_COLUMNS),
                   "rows": [asdict(r) for r in result.rows]}
        text = json.dumps(payload, indent=1)
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def parse_csv(path) -> list:
    """Read an emitted CSV back into Row objects."""
    with open(path) as f:
        lines = [ln for ln in f.read().splitlines() if ln]
    if not lines or lines[0].split(",") != list(CSV_COLUMNS):
        raise ConfigurationError(f"{path} does not match the sweep CSV contract")
    rows = []
    for ln in lines[1:]:
        v = dict(zip(CSV_COLUMNS, ln.split(",")))
        rows.append(Row(vary_name=v["vary_name"], vary_value=float(v["vary_value"]),
                        pair=v["pair"], i=int(v["i"]), j=int(v["j"]),
                        concurrence=float(v["concurrence"]),
                        energy=float(v["energy"]), solver=v["solver"],
                        converged=v["converged"] == "true",
                        clip=float(v["clip"]), seconds=float(v["seconds"])))
    return rows


ALTERNATION_FAMILIES = (("alpha", 0.5), ("alpha", 1.0), ("alpha", 1.5),
                        ("beta", 0.5), ("beta", 1.0), ("beta", 1.5))
FIG4_KAPPAS = (-0.8, -0.4, 0.0, 0.25, 0.5, 0.75)


def preset(name: str, n_sites: int = 59, solver: str = "dmrg",
           grid=None, kappas=FIG4_KAPPAS, output_dir=None, **spec_kwargs):
    """Standard figure families as lists of SweepSpec, one per curve."""
    grid = tuple(grid) if grid is not None else default_lambda_grid()
    adiabatic = solver == "dmrg"

    def make(tag, pairs, **base_kwargs):
        base = ModelParams(gamma=1.0, n_sites=n_sites, **base_kwargs)
        out = os.path.join(output_dir, f"{name}_{tag}.csv") if output_dir else None
        return SweepSpec(base=base, vary="lambda", grid=grid, pairs=pairs,
                         solver=solver, adiabatic=adiabatic,
                         output_path=out, **spec_kwargs)

    if name == "fig2":
        return [make(f"{p}_{v:g}", ("nn_J1", "nn_J2"), **{p: v})
                for p, v in ALTERNATION_FAMILIES]
    if name == "fig3":
        return [make(f"{p}_{v:g}", ("nnn",), **{p: v})
                for p, v in ALTERNATION_FAMILIES]
    if name == "fig4":
        return [make(f"kappa_{k:g}", ("nn_J1", "nnn"), kappa=k) for k in kappas]
    raise ConfigurationError(f"unknown preset {name!r}")


def threshold_scan(axis: str = "alpha", values=None, n_sites: int = 59,
                   solver: str = "auto", grid=None, **spec_kwargs) -> list:
    """Max-over-lambda NNN concurrence per alternation value.

    Returns Rows whose vary_value is the alternation parameter and whose
    concurrence is the grid maximum; the smallest value with a nonzero
    maximum locates the empirical entanglement threshold.
    """
    if axis not in ("alpha", "beta"):
        raise ConfigurationError("threshold axis must be alpha or beta")
    values = tuple(values) if values is not None else tuple(
        np.round(np.arange(0.1, 1.51, 0.1), 10))
    out = []
    for v in values:
        spec = SweepSpec(base=ModelParams(gamma=1.0, n_sites=n_sites, **{axis: v}),
                         vary="lambda",
                         grid=tuple(grid) if grid is not None else default_lambda_grid(),
                         pairs=("nnn",), solver=solver, **spec_kwargs)
        result = run_sweep(spec)
        best = max(result.rows, key=lambda r: r.concurrence)
        out.append(Row(vary_name=axis, vary_value=float(v), pair="nnn",
                       i=best.i, j=best.j, concurrence=best.concurrence,
                       energy=best.energy, solver=best.solver,
                       converged=result.all_converged, clip=best.clip,
                       seconds=best.seconds))
    return out


def validate_suite(seed: int = 11, n_points: int = 6) -> dict:
    """Cross-solver consistency check on random desk-scale chains."""
    rng = np.random.default_rng(seed)
    worst_ff = 0.0
    worst_dmrg = 0.0
    for _ in range(n_points):
        lam = float(rng.uniform(0.4, 1.6))
        alpha = float(rng.uniform(0.5, 1.5))
        beta = float(rng.uniform(0.5, 1.5))
        kappa = float(rng.choice([0.0, rng.uniform(-0.8, 0.8)]))
        base = ModelParams(gamma=1.0, lambda_=lam, alpha=alpha, beta=beta,
                           kappa=kappa, n_sites=12)
        spec = dict(base=base, vary="lambda", grid=(lam, lam + 0.1),
                    pairs=("nn_J1", "nnn"), deterministic_timing=True)
        exact = run_sweep(SweepSpec(solver="exact", **spec))
        dmrg = run_sweep(SweepSpec(solver="dmrg",
                                   dmrg=DmrgConfig(max_bond=64), **spec))
        pairs = zip(exact.column("concurrence"), dmrg.column("concurrence"))
        worst_dmrg = max(worst_dmrg, max(abs(a - b) for a, b in pairs))
        if kappa == 0.0:
            ff = run_sweep(SweepSpec(solver="free_fermion", **spec))
            pairs = zip(exact.column("concurrence"), ff.column("concurrence"))
            worst_ff = max(worst_ff, max(abs(a - b) for a, b in pairs))
    report = {"free_fermion_vs_exact": worst_ff, "dmrg_vs_exact": worst_dmrg,
              "ok": worst_ff < 1e-7 and worst_dmrg < 1e-6}
    return report
