"""Alpha sweeps over several entropy routes, least-squares fits and
method comparisons, plus the CSV/JSON record format."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

from ._io import atomic_write
from .adiabatic import (adiabatic_ground_energy, momentum_gs_large_alpha, solve_variational_b)
from .basis import BasisSpec
from .entropy import (BBM_BOUND, analytic_entropies_small_alpha, analytic_entropy_large_alpha,
                      entropies_from_coefficients, position_entropy_large_alpha_quadrature,
                      shannon_entropy)
from .spectral import HamiltonianParams, ground_state, track_state

METHODS = ("numeric", "analytic-small", "analytic-large", "adiabatic-numeric-FT")
LARGE_ALPHA_METHODS = ("analytic-large", "adiabatic-numeric-FT")
CSV_FIELDS = ("alpha", "method", "S_q", "S_p", "S_sum", "E0", "bbm_margin", "overlap", "converged")
FIT_KINDS = ("linear_alpha", "quadratic_alpha", "linear_logalpha")
FIELD_ALIASES = {"S_q": "S_q", "S_p": "S_p", "S_sum": "S_sum", "sum": "S_sum"}


class SweepError(RuntimeError):
    def __init__(self, alpha: float, cause: Exception):
        self.alpha = alpha
        self.cause = cause
        super().__init__(f"alpha = {alpha:g}: {cause}")


@dataclass(frozen=True)
class EntropyRecord:
    alpha: float
    method: str
    S_q: float
    S_p: float
    S_sum: float
    E0: float
    bbm_margin: float
    overlap: float = math.nan
    converged: bool = True

    @classmethod
    def build(cls, alpha, method, S_q, S_p, E0, overlap=math.nan, converged=True) -> "EntropyRecord":
        s = S_q + S_p
        return cls(float(alpha), method, float(S_q), float(S_p), s, float(E0), s - BBM_BOUND,
                   float(overlap), bool(converged))


@dataclass(frozen=True)
class MomentumGridConfig:
    """Grid for the numerically transformed strong-coupling momentum state."""

    px_half_width: float = 40.0
    px_points: int = 801
    py_half_width: float = 20.0
    py_points: int = 401
    quad_order: int = 128
    norm_tol: float = 1e-3

    def axes(self):
        return (np.linspace(-self.px_half_width, self.px_half_width, self.px_points),
                np.linspace(-self.py_half_width, self.py_half_width, self.py_points))


@dataclass(frozen=True)
class SweepConfig:
    alphas: tuple[float, ...]
    methods: tuple[str, ...] = ("numeric",)
    k1: float = 1.0
    k2: float = 1.0
    n_max: int = 40
    adapt_basis: bool = False
    state: str = "ground"
    tracked_n: int = 0
    overlap_threshold: float = 0.5
    check_convergence: bool = True
    convergence_step: int = 10
    convergence_tol: float = 1e-6
    momentum_grid: MomentumGridConfig = field(default_factory=MomentumGridConfig)

    def __post_init__(self):
        a = tuple(float(x) for x in self.alphas)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "methods", tuple(self.methods))
        if not a:
            raise ValueError("alpha grid is empty")
        if any(x < 0 for x in a):
            raise ValueError("alpha values must be non-negative")
        if any(y <= x for x, y in zip(a, a[1:])):
            raise ValueError("alpha grid must be strictly increasing")
        if not self.methods:
            raise ValueError("select at least one method")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if any(m in LARGE_ALPHA_METHODS for m in self.methods) and a[0] < 1:
            raise ValueError("strong-coupling methods need alpha >= 1")
        if any(m in LARGE_ALPHA_METHODS for m in self.methods) and (self.k1 != 1 or self.k2 != 1):
            raise ValueError("strong-coupling methods are only defined for k1 = k2 = 1")
        if self.state not in ("ground", "tracked"):
            raise ValueError(f"unknown state selector {self.state!r}")
        if self.state == "tracked" and self.methods != ("numeric",):
            raise ValueError("tracked states are only available with the numeric method")

    @classmethod
    def from_range(cls, alpha_min: float, alpha_max: float, step: float, **kw) -> "SweepConfig":
        return cls(alpha_range(alpha_min, alpha_max, step), **kw)

    def basis(self, alpha: float) -> BasisSpec:
        return BasisSpec.for_params(HamiltonianParams(self.k1, self.k2, alpha), self.n_max, self.adapt_basis)


def alpha_range(alpha_min: float, alpha_max: float, step: float) -> tuple[float, ...]:
    """Inclusive grid ``alpha_min, alpha_min + step, ... <= alpha_max``."""
    if not step > 0:
        raise ValueError("alpha step must be positive")
    if alpha_max < alpha_min:
        raise ValueError("alpha_max must not be below alpha_min")
    n = int(math.floor((alpha_max - alpha_min) / step + 1e-9))
    return tuple(round(alpha_min + i * step, 12) for i in range(n + 1))


def _numeric_record(cfg: SweepConfig, alpha: float) -> EntropyRecord:
    params = HamiltonianParams(cfg.k1, cfg.k2, alpha)
    spec = cfg.basis(alpha)
    g = ground_state(params, spec)
    ent = entropies_from_coefficients(g)
    converged = True
    if cfg.check_convergence:
        bigger = BasisSpec(spec.n_max + cfg.convergence_step, spec.scale_x, spec.scale_y, spec.truncation)
        converged = abs(ground_state(params, bigger).energy - g.energy) <= cfg.convergence_tol
    return EntropyRecord.build(alpha, "numeric", ent.S_q, ent.S_p, g.energy, converged=converged)


def _large_alpha_momentum_entropy(cfg: SweepConfig, alpha: float, b: float) -> float:
    px, py = cfg.momentum_grid.axes()
    mg = momentum_gs_large_alpha(alpha, px, py, cfg.momentum_grid.quad_order,
                                 cfg.momentum_grid.norm_tol, b=b)
    return shannon_entropy(mg.density_grid())


def _records_at(cfg: SweepConfig, alpha: float) -> list[EntropyRecord]:
    out = []
    sol = None
    sp_large = None
    for method in METHODS:
        if method not in cfg.methods:
            continue
        if method == "numeric":
            out.append(_numeric_record(cfg, alpha))
        elif method == "analytic-small":
            params = HamiltonianParams(cfg.k1, cfg.k2, alpha)
            ent = analytic_entropies_small_alpha(params)
            out.append(EntropyRecord.build(alpha, method, ent.S_q, ent.S_p, adiabatic_ground_energy(params)))
        else:
            if sol is None:
                sol = solve_variational_b(HamiltonianParams(1.0, 1.0, alpha))
                sp_large = _large_alpha_momentum_entropy(cfg, alpha, sol.b)
            if method == "analytic-large":
                s_q = analytic_entropy_large_alpha(alpha)
            else:
                s_q = position_entropy_large_alpha_quadrature(alpha, sol.b)
            out.append(EntropyRecord.build(alpha, method, s_q, sp_large, sol.energy))
    return out


def run_sweep(config: SweepConfig) -> list[EntropyRecord]:
    """One record per (alpha, method), ordered by alpha then method."""
    if config.state == "tracked":
        return _tracked_records(config)
    records = []
    for a in config.alphas:
        try:
            records.extend(_records_at(config, a))
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            raise SweepError(a, exc) from exc
    return records


def _tracked_records(cfg: SweepConfig) -> list[EntropyRecord]:
    spec = BasisSpec(cfg.n_max, cfg.k1, cfg.k2)
    path = track_state(cfg.tracked_n, cfg.alphas, spec, cfg.overlap_threshold, cfg.k1, cfg.k2)
    records = []
    for i, (a, st) in enumerate(zip(path.alphas, path.states)):
        ent = entropies_from_coefficients(st)
        ov = path.overlaps[i - 1] if i > 0 else math.nan
        records.append(EntropyRecord.build(a, "numeric", ent.S_q, ent.S_p, st.energy, overlap=ov))
    return records


# --- fitting ------------------------------------------------------------------------------


class SingularFit(ValueError):
    pass


@dataclass(frozen=True)
class FitModel:
    kind: str
    coefficients: tuple[float, ...]
    rms: float
    alpha_range: tuple[float, float]
    n_points: int

    def __call__(self, alpha):
        return _design(self.kind, np.atleast_1d(np.asarray(alpha, float))) @ np.asarray(self.coefficients)

    @property
    def slope(self) -> float:
        return self.coefficients[1]

    def describe(self) -> str:
        c = self.coefficients
        if self.kind == "linear_alpha":
            body = f"{c[0]:.6g} + {c[1]:.6g} alpha"
        elif self.kind == "quadratic_alpha":
            body = f"{c[0]:.6g} + {c[1]:.6g} alpha + {c[2]:.6g} alpha^2"
        else:
            body = f"{c[0]:.6g} + {c[1]:.6g} ln(alpha)"
        return f"{body}   (rms {self.rms:.3g}, {self.n_points} points, alpha in [{self.alpha_range[0]:g}, {self.alpha_range[1]:g}])"


def _design(kind: str, a: np.ndarray) -> np.ndarray:
    if kind == "linear_alpha":
        return np.column_stack([np.ones_like(a), a])
    if kind == "quadratic_alpha":
        return np.column_stack([np.ones_like(a), a, a * a])
    if kind == "linear_logalpha":
        if np.any(a <= 0):
            raise ValueError("a logarithmic fit needs alpha > 0")
        return np.column_stack([np.ones_like(a), np.log(a)])
    raise ValueError(f"unknown fit model {kind!r}; choose from {', '.join(FIT_KINDS)}")


def fit_arrays(alphas, values, kind: str) -> FitModel:
    """Ordinary least squares of ``values`` against the chosen model in ``alphas``."""
    a = np.asarray(alphas, float)
    y = np.asarray(values, float)
    X = _design(kind, a)
    ncoef = X.shape[1]
    if len(a) < ncoef + 1:
        raise SingularFit(f"{kind} needs at least {ncoef + 1} points, got {len(a)}")
    if np.linalg.matrix_rank(X) < ncoef:
        raise SingularFit(f"design matrix for {kind} is rank deficient (distinct alphas: {len(set(a))})")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return FitModel(kind, tuple(float(c) for c in coef), float(np.sqrt(np.mean(resid ** 2))),
                    (float(a.min()), float(a.max())), len(a))


def fit(records, field_name: str, kind: str) -> FitModel:
    """Fit one column of a single-method record set."""
    key = FIELD_ALIASES.get(field_name)
    if key is None:
        raise ValueError(f"unknown field {field_name!r}; choose from S_q, S_p, S_sum")
    records = list(records)
    methods = {r.method for r in records}
    if len(methods) > 1:
        raise ValueError(f"records mix methods {sorted(methods)}; select one before fitting")
    return fit_arrays([r.alpha for r in records], [getattr(r, key) for r in records], kind)


# --- method comparison --------------------------------------------------------------------


class NoCommonAlphas(ValueError):
    pass


@dataclass(frozen=True)
class ComparisonRow:
    alpha: float
    d_S_q: float
    d_S_p: float
    d_sum: float


@dataclass(frozen=True)
class MethodComparison:
    reference: str
    other: str
    rows: tuple[ComparisonRow, ...]

    def _col(self, name):
        return np.array([getattr(r, name) for r in self.rows])

    def max_abs(self, name: str) -> float:
        return float(np.max(np.abs(self._col(name))))

    def mean_abs(self, name: str) -> float:
        return float(np.mean(np.abs(self._col(name))))

    def systematic(self, name: str) -> bool:
        """All signed deltas share one strict sign."""
        c = self._col(name)
        return bool(np.all(c > 0) or np.all(c < 0))

    def summary(self) -> dict:
        return {n: {"max": self.max_abs(n), "mean": self.mean_abs(n)} for n in ("d_S_q", "d_S_p", "d_sum")}


def compare_methods(records, reference: str | None = None, other: str | None = None) -> MethodComparison:
    """Signed differences ``reference - other`` at every shared alpha."""
    records = list(records)
    methods = list(dict.fromkeys(r.method for r in records))
    if reference is None:
        reference = "numeric" if "numeric" in methods else methods[0]
    if other is None:
        rest = [m for m in methods if m != reference]
        if not rest:
            raise NoCommonAlphas("need records from at least two methods")
        other = rest[0]
    ref = {r.alpha: r for r in records if r.method == reference}
    oth = {r.alpha: r for r in records if r.method == other}
    common = sorted(set(ref) & set(oth))
    if not common:
        raise NoCommonAlphas(f"methods {reference!r} and {other!r} share no alpha values")
    rows = tuple(ComparisonRow(a, ref[a].S_q - oth[a].S_q, ref[a].S_p - oth[a].S_p,
                               ref[a].S_sum - oth[a].S_sum) for a in common)
    return MethodComparison(reference, other, rows)


# --- serialization ------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return f"{v:.12g}"


def records_to_csv(records) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_FIELDS) + "\n")
    for r in records:
        buf.write(",".join(_fmt(getattr(r, f)) for f in CSV_FIELDS) + "\n")
    return buf.getvalue()


def records_to_json(records) -> str:
    rows = []
    for r in records:
        d = {}
        for f in CSV_FIELDS:
            v = getattr(r, f)
            if isinstance(v, float):
                v = None if math.isnan(v) else float(f"{v:.12g}")
            d[f] = v
        rows.append(d)
    return json.dumps(rows, indent=1) + "\n"


def _parse_bool(s: str) -> bool:
    s = s.strip().lower()
    if s in ("true", "1"):
        return True
    if s in ("false", "0"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def records_from_csv(text: str) -> list[EntropyRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    for row in reader:
        if not row:
            continue
        d = dict(zip(CSV_FIELDS, row))
        out.append(EntropyRecord(float(d["alpha"]), d["method"], float(d["S_q"]), float(d["S_p"]),
                                 float(d["S_sum"]), float(d["E0"]), float(d["bbm_margin"]),
                                 float(d["overlap"]), _parse_bool(d["converged"])))
    return out


def records_from_json(text: str) -> list[EntropyRecord]:
    out = []
    for d in json.loads(text):
        kw = {f.name: d[f.name] for f in fields(EntropyRecord)}
        for k in ("alpha", "S_q", "S_p", "S_sum", "E0", "bbm_margin", "overlap"):
            kw[k] = math.nan if kw[k] is None else float(kw[k])
        kw["converged"] = bool(kw["converged"])
        out.append(EntropyRecord(**kw))
    return out


def write_records(records, path, fmt: str | None = None) -> None:
    fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
    atomic_write(path, records_to_json(records) if fmt == "json" else records_to_csv(records))


def read_records(path) -> list[EntropyRecord]:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return records_from_json(text)
    return records_from_csv(text)
