"""Calibration pipeline and the registry of case-study instances.

Parameter files and the registry table use the published units: ``e_f`` in
MMT CO2e per TWh and ``xi`` in billion USD per MMT.  They are converted to
the canonical Gt basis on ingestion.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .model import CostSpec, ModelParams

MMT_PER_GT = 1000.0

# Table of nominal parameters; e_f in MMT/TWh, xi in billion USD/MMT.
REGISTRY = {
    "A": dict(theta=109.08, lam=3.83, k=177.51, c_r=0.05, c_f=0.088, g=15.83, e_f=0.367),
    "B": dict(theta=15.23, lam=3.19, k=115.42, c_r=0.048, c_f=0.151, g=9.83, e_f=0.614),
    "C": dict(theta=19.42, lam=2.15, k=129.14, c_r=0.065, c_f=0.193, g=12.0, e_f=0.187),
    "D": dict(theta=109.08, lam=2.15, k=129.14, c_r=0.065, c_f=0.193, g=12.0, e_f=0.187),
}
COMMON = dict(alpha=1.467, eta=178.0, xi=0.225, b=0.15, mu=1.34)

REGION_OF_INSTANCE = {"A": "US", "B": "China", "C": "EU"}

# total economic value potential of generative AI, billion USD
GENAI_VALUE_BUSD = 25_600.0
RISK_COEFF = 0.1
EU_TARGET_MMMU = 70.0


@dataclass
class RegionSeries:
    region: str
    years: list = field(default_factory=list)
    investment: list = field(default_factory=list)
    mmmu: list = field(default_factory=list)

    def pairs(self) -> list[tuple[float, float]]:
        """``(capability, investment)`` pairs with MMMU scaled to ``[0, 1]``."""
        return [(m / 100.0, w) for m, w in zip(self.mmmu, self.investment)]


def _data_path(name: str) -> Path:
    return Path(str(resources.files("ai_energy_game") / "data" / name))


def _read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(row for row in fh if not row.startswith("#")))


def load_investment_series(path=None) -> dict[str, RegionSeries]:
    out: dict[str, RegionSeries] = {}
    for row in _read_csv(path or _data_path("investment_capability.csv")):
        series = out.setdefault(row["region"], RegionSeries(row["region"]))
        mmmu = float(row["mmmu"])
        inv = float(row["investment_busd"])
        if not (0 < mmmu <= 100 and inv > 0):
            raise ValueError(f"bad row {row}")
        series.years.append(int(row["year"]))
        series.investment.append(inv)
        series.mmmu.append(mmmu)
    return out


def load_energy_cross_section(path=None) -> list[tuple[float, float]]:
    """``(mmmu, energy_twh)`` rows."""
    return [(float(r["mmmu"]), float(r["energy_twh"])) for r in _read_csv(path or _data_path("energy_capability.csv"))]


def load_projects(path=None) -> list[tuple[str, float, float]]:
    return [
        (r["project"], float(r["capacity_gw"]), float(r["investment_busd"]))
        for r in _read_csv(path or _data_path("solar_projects.csv"))
    ]


def load_grid_prices(path=None) -> dict[str, tuple[float, float]]:
    return {
        r["region"]: (float(r["lo_usd_mwh"]), float(r["hi_usd_mwh"]))
        for r in _read_csv(path or _data_path("grid_prices.csv"))
    }


def fit_power_law(pairs: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """OLS fit of ``log w = exponent * log x + log level``.

    Returns ``(exponent, level)``.
    """
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("need at least two points")
    x = np.array([a for a, _ in pairs], dtype=float)
    w = np.array([b for _, b in pairs], dtype=float)
    if np.any(x <= 0) or np.any(w <= 0):
        raise ValueError("power-law fit needs positive data")
    lx = np.log(x)
    if np.ptp(lx) == 0:
        raise ValueError("degenerate fit: all x equal")
    slope, intercept = np.polyfit(lx, np.log(w), 1)
    return float(slope), float(math.exp(intercept))


def fit_alpha(cross_section: Iterable[tuple[float, float]]) -> float:
    """Compute-scaling curvature from ``(mmmu, energy)`` observations."""
    slope, _ = fit_power_law((m / 100.0, v) for m, v in cross_section)
    return slope - 1.0


def mean_variance_cost(lo: float, hi: float, risk_coeff: float = RISK_COEFF) -> float:
    """Risk-adjusted grid cost for a price uniform on ``[lo, hi]`` USD/MWh.

    Mean plus ``risk_coeff`` times variance, returned in billion USD/TWh
    (numerically USD/kWh).
    """
    if hi < lo:
        raise ValueError("need lo <= hi")
    return ((lo + hi) / 2 + risk_coeff * (hi - lo) ** 2 / 12) / 1000.0


def mu_from_ratios(capacity_ratio: float, avg_cost_ratio: float) -> float:
    """Exponent of ``g y^mu`` from the change in average cost ``g y^(mu-1)``."""
    if capacity_ratio <= 0 or avg_cost_ratio <= 0 or capacity_ratio == 1:
        raise ValueError("ratios must be positive and capacity must change")
    mu = 1.0 + math.log(avg_cost_ratio) / math.log(capacity_ratio)
    if mu <= 1:
        raise ValueError(f"implied mu={mu:.4f} does not exceed 1")
    return mu


def fit_mu(projects: Sequence[tuple[str, float, float]]) -> float:
    """Treat the last project as an expansion of the ones before it."""
    if len(projects) < 2:
        raise ValueError("need existing projects and one expansion")
    base_cap = sum(c for _, c, _ in projects[:-1])
    base_inv = sum(i for _, _, i in projects[:-1])
    _, new_cap, new_inv = projects[-1]
    if base_cap <= 0 or base_inv <= 0:
        raise ValueError("capacities and investments must be positive")
    cap_ratio = (base_cap + new_cap) / base_cap
    cost_ratio = ((base_inv + new_inv) / (base_cap + new_cap)) / (base_inv / base_cap)
    return mu_from_ratios(cap_ratio, cost_ratio)


def derive_eta(total_value: float, theta_sum: float) -> float:
    if theta_sum == 0:
        raise ZeroDivisionError("theta_sum must be nonzero")
    if total_value <= 0 or theta_sum < 0:
        raise ValueError("values must be positive")
    return total_value / theta_sum


def scaled_energy_demand(energy: float, mmmu_from: float, mmmu_to: float, alpha: float) -> float:
    """Energy needed to reach ``mmmu_to`` under the fitted scaling law."""
    return energy * (mmmu_to / mmmu_from) ** (1 + alpha)


@dataclass(frozen=True)
class CalibrationReport:
    lam: dict
    theta_fit: dict
    alpha: float
    c_f: dict
    mu: float
    eta: float
    k_eu: float


def run_calibration() -> CalibrationReport:
    """Re-derive the calibrated parameters from the shipped data tables."""
    series = load_investment_series()
    fits = {region: fit_power_law(s.pairs()) for region, s in series.items()}
    cross = load_energy_cross_section()
    alpha = fit_alpha(cross)
    prices = load_grid_prices()
    theta_sum = sum(REGISTRY[name]["theta"] for name in "ABC")
    eu_mmmu, eu_energy = [row for row in cross if row[0] == min(m for m, _ in cross)][0]
    return CalibrationReport(
        lam={region: fit[0] for region, fit in fits.items()},
        theta_fit={region: fit[1] for region, fit in fits.items()},
        alpha=alpha,
        c_f={region: mean_variance_cost(lo, hi) for region, (lo, hi) in prices.items()},
        mu=fit_mu(load_projects()),
        eta=derive_eta(GENAI_VALUE_BUSD, theta_sum),
        k_eu=scaled_energy_demand(eu_energy, eu_mmmu, EU_TARGET_MMMU, COMMON["alpha"]),
    )


def _from_table_units(values: dict) -> ModelParams:
    values = dict(values)
    cost = CostSpec(g=values.pop("g"), mu=values.pop("mu"), phi_slope=values.pop("phi_slope", None))
    values["e_f"] = values["e_f"] / MMT_PER_GT
    values["xi"] = values["xi"] * MMT_PER_GT
    return ModelParams(cost=cost, **values)


def build_instance(name: str, d0: float = 0.0) -> ModelParams:
    """Case-study instance ``A``-``D`` in canonical units."""
    try:
        row = REGISTRY[name.upper()]
    except KeyError:
        raise KeyError(f"unknown instance {name!r}; choose from {sorted(REGISTRY)}") from None
    return _from_table_units({**COMMON, **row, "d0": d0})


# -- parameter files ------------------------------------------------------------

FILE_KEYS = ["theta", "lambda", "k", "alpha", "c_r", "c_f", "e_f", "d0", "b", "eta", "xi", "g", "mu", "phi_slope"]
KEY_ALIASES = {"lam": "lambda"}


def to_table_units(p: ModelParams) -> dict:
    out = {
        "theta": p.theta,
        "lambda": p.lam,
        "k": p.k,
        "alpha": p.alpha,
        "c_r": p.c_r,
        "c_f": p.c_f,
        "e_f": p.e_f * MMT_PER_GT,
        "d0": p.d0,
        "b": p.b,
        "eta": p.eta,
        "xi": p.xi / MMT_PER_GT,
        "g": p.cost.g,
        "mu": p.cost.mu,
    }
    if p.cost.phi_slope is not None:
        out["phi_slope"] = p.cost.phi_slope
    return out


def format_params(p: ModelParams) -> str:
    lines = ["# e_f in MMT CO2e/TWh, xi in billion USD/MMT, d0 in Gt CO2e"]
    lines += [f"{key} = {value!r}" for key, value in to_table_units(p).items()]
    return "\n".join(lines) + "\n"


def parse_assignments(lines: Iterable[str]) -> dict[str, float]:
    values = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = KEY_ALIASES.get(key, key)
        if key not in FILE_KEYS:
            raise ValueError(f"unknown parameter {key!r}")
        values[key] = float(value)
    return values


def params_from_table_values(values: dict, base: Optional[ModelParams] = None) -> ModelParams:
    """Build params from table-unit values, filling gaps from ``base``."""
    merged = to_table_units(base) if base is not None else {}
    merged.update(values)
    missing = set(FILE_KEYS) - {"phi_slope", "d0"} - set(merged)
    if missing:
        raise ValueError(f"missing parameters: {sorted(missing)}")
    merged["lam"] = merged.pop("lambda")
    return _from_table_units(merged)


def read_params(path, base: Optional[ModelParams] = None) -> ModelParams:
    with open(path) as fh:
        return params_from_table_values(parse_assignments(fh), base)


def write_params(p: ModelParams, path) -> None:
    Path(path).write_text(format_params(p))
