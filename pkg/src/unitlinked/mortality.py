"""Mortality table ingestion, Gompertz-Makeham fitting and survival probabilities."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

PER = 100_000.0
DEFAULT_WINDOW = (9, 89)
C_BOUNDS = (1e-4, 0.5)


class MortalityDataError(ValueError):
    pass


@dataclass(frozen=True)
class MortalityTable:
    ages: np.ndarray
    men: np.ndarray
    women: np.ndarray
    total: np.ndarray

    def __post_init__(self):
        if len(self.ages) == 0:
            raise MortalityDataError("mortality table is empty")
        if np.any(np.diff(self.ages) <= 0):
            raise MortalityDataError("ages must be strictly increasing")
        for name in ("men", "women", "total"):
            if np.any(getattr(self, name) < 0):
                raise MortalityDataError(f"negative death count in column {name}")


@dataclass(frozen=True)
class GompertzMakehamFit:
    """Hazard a + b exp(c * age)."""

    a: float
    b: float
    c: float
    fit_window: tuple[float, float] = (0.0, math.inf)
    residual: float = 0.0

    def hazard(self, age):
        return hazard(self, age)

    def survival(self, x, T):
        return survival_probability(self, x, T)


def _number(text: str, line: int) -> float:
    try:
        return float(text.replace(" ", "").replace(" ", ""))
    except ValueError:
        raise MortalityDataError(f"line {line}: cannot parse {text!r} as a number") from None


def load_mortality_table(source: str) -> MortalityTable:
    """Parse CSV text with header ``age,men,women,total``."""
    rows = list(csv.reader(io.StringIO(source)))
    rows = [(i + 1, r) for i, r in enumerate(rows) if any(cell.strip() for cell in r)]
    if not rows:
        raise MortalityDataError("mortality table is empty")
    line, header = rows[0]
    if [h.strip().lower() for h in header] != ["age", "men", "women", "total"]:
        raise MortalityDataError(f"line {line}: expected header age,men,women,total, got {header}")
    if len(rows) == 1:
        raise MortalityDataError("mortality table has no data rows")
    data = []
    for line, r in rows[1:]:
        if len(r) != 4:
            raise MortalityDataError(f"line {line}: expected 4 fields, got {len(r)}")
        data.append([_number(cell, line) for cell in r])
    arr = np.array(data)
    return MortalityTable(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])


def read_mortality_table(path: str | Path) -> MortalityTable:
    return load_mortality_table(Path(path).read_text(encoding="utf-8"))


def bundled_table_text() -> str:
    return resources.files("unitlinked").joinpath("data/norway_2018.csv").read_text(encoding="utf-8")


def bundled_table() -> MortalityTable:
    """Norwegian 2018 death counts per 100 000; the open "90 and over" row is stored as age 90."""
    return load_mortality_table(bundled_table_text())


def empirical_hazard(table: MortalityTable) -> tuple[np.ndarray, np.ndarray]:
    """(ages, total deaths / 100 000)."""
    return table.ages.copy(), table.total / PER


# -- fitting -----------------------------------------------------------------

def _best_ab(ages, rates, c):
    """Least squares (a, b) for fixed c subject to b >= 0 and a + b >= 0 (hazard >= 0 for age >= 0)."""
    e = np.exp(c * ages)
    candidates = []
    X = np.column_stack([np.ones_like(e), e])
    (a, b), *_ = np.linalg.lstsq(X, rates, rcond=None)
    if b >= 0 and a + b >= 0:
        candidates.append((a, b))
    else:
        # boundary a = -b: rates ~ b (e - 1)
        f = e - 1
        b1 = max(0.0, float(f @ rates / (f @ f)))
        candidates.append((-b1, b1))
        # boundary b = 0: constant hazard
        candidates.append((max(0.0, float(rates.mean())), 0.0))
    sse = [float(np.sum((a_ + b_ * e - rates) ** 2)) for a_, b_ in candidates]
    i = int(np.argmin(sse))
    return candidates[i][0], candidates[i][1], sse[i]


def fit_gompertz_makeham(ages, rates, window: tuple[float, float] = DEFAULT_WINDOW) -> GompertzMakehamFit:
    """Least-squares fit of a + b exp(c age) to hazard observations inside ``window`` (inclusive).

    For fixed c the problem is linear in (a, b). c is located on a 200-point
    grid over [1e-4, 0.5] and refined by bounded scalar minimization between
    the neighbours of the best grid point.
    """
    ages = np.asarray(ages, dtype=float)
    rates = np.asarray(rates, dtype=float)
    mask = (ages >= window[0]) & (ages <= window[1])
    x, y = ages[mask], rates[mask]
    if x.size < 4:
        raise ValueError(f"need at least 4 observations in window {window}, got {x.size}")
    if not np.any(y > 0):
        raise ValueError("all hazard observations in the window are zero")

    sse = lambda c: _best_ab(x, y, c)[2]  # noqa: E731
    grid = np.linspace(*C_BOUNDS, 200)
    values = np.array([sse(c) for c in grid])
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(sse, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13, "maxiter": 500})
    c = float(res.x) if res.fun <= values[i] else float(grid[i])
    a, b, s = _best_ab(x, y, c)
    return GompertzMakehamFit(float(a), float(b), c, (float(window[0]), float(window[1])), s)


def fit_table(table: MortalityTable, window: tuple[float, float] = DEFAULT_WINDOW) -> GompertzMakehamFit:
    return fit_gompertz_makeham(*empirical_hazard(table), window=window)


# -- survival ----------------------------------------------------------------

def hazard(fit: GompertzMakehamFit, age):
    out = fit.a + fit.b * np.exp(fit.c * np.asarray(age, dtype=float))
    return out.item() if out.ndim == 0 else out


def cumulative_hazard(fit: GompertzMakehamFit, x, T):
    """Integral of the hazard over [x, x + T]."""
    x = np.asarray(x, dtype=float)
    T = np.asarray(T, dtype=float)
    if fit.b == 0:
        return fit.a * T
    return fit.a * T + fit.b / fit.c * np.exp(fit.c * x) * np.expm1(fit.c * T)


def survival_probability(fit: GompertzMakehamFit, x, T):
    """Probability that a life aged x is alive at x + T."""
    out = np.exp(-cumulative_hazard(fit, x, T))
    return out.item() if out.ndim == 0 else out


NO_MORTALITY = GompertzMakehamFit(0.0, 0.0, 0.1)
