"""Euler full-truncation simulation of the Vasicek-Heston market and the Black-Scholes benchmark.

Randomness: every (seed, path, driver) triple owns an independent Philox
stream derived through ``numpy.random.SeedSequence`` spawn keys. Paths are
simulated in blocks whose partition depends only on the problem size, so
results are bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from .market import (
    BlackScholesParams,
    HestonParams,
    VasicekParams,
    forward_variance_from_nu,
    nu_from_forward_variance,
    vasicek_A,
    vasicek_B,
)

RATE, STOCK, VARIANCE = 0, 1, 2  # driver indices for W0, W1, W2

Gamma0Mode = Literal["full", "zero"]

# Block size target in stored nodes per state array.
_BLOCK_NODES = 4_000_000


class SimulationError(RuntimeError):
    """A simulated state became non-finite."""


@dataclass(frozen=True)
class TimeGrid:
    T: float
    N: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"horizon must be > 0, got {self.T}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"step count must be a positive integer, got {self.N}")

    @classmethod
    def with_resolution(cls, T: float, steps_per_year: int = 252) -> TimeGrid:
        """Grid with ceil(steps_per_year * T) steps (daily by default)."""
        return cls(T, max(1, math.ceil(steps_per_year * T - 1e-9)))

    @property
    def dt(self) -> float:
        return self.T / self.N

    @cached_property
    def nodes(self) -> np.ndarray:
        t = np.arange(self.N + 1) * self.T / self.N
        t[-1] = self.T
        return t


@dataclass(frozen=True)
class PriceEstimate:
    mean: float
    stderr: float
    n_paths: int
    seed: int | None = None


@dataclass(frozen=True, eq=False)
class PathSet:
    """Joint trajectories, each state array shaped (n_paths, N + 1).

    ``xi`` is the forward variance for delivery at the grid horizon and
    ``p`` the price of the bond maturing there.
    """

    grid: TimeGrid
    r: np.ndarray
    nu: np.ndarray
    xi: np.ndarray
    s: np.ndarray
    p: np.ndarray
    seed: int
    path_indices: np.ndarray = field(repr=False)

    @property
    def n_paths(self) -> int:
        return self.r.shape[0]

    @property
    def negative_stock_fraction(self) -> float:
        """Share of paths whose additive Euler stock step went non-positive somewhere."""
        return float(np.mean(np.any(self.s <= 0, axis=1)))

    def to_csv(self, fh) -> None:
        """Write one row per (path, node): path,k,t,r,nu,xi,s,p."""
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["path", "k", "t", "r", "nu", "xi", "s", "p"])
        t = self.grid.nodes
        for i, pid in enumerate(self.path_indices):
            for k in range(self.grid.N + 1):
                w.writerow([int(pid), k, repr(float(t[k])),
                            *(repr(float(a[i, k])) for a in (self.r, self.nu, self.xi, self.s, self.p))])

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()

    @staticmethod
    def concatenate(blocks: Sequence[PathSet]) -> PathSet:
        first = blocks[0]
        cat = lambda name: np.concatenate([getattr(b, name) for b in blocks], axis=0)  # noqa: E731
        return PathSet(first.grid, cat("r"), cat("nu"), cat("xi"), cat("s"), cat("p"),
                       first.seed, cat("path_indices"))


@dataclass(frozen=True)
class MonteCarloSettings:
    """Everything needed to reproduce a Monte Carlo run apart from the model."""

    n_paths: int = 5000
    seed: int = 0
    steps_per_year: int = 252
    workers: int = 1
    gamma0: Gamma0Mode = "full"
    truncate_rate: bool = True

    def __post_init__(self):
        if self.n_paths < 2:
            raise ValueError("n_paths must be >= 2")
        if self.steps_per_year < 1:
            raise ValueError("steps_per_year must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.gamma0 not in ("full", "zero"):
            raise ValueError(f"unknown gamma0 mode {self.gamma0!r}")

    def grid(self, T: float) -> TimeGrid:
        return TimeGrid.with_resolution(T, self.steps_per_year)


# -- random numbers ------------------------------------------------------------

def substream(seed: int, path_index: int, driver_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(int(path_index), int(driver_index)))
    return np.random.Generator(np.random.Philox(ss))


def gaussian_stream(seed: int, path_index: int, driver_index: int, step: int) -> float:
    """The standard normal increment driving ``driver_index`` of ``path_index`` at ``step``."""
    if driver_index not in (RATE, STOCK, VARIANCE):
        raise ValueError(f"driver index must be 0, 1 or 2, got {driver_index}")
    if step < 0 or path_index < 0:
        raise ValueError("indices must be non-negative")
    return float(substream(seed, path_index, driver_index).standard_normal(step + 1)[step])


def _normals(seed: int, paths: np.ndarray, driver: int, n_steps: int) -> np.ndarray:
    """Increments shaped (n_steps, len(paths)) so each step is a contiguous row."""
    out = np.empty((len(paths), n_steps))
    for i, pid in enumerate(paths):
        out[i] = substream(seed, pid, driver).standard_normal(n_steps)
    return np.ascontiguousarray(out.T)


def _blocks(n: int, N: int) -> list[np.ndarray]:
    size = max(1, min(n, _BLOCK_NODES // (N + 1)))
    return [np.arange(lo, min(lo + size, n)) for lo in range(0, n, size)]


def _run_blocks(fn, blocks, workers: int) -> Iterator:
    if workers <= 1:
        for b in blocks:
            yield fn(b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for lo in range(0, len(blocks), workers):
            yield from pool.map(fn, blocks[lo:lo + workers])


# -- Black-Scholes ---------------------------------------------------------------

def simulate_bs_paths(p: BlackScholesParams, grid: TimeGrid, n: int, seed: int) -> np.ndarray:
    """Terminal stock values from the exact log-Euler Black-Scholes scheme."""
    if n < 1:
        raise ValueError("n must be >= 1")
    drift = (p.r - 0.5 * p.sigma**2) * grid.dt
    vol = p.sigma * math.sqrt(grid.dt)
    out = np.empty(n)
    for idx in _blocks(n, grid.N):
        z = _normals(seed, idx, STOCK, grid.N)
        log_inc = drift + vol * z
        out[idx] = p.s0 * np.exp(np.cumsum(log_inc, axis=0)[-1])
    return out


# -- Vasicek-Heston --------------------------------------------------------------

def _simulate_vh_block(vp: VasicekParams, hp: HestonParams, grid: TimeGrid, seed: int,
                       idx: np.ndarray, gamma0: Gamma0Mode, truncate_rate: bool) -> PathSet:
    N, T, dt = grid.N, grid.T, grid.dt
    t = grid.nodes
    nb = len(idx)
    sq = math.sqrt(dt)

    B = np.asarray(vasicek_B(t[:-1], T, vp))
    decay = np.exp(-hp.kappa * (T - t[:-1]))
    # sigma * gamma0 = ((Bk - 1) / B) r + B sigma^2 / 2 - k theta
    use_correction = gamma0 == "full" and vp.sigma > 0
    corr_slope = (B * vp.k - 1) / B
    corr_level = 0.5 * B * vp.sigma**2 - vp.k * vp.theta

    z0 = _normals(seed, idx, RATE, N)
    z1 = _normals(seed, idx, STOCK, N)
    z2 = _normals(seed, idx, VARIANCE, N)

    r = np.empty((N + 1, nb))
    xi = np.empty((N + 1, nb))
    nu = np.empty((N + 1, nb))
    s = np.empty((N + 1, nb))
    p = np.empty((N + 1, nb))
    r[0] = vp.r0
    nu[0] = hp.nu0
    xi[0] = forward_variance_from_nu(0.0, T, hp.nu0, hp)
    s[0] = hp.s0
    p[0] = vasicek_A(0.0, T, vp) * math.exp(-vasicek_B(0.0, T, vp) * vp.r0)

    with np.errstate(all="ignore"):
        for j in range(N):
            rj, sj, pj, xij = r[j], s[j], p[j], xi[j]
            root_nu = np.sqrt(np.maximum(nu[j], 0.0) * dt)
            r_mr = np.maximum(rj, 0.0) if truncate_rate else rj
            drift = vp.k * (vp.theta - r_mr)
            if use_correction:
                drift = drift + corr_slope[j] * rj + corr_level[j]
            dw0 = z0[j]
            r[j + 1] = rj + drift * dt + vp.sigma * sq * dw0
            xi[j + 1] = xij + rj * xij * dt + hp.eta * decay[j] * root_nu * z2[j]
            nu[j + 1] = nu_from_forward_variance(t[j + 1], T, xi[j + 1], hp)
            s[j + 1] = sj + rj * sj * dt + sj * root_nu * z1[j]
            p[j + 1] = pj + pj * (rj * dt - vp.sigma * B[j] * sq * dw0)

    _check_finite(idx, r=r, xi=xi, nu=nu, s=s, p=p)
    return PathSet(grid, r.T, nu.T, xi.T, s.T, p.T, seed, idx)


def _check_finite(idx: np.ndarray, **states: np.ndarray) -> None:
    first = None
    for name, a in states.items():
        bad = ~np.isfinite(a)
        if bad.any():
            step, col = np.argwhere(bad)[0]
            if first is None or (step, col) < first[:2]:
                first = (step, col, name)
    if first is not None:
        step, col, name = first
        raise SimulationError(f"non-finite {name} on path {int(idx[col])} at step {int(step)}")


def iter_vh_blocks(vp: VasicekParams, hp: HestonParams, grid: TimeGrid, n: int, seed: int, *,
                   gamma0: Gamma0Mode = "full", truncate_rate: bool = True,
                   workers: int = 1) -> Iterator[PathSet]:
    """Yield consecutive path blocks covering paths 0..n-1, in order."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def run(idx):
        return _simulate_vh_block(vp, hp, grid, seed, idx, gamma0, truncate_rate)

    yield from _run_blocks(run, _blocks(n, grid.N), workers)


def simulate_vh_paths(vp: VasicekParams, hp: HestonParams, grid: TimeGrid, n: int, seed: int, *,
                      gamma0: Gamma0Mode = "full", truncate_rate: bool = True,
                      workers: int = 1) -> PathSet:
    """Simulate ``n`` Vasicek-Heston paths on ``grid``.

    ``gamma0="zero"`` drops the bond market price of risk from the rate
    drift; ``truncate_rate=False`` uses r instead of max(r, 0) inside the
    mean reversion, which makes the rate an exact Vasicek Euler scheme.
    """
    blocks = list(iter_vh_blocks(vp, hp, grid, n, seed, gamma0=gamma0,
                                 truncate_rate=truncate_rate, workers=workers))
    return blocks[0] if len(blocks) == 1 else PathSet.concatenate(blocks)


def simulate_with(settings: MonteCarloSettings, vp: VasicekParams, hp: HestonParams,
                  T: float) -> Iterator[PathSet]:
    return iter_vh_blocks(vp, hp, settings.grid(T), settings.n_paths, settings.seed,
                          gamma0=settings.gamma0, truncate_rate=settings.truncate_rate,
                          workers=settings.workers)


# -- discounting and estimation ----------------------------------------------------

def discount_factors(paths: PathSet) -> np.ndarray:
    """exp(-sum_{j<k} r_j dt) for every path and node (left-endpoint rule)."""
    n, N = paths.r.shape[0], paths.grid.N
    acc = np.zeros((n, N + 1))
    np.cumsum(paths.r[:, :-1] * paths.grid.dt, axis=1, out=acc[:, 1:])
    return np.exp(-acc)


def pathwise_discount(paths: PathSet, k: int) -> np.ndarray:
    if not 0 <= k <= paths.grid.N:
        raise ValueError(f"node index {k} outside 0..{paths.grid.N}")
    return discount_factors(paths)[:, k]


def mc_estimate(samples, seed: int | None = None) -> PriceEstimate:
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    return PriceEstimate(float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size)), int(x.size), seed)
