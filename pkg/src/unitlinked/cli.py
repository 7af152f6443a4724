"""Command-line front end.

Every verb writes its CSV files, the resolved configuration and a
``manifest.json`` with SHA-256 checksums into the output directory.
Exit codes: 0 success, 2 input or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .config import ConfigError, RunConfig
from .engine import SimulationError
from .market import bs_endowment
from .mortality import (
    GompertzMakehamFit,
    MortalityDataError,
    bundled_table,
    empirical_hazard,
    fit_gompertz_makeham,
    hazard,
    read_mortality_table,
)
from .pricing import (
    PolicySpec,
    endowment_with_death_benefit_bs,
    endowment_with_death_benefit_vh,
    price_surface,
    pure_endowment_bs,
    pure_endowment_vh,
    vh_endowment_value,
)
from .report import qq_pairs, write_csv, write_manifest

SEED_ENV = "UNITLINKED_SEED"
EXIT_INPUT, EXIT_NUMERICAL = 2, 3


class _Context:
    def __init__(self, cfg: RunConfig, base_dir: Path, out: Path):
        self.cfg = cfg
        self.base_dir = base_dir
        self.out = out

    def table(self, override: str | None = None):
        source = override or self.cfg.mortality.source
        if source == "bundled":
            return bundled_table()
        path = Path(source)
        if not path.is_absolute() and override is None:
            path = self.base_dir / path
        if not path.is_file():
            raise FileNotFoundError(f"mortality table not found: {path}")
        return read_mortality_table(path)

    def fit(self, override: str | None = None) -> GompertzMakehamFit:
        m = self.cfg.mortality
        return fit_gompertz_makeham(*empirical_hazard(self.table(override)), window=(m.age_lo, m.age_hi))


# -- verbs ---------------------------------------------------------------------------

def cmd_fit_mortality(ctx: _Context, args) -> list[Path]:
    table = ctx.table(args.table)
    m = ctx.cfg.mortality
    ages, rates = empirical_hazard(table)
    fit = fit_gompertz_makeham(ages, rates, window=(m.age_lo, m.age_hi))
    files = [write_csv(ctx.out / "fit.csv", ["a", "b", "c", "age_lo", "age_hi", "sse"],
                       [[fit.a, fit.b, fit.c, *fit.fit_window, fit.residual]])]
    observed = dict(zip(ages.tolist(), rates.tolist()))
    grid = np.arange(0, 101)
    rows = [[int(a), hazard(fit, float(a)), observed.get(float(a), "")] for a in grid]
    files.append(write_csv(ctx.out / "fit_hazard.csv", ["age", "hazard", "observed"], rows))
    return files


def cmd_compare_models(ctx: _Context, args) -> list[Path]:
    c = ctx.cfg
    G = c.policy.guarantee_endowment
    bs = c.blackscholes
    rows = []
    for T in c.policy.maturities:
        bs_price = float(bs_endowment(0.0, T, bs.s0, G, bs.r, bs.sigma))
        est, _ = vh_endowment_value(T, G, c.vasicek, c.heston, c.mc)
        rows.append([T, bs_price, est.mean, est.stderr])
    return [write_csv(ctx.out / "compare_models.csv", ["T", "bs_price", "vh_price", "vh_stderr"], rows)]


def cmd_price_surface(ctx: _Context, args) -> list[Path]:
    c = ctx.cfg
    fit = ctx.fit()
    rows = []
    for T in c.policy.maturities:
        surf = price_surface(c.policy.ages, c.policy.guarantees, T, c.vasicek, c.heston, fit, c.mc)
        for i, age in enumerate(surf.ages):
            for j, G in enumerate(surf.guarantees):
                rows.append([T, age, G, surf.premium[i, j], surf.stderr[i, j]])
    return [write_csv(ctx.out / "price_surface.csv", ["T", "age", "guarantee", "premium", "stderr"], rows)]


def cmd_distribution(ctx: _Context, args) -> list[Path]:
    c = ctx.cfg
    payoffs, qq = [], []
    for T in c.policy.maturities:
        # survival factor fixed at 1
        _, samples = vh_endowment_value(T, c.policy.guarantee_endowment, c.vasicek, c.heston, c.mc)
        payoffs.extend([T, i, v] for i, v in enumerate(samples))
        theo, z = qq_pairs(samples)
        qq.extend([T, a, b] for a, b in zip(theo, z))
    return [
        write_csv(ctx.out / "distribution_payoffs.csv", ["T", "path", "payoff"], payoffs),
        write_csv(ctx.out / "distribution_qq.csv", ["T", "theoretical", "sample"], qq),
    ]


def cmd_premiums(ctx: _Context, args) -> list[Path]:
    c = ctx.cfg
    p = c.policy
    fit = ctx.fit()
    rows = []
    for T in p.maturities:
        policy = PolicySpec(p.age, T, p.guarantee_endowment, p.guarantee_death, p.death_benefit)
        if p.death_benefit:
            bs_q = endowment_with_death_benefit_bs(policy, c.blackscholes, fit, strict_paper=p.strict_paper)
            vh_q = endowment_with_death_benefit_vh(policy, c.vasicek, c.heston, fit, c.mc)
        else:
            bs_q = pure_endowment_bs(policy, c.blackscholes, fit)
            vh_q = pure_endowment_vh(policy, c.vasicek, c.heston, fit, c.mc)
        rows.append([T, bs_q.single, vh_q.single, vh_q.estimate.stderr, bs_q.yearly, vh_q.yearly])
    header = ["T", "bs_single", "vh_single", "vh_stderr", "bs_yearly", "vh_yearly"]
    return [write_csv(ctx.out / "premiums.csv", header, rows)]


VERBS = {
    "fit-mortality": (cmd_fit_mortality, "fit the Gompertz-Makeham hazard to a mortality table"),
    "compare-models": (cmd_compare_models, "Black-Scholes vs Vasicek-Heston endowment values by maturity"),
    "price-surface": (cmd_price_surface, "pure-endowment premium surfaces over age and guarantee"),
    "distribution": (cmd_distribution, "per-path discounted payoffs and normal QQ data"),
    "premiums": (cmd_premiums, "single and yearly premiums by maturity"),
}


# -- argument handling -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration (default: bundled section5)")
    common.add_argument("--seed", type=int, help=f"master seed (fallback: ${SEED_ENV}, then config)")
    common.add_argument("--paths", type=int, help="number of Monte Carlo paths")
    common.add_argument("--steps", type=int, help="time steps per year")
    common.add_argument("--workers", type=int, help="threads used for path blocks")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--strict-paper", action="store_true", default=None,
                        help="use the alternative published death-benefit formula")

    parser = argparse.ArgumentParser(prog="unitlinked", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for name, (_, text) in VERBS.items():
        sp = sub.add_parser(name, parents=[common], help=text, description=text)
        if name == "fit-mortality":
            sp.add_argument("--table", help="mortality CSV (age,men,women,total)")
        if name == "premiums":
            sp.add_argument("--policy", choices=["pure", "death-benefit"], help="policy type")
    return parser


def resolve_config(args) -> tuple[RunConfig, Path]:
    if args.config is not None:
        if not args.config.is_file():
            raise FileNotFoundError(f"config file not found: {args.config}")
        cfg, base = cfgmod.load(args.config), args.config.resolve().parent
    else:
        cfg, base = cfgmod.bundled_config("section5"), Path.cwd()

    mc = {}
    seed = args.seed
    if seed is None and os.environ.get(SEED_ENV):
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"${SEED_ENV} is not an integer") from None
    if seed is not None:
        mc["seed"] = seed
    if args.paths is not None:
        mc["n_paths"] = args.paths
    if args.steps is not None:
        mc["steps_per_year"] = args.steps
    if args.workers is not None:
        mc["workers"] = args.workers
    policy = {}
    if args.strict_paper:
        policy["strict_paper"] = True
    if getattr(args, "policy", None):
        policy["death_benefit"] = args.policy == "death-benefit"
    output = {"dir": str(args.out)} if args.out is not None else {}
    cfg = cfgmod.from_mapping({"mc": mc, "policy": policy, "output": output}, base=cfg)
    return cfg, base


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, base = resolve_config(args)
        out = Path(cfg.output.dir)
        out.mkdir(parents=True, exist_ok=True)
        ctx = _Context(cfg, base, out)
        files = VERBS[args.verb][0](ctx, args)
        echo = out / "resolved_config.toml"
        echo.write_text(cfgmod.dumps(cfg), encoding="utf-8")
        files.append(echo)
        files.append(write_manifest(out, files))
    except (SimulationError, FloatingPointError, ArithmeticError) as exc:
        print(f"unitlinked: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, MortalityDataError, OSError, ValueError) as exc:
        print(f"unitlinked: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
