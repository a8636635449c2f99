"""Command-line front end: ``fextremal {sample,integrate,process,verify}``.

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 failed
verification.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import plots
from .algebra import UsageError
from .config import ConfigError, RunConfig, load_config
from .integral import (Controls, cumulative_kernels, integrate, integration_region,
                       simulate_process)
from .laws import FrechetLaw, ImplicitFrechetLaw, implicit_sample, substream
from .measure import cell_from_json, lalpha_norm
from .supmeasure import SeriesRealization, csv_header
from .verify import SuiteSettings, reports_csv, run_suite

log = logging.getLogger("fextremal")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_VERIFY = 0, 1, 2, 3
CHUNK = 1024


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _chunks(n: int):
    return [(c, c * CHUNK, min(n, (c + 1) * CHUNK)) for c in range((n + CHUNK - 1) // CHUNK)]


def _run_chunks(func, cfg_dict: dict, extra, n: int, jobs: int) -> list:
    """Apply ``func(cfg_dict, extra, chunk)`` over fixed chunks; output is job-count invariant."""
    chunks = _chunks(n)
    if jobs <= 1:
        parts = [func(cfg_dict, extra, ch) for ch in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(func, [cfg_dict] * len(chunks), [extra] * len(chunks), chunks))
    return [row for part in parts for row in part]


def _cfg(cfg_dict: dict) -> RunConfig:
    return RunConfig(**cfg_dict)


# ------------------------------------------------------------------- sample


def _sample_chunk(cfg_dict, _extra, chunk):
    cfg = _cfg(cfg_dict)
    spec = cfg.build_spec()
    c, lo, hi = chunk
    law = ImplicitFrechetLaw(cfg.alpha, cfg.sigma, spec.kappa)
    y = implicit_sample(law, substream(cfg.seed, 100, c), hi - lo)
    fv = spec.loss(y)
    return [[lo + i + 1, *y[i].tolist(), float(fv[i])] for i in range(hi - lo)]


def cmd_sample(cfg: RunConfig, out: str, jobs: int = 1) -> int:
    spec = cfg.build_spec()
    d = spec.dimension
    rows = _run_chunks(_sample_chunk, cfg.to_dict(), None, cfg.replications, jobs)
    write_csv(os.path.join(out, "sample.csv"),
              ["rep", *[f"y_{i + 1}" for i in range(d)], "f_value"], rows)
    if cfg.plots:
        law = FrechetLaw(cfg.alpha, cfg.sigma)
        svg = plots.cdf_overlay([r[-1] for r in rows], law.cdf, "f(Y): empirical vs Fréchet")
        with open(os.path.join(out, "sample_cdf.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)
    log.info("wrote %d samples", len(rows))
    return EXIT_OK


# ---------------------------------------------------------------- integrate


def _integrate_chunk(cfg_dict, extra, chunk):
    cfg = _cfg(cfg_dict)
    spec = cfg.build_spec()
    index, region_json = extra
    g = cfg.build_integrands()[index]
    c, lo, hi = chunk
    controls = Controls(cfg.backend, cfg.epsilon_trunc, cfg.level)
    rows = []
    for rep in range(lo, hi):
        if cfg.backend == "series":
            real = SeriesRealization(spec, cell_from_json(region_json),
                                     substream(cfg.seed, 200 + index, rep))
            res = integrate(spec, g, real)
            rows.append(res.csv_row(rep + 1))
        else:
            res = integrate(spec, g, seed=_rep_seed(cfg.seed, 300 + index, rep),
                            controls=controls)
            rows.append(res.csv_row(rep + 1) + [res.lalpha_gap])
    return rows


def _rep_seed(seed: int, key: int, rep: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(key, rep)).generate_state(2, np.uint64)[0])


def cmd_integrate(cfg: RunConfig, out: str, jobs: int = 1) -> int:
    spec = cfg.build_spec()
    gs = cfg.build_integrands()
    d = spec.dimension
    for i, g in enumerate(gs):
        region = integration_region(spec, g, cfg.epsilon_trunc).to_json()
        rows = _run_chunks(_integrate_chunk, cfg.to_dict(), (i, region), cfg.replications, jobs)
        header = csv_header(d) + (["lalpha_gap"] if cfg.backend == "cells" else [])
        write_csv(os.path.join(out, f"integrate_{i}.csv"), header, rows)
        if cfg.plots:
            law = FrechetLaw(cfg.alpha, lalpha_norm(g, spec.space, cfg.alpha))
            svg = plots.cdf_overlay([r[d + 1] for r in rows], law.cdf,
                                    f"f(I(g_{i})): empirical vs Fréchet")
            with open(os.path.join(out, f"integrate_{i}_cdf.svg"), "w", encoding="utf-8") as fh:
                fh.write(svg)
        log.info("integrand %d: wrote %d rows", i, len(rows))
    return EXIT_OK


# ------------------------------------------------------------------ process


def _process_kernels(cfg: RunConfig):
    if cfg.process_kernels == "cumulative":
        return cumulative_kernels(cfg.times)
    gs = cfg.build_integrands()
    if len(gs) != len(cfg.times):
        raise ConfigError("field 'integrands': process needs one integrand per time point")
    return gs


def _process_chunk(cfg_dict, _extra, chunk):
    cfg = _cfg(cfg_dict)
    spec = cfg.build_spec()
    kernels = _process_kernels(cfg)
    c, lo, hi = chunk
    rows = []
    for rep in range(lo, hi):
        results = simulate_process(spec, kernels, seed=_rep_seed(cfg.seed, 400, rep),
                                   epsilon=cfg.epsilon_trunc)
        for t, res in zip(cfg.times, results):
            rows.append([rep + 1, t, *res.value.tolist(), res.f_value])
    return rows


def cmd_process(cfg: RunConfig, out: str, jobs: int = 1) -> int:
    spec = cfg.build_spec()
    _process_kernels(cfg)
    d = spec.dimension
    rows = _run_chunks(_process_chunk, cfg.to_dict(), None, cfg.replications, jobs)
    write_csv(os.path.join(out, "process.csv"),
              ["rep", "t", *[f"x_{i + 1}" for i in range(d)], "f_value"], rows)
    if cfg.plots:
        k = len(cfg.times)
        paths = [[r[-1] for r in rows[j * k:(j + 1) * k]] for j in range(min(5, cfg.replications))]
        with open(os.path.join(out, "process_paths.svg"), "w", encoding="utf-8") as fh:
            fh.write(plots.step_paths(cfg.times, paths))
    return EXIT_OK


# ------------------------------------------------------------------- verify


def suite_settings(cfg: RunConfig) -> SuiteSettings:
    loss = cfg.build_loss()
    v = cfg.verify
    allowed = {"scale_factor", "n_large", "n_medium", "n_small"}
    unknown = set(v) - allowed
    if unknown:
        raise ConfigError(f"field 'verify.{sorted(unknown)[0]}': unknown key")
    return SuiteSettings(seed=cfg.seed, loss=loss, kappa=cfg.build_kappa(loss),
                         scale_factor=float(v.get("scale_factor", 1.0)),
                         n_large=int(v.get("n_large", 100_000)),
                         n_medium=int(v.get("n_medium", 20_000)),
                         n_small=int(v.get("n_small", 1000)))


def cmd_verify(cfg: RunConfig, out: str, jobs: int = 1) -> int:
    settings = suite_settings(cfg)
    reports = run_suite(settings, progress=lambda r: log.info(r.summary()))
    with open(os.path.join(out, "verify_report.csv"), "w", newline="", encoding="utf-8") as fh:
        fh.write(reports_csv(reports))
    failed = [r for r in reports if not r.passed]
    summary = "\n".join(r.summary() for r in reports)
    summary += f"\n{len(reports) - len(failed)}/{len(reports)} checks passed\n"
    with open(os.path.join(out, "verify_summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(summary)
    print(summary, end="")
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"sample": cmd_sample, "integrate": cmd_integrate, "process": cmd_process,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fextremal", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON run configuration (defaults if omitted)")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--out", help="output directory (overrides config 'output')")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for replications")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
            cfg.validate()
        out = args.out or cfg.output
        os.makedirs(out, exist_ok=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg, out, max(1, args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (UsageError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
