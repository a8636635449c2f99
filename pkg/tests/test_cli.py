import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fextremal.cli import main
from fextremal.config import ConfigError, RunConfig, config_from_dict, parse_config
from fextremal.laws import FrechetLaw
from fextremal.verify import ks_statistic


def _run(tmp_path, command, cfg: dict | None = None, *extra):
    args = [command, "--out", str(tmp_path / "out")]
    if cfg is not None:
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        args += ["--config", str(path)]
    return main(args + list(extra))


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# --------------------------------------------------------------------- config


def test_config_defaults():
    cfg = RunConfig().validate()
    assert cfg.replications == 20000 and cfg.epsilon_trunc == 1e-4 and cfg.backend == "series"


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 64 - 1), alpha=st.floats(0.3, 5), sigma=st.floats(0, 10),
       backend=st.sampled_from(["series", "cells"]), reps=st.integers(1, 10 ** 6),
       eps=st.floats(1e-9, 0.5), level=st.integers(1, 12))
def test_config_round_trip(seed, alpha, sigma, backend, reps, eps, level):
    cfg = config_from_dict({"seed": seed, "alpha": alpha, "sigma": sigma, "backend": backend,
                            "replications": reps, "epsilon_trunc": eps, "level": level})
    again = parse_config(cfg.to_json())
    assert again == cfg
    assert parse_config(again.to_json()).to_json() == cfg.to_json()


def test_config_error_locations():
    with pytest.raises(ConfigError, match="line 2, column"):
        parse_config('{"seed": 1,\n "alpha": }')
    with pytest.raises(ConfigError, match="field 'alpha'"):
        parse_config('{"alpha": -1}')
    with pytest.raises(ConfigError, match="field 'bogus'"):
        parse_config('{"bogus": 1}')
    with pytest.raises(ConfigError, match=r"field 'integrands\[0\]'"):
        parse_config('{"integrands": [{"kind": "nope"}]}')
    with pytest.raises(ConfigError, match="field 'kappa'"):
        parse_config('{"kappa": {"kind": "discrete", "atoms": [[1, 0]], "probs": [0.5]}}')
    with pytest.raises(ConfigError, match="field 'times'"):
        parse_config('{"times": [2, 1]}')


def test_cli_config_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"alpha": 0}')
    assert main(["sample", "--config", str(path), "--out", str(tmp_path)]) == 1
    assert "field 'alpha'" in capsys.readouterr().err
    assert main(["sample", "--config", str(tmp_path / "missing.json")]) == 1


def test_cli_runtime_error_exit_code(tmp_path):
    cfg = {"replications": 5, "integrands": [{"kind": "power", "exponent": -1.0,
                                              "support": [[1.0, None]]}],
           "alpha": 1.0, "plots": False}
    assert _run(tmp_path, "integrate", cfg) == 2


# --------------------------------------------------------------------- sample


def test_sample_format_and_law(tmp_path):
    cfg = {"replications": 3000, "alpha": 1.5, "sigma": 2.0}
    assert _run(tmp_path, "sample", cfg) == 0
    rows = _rows(tmp_path / "out" / "sample.csv")
    assert rows[0] == ["rep", "y_1", "y_2", "f_value"]
    assert len(rows) == 3001
    assert [int(r[0]) for r in rows[1:]] == list(range(1, 3001))
    f = np.array([float(r[-1]) for r in rows[1:]])
    y = np.array([[float(v) for v in r[1:3]] for r in rows[1:]])
    np.testing.assert_allclose(np.linalg.norm(y, axis=1), f, rtol=1e-15)
    assert ks_statistic(f, FrechetLaw(1.5, 2.0).cdf) < 1.628 / math.sqrt(3000)
    assert (tmp_path / "out" / "sample_cdf.svg").read_text().startswith("<svg")


def test_sample_zero_scale(tmp_path):
    assert _run(tmp_path, "sample", {"replications": 50, "sigma": 0.0, "plots": False}) == 0
    rows = _rows(tmp_path / "out" / "sample.csv")[1:]
    assert all(float(v) == 0.0 for r in rows for v in r[1:])


def test_seed_override_and_jobs_invariance(tmp_path):
    cfg = {"replications": 2500, "plots": False}
    _run(tmp_path, "sample", cfg, "--seed", "7")
    a = (tmp_path / "out" / "sample.csv").read_bytes()
    _run(tmp_path, "sample", cfg, "--seed", "7", "--jobs", "3")
    b = (tmp_path / "out" / "sample.csv").read_bytes()
    _run(tmp_path, "sample", cfg, "--seed", "8")
    c = (tmp_path / "out" / "sample.csv").read_bytes()
    assert a == b and a != c


# ------------------------------------------------------------------ integrate


def test_integrate_simple_config(tmp_path):
    cfg = {"replications": 3000, "plots": False,
           "integrands": [{"kind": "simple",
                           "terms": [{"cells": [[0, 1]], "coeff": 2.0},
                                     {"cells": [[1, 3]], "coeff": 1.0}]}]}
    assert _run(tmp_path, "integrate", cfg) == 0
    rows = _rows(tmp_path / "out" / "integrate_0.csv")
    assert rows[0] == ["replication", "value_1", "value_2", "f_value", "atom_index",
                       "atoms_used", "mismatch_prob"]
    f = np.array([float(r[3]) for r in rows[1:]])
    assert ks_statistic(f, FrechetLaw(2.0, math.sqrt(6)).cdf) < 1.628 / math.sqrt(3000)
    assert all(float(r[-1]) == 0.0 for r in rows[1:])


def test_integrate_unbounded_kernel_honors_epsilon(tmp_path):
    cfg = {"replications": 500, "plots": False, "epsilon_trunc": 0.01, "alpha": 1.0,
           "integrands": [{"kind": "exp_decay", "rate": 1.0, "support": [[0, None]]}]}
    assert _run(tmp_path, "integrate", cfg) == 0
    rows = _rows(tmp_path / "out" / "integrate_0.csv")[1:]
    assert all(0 < float(r[-1]) <= 0.01 for r in rows)


def test_integrate_cells_backend_gap_column(tmp_path):
    cfg = {"replications": 200, "plots": False, "backend": "cells", "level": 5}
    assert _run(tmp_path, "integrate", cfg) == 0
    rows = _rows(tmp_path / "out" / "integrate_0.csv")
    assert rows[0][-1] == "lalpha_gap"
    gaps = {r[-1] for r in rows[1:]}
    assert len(gaps) == 1 and float(gaps.pop()) > 0


def test_integrate_jobs_invariance(tmp_path):
    cfg = {"replications": 1500, "plots": False}
    _run(tmp_path, "integrate", cfg)
    a = (tmp_path / "out" / "integrate_0.csv").read_bytes()
    _run(tmp_path, "integrate", cfg, "--jobs", "2")
    assert (tmp_path / "out" / "integrate_0.csv").read_bytes() == a


# -------------------------------------------------------------------- process


def test_process_paths(tmp_path):
    cfg = {"replications": 400, "times": [0.5, 1.0, 2.0]}
    assert _run(tmp_path, "process", cfg) == 0
    rows = _rows(tmp_path / "out" / "process.csv")
    assert rows[0] == ["rep", "t", "x_1", "x_2", "f_value"]
    body = rows[1:]
    assert len(body) == 400 * 3
    for i in range(0, len(body), 3):
        f = [float(r[-1]) for r in body[i:i + 3]]
        assert f == sorted(f)
    assert (tmp_path / "out" / "process_paths.svg").exists()


def test_process_single_time_matches_integrate_law(tmp_path):
    cfg = {"replications": 3000, "times": [1.5], "plots": False}
    assert _run(tmp_path, "process", cfg) == 0
    f = np.array([float(r[-1]) for r in _rows(tmp_path / "out" / "process.csv")[1:]])
    assert ks_statistic(f, FrechetLaw(2.0, math.sqrt(1.5)).cdf) < 1.628 / math.sqrt(3000)


def test_process_user_kernels_need_matching_times(tmp_path):
    cfg = {"replications": 5, "process_kernels": "integrands", "times": [1, 2], "plots": False}
    assert _run(tmp_path, "process", cfg) == 1


# --------------------------------------------------------------------- verify


SMALL_VERIFY = {"n_large": 4000, "n_medium": 2000, "n_small": 100}


def test_verify_small_and_deterministic(tmp_path):
    cfg = {"verify": SMALL_VERIFY}
    assert _run(tmp_path, "verify", cfg) == 0
    first = (tmp_path / "out" / "verify_report.csv").read_bytes()
    assert _run(tmp_path, "verify", cfg) == 0
    assert (tmp_path / "out" / "verify_report.csv").read_bytes() == first
    summary = (tmp_path / "out" / "verify_summary.txt").read_text()
    assert summary.rstrip().endswith("checks passed")


def test_verify_negative_control(tmp_path):
    cfg = {"verify": dict(SMALL_VERIFY, scale_factor=2.0)}
    assert _run(tmp_path, "verify", cfg) == 3


def test_verify_unknown_key(tmp_path):
    assert _run(tmp_path, "verify", {"verify": {"n_huge": 1}}) == 1
