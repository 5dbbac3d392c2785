import json
import math
import os
from pathlib import Path

import pytest

import qanc

SOURCE = Path(os.environ.get("QANC_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_seed_and_derived():
    p = qanc.seed_parameters()
    assert p["c"] == 0.3 and p["log_alpha"] == 800.0
    d = qanc.derived_constants()
    K = (1 - 0.3**2) / 0.3**2
    assert d["K"] == pytest.approx(K, rel=1e-14)
    assert d["Delta"] == pytest.approx(math.sqrt(K) * 2 * 0.0247 + math.acos(0.3), rel=1e-12)


def test_admissibility_ledger():
    entries = qanc.admissibility()
    assert entries and all(e["pass"] for e in entries)
    bad = qanc.admissibility({"gamma": 0.1}, mode="moderate")
    assert not next(e for e in bad if e["name"] == "A9_gamma_ricci_TT")["pass"]


def test_curvature_point():
    row = qanc.curvature(2, 50.0, 1.0)
    assert not row["excised"]
    assert row["Ric_T"] > 0 and row["Ric_X"] > 0
    assert row["Ric_Theta"]["sign"] == 1 and row["Ric_Theta"]["log10"] > 300
    assert qanc.curvature(1, 1.0247, 0.0)["excised"]


def test_growth_exponent():
    g = qanc.growth(10)
    assert g["exponent"] == pytest.approx(4.04, abs=0.05)
    assert all(e["pass"] for e in g["ledger"])


def test_oracle_and_core():
    assert qanc.oracle(10)["max_relative_deviation"] < 1e-4
    t0 = qanc.core_t0()
    assert abs(math.sin(2 * t0) / 2 - math.cosh(t0 / 100) / 100) < 1e-12


def test_verify_small_config():
    cfg = json.loads((SOURCE / "configs" / "seed_moderate.json").read_text())
    rep = qanc.verify(cfg)
    assert rep["pass"]


def test_errors():
    with pytest.raises(qanc.ConfigError):
        qanc.admissibility({"colour": 1})
    with pytest.raises(qanc.ConfigError):
        qanc.verify({"c": 0.3})
    with pytest.raises(qanc.QancError):
        qanc.curvature(1, 0.5, 1.0)
