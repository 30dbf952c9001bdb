"""Smoke tests for the Python bindings."""

import json
import pathlib

import pytest

import _hamsing as hs

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def spec(name):
    return (DATA / name).read_text()


def test_canonical_spec_roundtrip():
    text = hs.canonical_spec(spec("sys81.json"))
    parsed = json.loads(text)
    assert parsed["M"] == 2 and parsed["N"] == 2
    # Canonicalization is idempotent.
    assert hs.canonical_spec(text) == text


def test_bad_spec_raises():
    with pytest.raises(hs.HamsingError):
        hs.canonical_spec(spec("bad_index.json"))


def test_structural_constants():
    sc = hs.structural_constants(2, 3)
    assert sc["p"] == (-4, 5)
    assert sc["q"] == (-3, 5)
    assert sc["d"] == 1 and sc["ramification"] == 5


def test_resonance_conditions():
    conds = hs.resonance_conditions(2, 2)
    assert sorted(t for _, t in conds) == ["a[0,1,1]", "a[1,0,1]", "a[1,1,2]"]
    assert hs.violated_conditions(spec("sys81.json")) == []
    assert hs.violated_conditions(spec("neg22_zsq.json")) == ["a[1,1,2]"]


def test_series_autonomous():
    s = hs.series(spec("autonomous22.json"), z0=0j, branch_class=1, K=6)
    assert s["ramification"] == 3
    # Leading pair of the exact pole solution.
    assert abs(s["coeffs1"][0] + 1 / 3) < 1e-12
    assert abs(s["coeffs2"][0] - 1 / 3) < 1e-12


def test_continuation_and_landing():
    z0 = 0.3 + 0.7j
    zs = z0 + 1.0
    y1 = -1.0 / (3 * (zs - z0))
    y2 = 1.0 / (3 * (zs - z0))
    out = hs.continue_line(spec("autonomous22.json"), zs, y1, y2, z0 + 0.1)
    assert not out["blew_up"]
    _, z, v1, _ = out["samples"][-1]
    assert abs(v1 + 1.0 / (3 * (z - z0))) < 1e-8

    loc = hs.locate_singularity(spec("autonomous22.json"), zs, y1, y2, z0,
                                r_switch=100.0)
    assert abs(loc["z_inf"] - z0) < 1e-8
    assert loc["branch_class"] == 1
    assert abs(loc["leading"] + 1 / 3) < 1e-5


def test_eval_w_on_exact_orbit():
    z = 0.1 + 0.2j
    w = hs.eval_w(spec("autonomous22.json"), z, -1 / (3 * z), 1 / (3 * z))
    assert abs(w) < 1e-10
