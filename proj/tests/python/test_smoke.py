"""Smoke tests for the python bindings: defaults, shapes, and a few
physics spot checks already pinned harder by the C++ suite."""

import math

import pytest

import zalm


def test_design_defaults():
    d = zalm.design()
    assert abs(d["drive_freq"] - 1.378e9) / 1.378e9 < 0.02
    assert abs(d["pump_rate"] - 459.4e6) / 459.4e6 < 0.02
    assert d["bins_usable"] == 17


def test_waveform_ordering():
    saw = zalm.design(waveform="sawtooth")["bins"]
    sine = zalm.design(waveform="sine")["bins"]
    tri = zalm.design(waveform="triangle")["bins"]
    assert saw > sine > tri


def test_closed_form_matches_composition():
    for waveform in ("sawtooth", "triangle", "sine"):
        closed = zalm.bins_closed_form(waveform=waveform)
        composed = zalm.design(waveform=waveform)["bins"]
        assert abs(closed - composed) / closed < 1e-6


def test_invalid_waveform_raises():
    with pytest.raises(ValueError):
        zalm.design(waveform="square")


def test_purity_small_grid():
    p = zalm.jsa_purity(grid_size=128)
    assert 0.90 < p < 0.98


def test_rates_lossless_gain():
    r = zalm.rates(chain_loss_db=0.0)
    assert len(r["per_bin"]) == r["bins_usable"]
    assert math.isclose(r["total"], r["basic"] * r["bins_usable"],
                        rel_tol=1e-12)


def test_simulation_reproducible_and_sane():
    a = zalm.simulate(n_pulses=50000, seed=9)
    b = zalm.simulate(n_pulses=50000, seed=9)
    assert a["coincidences"] == b["coincidences"]
    assert a["heralds_per_bin"] == b["heralds_per_bin"]
    assert abs(a["z"]) < 5.0


def test_shear_commensurate_drive_cancels():
    res = zalm.shear_experiment(drive_multiple=2.0)
    assert abs(res["differential_phase"]) < 1e-6
    assert res["early_shift"] != 0.0


def test_config_dump_mentions_keys():
    text = zalm.dump_default_config()
    assert "bin_width" in text
    assert "pair_prob" in text
