"""Multiplexed time-bin entanglement source toolkit (python surface)."""

from _zalm import (
    bins_closed_form,
    design,
    dump_default_config,
    jsa_purity,
    rates,
    shear_experiment,
    simulate,
)

__all__ = [
    "bins_closed_form",
    "design",
    "dump_default_config",
    "jsa_purity",
    "rates",
    "shear_experiment",
    "simulate",
]
