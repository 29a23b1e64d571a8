"""Acceptance ledger: every criterion at its frozen tolerance, one per test.

Run with ``pytest tests/test_acceptance.py -v -s`` for the per-criterion
ledger lines, or ``layersim accept`` for the standalone runner.
"""

import pytest

from layersim import acceptance
from layersim.calibration import DEFAULT_SEED


def _check(fn):
    result = fn(DEFAULT_SEED)
    print(f"\n{result.format()}")
    for line in result.details:
        print(f"    {line}")
    assert result.passed, "\n".join([result.format()] + result.details)


def test_criterion_01_exact_molloy_reed():
    _check(acceptance.criterion_1)


def test_criterion_02_exact_enumerations():
    _check(acceptance.criterion_2)


def test_criterion_03_cycle_segment_statistics():
    _check(acceptance.criterion_3)


def test_criterion_04_property_suite():
    _check(acceptance.criterion_4)


def test_criterion_05_expected_size_formula():
    _check(acceptance.criterion_5)


def test_criterion_06_t3_giant_component():
    _check(acceptance.criterion_6)


def test_criterion_07_percolation_phases():
    _check(acceptance.criterion_7)


def test_criterion_08_monotone_tree_mean():
    _check(acceptance.criterion_8)


def test_criterion_09_grid_invariants_and_duality():
    _check(acceptance.criterion_9)


def test_criterion_10_box_scaling():
    _check(acceptance.criterion_10)


def test_criterion_11_treewidth_oracle():
    _check(acceptance.criterion_11)


def test_criterion_12_two_stage_retention():
    _check(acceptance.criterion_12)
