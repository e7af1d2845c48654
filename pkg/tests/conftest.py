from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

from aimriccati.symcore import normalize, parse_expr

settings.register_profile("suite", deadline=None, max_examples=100)
settings.load_profile("suite")

PARAMS = ("a", "b", "c", "k", "m", "n")


@pytest.fixture
def pe():
    """Parse with the standard parameter alphabet."""

    def _parse(text: str):
        return parse_expr(text, PARAMS)

    return _parse


@pytest.fixture
def nf(pe):
    """Parse and normalize in one step."""

    def _nf(text: str):
        return normalize(pe(text))

    return _nf


def frac(num, den=1) -> Fraction:
    return Fraction(num, den)
