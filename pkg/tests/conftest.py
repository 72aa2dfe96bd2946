from __future__ import annotations

import functools
import pathlib

import pytest

from alephmon.congruence import Presentation, build_oracle
from alephmon.forms import OMEGA, Form

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
W = OMEGA


def pres(*rels, k=2):
    return Presentation(k, tuple((Form.of(*a), Form.of(*b)) for a, b in rels))


CURATED = {
    "free": pres(),
    "x1=2x2": pres(((1, 0), (0, 2))),
    "x2=x1+x2": pres(((0, 1), (1, 1))),
    "2x1+x2=x1+2x2": pres(((2, 1), (1, 2))),
    "2x1=wx2": pres(((2, 0), (0, W))),
    "x1=x1+x2": pres(((1, 0), (1, 1))),
}


@functools.lru_cache(maxsize=None)
def oracle(name: str, bound: int = 10):
    return build_oracle(CURATED[name], bound)


@pytest.fixture
def F():
    return Form.of
