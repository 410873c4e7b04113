import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from complextv import ComplexField, DualField, TvVariant  # noqa: E402

VARIANTS = [
    TvVariant("i-iso"),
    TvVariant("i-aniso"),
    TvVariant("ii-iso", 0.5),
    TvVariant("ii-aniso", 0.5),
]


def random_field(rng, shape, scale=1.0):
    return ComplexField(scale * rng.standard_normal(shape), scale * rng.standard_normal(shape))


def random_dual(rng, shape, scale=1.0):
    z = DualField.zeros(shape)
    return DualField(*(scale * rng.standard_normal(a.shape) for a in z.parts()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def record_criterion(number, title, ok, detail=""):
    ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    print(ACCEPTANCE[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
