import json
import random
from fractions import Fraction

import pytest

from sunorm.field_model import load_fixture, shipped_fixture_path

FIXTURE_NAMES = ("q", "qsqrt2", "qsqrt2-ext", "qsqrt5", "qbiquad")


@pytest.fixture(scope="session")
def fixtures():
    return {name: load_fixture(shipped_fixture_path(name)) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session")
def q(fixtures):
    return fixtures["q"]


@pytest.fixture(scope="session")
def qsqrt2(fixtures):
    return fixtures["qsqrt2"]


@pytest.fixture(scope="session")
def qsqrt2_ext(fixtures):
    return fixtures["qsqrt2-ext"]


@pytest.fixture(scope="session")
def qsqrt5(fixtures):
    return fixtures["qsqrt5"]


@pytest.fixture(scope="session")
def qbiquad(fixtures):
    return fixtures["qbiquad"]


@pytest.fixture()
def rng():
    return random.Random(20260810)


def raw_fixture(name: str) -> dict:
    with open(shipped_fixture_path(name), "r", encoding="utf-8") as fh:
        return json.load(fh)


def ball_close(ball, target, tol=1e-9) -> bool:
    """|ball - target| <= tol, radius-aware."""
    return abs(float(ball.mid) - float(target)) <= tol + float(ball.rad)


def rand_fraction(rng, num=8, den=3) -> Fraction:
    f = Fraction(rng.randint(-num, num), rng.randint(1, den))
    return f


def random_combo(fix, rng, num=8, den=3):
    """A random element of the fixture's S-unit span, never the zero combo."""
    n = len(fix.s_unit_basis)
    while True:
        coords = [rand_fraction(rng, num, den) for _ in range(n)]
        if any(c != 0 for c in coords):
            return fix.combo(coords)


def random_supported_element(ext_fix, rng):
    """Random element of qsqrt2-ext with support allowed over 7."""
    vec = random_combo(ext_fix, rng)
    a = rng.randint(-2, 2)
    b = rng.randint(-2, 2)
    if a:
        vec = vec * ext_fix.element("gen7").power(a)
    if b:
        vec = vec * ext_fix.element("gen7-conj").power(b)
    return vec


def optimal_set_samples(A, k, n_samples, seed):
    """Random points of the quotient-optimal set of the sorted matrix A.

    The optimal set is the box [a_{v,k}, a_{v,k+1}] (one side open at the
    extremes, truncated here to a generous finite range) intersected with the
    zero-sum hyperplane; points are drawn by alternating a mean-shift with a
    clip back into the box and keeping the converged draws.
    """
    import numpy as np

    m = A.ext_count
    lo, hi = [], []
    finite = [1.0]
    for row in A.rows:
        lo.append(float(row.entries[k - 1].mid) if k >= 1 else -np.inf)
        hi.append(float(row.entries[k].mid) if k <= m - 1 else np.inf)
        finite += [abs(v) for v in (lo[-1], hi[-1]) if np.isfinite(v)]
    span = 3.0 * max(finite) + 1.0
    lo = np.array([v if np.isfinite(v) else -span for v in lo])
    hi = np.array([v if np.isfinite(v) else span for v in hi])
    rng_np = np.random.default_rng(seed)
    u = lo + rng_np.random((n_samples, len(lo))) * (hi - lo)
    r = len(lo)
    for _ in range(300):
        t = u.sum(axis=1, keepdims=True)
        if np.max(np.abs(t)) < 1e-13 * span:
            break
        u = np.clip(u - t / r, lo, hi)
    keep = np.abs(u.sum(axis=1)) <= 1e-10 * span
    return u[keep]
