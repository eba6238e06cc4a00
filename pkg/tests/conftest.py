"""Shared fixtures: reference problems and cached oracle data."""

from __future__ import annotations

import math
import random

import pytest

from pavebox.box import Box
from pavebox.expr import Function


@pytest.fixture(scope="session")
def delay2():
    return Function.parse(
        ["p1", "p2", "w"],
        ["-w^2 + 2*w*sin(w*p1) + cos(w*p2)", "2*w*cos(w*p1) - sin(w*p2)"],
    )


@pytest.fixture(scope="session")
def delay2_box():
    return Box.from_bounds([(0.0, 2.5), (1.0, 4.0), (0.0, 10.0)])


@pytest.fixture(scope="session")
def circle():
    return Function.parse(["x1", "x2"], ["x1^2 + x2^2 - 1"])


def delay2_curve_points(n=120001):
    """Analytic parametrization of the delay2 solution curve.

    Solving the two equations for sin(w*p1) gives
    sin(w*p1) = (4 w^2 + w^4 - 1) / (4 w^3); p2 then follows from the
    phase of (sin(w*p2), cos(w*p2)).  Independent of the interval code.
    """
    pts = []
    for i in range(n):
        w = 0.3 + (2.5 - 0.3) * i / (n - 1)
        s = (4 * w * w + w**4 - 1) / (4 * w**3)
        if abs(s) > 1:
            continue
        for branch in (0, 1):
            wp1 = math.asin(s) if branch == 0 else math.pi - math.asin(s)
            for k1 in range(-1, 3):
                p1 = (wp1 + 2 * math.pi * k1) / w
                if not 0 <= p1 <= 2.5:
                    continue
                c = math.cos(wp1)
                wp2 = math.atan2(2 * w * c, w * w - 2 * w * s)
                for k2 in range(-1, 4):
                    p2 = (wp2 + 2 * math.pi * k2) / w
                    if 1 <= p2 <= 4:
                        pts.append((p1, p2, w))
    return pts


@pytest.fixture(scope="session")
def delay2_points():
    return delay2_curve_points()


def random_box_around(point, rng: random.Random, max_offset=0.3, min_w=1e-3, max_w=1.0):
    """Random box guaranteed to contain the point (for soundness tests)."""
    bounds = []
    for v in point:
        w = math.exp(rng.uniform(math.log(min_w), math.log(max_w)))
        off = rng.uniform(0.0, max_offset) * w
        lo = v - w * rng.uniform(0.1, 1.0) - off
        hi = v + w * rng.uniform(0.1, 1.0) + off
        bounds.append((lo, hi))
    return Box.from_bounds(bounds)
