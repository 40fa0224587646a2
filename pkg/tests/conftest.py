import numpy as np
import pytest

from miw import radial


@pytest.fixture(scope="session")
def solve():
    """Session-cached ground-state solver (solutions are immutable)."""
    cache = {}

    def get(k, n):
        key = (k, n)
        if key not in cache:
            cache[key] = radial.solve_ground_state(k, n)
        return cache[key]

    return get


def brute_force_w1(points, cdf, lo, hi, total_grid=1_000_000):
    """Trapezoid integration of |F_N - F| on ~total_grid points.

    Integrates segment by segment between order statistics so the empirical
    cdf is constant on every panel; the remaining error is the trapezoid
    curvature error of F, far below 1e-6 at this resolution.
    """
    pts = np.sort(np.asarray(points, dtype=float))
    n = pts.size
    edges = np.concatenate([[lo], pts, [hi]])
    span = hi - lo
    total = 0.0
    for i in range(edges.size - 1):
        a, b = edges[i], edges[i + 1]
        if b <= a:
            continue
        m = max(16, int(total_grid * (b - a) / span))
        xs = np.linspace(a, b, m)
        fn = i / n
        total += np.trapezoid(np.abs(fn - cdf(xs)), xs)
    return total
