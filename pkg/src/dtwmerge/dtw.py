"""Exact dynamic time warping with absolute-difference local cost.

Steps are (1, 0), (0, 1) and (1, 1); the path runs from (1, 1) to (M, N).
Path indices exposed to callers are 1-based, array indexing inside is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import BandInfeasible, InvalidSeries, OracleTooLarge
from .series import as_series

ORACLE_MAX_LENGTH = 10
_NO_BAND = -1


@dataclass(frozen=True)
class WarpingPath:
    """Aligned index pairs ``(p, q)``, 1-based, from (1, 1) to (M, N)."""

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, k):
        return self.pairs[k]

    def at(self, r: int) -> tuple[int, int]:
        """The r-th pair, counting from 1."""
        if not 1 <= r <= len(self.pairs):
            raise IndexError(f"path index {r} outside [1, {len(self.pairs)}]")
        return self.pairs[r - 1]

    @property
    def p(self) -> np.ndarray:
        return np.array([pq[0] for pq in self.pairs], dtype=np.int64)

    @property
    def q(self) -> np.ndarray:
        return np.array([pq[1] for pq in self.pairs], dtype=np.int64)

    def swapped(self) -> "WarpingPath":
        return WarpingPath(tuple((q, p) for p, q in self.pairs))


@dataclass(frozen=True)
class DtwResult:
    distance: float
    path: WarpingPath


def path_violations(path: WarpingPath, m: int, n: int) -> list[str]:
    """List every broken path invariant; empty means the path is valid."""
    problems = []
    pairs = list(path)
    if not pairs:
        return ["empty path"]
    if pairs[0] != (1, 1):
        problems.append(f"starts at {pairs[0]}")
    if pairs[-1] != (m, n):
        problems.append(f"ends at {pairs[-1]}, expected {(m, n)}")
    for a, b in zip(pairs, pairs[1:]):
        step = (b[0] - a[0], b[1] - a[1])
        if step not in ((1, 0), (0, 1), (1, 1)):
            problems.append(f"illegal step {a} -> {b}")
    if len(set(pairs)) != len(pairs):
        problems.append("repeated pair")
    return problems


def path_cost(x, y, path: WarpingPath) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    p = path.p - 1
    q = path.q - 1
    return float(np.abs(x[p] - y[q]).sum())


@njit(cache=True, inline="always")
def _admissible(p, q, m, n, radius):
    # 1-based cell (p, q); |p - q*m/n| <= radius, compared as integers times n
    if radius < 0:
        return True
    if (p == 1 and q == 1) or (p == m and q == n):
        return True
    return abs(p * n - q * m) <= radius * n


@njit(cache=True, nogil=True)
def _accumulated_cost(x, y, radius):
    m, n = x.shape[0], y.shape[0]
    acc = np.full((m + 1, n + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, m + 1):
        xi = x[i - 1]
        for j in range(1, n + 1):
            if not _admissible(i, j, m, n, radius):
                continue
            best = acc[i - 1, j - 1]
            if acc[i - 1, j] < best:
                best = acc[i - 1, j]
            if acc[i, j - 1] < best:
                best = acc[i, j - 1]
            acc[i, j] = abs(xi - y[j - 1]) + best
    return acc


@njit(cache=True, nogil=True)
def _backtrack(acc):
    # prefer diagonal, then the q-decreasing step, then the p-decreasing step
    i, j = acc.shape[0] - 1, acc.shape[1] - 1
    ps = np.empty(i + j, dtype=np.int64)
    qs = np.empty(i + j, dtype=np.int64)
    k = 0
    ps[k], qs[k] = i, j
    while i > 1 or j > 1:
        best = acc[i - 1, j - 1]
        di, dj = 1, 1
        if acc[i, j - 1] < best:
            best = acc[i, j - 1]
            di, dj = 0, 1
        if acc[i - 1, j] < best:
            di, dj = 1, 0
        i -= di
        j -= dj
        k += 1
        ps[k], qs[k] = i, j
    return ps[: k + 1][::-1].copy(), qs[: k + 1][::-1].copy()


@njit(cache=True, nogil=True)
def _rolling_distance(x, y, radius):
    m, n = x.shape[0], y.shape[0]
    prev = np.full(n + 1, np.inf)
    curr = np.full(n + 1, np.inf)
    prev[0] = 0.0
    for i in range(1, m + 1):
        xi = x[i - 1]
        curr[0] = np.inf
        for j in range(1, n + 1):
            if not _admissible(i, j, m, n, radius):
                curr[j] = np.inf
                continue
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = abs(xi - y[j - 1]) + best
        prev, curr = curr, prev
    return prev[n]


def _check_radius(radius, m, n):
    if radius is None:
        return _NO_BAND
    radius = int(radius)
    if radius < 0:
        raise ValueError(f"band radius must be non-negative, got {radius}")
    return radius


def _full(x, y, radius) -> DtwResult:
    acc = _accumulated_cost(x, y, radius)
    distance = acc[-1, -1]
    if not np.isfinite(distance):
        raise BandInfeasible(
            f"no warping path between lengths {len(x)} and {len(y)} within radius {radius}"
        )
    ps, qs = _backtrack(acc)
    return DtwResult(float(distance), WarpingPath(tuple(zip(ps.tolist(), qs.tolist()))))


def dtw(x, y) -> DtwResult:
    """Optimal warping path and its accumulated cost."""
    return _full(as_series(x), as_series(y), _NO_BAND)


def dtw_banded(x, y, band_radius: int) -> DtwResult:
    """DTW restricted to cells with ``|p - q*M/N| <= band_radius``.

    The two endpoints are always admissible. Raises BandInfeasible when the
    window admits no path.
    """
    x, y = as_series(x), as_series(y)
    return _full(x, y, _check_radius(band_radius, len(x), len(y)))


def dtw_distance(x, y, band_radius: int | None = None) -> float:
    """DTW cost only, computed with two rolling rows."""
    x, y = as_series(x), as_series(y)
    radius = _check_radius(band_radius, len(x), len(y))
    d = _rolling_distance(x, y, radius)
    if not np.isfinite(d):
        raise BandInfeasible(
            f"no warping path between lengths {len(x)} and {len(y)} within radius {radius}"
        )
    return float(d)


def oracle_dtw(x, y) -> float:
    """Minimum path cost by enumerating every monotone path. Test use only."""
    x, y = as_series(x), as_series(y)
    m, n = len(x), len(y)
    if m > ORACLE_MAX_LENGTH or n > ORACLE_MAX_LENGTH:
        raise OracleTooLarge(f"oracle capped at length {ORACLE_MAX_LENGTH}, got {m}x{n}")
    xs, ys = x.tolist(), y.tolist()
    best = float("inf")
    # explicit stack of (i, j, cost so far); every complete path is visited
    stack = [(0, 0, abs(xs[0] - ys[0]))]
    while stack:
        i, j, cost = stack.pop()
        if i == m - 1 and j == n - 1:
            best = min(best, cost)
            continue
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            a, b = i + di, j + dj
            if a < m and b < n:
                stack.append((a, b, cost + abs(xs[a] - ys[b])))
    return best
