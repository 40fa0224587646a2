"""d-dimensional interacting-worlds configurations and their Hamiltonians.

A configuration lives in signed (hyper)spherical coordinates: M shells of
polar angles (a (d-2)-vector per shell; a single direction angle in [0, π)
for d = 2), K_j azimuths per shell, and a signed strictly decreasing radial
sequence in every direction.  Its energy is the interworld potential

  (k+1)² Σ_directions Σ_n [ 1/ΔR(x_{n+1}) - 1/ΔR(x_n) ]² |x_n|^{2k}   (radial)
  + angular neighbor reciprocals (circular for direction rings, consecutive
    for the polar ladder), measured through the relevant angular cdf image
  + count-imbalance penalties  (N²/M² ·L  resp.  Σ_j N_j·²/K_j² ·L  plus the
    shell-balance term N/(4(d-2) M^{d-2}) ·L,  L(x) = max(1, x/2))

plus the trap energy Σ r².  Ground states use the tilt k = d-1 and uniform /
inverse-cdf angle grids; the first excited components replace the angular
maps by the printed cdfs

    G2(θ) = (θ + sin θ cos θ)/π                  (d=2, quanta (1,0), k=3)
    G3(θ) = (cos 3θ - 9 cos θ)/8  (+1 shifts it onto [0,1]; differences are
             shift-invariant, so the raw form may be used in potentials)
    A(φ)  = (φ - sin φ cos φ)/(2π)               (d=3, quanta (1,0,0), k=4)

Count plans minimize the closed-form per-term minima of the potential.  For
d = 2 the angular-plus-count part M² + N²/M² is minimized exactly over
integer M (its minimizer matches the published perfect-square plans, which
the printed objective 4(N-M) + M² + N²/M² narrowly misses: the -4M radial
credit drags the argmin to √N + 1); for d = 3 the reduced objective
(M-1)² + N/(4M)·L is scanned exactly, then K_j = round(√(2 N_j·)); for
d ≥ 4 the asymptotic plan M = N^{1/d}/2, N_jk = N^{1/2 - 1/(2d)} is rounded
and repaired to exact totals.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._jit import njit
from .errors import DomainError, InfeasiblePlanError
from .radial import RadialSolution, solve_ground_state, DEFAULT_TOL
from .specfn import invert_monotone, regularized_incomplete_beta

GROUND = "ground"


# ---------------------------------------------------------------------------
# elementary pieces
# ---------------------------------------------------------------------------


def circular_abs(a: float, b: float, period: float) -> float:
    """Distance |a - b| modulo period (wraparound-aware, in [0, period/2])."""
    if not period > 0.0:
        raise DomainError("period must be positive")
    d = math.fmod(abs(a - b), period)
    return min(d, period - d)


def penalty_l(x: float) -> float:
    """Count-imbalance penalty L(x) = max(1, x/2)."""
    if x < 0.0:
        raise DomainError("penalty argument must be nonnegative")
    return max(1.0, 0.5 * x)


def _even_allocation(total: int, parts: int) -> tuple[int, ...]:
    """Split total into parts as evenly as possible, surplus on a leading run."""
    base, rem = divmod(total, parts)
    return tuple(base + 1 if i < rem else base for i in range(parts))


def _ring_imbalance(counts) -> int:
    """Σ |N_j - N_k| over circular neighbor pairs."""
    m = len(counts)
    if m < 2:
        return 0
    return sum(abs(counts[j] - counts[(j + 1) % m]) for j in range(m))


def _path_imbalance(counts) -> int:
    """Σ |N_i - N_j| over consecutive pairs."""
    return sum(abs(a - b) for a, b in zip(counts, counts[1:]))


# ---------------------------------------------------------------------------
# count plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountPlan:
    """Point counts of a configuration.

    counts[j] holds the per-direction counts of ring j: for d >= 3 ring j is
    the j-th shell (len(counts) = m_shells, k_per_shell[j] = len(counts[j]));
    for d = 2 there is a single ring of m_shells directions and k_per_shell
    is the singleton (m_shells,).
    """

    d: int
    n_total: int
    m_shells: int
    k_per_shell: tuple[int, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "k_per_shell", tuple(int(v) for v in self.k_per_shell))
        object.__setattr__(
            self, "counts", tuple(tuple(int(c) for c in row) for row in self.counts)
        )
        if self.d < 2:
            raise DomainError("dimension must be >= 2")
        total = sum(sum(row) for row in self.counts)
        if total != self.n_total:
            raise DomainError(f"counts sum to {total}, expected {self.n_total}")
        for row in self.counts:
            if any(c < 2 for c in row):
                raise InfeasiblePlanError("every direction needs at least 2 points")
            uneven = sum(
                1
                for j in range(len(row))
                if row[j] != row[(j + 1) % len(row)]
            ) if len(row) > 1 else 0
            if uneven > 2 or (uneven and max(row) - min(row) > 1):
                raise DomainError("ring counts must be even up to two unit steps")
        if self.d == 2:
            if len(self.counts) != 1 or self.k_per_shell != (self.m_shells,):
                raise DomainError("d=2 stores one ring of m_shells directions")
        else:
            if len(self.counts) != self.m_shells:
                raise DomainError("need one count row per shell")
            if self.k_per_shell != tuple(len(row) for row in self.counts):
                raise DomainError("k_per_shell must match the count rows")

    @property
    def shell_totals(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.counts)

    @property
    def n_directions(self) -> int:
        return sum(len(row) for row in self.counts)

    def directions(self):
        """Yield (ring_index, direction_index, count)."""
        for j, row in enumerate(self.counts):
            for k, c in enumerate(row):
                yield j, k, c


def optimize_counts_2d(n_total: int) -> CountPlan:
    """Direction count M and per-direction allocation for the planar case.

    Minimizes the angular-plus-count minimum M² + N²/M² over integers
    (exact rational comparison, ties to the smaller M), which lands on
    M = √N at perfect squares; leftover points go to a contiguous run.
    """
    if n_total < 4:
        raise InfeasiblePlanError("the planar construction needs at least 4 points")
    best_m = None
    best = None
    for m in range(1, n_total // 2 + 1):
        obj = Fraction(m * m) + Fraction(n_total * n_total, m * m)
        if best is None or obj < best:
            best = obj
            best_m = m
    alloc = _even_allocation(n_total, best_m)
    return CountPlan(
        d=2,
        n_total=n_total,
        m_shells=best_m,
        k_per_shell=(best_m,),
        counts=(alloc,),
    )


def _shell_plan_3d(n_total: int, m: int) -> tuple[tuple[int, ...], ...]:
    shell_totals = _even_allocation(n_total, m)
    rows = []
    for nj in shell_totals:
        if nj < 2:
            raise InfeasiblePlanError("a shell received fewer than 2 points")
        kj = round(math.sqrt(2.0 * nj))
        kj = max(1, min(kj, nj // 2))
        rows.append(_even_allocation(nj, kj))
    return tuple(rows)


def optimize_counts_3d(n_total: int) -> CountPlan:
    """Shell plan for d = 3: exact scan of (M-1)² + N/(4M)·L over M >= 2,
    then K_j = round(√(2 N_j·)) azimuths per shell with even radial counts.
    """
    if n_total < 8:
        raise InfeasiblePlanError("the spatial construction needs at least 8 points")
    best_m = None
    best = None
    m = 2
    while True:
        shell_totals = _even_allocation(n_total, m)
        if shell_totals[-1] < 2:
            break
        pen = penalty_l(float(_path_imbalance(shell_totals)))
        obj = Fraction((m - 1) ** 2) + Fraction(n_total, 4 * m) * Fraction(pen)
        if best is None or obj < best:
            best = obj
            best_m = m
        if best is not None and Fraction((m - 1) ** 2) > best:
            break
        m += 1
    if best_m is None:
        raise InfeasiblePlanError(f"no feasible shell count for N = {n_total}")
    rows = _shell_plan_3d(n_total, best_m)
    return CountPlan(
        d=3,
        n_total=n_total,
        m_shells=best_m,
        k_per_shell=tuple(len(r) for r in rows),
        counts=rows,
    )


def optimize_counts_d(n_total: int, d: int) -> CountPlan:
    """Rounded asymptotic plan for d >= 4: M = N^{1/d}/2 shells, per-direction
    target N^{1/2-1/(2d)} points, direction counts repaired to exact totals.
    """
    if d < 4:
        raise DomainError("use optimize_counts_2d/_3d for d < 4")
    m = round(n_total ** (1.0 / d) / 2.0)
    if m < 2:
        raise InfeasiblePlanError(f"N = {n_total} is too small for d = {d} (M < 2)")
    njk_target = max(2, round(n_total ** (0.5 - 0.5 / d)))
    shell_totals = _even_allocation(n_total, m)
    rows = []
    for nj in shell_totals:
        kj = round(nj / njk_target)
        kj = max(1, min(kj, nj // 2))
        if kj < 1 or nj < 2:
            raise InfeasiblePlanError(f"N = {n_total} too small for d = {d}")
        rows.append(_even_allocation(nj, kj))
    rows = tuple(rows)
    if any(c < 2 for row in rows for c in row):
        raise InfeasiblePlanError(f"N = {n_total} too small for d = {d}")
    return CountPlan(
        d=d,
        n_total=n_total,
        m_shells=m,
        k_per_shell=tuple(len(r) for r in rows),
        counts=rows,
    )


def optimize_counts(n_total: int, d: int) -> CountPlan:
    if d == 2:
        return optimize_counts_2d(n_total)
    if d == 3:
        return optimize_counts_3d(n_total)
    return optimize_counts_d(n_total, d)


# ---------------------------------------------------------------------------
# angular grids and cdfs
# ---------------------------------------------------------------------------


def polar_cap_cdf(theta: float, d: int) -> float:
    """F_d(θ) = I(sin²θ; (d-1)/2, 1/2): polar-angle cdf on [0, π/2] for d >= 3."""
    if d < 3:
        raise DomainError("the polar cap cdf needs d >= 3")
    s = math.sin(theta)
    return regularized_incomplete_beta(min(1.0, s * s), (d - 1) / 2.0, 0.5)


def polar_grid(m_shells: int, d: int) -> np.ndarray:
    """Strictly increasing polar angles θ_j = F_d^{-1}((j-1)/(M-1)), j = 1..M."""
    if m_shells < 2:
        raise DomainError("need at least two shells for a polar grid")
    if d < 3:
        raise DomainError("polar grids exist for d >= 3")
    out = np.empty(m_shells)
    for j in range(m_shells):
        q = j / (m_shells - 1)
        if j == 0:
            out[j] = 0.0
        elif j == m_shells - 1:
            out[j] = 0.5 * math.pi
        elif d == 3:
            out[j] = math.acos(1.0 - q)
        else:
            out[j] = invert_monotone(
                lambda th: polar_cap_cdf(th, d), q, 0.0, 0.5 * math.pi, 1e-13
            )
    return out


def excited_angle_cdf_2d(theta: float) -> float:
    """G2(θ) = (θ + sin θ cos θ)/π on [0, π): direction-angle cdf of the
    planar (1,0) excited component."""
    return (theta + math.sin(theta) * math.cos(theta)) / math.pi


def excited_polar_cdf_raw_3d(theta: float) -> float:
    """G3(θ) = (cos 3θ - 9 cos θ)/8 on [0, π/2]; ranges over [-1, 0]."""
    return (math.cos(3.0 * theta) - 9.0 * math.cos(theta)) / 8.0


def excited_polar_cdf_3d(theta: float) -> float:
    """The +1-shifted (proper) form 1 - (3/2)cos θ + (1/2)cos³θ on [0, 1]."""
    return excited_polar_cdf_raw_3d(theta) + 1.0


def excited_azimuth_cdf_3d(phi: float) -> float:
    """A(φ) = (φ - sin φ cos φ)/(2π) on [0, 2π)."""
    return (phi - math.sin(phi) * math.cos(phi)) / (2.0 * math.pi)


def _invert_cdf_grid(cdf, quantiles, lo, hi) -> np.ndarray:
    out = np.empty(len(quantiles))
    for i, q in enumerate(quantiles):
        if q <= cdf(lo):
            out[i] = lo
        elif q >= cdf(hi):
            out[i] = hi
        else:
            out[i] = invert_monotone(cdf, q, lo, hi, 1e-13)
    return out


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MiwConfiguration:
    """A full point configuration in signed (hyper)spherical coordinates.

    polar_angles: for d >= 3 an (M, d-2) array, strictly increasing down each
    column; for d = 2 the (M,) direction angles in [0, π).  azimuths: one
    strictly increasing array of length K_j per shell (empty tuple for d=2).
    radial[j][k] is the strictly decreasing signed radial sequence of
    direction (j, k).  state_label is the quantum-number vector (all zeros
    for the ground state) and radial_exponent the tilt k of the radial law.
    """

    plan: CountPlan
    polar_angles: np.ndarray
    azimuths: tuple
    radial: tuple
    state_label: tuple[int, ...]
    radial_exponent: int
    angle_maps: Optional[dict] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        pa = np.asarray(self.polar_angles, dtype=float)
        pa.setflags(write=False)
        object.__setattr__(self, "polar_angles", pa)
        object.__setattr__(self, "azimuths", tuple(np.asarray(a, float) for a in self.azimuths))
        object.__setattr__(
            self,
            "radial",
            tuple(tuple(np.asarray(r, float) for r in row) for row in self.radial),
        )
        object.__setattr__(self, "state_label", tuple(int(q) for q in self.state_label))
        d = self.plan.d
        if d == 2:
            if pa.shape != (self.plan.m_shells,):
                raise DomainError("d=2 expects one direction angle per direction")
            if self.azimuths:
                raise DomainError("d=2 has no azimuths")
        else:
            if pa.shape != (self.plan.m_shells, d - 2):
                raise DomainError("polar_angles must be (M, d-2)")
            if np.any(np.diff(pa, axis=0) <= 0.0):
                raise DomainError("polar angles must increase strictly across shells")
            for a in self.azimuths:
                if np.any(np.diff(a) <= 0.0):
                    raise DomainError("azimuths must be strictly increasing in a shell")
        for (j, k, c) in self.plan.directions():
            r = self.radial[j][k]
            if r.shape[0] != c:
                raise DomainError("radial sequence length disagrees with the plan")
            if np.any(np.diff(r) >= 0.0):
                raise DomainError("radial sequences must be strictly decreasing")

    @property
    def d(self) -> int:
        return self.plan.d

    @property
    def n_total(self) -> int:
        return self.plan.n_total

    def all_radii(self) -> np.ndarray:
        return np.concatenate([r for row in self.radial for r in row])

    def direction_angles(self):
        """Yield (shell j, direction k, polar vector, azimuth or None)."""
        if self.d == 2:
            for k in range(self.plan.m_shells):
                yield 0, k, np.array([self.polar_angles[k]]), None
        else:
            for j in range(self.plan.m_shells):
                for k in range(self.plan.k_per_shell[j]):
                    yield j, k, self.polar_angles[j], float(self.azimuths[j][k])

    def cartesian(self) -> np.ndarray:
        """(N, d) array of Cartesian coordinates; negative radii point to the
        antipodal direction, so the full space is covered."""
        d = self.d
        rows = np.empty((self.n_total, d))
        i = 0
        for j, k, pol, az in self.direction_angles():
            r = self.radial[j][k] if d > 2 else self.radial[0][k]
            n = r.shape[0]
            if d == 2:
                th = pol[0]
                rows[i : i + n, 0] = r * math.cos(th)
                rows[i : i + n, 1] = r * math.sin(th)
            else:
                vec = np.empty(d)
                sin_prod = 1.0
                for l in range(d - 2):
                    vec[l] = sin_prod * math.cos(pol[l])
                    sin_prod *= math.sin(pol[l])
                vec[d - 2] = sin_prod * math.cos(az)
                vec[d - 1] = sin_prod * math.sin(az)
                rows[i : i + n] = np.outer(r, vec)
            i += n
        return rows

    def polar_marginal(self, component: int = 0) -> np.ndarray:
        """All point polar angles (one entry per point) for one component."""
        if self.d == 2:
            reps = [self.polar_angles[k] for _, k, c in self.plan.directions() for _ in range(c)]
            return np.array(reps)
        out = []
        for j, k, c in self.plan.directions():
            out.extend([self.polar_angles[j][component]] * c)
        return np.array(out)

    def azimuth_marginal(self) -> np.ndarray:
        if self.d == 2:
            raise DomainError("d=2 has no azimuthal marginal")
        out = []
        for j, k, c in self.plan.directions():
            out.extend([float(self.azimuths[j][k])] * c)
        return np.array(out)


# ---------------------------------------------------------------------------
# potential and Hamiltonian
# ---------------------------------------------------------------------------


@njit
def _radial_potential_core(points, k):
    """(k+1)² Σ_n [1/(R(x_{n+1})-R(x_n)) - 1/(R(x_n)-R(x_{n-1}))]² |x_n|^{2k},
    R(x) = sign(x)|x|^{k+1}, boundary reciprocals zero."""
    n = points.shape[0]
    kf = float(k)
    total = 0.0
    for i in range(n):
        xi = points[i]
        ri = math.copysign(abs(xi) ** (kf + 1.0), xi) if xi != 0.0 else 0.0
        fwd = 0.0
        if i + 1 < n:
            xn = points[i + 1]
            rn = math.copysign(abs(xn) ** (kf + 1.0), xn) if xn != 0.0 else 0.0
            fwd = 1.0 / (rn - ri)
        bwd = 0.0
        if i > 0:
            xp = points[i - 1]
            rp = math.copysign(abs(xp) ** (kf + 1.0), xp) if xp != 0.0 else 0.0
            bwd = 1.0 / (ri - rp)
        diff = fwd - bwd
        total += diff * diff * abs(xi) ** (2.0 * kf)
    return (kf + 1.0) ** 2 * total


def radial_potential(points, k: int) -> float:
    """Interworld potential of a single signed radial sequence with tilt k."""
    pts = np.asarray(points, dtype=float)
    if np.any(np.diff(pts) >= 0.0):
        raise DomainError("radial points must be strictly decreasing")
    if k >= 1 and np.any(pts == 0.0):
        raise DomainError("zero radius with k >= 1 makes the potential singular")
    return float(_radial_potential_core(pts, int(k)))


def radial_hamiltonian(points, k: int) -> float:
    """radial_potential + Σ x²; equals 2(k+1)(N-1) at the recursion minimizer."""
    pts = np.asarray(points, dtype=float)
    return radial_potential(pts, k) + float(np.sum(pts * pts))


def _circular_recip_sum(values, period: float) -> float:
    """Σ 1/|Δ|_period over circular neighbor pairs of sorted values."""
    vals = np.sort(np.asarray(values, dtype=float))
    m = vals.shape[0]
    if m < 2:
        return 0.0
    total = 0.0
    for j in range(m):
        gap = circular_abs(float(vals[j]), float(vals[(j + 1) % m]), period)
        if gap == 0.0:
            raise DomainError("coincident angular values make the potential infinite")
        total += 1.0 / gap
    return total


def _path_recip_sum(values) -> float:
    """Σ 1/Δ over consecutive pairs of an increasing sequence."""
    vals = np.asarray(values, dtype=float)
    total = 0.0
    for a, b in zip(vals, vals[1:]):
        if b - a <= 0.0:
            raise DomainError("path angular values must be strictly increasing")
        total += 1.0 / (b - a)
    return total


def _angle_maps(cfg: MiwConfiguration) -> dict:
    """Resolve the angular cdf images the potential uses for this state."""
    if cfg.angle_maps is not None:
        return cfg.angle_maps
    d = cfg.d
    excited = any(cfg.state_label)
    if not excited:
        if d == 2:
            return {"direction": (lambda th: th, math.pi, math.pi)}
        return {
            "polar": (lambda th, dd=d: polar_cap_cdf(th, dd)) if d > 3 else (lambda th: 1.0 - math.cos(th)),
            "azimuth": (lambda ph: ph, 2.0 * math.pi, 0.5 * math.pi),
        }
    if d == 2 and cfg.state_label == (1, 0):
        return {"direction": (excited_angle_cdf_2d, 1.0, 1.0)}
    if d == 3 and cfg.state_label == (1, 0, 0):
        return {
            "polar": excited_polar_cdf_raw_3d,
            "azimuth": (excited_azimuth_cdf_3d, 1.0, 0.5 * math.pi),
        }
    raise DomainError(
        f"no angular maps for state {cfg.state_label} in d={d}; "
        "build with caller-supplied cdfs"
    )


def interworld_potential(cfg: MiwConfiguration) -> float:
    """Full interworld potential of the configuration (radial + angular + counts)."""
    k = cfg.radial_exponent
    total = 0.0
    for j, kk, c in cfg.plan.directions():
        total += radial_potential(cfg.radial[j][kk], k)

    maps = _angle_maps(cfg)
    d = cfg.d
    n = cfg.n_total
    m = cfg.plan.m_shells
    if d == 2:
        fn, period, coeff = maps["direction"]
        images = [fn(t) for t in cfg.polar_angles]
        total += coeff * _circular_recip_sum(images, period)
        row = cfg.plan.counts[0]
        total += (n * n) / (m * m) * penalty_l(float(_ring_imbalance(row)))
        return total

    polar_fn = maps["polar"]
    az_fn, az_period, az_coeff = maps["azimuth"]
    if d == 3:
        images = [polar_fn(t) for t in cfg.polar_angles[:, 0]]
        total += _path_recip_sum(sorted(images))
    else:
        acc = 0.0
        for l in range(d - 2):
            images = [polar_fn(t) for t in cfg.polar_angles[:, l]]
            acc += _path_recip_sum(sorted(images))
        total += acc / (d - 2)
    for j in range(m):
        images = [az_fn(p) for p in cfg.azimuths[j]]
        total += az_coeff * _circular_recip_sum(images, az_period)
        row = cfg.plan.counts[j]
        nj = sum(row)
        kj = len(row)
        total += (nj * nj) / (kj * kj) * penalty_l(float(_ring_imbalance(row)))
    shell_totals = cfg.plan.shell_totals
    weight = n / (4.0 * (d - 2) * m ** (d - 2)) if d > 3 else n / (4.0 * m)
    total += weight * penalty_l(float(_path_imbalance(shell_totals)))
    return total


def hamiltonian(cfg: MiwConfiguration) -> float:
    """Interworld potential plus the trap energy Σ r²."""
    r = cfg.all_radii()
    return interworld_potential(cfg) + float(np.sum(r * r))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _radial_fill(plan: CountPlan, k: int, tol: float) -> tuple:
    odd = sorted({c for row in plan.counts for c in row if c % 2})
    if odd:
        raise InfeasiblePlanError(
            f"N = {plan.n_total} allocates odd per-direction counts {odd}; the "
            "zero-median radial construction needs even counts (for k >= 1 an "
            "odd sequence would put a point at the origin). Pick N whose "
            "allocation is even, e.g. M·(even count)."
        )
    cache: dict[int, RadialSolution] = {}
    rows = []
    for row in plan.counts:
        seq = []
        for c in row:
            if c not in cache:
                cache[c] = solve_ground_state(k, c, tol)
            seq.append(cache[c].points)
        rows.append(tuple(seq))
    return tuple(rows)


def build_ground_state(n_total: int, d: int, tol: float = DEFAULT_TOL) -> MiwConfiguration:
    """Deterministic ground-state configuration: optimized counts, minimizing
    angle grids, and per-direction recursion solutions with tilt k = d-1."""
    plan = optimize_counts(n_total, d)
    k = d - 1
    radial = _radial_fill(plan, k, tol)
    if d == 2:
        m = plan.m_shells
        angles = np.array([(j * math.pi) / m for j in range(m)])
        return MiwConfiguration(
            plan=plan,
            polar_angles=angles,
            azimuths=(),
            radial=radial,
            state_label=(0,) * d,
            radial_exponent=k,
        )
    theta = polar_grid(plan.m_shells, d)
    polar = np.repeat(theta[:, None], d - 2, axis=1)
    azimuths = tuple(
        np.array([2.0 * math.pi * i / kj for i in range(kj)]) for kj in plan.k_per_shell
    )
    return MiwConfiguration(
        plan=plan,
        polar_angles=polar,
        azimuths=azimuths,
        radial=radial,
        state_label=(0,) * d,
        radial_exponent=k,
    )


_EXCITED_PRESETS = {
    (2, (1, 0)): 3,
    (3, (1, 0, 0)): 4,
}


def build_excited_state(
    n_total: int,
    d: int,
    quanta,
    tol: float = DEFAULT_TOL,
    radial_exponent: Optional[int] = None,
    direction_cdf: Optional[Callable[[float], float]] = None,
    polar_cdf: Optional[Callable[[float], float]] = None,
    azimuth_cdf: Optional[Callable[[float], float]] = None,
) -> MiwConfiguration:
    """Excited-state configuration for d in {2, 3}.

    The printed presets are quanta (1,0) for d=2 (tilt 3, direction cdf G2)
    and (1,0,0) for d=3 (tilt 4, polar cdf G3+1, azimuth cdf A).  Any other
    quanta pattern requires the caller to supply the radial exponent and the
    angular cdfs; the potential then uses those maps verbatim.
    """
    quanta = tuple(int(q) for q in quanta)
    if d not in (2, 3):
        raise DomainError("excited builders cover d = 2 and d = 3")
    if len(quanta) != d:
        raise DomainError(f"quanta must have {d} entries for d = {d}")
    preset_k = _EXCITED_PRESETS.get((d, quanta))
    custom_maps: Optional[dict] = None
    if preset_k is None:
        needed = (direction_cdf,) if d == 2 else (polar_cdf, azimuth_cdf)
        if radial_exponent is None or any(fn is None for fn in needed):
            raise DomainError(
                f"state {quanta} has no preset: supply radial_exponent and the "
                "angular cdf(s)"
            )
        k = int(radial_exponent)
        if d == 2:
            custom_maps = {"direction": (direction_cdf, 1.0, 1.0)}
        else:
            custom_maps = {
                "polar": polar_cdf,
                "azimuth": (azimuth_cdf, 1.0, 0.5 * math.pi),
            }
    else:
        k = preset_k
        if d == 2:
            direction_cdf = excited_angle_cdf_2d
        else:
            polar_cdf = excited_polar_cdf_3d
            azimuth_cdf = excited_azimuth_cdf_3d

    plan = optimize_counts(n_total, d)
    radial = _radial_fill(plan, k, tol)
    if d == 2:
        m = plan.m_shells
        angles = _invert_cdf_grid(direction_cdf, [j / m for j in range(m)], 0.0, math.pi)
        return MiwConfiguration(
            plan=plan,
            polar_angles=angles,
            azimuths=(),
            radial=radial,
            state_label=quanta,
            radial_exponent=k,
            angle_maps=custom_maps,
        )
    m = plan.m_shells
    theta = _invert_cdf_grid(
        polar_cdf, [j / (m - 1) for j in range(m)], 0.0, 0.5 * math.pi
    )
    polar = theta[:, None]
    azimuths = tuple(
        _invert_cdf_grid(azimuth_cdf, [i / kj for i in range(kj)], 0.0, 2.0 * math.pi)
        for kj in plan.k_per_shell
    )
    return MiwConfiguration(
        plan=plan,
        polar_angles=polar,
        azimuths=azimuths,
        radial=radial,
        state_label=quanta,
        radial_exponent=k,
        angle_maps=custom_maps,
    )


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def configuration_to_csv(cfg: MiwConfiguration) -> str:
    """Point table: indices, angles, signed radius, and Cartesian coordinates."""
    d = cfg.d
    buf = io.StringIO()
    coord_names = ",".join(f"x{i+1}" for i in range(d))
    buf.write(
        f"shell_index,direction_index,point_index,polar_angles,azimuth,"
        f"signed_radius,{coord_names}\n"
    )
    cart = cfg.cartesian()
    i = 0
    for j, k, pol, az in cfg.direction_angles():
        r = cfg.radial[j][k] if d > 2 else cfg.radial[0][k]
        pol_txt = ";".join(repr(float(v)) for v in pol)
        az_txt = "" if az is None else repr(float(az))
        for n in range(r.shape[0]):
            coords = ",".join(repr(float(v)) for v in cart[i])
            buf.write(f"{j},{k},{n},{pol_txt},{az_txt},{float(r[n])!r},{coords}\n")
            i += 1
    return buf.getvalue()


def configuration_to_json(cfg: MiwConfiguration) -> str:
    plan = cfg.plan
    payload = {
        "d": plan.d,
        "N": plan.n_total,
        "M": plan.m_shells,
        "K_per_shell": list(plan.k_per_shell),
        "counts": [list(row) for row in plan.counts],
        "state_label": list(cfg.state_label),
        "radial_exponent": cfg.radial_exponent,
        "polar_angles": cfg.polar_angles.tolist(),
        "azimuths": [a.tolist() for a in cfg.azimuths],
        "radial": [[r.tolist() for r in row] for row in cfg.radial],
    }
    return json.dumps(payload)
