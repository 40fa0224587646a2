"""Scalar kernels for the |x|^k-tilted Gaussian family.

The signed radial law of a (k+1)-dimensional standard Gaussian has density

    p(x; k) = c_k |x|^k φ(x),      c_k = √π / (2^{k/2} Γ((k+1)/2)),

with φ the standard normal density.  Everything the bound machinery needs
reduces to the upper incomplete gamma function of half-integer order:

    survival    P̄(x)  = Γ((k+1)/2, x²/2) / (2 Γ((k+1)/2))          (x ≥ 0)
    ∫_{-∞}^x u p(u) du = -Γ(k/2+1, x²/2) / (√2 Γ((k+1)/2))          (all x)
    Stein kernel τ(x)  = 2^{k/2} e^{x²/2} |x|^{-k} Γ(1+k/2, x²/2)

The kernel is evaluated through the *scaled* incomplete gamma
``e^z Γ(α, z)`` so the exploding exponential never meets the vanishing
tail; closed forms are used for k = 0, 1, 2 (with the k = 1 product form
abandoned for the scaled route once x²/2 leaves the safe range).

The non-uniform weights of the Wasserstein bound,

    Ψ1 = 2 R / τ²,
    Ψ2 = (1/τ) (1 + |2x/τ - x + k/x| · R/τ),
    R(x) = ∫_{-∞}^x P · ∫_x^∞ P̄ / p(x),

have removable limits at the origin (√(2/π), 1, 1/2, 0 depending on k);
inside ``PSI_ORIGIN_SNAP`` of zero the limits are returned directly, which
keeps the bound sums finite-precision clean without touching any point a
radial solution can actually produce at supported sizes.

All functions here are numba-compiled scalars shared by the public modules.
"""

import math

from ._jit import njit
from .specfn import _gamma_q_reg, _scaled_upper_gamma

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)

# |x| below which Ψ1/Ψ2 return their analytic origin limits.
PSI_ORIGIN_SNAP = 5.0e-4

# |x| above which the k=1 closed form switches to the scaled-gamma route.
_K1_CLOSED_FORM_LIMIT = 8.0

# x²/2 beyond which the target density underflows double precision and the
# ratio quantities switch to their O(1/x) asymptotes.
_FAR_TAIL_Z = 600.0


@njit
def tilt_normalizer(k):
    """c_k = √π / (2^{k/2} Γ((k+1)/2))."""
    return _SQRT_PI / (2.0 ** (0.5 * k) * math.exp(math.lgamma(0.5 * (k + 1.0))))


@njit
def _half_moment_coeff(k):
    """c̃ with ∫_{-∞}^x u p(u) du = -c̃ Γ(k/2+1, x²/2);  c̃ = 1/(√2 Γ((k+1)/2))."""
    return 1.0 / (math.sqrt(2.0) * math.exp(math.lgamma(0.5 * (k + 1.0))))


@njit
def tilt_density(x, k):
    ax = abs(x)
    if ax == 0.0:
        return tilt_normalizer(k) / _SQRT_2PI if k == 0 else 0.0
    return tilt_normalizer(k) * ax**k * math.exp(-0.5 * x * x) / _SQRT_2PI


@njit
def tilt_cdf(x, k):
    half_tail = 0.5 * _gamma_q_reg(0.5 * (k + 1.0), 0.5 * x * x)
    if x >= 0.0:
        return 1.0 - half_tail
    return half_tail


@njit
def tilt_sf(x, k):
    """Survival function 1 - P(x), computed without the cancelling subtraction."""
    half_tail = 0.5 * _gamma_q_reg(0.5 * (k + 1.0), 0.5 * x * x)
    if x >= 0.0:
        return half_tail
    return 1.0 - half_tail


@njit
def tilt_partial_first_moment(x, k):
    """∫_{-∞}^x u p(u; k) du  (an even function of x, always ≤ 0)."""
    alpha = 0.5 * k + 1.0
    return -_half_moment_coeff(k) * _gamma_q_reg(alpha, 0.5 * x * x) * math.exp(
        math.lgamma(alpha)
    )


@njit
def tilt_mean_abs(k):
    """E|X| = √2 Γ(k/2+1) / Γ((k+1)/2)."""
    return 2.0 * _half_moment_coeff(k) * math.exp(math.lgamma(0.5 * k + 1.0))


@njit
def tilt_cdf_lower_integral(x, k):
    """∫_{-∞}^x P(u) du = x P(x) - ∫_{-∞}^x u p(u) du = E(x - X)^+."""
    return x * tilt_cdf(x, k) - tilt_partial_first_moment(x, k)


@njit
def tilt_sf_upper_integral(x, k):
    """∫_x^∞ (1 - P(u)) du = E(X - x)^+ (uses E X = 0)."""
    return -tilt_partial_first_moment(x, k) - x * tilt_sf(x, k)


@njit
def tau_gamma(x, k):
    """Stein kernel via the scaled incomplete gamma route (any k ≥ 0, x ≠ 0)."""
    if k == 0:
        return 1.0
    z = 0.5 * x * x
    ax = abs(x)
    return 2.0 ** (0.5 * k) * ax ** (-float(k)) * _scaled_upper_gamma(0.5 * k + 1.0, z)


@njit
def tau(x, k):
    """Stein kernel τ(x; k) of the tilted Gaussian law (even in x; x ≠ 0 for k ≥ 1).

    Closed forms for k = 0, 1, 2; scaled-gamma route otherwise.
    """
    if k == 0:
        return 1.0
    ax = abs(x)
    if k == 2:
        return 1.0 + 2.0 / (x * x)
    if k == 1 and ax <= _K1_CLOSED_FORM_LIMIT:
        z = 0.5 * x * x
        return 1.0 + math.sqrt(0.5 * math.pi) / ax * math.exp(z) * math.erfc(
            ax / math.sqrt(2.0)
        )
    return tau_gamma(x, k)


@njit
def r_infinity(x, k):
    """R(x) = ∫_{-∞}^x P du · ∫_x^∞ P̄ du / p(x)   (even in x; x ≠ 0 for k ≥ 1).

    Far in the tail (density below double-precision range) the exact ratio is
    replaced by its 1/|x| asymptote.
    """
    if 0.5 * x * x > _FAR_TAIL_Z:
        return 1.0 / abs(x)
    return (
        tilt_cdf_lower_integral(x, k)
        * tilt_sf_upper_integral(x, k)
        / tilt_density(x, k)
    )


@njit
def psi1_limit_at_origin(k):
    if k == 0:
        return math.sqrt(2.0 / math.pi)
    return 0.0


@njit
def psi2_limit_at_origin(k):
    if k == 0:
        return 1.0
    if k == 1:
        return 0.5
    return 0.0


@njit
def psi1(x, k):
    """First-derivative weight Ψ1(x) = 2 R(x) / τ(x)²."""
    if abs(x) <= PSI_ORIGIN_SNAP:
        return psi1_limit_at_origin(k)
    t = tau(x, k)
    return 2.0 * r_infinity(x, k) / (t * t)


@njit
def psi2(x, k):
    """Second-derivative weight Ψ2(x) = (1/τ)(1 + |2x/τ - x + k/x| R/τ)."""
    if abs(x) <= PSI_ORIGIN_SNAP:
        return psi2_limit_at_origin(k)
    t = tau(x, k)
    drift = 2.0 * x / t - x
    if k > 0:
        drift += k / x
    return (1.0 + abs(drift) * r_infinity(x, k) / t) / t


@njit
def w1_empirical_vs_tilted(ys, cums, k):
    """Exact ∫ |F_N - F| dx between a discrete law and the tilted target.

    ``ys`` are the strictly increasing support points, ``cums[i]`` the
    empirical cdf at ys[i].  Piecewise evaluation: on each gap the empirical
    cdf is constant, the |difference| integral is split at the cdf crossing
    (located by bisection, harmless to first order) and each piece is read
    off the closed-form antiderivative ∫ F = x F(x) - ∫ u p(u) du.
    """
    n = ys.shape[0]
    total = tilt_cdf_lower_integral(ys[0], k)
    for i in range(n - 1):
        c = cums[i]
        a = ys[i]
        b = ys[i + 1]
        fa = tilt_cdf(a, k)
        fb = tilt_cdf(b, k)
        ia = tilt_cdf_lower_integral(a, k)
        ib = tilt_cdf_lower_integral(b, k)
        if fb <= c:
            total += c * (b - a) - (ib - ia)
        elif fa >= c:
            total += (ib - ia) - c * (b - a)
        else:
            lo = a
            hi = b
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                if tilt_cdf(mid, k) < c:
                    lo = mid
                else:
                    hi = mid
            xc = 0.5 * (lo + hi)
            ic = tilt_cdf_lower_integral(xc, k)
            total += (c * (xc - a) - (ic - ia)) + ((ib - ic) - c * (b - xc))
    total += tilt_sf_upper_integral(ys[n - 1], k)
    return total
