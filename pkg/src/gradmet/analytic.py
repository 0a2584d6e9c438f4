"""Closed-form expressions for both probe schemes.

Everything here is dimensionless: times are Theta = theta1 * t and decay
rates are expressed in units of theta1.  All functions are pure scalar maps
(reentrant, no shared state).

The W-state observable is the coherence factor C1 = N|W><W| - P, with P the
single-excitation projector.  Its statistics reduce to the kernel factor

    S(N, Theta) = sin^2(N Theta) / sin^2(Theta),

which has removable 0/0 points at Theta = n*pi; within a small window around
those points the functions below switch to series expansions so that the
minima sitting exactly there evaluate cleanly.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from .model import NoiseRates

#: Minimum half-width of the window around Theta = n*pi where series
#: expansions replace the raw trigonometric quotients.  The window widens as
#: 1/N (see ``_pi_window``): the raw quotients lose accuracy like
#: eps / (N u)^2 while the series truncate like (N u)^4, so the switchover
#: tracks the conditioning crossover.
PI_WINDOW = 1e-6

_INF = math.inf

#: |sin(2 omega t)| below this is a fringe node up to roundoff: the probe
#: carries no frequency information there, so the uncertainty is +inf.
_NODE_TOL = 1e-12


class InternalConsistencyError(ArithmeticError):
    """A quantity that must be nonnegative came out significantly negative."""


class MomentPair(NamedTuple):
    """First and second moment of the coherence factor at one phase."""

    mean_c1: float
    second_moment_c1: float

    @property
    def variance(self) -> float:
        return self.second_moment_c1 - self.mean_c1**2


def _pi_offset(theta: float) -> float:
    """Signed distance from theta to the nearest multiple of pi."""
    return theta - math.pi * round(theta / math.pi)


def _pi_window(n: int) -> float:
    return max(PI_WINDOW, 2.5e-3 / n)


def s_ratio(n: int, theta: float) -> float:
    """Kernel factor S = sin^2(N Theta) / sin^2(Theta), in [0, N^2].

    At Theta = n*pi the removable singularity is evaluated by series:
    S = N^2 [1 - (N^2-1) u^2 / 3 + (N^2-1)(2 N^2-3) u^4 / 45] with u the
    offset from the nearest multiple of pi.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u = _pi_offset(theta)
    if abs(u) < _pi_window(n):
        n2 = float(n * n)
        u2 = u * u
        return n2 * (1.0 - (n2 - 1.0) * u2 / 3.0 + (n2 - 1.0) * (2.0 * n2 - 3.0) * u2 * u2 / 45.0)
    s = math.sin(n * theta) / math.sin(theta)
    return s * s


def mean_c1(n: int, theta: float) -> float:
    """Expected coherence factor <C1> = -1 + S/N; peaks of height N-1 at Theta = n*pi."""
    _require_n2(n)
    return -1.0 + s_ratio(n, theta) / n


def second_moment_c1(n: int, theta: float) -> float:
    """Second moment <C1^2> = 1 + (N-2) S / N."""
    _require_n2(n)
    return 1.0 + (n - 2) * s_ratio(n, theta) / n


def c1_moments(n: int, theta: float) -> MomentPair:
    return MomentPair(mean_c1(n, theta), second_moment_c1(n, theta))


def dmean_c1_dtheta(n: int, theta: float) -> float:
    """d<C1>/dTheta = [N sin(2 N Theta) - 2 cot(Theta) sin^2(N Theta)] / (N sin^2 Theta).

    Vanishes at the Theta = n*pi peaks; evaluated there by series.
    """
    _require_n2(n)
    u = _pi_offset(theta)
    if abs(u) < _pi_window(n):
        n2 = float(n * n)
        return -(2.0 * n * (n2 - 1.0) / 3.0) * u * (1.0 - (2.0 * (2.0 * n2 - 3.0) / 15.0) * u * u)
    sin_t = math.sin(theta)
    sin_nt = math.sin(n * theta)
    bracket = n * math.sin(2.0 * n * theta) - 2.0 * (math.cos(theta) / sin_t) * sin_nt * sin_nt
    return bracket / (n * sin_t * sin_t)


def delta_theta_pure(n: int, theta: float) -> float:
    """Phase uncertainty of the W-state estimator, delta Theta = Delta C1 / |d<C1>/dTheta|.

    Equals sqrt(N^2 sin^2 T - sin^2 NT) |sin NT| / |N sin 2NT - 2 cot T sin^2 NT|.
    At Theta = n*pi the removable limit is the global minimum
    (1/2) sqrt(3/(N^2-1)); at isolated points where only the denominator
    vanishes the function returns +inf (uninformative operating point).
    """
    _require_n2(n)
    u = _pi_offset(theta)
    if abs(u) < _pi_window(n):
        # Series about the minimum: min * (1 + (N^2-4) u^2 / 30), O(u^4) error.
        return delta_theta_pure_min(n) * (1.0 + (n * n - 4) * u * u / 30.0)
    sin_t = math.sin(theta)
    sin_nt = math.sin(n * theta)
    radicand = n * n * sin_t * sin_t - sin_nt * sin_nt
    numerator = math.sqrt(max(radicand, 0.0)) * abs(sin_nt)
    denominator = abs(
        n * math.sin(2.0 * n * theta) - 2.0 * (math.cos(theta) / sin_t) * sin_nt * sin_nt
    )
    if denominator == 0.0:
        return _INF
    return numerator / denominator


def delta_theta_pure_min(n: int) -> float:
    """Best-case W-state phase uncertainty (1/2) sqrt(3/(N^2-1)), attained at Theta = n*pi."""
    _require_n2(n)
    return 0.5 * math.sqrt(3.0 / (n * n - 1.0))


# --- noisy W-state closed forms -------------------------------------------------


def mean_c1_noisy(n: int, tau: float, noise: NoiseRates) -> float:
    """<C1> under local dephasing/dissipation: the pure value damped by exp(-Gamma tau)."""
    _require_tau(tau)
    return mean_c1(n, tau) * math.exp(-noise.gamma_total * tau)


def second_moment_c1_noisy(n: int, tau: float, noise: NoiseRates) -> float:
    """<C1^2> under noise: (N-1) e^{-Gamma_d tau} + (N-2)(S/N - 1) e^{-Gamma tau}.

    Follows from the operator identity C1^2 = N(N-2)|W><W| + P: the projector
    part decays at the population rate Gamma_d, the W-overlap part carries the
    coherence rate Gamma.  At tau = 0 this reduces exactly to the noiseless
    second moment.
    """
    _require_n2(n)
    _require_tau(tau)
    s_over_n = s_ratio(n, tau) / n
    return (n - 1) * math.exp(-noise.gamma_d * tau) + (n - 2) * (s_over_n - 1.0) * math.exp(
        -noise.gamma_total * tau
    )


def dmean_c1_noisy_dtheta(n: int, tau: float, noise: NoiseRates) -> float:
    """d<C1>/dTheta under noise: the damped pure derivative (per unit Theta).

    The derivative with respect to theta1 itself is tau times this value.
    """
    return dmean_c1_dtheta(n, tau) * math.exp(-noise.gamma_total * tau)


def g1_factor(n: int, t: float, noise: NoiseRates) -> float:
    """Numerator weight g1(t) = N^2 [(N-1) e^{(2 Gamma - Gamma_d) t} - (N-2) e^{Gamma t} - 1].

    Identically 0 when both rates vanish.
    """
    g = noise.gamma_total
    return n * n * (
        (n - 1) * math.exp((2.0 * g - noise.gamma_d) * t) - (n - 2) * math.exp(g * t) - 1.0
    )


def g2_factor(n: int, t: float, noise: NoiseRates) -> float:
    """Numerator weight g2(t) = [N(N-2) + 2 N e^{-Gamma t}] e^{Gamma t}; equals N^2 when noiseless."""
    g = noise.gamma_total
    return (n * (n - 2) + 2.0 * n * math.exp(-g * t)) * math.exp(g * t)


def delta_theta_noisy(n: int, tau: float, noise: NoiseRates) -> float:
    """Relative gradient uncertainty delta theta1 / theta1 of the noisy W-state probe.

    Evaluates
        sqrt(g1 sin^4 T + g2 sin^2 T sin^2 NT - sin^4 NT)
        / (tau |N sin 2NT - 2 cot T sin^2 NT|)
    with T = tau.  Under noise the value diverges at tau = n*pi (the variance
    no longer vanishes there while the signal slope does), so the limit at
    those points is +inf; with both rates zero it reduces algebraically to
    delta_theta_pure(n, tau) / tau.
    """
    _require_n2(n)
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    u = _pi_offset(tau)
    if abs(u) < _pi_window(n):
        return _delta_theta_noisy_series(n, tau, u, noise)
    sin_t = math.sin(tau)
    sin_nt = math.sin(n * tau)
    s2, sn2 = sin_t * sin_t, sin_nt * sin_nt
    radicand = (
        g1_factor(n, tau, noise) * s2 * s2
        + g2_factor(n, tau, noise) * s2 * sn2
        - sn2 * sn2
    )
    if radicand < -1e-9:
        raise InternalConsistencyError(
            f"negative variance radicand {radicand} at n={n}, tau={tau}, noise={noise}"
        )
    numerator = math.sqrt(max(radicand, 0.0))
    denominator = tau * abs(
        n * math.sin(2.0 * n * tau) - 2.0 * (math.cos(tau) / sin_t) * sn2
    )
    if denominator == 0.0:
        return _INF
    return numerator / denominator


def _delta_theta_noisy_series(n: int, tau: float, u: float, noise: NoiseRates) -> float:
    """Series form of delta_theta_noisy about tau = k*pi, offset u.

    The radicand splits into the pure-phase part plus two nonnegative noise
    excesses, each expanded through relative order u^2:

        R / u^4 = g1 (1 - 2u^2/3)
                + N^3 (N-2)(e^{Gamma t} - 1)(1 - (1+N^2) u^2/3)
                + (N^4 (N^2-1)/3) u^2 (1 - (7N^2+2) u^2/15)

    against the slope magnitude (2/3) N^2 (N^2-1) |u|^3 (1 - (4N^2-1) u^2/15).
    No cancellation occurs, so the value stays accurate through the narrow
    near-pi valley the raw quotient cannot resolve.  Exactly at u = 0 the
    limit is returned (finite only when noiseless).
    """
    if u == 0.0:
        return delta_theta_noisy_pi_limit(n, noise, tau=tau)
    n2 = float(n * n)
    u2 = u * u
    g = noise.gamma_total
    g1 = g1_factor(n, tau, noise)
    excess = n2 * n * (n - 2) * math.expm1(g * tau)
    bracket = (
        g1 * (1.0 - 2.0 * u2 / 3.0)
        + excess * (1.0 - (1.0 + n2) * u2 / 3.0)
        + (n2 * n2 * (n2 - 1.0) / 3.0) * u2 * (1.0 - (7.0 * n2 + 2.0) * u2 / 15.0)
    )
    slope = (2.0 / 3.0) * n2 * (n2 - 1.0) * abs(u) * (1.0 - (4.0 * n2 - 1.0) * u2 / 15.0)
    return math.sqrt(max(bracket, 0.0)) / (tau * slope)


def delta_theta_noisy_pi_limit(n: int, noise: NoiseRates, tau: float = math.pi) -> float:
    """Limit of delta_theta_noisy as tau approaches a multiple of pi.

    Finite (the pure minimum divided by tau) only in the noiseless case;
    +inf for any nonzero rate.
    """
    _require_n2(n)
    if noise.gamma_total > 0.0:
        return _INF
    if not tau > 0:
        return _INF
    return delta_theta_pure_min(n) / tau


# --- uncorrelated Ramsey pair ----------------------------------------------------


def ramsey_probability(omega_t: float, gamma_t: float) -> float:
    """Excitation probability after a Ramsey sequence: (1 + e^{-gamma_t} cos(2 omega_t)) / 2.

    ``gamma_t`` is the accumulated decay exponent of the measured fringe
    contrast (dimensionless, >= 0).
    """
    if gamma_t < 0:
        raise ValueError(f"gamma_t must be >= 0, got {gamma_t}")
    return 0.5 * (1.0 + math.exp(-gamma_t) * math.cos(2.0 * omega_t))


def ramsey_delta_omega(omega_t: float, t: float, gamma_t: float = 0.0) -> float:
    """Single-atom frequency uncertainty from the Ramsey fringe.

    Returns (1/t) sqrt[(1 - e^{-G t} cos^2 2wt) / (4 e^{-G t} sin^2 2wt)];
    with gamma_t = 0 this is 1/(2t) wherever sin(2 omega t) is nonzero, and
    +inf at the zero-information points sin(2 omega t) = 0.
    """
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    if gamma_t < 0:
        raise ValueError(f"gamma_t must be >= 0, got {gamma_t}")
    cos2, sin2 = math.cos(2.0 * omega_t), math.sin(2.0 * omega_t)
    if abs(sin2) < _NODE_TOL:
        return _INF
    damp = math.exp(-gamma_t)
    return math.sqrt((1.0 - damp * cos2 * cos2) / (4.0 * damp * sin2 * sin2)) / t


def uncorrelated_delta_theta(
    n: int, t: float, omega1_t: float, omega2_t: float, gamma_t: float = 0.0
) -> float:
    """Gradient uncertainty from two independent Ramsey probes spanning the same length.

    delta theta2 = (1/(t(N-1))) sqrt(sum_j (1 - e^{-G t} cos^2 2w_j t) / (4 e^{-G t} sin^2 2w_j t)).
    +inf if either probe sits at a zero-information point.
    """
    _require_n2(n)
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    damp = math.exp(-gamma_t)
    total = 0.0
    for omega_t in (omega1_t, omega2_t):
        cos2, sin2 = math.cos(2.0 * omega_t), math.sin(2.0 * omega_t)
        if abs(sin2) < _NODE_TOL:
            return _INF
        total += (1.0 - damp * cos2 * cos2) / (4.0 * damp * sin2 * sin2)
    return math.sqrt(total) / (t * (n - 1))


def uncorrelated_envelope(n: int, t: float, gamma: float) -> float:
    """Uncorrelated-pair uncertainty at the tuned operating points sin^2(2 w_j t) = 1.

    Both fringe factors reduce to e^{Gamma t}/4, giving
    e^{Gamma t / 2} / (sqrt(2) t (N-1)).  The tuning is always available since
    the carrier frequency dwarfs theta1.
    """
    _require_n2(n)
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    return math.exp(0.5 * gamma * t) / (math.sqrt(2.0) * t * (n - 1))


def uncorrelated_min_noisy_paper(n: int, gamma: float) -> float:
    """Closed-form noisy minimum (1/(N-1)) sqrt(Gamma^2 e / 2), i.e. the envelope at t = 1/Gamma.

    Note the envelope's true stationary point is t = 2/Gamma with the lower
    value Gamma e / (2 sqrt(2) (N-1)); both are reported by the sweep tools.
    """
    _require_n2(n)
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return math.sqrt(gamma * gamma * math.e / 2.0) / (n - 1)


# --- summation identities and energy bounds --------------------------------------


def cosine_double_sum(n: int, theta: float) -> float:
    """Closed form -N/2 + S/2 of the double sum over cos(2 j Theta), j <= j' <= N-1."""
    _require_n2(n)
    return -0.5 * n + 0.5 * s_ratio(n, theta)


def sine_odd_sum(n: int, theta: float) -> float:
    """Closed form csc(Theta) sin^2(N Theta) of sum_{j=1..N} sin((2j-1) Theta); limit 0 at Theta = k*pi."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sin_t = math.sin(theta)
    if sin_t == 0.0:
        return 0.0
    sin_nt = math.sin(n * theta)
    return sin_nt * sin_nt / sin_t


def energy_variance(freqs: Sequence[float]) -> float:
    """Energy spread Delta H of the W-state for site frequencies ``freqs`` (hbar = 1).

    Computed from the moment formulas <H> = (2-N)/N sum w_j and
    <H^2> = (1/N)[4 sum w_j^2 + (N-4)(sum w_j)^2]; algebraically this equals
    twice the population standard deviation of the frequencies.
    """
    n = len(freqs)
    if n < 2:
        raise ValueError(f"need at least 2 frequencies, got {n}")
    sum_w = math.fsum(freqs)
    sum_w2 = math.fsum(w * w for w in freqs)
    mean_h = (2.0 - n) / n * sum_w
    mean_h2 = (4.0 * sum_w2 + (n - 4.0) * sum_w * sum_w) / n
    variance = mean_h2 - mean_h * mean_h
    if variance < 0.0:
        # Roundoff only; the exact value is 4 * Var(w) >= 0.
        variance = 0.0
    return math.sqrt(variance)


def time_energy_bound(delta_h: float) -> float:
    """Phase-uncertainty lower bound 1/(2 Delta H) from the time-energy relation."""
    if not delta_h > 0:
        raise ValueError(f"delta_h must be > 0, got {delta_h}")
    return 0.5 / delta_h


def powerlaw_bound(n: int, alpha: float) -> float:
    """Uncertainty bound for a power-law field profile, omega_j proportional to (j-1)^alpha.

    Scales as N^-alpha for large N; alpha = 1 recovers the linear-gradient
    minimum exactly.
    """
    _require_n2(n)
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    freqs = [float(j - 1) ** alpha for j in range(1, n + 1)]
    return time_energy_bound(energy_variance(freqs))


def _require_n2(n: int) -> None:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")


def _require_tau(tau: float) -> None:
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
