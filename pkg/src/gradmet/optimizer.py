"""One-dimensional minimum search over an open time interval.

The search mirrors the procedure used for the noisy uncertainty curves:
evaluate on a coarse grid, bracket every descending-to-ascending slope
change, shrink each bracket by golden-section refinement down to the target
resolution (1e-7 by default), then filter out unstable candidates - points
whose central-difference first derivative is not consistent with a
stationary minimum, whose curvature is not positive, or which collapse into
the excluded margin at the right endpoint where the curve is unresolvable.
The right-endpoint value itself is always probed via the function's own
limit evaluation, since for the pure-phase uncertainty the true minimum sits
exactly there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from . import analytic
from .model import NoiseRates, PrecisionPoint, Scheme

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0       # golden ratio section
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

#: Candidates closer than this to an interval endpoint are not trusted as
#: interior minima; the endpoint limit is evaluated instead.
EXCLUSION_MARGIN = 1e-6

#: Valleys shallower than this relative depth are grid-level float noise.
_NOISE_DEPTH = 1e-13


@dataclass(frozen=True)
class Minimum:
    location: float
    value: float
    first_derivative: float
    curvature_sign: int


@dataclass(frozen=True)
class ScanResult:
    minima: tuple[Minimum, ...]
    rejected: tuple[tuple[float, str], ...]

    @property
    def best(self) -> Optional[Minimum]:
        return min(self.minima, key=lambda m: (m.value, m.location), default=None)


def _sanitize(value: float) -> float:
    return math.inf if math.isnan(value) else value


def _pi_remainder(x: float) -> float:
    return x - math.pi * round(x / math.pi)


def _golden_refine(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Shrink [lo, hi] to width <= tol; return the best sampled (x, f(x))."""
    h = hi - lo
    c = lo + _INV_PHI2 * h
    d = lo + _INV_PHI * h
    yc, yd = _sanitize(f(c)), _sanitize(f(d))
    while h > tol:
        if yc < yd:
            hi, d, yd = d, c, yc
            h = hi - lo
            c = lo + _INV_PHI2 * h
            yc = _sanitize(f(c))
        else:
            lo, c, yc = c, d, yd
            h = hi - lo
            d = lo + _INV_PHI * h
            yd = _sanitize(f(d))
    return (c, yc) if yc <= yd else (d, yd)


def _stability(
    f: Callable[[float], float], x: float, target_resolution: float
) -> tuple[float, int, float]:
    """(first derivative, curvature sign, derivative tolerance) at a candidate."""
    h = max(1e-6, 10.0 * target_resolution)
    hc = max(1e-4, 10.0 * target_resolution)
    fx = _sanitize(f(x))
    deriv = (_sanitize(f(x + h)) - _sanitize(f(x - h))) / (2.0 * h)
    stencil = (
        -_sanitize(f(x - 2.0 * hc))
        + 16.0 * _sanitize(f(x - hc))
        - 30.0 * fx
        + 16.0 * _sanitize(f(x + hc))
        - _sanitize(f(x + 2.0 * hc))
    ) / (12.0 * hc * hc)
    curvature_sign = 0 if stencil == 0.0 else (1 if stencil > 0.0 else -1)
    # Stationary-point consistency: either the slope is small against the
    # function's own scale, or it is no larger than curvature times the
    # location uncertainty left after refinement.
    deriv_tol = 1e-3 * abs(fx) / max(abs(x), target_resolution)
    if math.isfinite(stencil):
        deriv_tol = max(deriv_tol, abs(stencil) * 10.0 * target_resolution)
    return deriv, curvature_sign, deriv_tol


def scan_refine(
    f: Callable[[float], float],
    a: float,
    b: float,
    coarse_step: float,
    target_resolution: float = 1e-7,
    grid_offset: float = 0.0,
) -> ScanResult:
    """Locate the stable local minima of ``f`` on the interval (a, b].

    ``f`` is evaluated on the coarse grid a + (i + grid_offset) * coarse_step
    and at b itself; every slope sign change is bracketed and refined.
    ``grid_offset`` (in units of the step) exists to probe grid-placement
    stability.  Non-finite values are treated as +inf so the scan can pass
    through uninformative points.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not coarse_step > target_resolution:
        raise ValueError("coarse_step must exceed target_resolution")
    if target_resolution < 1e-7:
        raise ValueError(f"target_resolution must be >= 1e-7, got {target_resolution}")

    xs: list[float] = []
    i = 1
    while True:
        x = a + (i + grid_offset) * coarse_step
        if x >= b:
            break
        xs.append(x)
        i += 1
    xs.append(b)
    ys = [_sanitize(f(x)) for x in xs]

    minima: list[Minimum] = []
    rejected: list[tuple[float, str]] = []

    def consider(lo: float, hi: float, grid_value: float) -> None:
        x, y = _golden_refine(f, lo, hi, target_resolution)
        if not math.isfinite(y):
            rejected.append((x, "non-finite over bracket"))
            return
        if x - a < EXCLUSION_MARGIN:
            rejected.append((x, "within exclusion margin of left endpoint"))
            return
        if b - x < EXCLUSION_MARGIN:
            # The candidate collapsed onto the right endpoint: trust only the
            # endpoint's own limit value.
            _consider_endpoint("refined into right-endpoint margin")
            return
        deriv, curv, deriv_tol = _stability(f, x, target_resolution)
        if abs(deriv) >= deriv_tol:
            rejected.append((x, f"unstable: |f'|={abs(deriv):.3e} >= {deriv_tol:.3e}"))
            return
        if curv <= 0:
            rejected.append((x, "unstable: nonpositive curvature"))
            return
        minima.append(Minimum(x, y, deriv, curv))

    endpoint_done = False

    def _consider_endpoint(origin: str) -> None:
        nonlocal endpoint_done
        if endpoint_done:
            return
        endpoint_done = True
        y = ys[-1]
        if not math.isfinite(y):
            rejected.append((b, f"{origin}: endpoint limit non-finite"))
            return
        deriv, curv, deriv_tol = _stability(f, b, target_resolution)
        if abs(deriv) >= deriv_tol:
            rejected.append((b, f"{origin}: endpoint not stationary"))
            return
        if curv <= 0:
            rejected.append((b, f"{origin}: endpoint curvature not positive"))
            return
        minima.append(Minimum(b, y, deriv, curv))

    # Bracket every descending -> ascending transition of the discrete slope,
    # tolerating flat runs inside a valley.
    idx = 0
    while idx < len(ys) - 1:
        if not ys[idx + 1] < ys[idx]:
            idx += 1
            continue
        start = idx          # descent begins here
        idx += 1
        while idx < len(ys) - 1 and ys[idx + 1] <= ys[idx]:
            idx += 1
        # ys[idx] is the valley floor on the grid.
        floor = ys[idx]
        if idx == len(ys) - 1:
            _consider_endpoint("monotone descent into right endpoint")
            break
        depth = min(ys[start] - floor, ys[idx + 1] - floor)
        if not depth > _NOISE_DEPTH * max(1.0, abs(floor)):
            continue
        consider(xs[max(idx - 1, start)], xs[idx + 1], floor)

    minima.sort(key=lambda m: m.location)
    return ScanResult(tuple(minima), tuple(rejected))


def global_pure_minimum(
    n: int, coarse_step: Optional[float] = None, target_resolution: float = 1e-7
) -> Minimum:
    """Global minimum of the pure W-state uncertainty over (0, pi].

    Combines the interior scan with the series-evaluated limit at pi, where
    the analytic minimum sits.
    """
    step = coarse_step if coarse_step is not None else math.pi / (64.0 * n)
    f = lambda theta: analytic.delta_theta_pure(n, theta)
    result = scan_refine(f, 0.0, math.pi, step, target_resolution)
    limit = Minimum(math.pi, analytic.delta_theta_pure(n, math.pi), 0.0, 1)
    candidates = list(result.minima) + [limit]
    return min(candidates, key=lambda m: (m.value, m.location))


def w_state_horizon(noise: NoiseRates) -> float:
    """Default search horizon for the noisy W-state minimization.

    The damped uncertainty has one valley per pi-period whose envelope
    behaves like exp(c Gamma t)/t with c <= 1, so the global optimum lies at
    or before t = 2/Gamma; the horizon covers it with margin.  Noiseless, the
    per-time uncertainty keeps improving with every period, so the reported
    convention is the first-period value at tau = pi.
    """
    gamma = noise.gamma_total
    if gamma <= 0.0:
        return math.pi
    return 3.0 / gamma + 2.0 * math.pi


def min_over_interval(
    scheme: Scheme,
    n: int,
    noise: NoiseRates,
    coarse_step: Optional[float] = None,
    target_resolution: float = 1e-7,
    horizon: Optional[float] = None,
) -> PrecisionPoint:
    """Optimized operating point for one scheme, size and noise level.

    W-state: minimizes the noisy relative uncertainty delta theta1/theta1
    over dimensionless time (0, horizon], including the limit value at the
    endpoint when it is a multiple of pi (finite only when noiseless).  The
    default horizon extends past the decay time (see ``w_state_horizon``);
    pass ``horizon=math.pi`` to restrict the search to the first phase
    period.  Uncorrelated pair: minimizes the tuned two-probe envelope over
    (0, 20/Gamma] and also reports the closed-form value at t = 1/Gamma as
    ``eq23_value``.
    """
    if scheme is Scheme.W_STATE:
        b = horizon if horizon is not None else w_state_horizon(noise)
        step = coarse_step if coarse_step is not None else math.pi / (64.0 * n)
        f = lambda tau: analytic.delta_theta_noisy(n, tau, noise)
        result = scan_refine(f, 0.0, b, step, target_resolution)
        candidates = list(result.minima)
        if abs(_pi_remainder(b)) < 1e-12:
            limit_value = analytic.delta_theta_noisy_pi_limit(n, noise, tau=b)
            if math.isfinite(limit_value):
                candidates.append(Minimum(b, limit_value, 0.0, 1))
        if not candidates:
            raise RuntimeError(f"no stable minimum found for n={n}, noise={noise}")
        best = min(candidates, key=lambda m: (m.value, m.location))
        return PrecisionPoint(scheme, n, noise, best.location, best.value)

    gamma = noise.gamma_total
    if not gamma > 0:
        raise ValueError("uncorrelated optimization requires a nonzero noise rate")
    horizon = 20.0 / gamma
    step = coarse_step if coarse_step is not None else horizon / 4000.0
    f = lambda t: analytic.uncorrelated_envelope(n, t, gamma)
    result = scan_refine(f, 0.0, horizon, step, target_resolution)
    best = result.best
    if best is None:
        raise RuntimeError(f"no envelope minimum found for n={n}, noise={noise}")
    return PrecisionPoint(
        scheme,
        n,
        noise,
        best.location,
        best.value,
        eq23_value=analytic.uncorrelated_min_noisy_paper(n, gamma),
    )
