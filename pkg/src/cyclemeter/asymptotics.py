"""Singularity classification of weight sequences and asymptotic laws.

A weight sequence is classified through g(t) = sum theta_k t^k / k near
its radius of convergence r.  Two usable shapes:

* class F(r, theta):  g(t) = theta*log(1/(1 - t/r)) + K + O(t - r) on a
  slit disk around r, so exp(g) has an algebraic-logarithmic singularity;
* class eF(r, theta, gamma):  g = theta*log(1/(1 - t/r)) + K + g0(t)
  where the coefficients of g0 decay like r^{-n} n^{-1-gamma},
  0 < gamma <= 1 (perturbed weights).

Both give coefficient asymptotics of exp(w*g) via the transfer estimate

    [t^n] exp(w g(t)) = e^{K w} n^{w theta - 1} r^{-n}
                        * (S(r, w) / Gamma(theta w) + O(1/n))

(S = exp(w * (g - log part - K)) evaluated at r; S(r, 1) = 1), and in
particular h_n ~ e^K n^{theta-1} / (r^n Gamma(theta)).  When theta*w is
a nonpositive integer the reciprocal Gamma kills the main term, which
the estimators report as 0 rather than an error.

The catalog constructors classify the families studied here: constant
weights, algebraically perturbed weights, polylogarithmic weights
(g = Li_{1+delta}), stretched-exponential weights exp(c*m^p), and
exponentials of perturbed exponents.  Families falling outside F/eF get
status flags instead of a class and the estimators refuse them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import ConvergenceError, UnsupportedClassError, UsageError
from .measure import WeightSequence, _to_fraction
from .specfun import complex_gamma, reciprocal_gamma, riemann_zeta

STATUS_OK = "ok"
STATUS_MAIN_TERM_ZERO = "main-term-zero"
STATUS_UNSUPPORTED = "unsupported"
STATUS_OPEN = "open"
STATUS_ZERO_RADIUS = "zero-radius"
STATUS_ENTIRE = "entire"


@dataclass(frozen=True)
class SingularityClass:
    """F(r, theta) or eF(r, theta, gamma) data with the constant K."""

    kind: str
    r: float
    theta: float
    K: float
    gamma: Optional[float] = None
    geometry: Optional[tuple] = None  # (R, phi) of the slit-disk domain, informational
    main_term_zero: bool = False

    def __post_init__(self):
        if self.kind not in ("F", "eF"):
            raise UsageError(f"kind must be 'F' or 'eF', got {self.kind!r}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise UsageError(f"radius must be finite and > 0, got {self.r}")
        if self.theta < 0:
            raise UsageError(f"log-singularity strength must be >= 0, got {self.theta}")
        if self.kind == "eF":
            if self.gamma is None or not 0 < self.gamma <= 1:
                raise UsageError(f"class eF needs gamma in (0, 1], got {self.gamma}")


@dataclass
class WeightFamily:
    """A weight sequence together with its classification."""

    weights: WeightSequence
    cls: Optional[SingularityClass]
    provenance: str
    status: str = STATUS_OK
    note: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cls is not None:
            self.weights.singularity = self.cls

    def require_class(self) -> SingularityClass:
        if self.cls is None:
            raise UnsupportedClassError(
                f"family {self.provenance} is {self.status}: {self.note or 'no usable singularity class'}")
        return self.cls


# -- catalog ---------------------------------------------------------------


def ewens_family(theta) -> WeightFamily:
    """Constant weights theta_m = theta > 0: class F(1, theta), K = 0."""
    frac = _to_fraction(theta)
    if frac <= 0:
        raise UsageError(f"constant weight must be > 0, got {theta}")
    weights = WeightSequence.constant(frac, name=f"ewens({theta})")
    cls = SingularityClass("F", 1.0, float(frac), 0.0)
    return WeightFamily(weights, cls, "ewens", params={"theta": str(frac)})


def theta_shift_family(theta, amp=1, power=2) -> WeightFamily:
    """theta_m = theta + amp/m^power -> class eF(1, theta, min(power, 1)).

    K = sum_m (theta_m - theta)/m = amp * zeta(power + 1).
    """
    theta_f = _to_fraction(theta)
    amp_f = _to_fraction(amp)
    power_f = float(power)
    if theta_f <= 0:
        raise UsageError(f"limit weight must be > 0, got {theta}")
    if power_f <= 0:
        raise UsageError(f"perturbation power must be > 0, got {power}")
    if theta_f + amp_f < 0:
        raise UsageError("theta + amp < 0 makes theta_1 negative")

    integral_power = power_f == int(power_f)
    p_int = int(power_f)

    def eval_fn(m: int) -> float:
        return float(theta_f) + float(amp_f) / m ** power_f

    exact_fn = None
    if integral_power:
        exact_fn = lambda m: theta_f + amp_f / Fraction(m ** p_int)

    weights = WeightSequence(eval_fn, name=f"theta-shift({theta},{amp},{power})",
                             exact_fn=exact_fn)
    gamma = min(power_f, 1.0)
    K = float(amp_f) * riemann_zeta(power_f + 1.0)
    cls = SingularityClass("eF", 1.0, float(theta_f), K, gamma=gamma)
    return WeightFamily(weights, cls, "theta-shift",
                        params={"theta": str(theta_f), "amp": str(amp_f), "power": power_f})


def polylog_family(delta) -> WeightFamily:
    """Polylogarithmic weight family: g(t) = Li_{1+delta}(t).

    The weights are theta_m = m^{-delta} (so theta_m/m = m^{-1-delta}).
    delta = 0 is the constant-1 family; delta > 0 gives a bounded g with
    K = zeta(delta+1) and no log singularity (the transfer main term is
    0); delta < 0 makes g blow up algebraically at 1, outside both
    classes, so estimators refuse it.
    """
    delta_f = float(_to_fraction(delta)) if isinstance(delta, str) else float(delta)
    integral = delta_f == int(delta_f)
    d_int = int(delta_f)

    if delta_f == 0:
        fam = ewens_family(1)
        return WeightFamily(fam.weights, fam.cls, "polylog", params={"delta": 0.0})

    def eval_fn(m: int) -> float:
        return float(m) ** (-delta_f)

    exact_fn = None
    if integral:
        if d_int > 0:
            exact_fn = lambda m: Fraction(1, m**d_int)
        else:
            exact_fn = lambda m: Fraction(m ** (-d_int))

    weights = WeightSequence(eval_fn, name=f"polylog({delta})", exact_fn=exact_fn)
    if delta_f > 0:
        cls = SingularityClass("F", 1.0, 0.0, riemann_zeta(delta_f + 1.0),
                               main_term_zero=True)
        return WeightFamily(weights, cls, "polylog", status=STATUS_MAIN_TERM_ZERO,
                            note="g is bounded at 1; transfer main term vanishes",
                            params={"delta": delta_f})
    return WeightFamily(weights, None, "polylog", status=STATUS_UNSUPPORTED,
                        note="g has an algebraic blow-up at 1, outside classes F/eF",
                        params={"delta": delta_f})


def exp_weight_family(c, theta_exp) -> WeightFamily:
    """Stretched-exponential weights theta_m = exp(c * m^theta_exp).

    Radius of g: 1 for theta_exp < 1, e^{-c} at theta_exp = 1, and 0 or
    infinity for theta_exp > 1 depending on the sign of c.  Supported
    classes: theta_exp <= 0 and theta_exp = 1; the stretched regimes in
    between are flagged open/unsupported.
    """
    c_f = float(_to_fraction(c)) if isinstance(c, str) else float(c)
    p_f = float(_to_fraction(theta_exp)) if isinstance(theta_exp, str) else float(theta_exp)

    def eval_fn(m: int) -> float:
        return math.exp(c_f * m**p_f)

    weights = WeightSequence(eval_fn, name=f"exp-weight({c},{theta_exp})")
    params = {"c": c_f, "theta_exp": p_f}

    if c_f == 0.0:
        fam = ewens_family(1)
        params["radius"] = 1.0
        return WeightFamily(fam.weights, fam.cls, "exp-weight", params=params)

    if p_f > 1.0:
        if c_f > 0:
            params["radius"] = 0.0
            return WeightFamily(weights, None, "exp-weight", status=STATUS_ZERO_RADIUS,
                                note="weights grow faster than geometrically; g has radius 0",
                                params=params)
        params["radius"] = math.inf
        return WeightFamily(weights, None, "exp-weight", status=STATUS_ENTIRE,
                            note="g is entire; no dominant singularity to transfer",
                            params=params)

    if p_f == 1.0:
        r = math.exp(-c_f)
        params["radius"] = r
        cls = SingularityClass("F", r, 1.0, 0.0)
        return WeightFamily(weights, cls, "exp-weight", params=params)

    params["radius"] = 1.0
    if p_f == 0.0:
        value = math.exp(c_f)
        cls = SingularityClass("F", 1.0, value, 0.0)
        return WeightFamily(weights, cls, "exp-weight",
                            note="constant weights e^c", params=params)

    if p_f < 0.0:
        # g(t) = sum_m exp(c m^p) t^m / m = -log(1-t) + sum_{k>=1} c^k/k! Li_{1-kp}(t)
        K = 0.0
        term_k = 1.0
        for k in range(1, 400):
            term_k *= c_f / k
            add = term_k * riemann_zeta(1.0 - k * p_f)
            K += add
            if abs(add) <= 1e-16 * (1.0 + abs(K)):
                break
        else:
            raise ConvergenceError("K series for exp-weight did not converge")
        cls = SingularityClass("F", 1.0, 1.0, K)
        return WeightFamily(weights, cls, "exp-weight", params=params)

    # 0 < theta_exp < 1
    if c_f > 0:
        return WeightFamily(weights, None, "exp-weight", status=STATUS_OPEN,
                            note="stretched-exponential growth: asymptotics open",
                            params=params)
    return WeightFamily(weights, None, "exp-weight", status=STATUS_UNSUPPORTED,
                        note="g bounded at 1 without log term; transfer not applicable",
                        params=params)


def alpha_exp_family(alpha, amp=0.0, power=2.0) -> WeightFamily:
    """theta_m = exp(-alpha_m) with alpha_m = alpha + amp/m^power.

    Constant exponents (amp = 0) give class F(1, e^{-alpha}) with K = 0;
    perturbed exponents give eF(1, e^{-alpha}, min(power,1)) with
    K = sum (e^{-alpha_m} - e^{-alpha})/m computed numerically.
    """
    alpha_f = float(_to_fraction(alpha)) if isinstance(alpha, str) else float(alpha)
    amp_f = float(_to_fraction(amp)) if isinstance(amp, str) else float(amp)
    power_f = float(_to_fraction(power)) if isinstance(power, str) else float(power)
    theta_lim = math.exp(-alpha_f)

    def eval_fn(m: int) -> float:
        return math.exp(-(alpha_f + amp_f / m**power_f))

    weights = WeightSequence(eval_fn, name=f"alpha-exp({alpha},{amp},{power})")
    params = {"alpha": alpha_f, "amp": amp_f, "power": power_f}
    if amp_f == 0.0:
        cls = SingularityClass("F", 1.0, theta_lim, 0.0)
        return WeightFamily(weights, cls, "alpha-exp", params=params)
    if power_f <= 0:
        raise UsageError(f"perturbation power must be > 0, got {power}")
    K = theta_shift_constant(weights, theta_lim, mode="per-m")
    cls = SingularityClass("eF", 1.0, theta_lim, K, gamma=min(power_f, 1.0))
    return WeightFamily(weights, cls, "alpha-exp", params=params)


def theta_shift_constant(theta_seq, theta_limit: float, mode: str = "per-m",
                         tol: float = 1e-10, max_m: int = 1 << 21) -> float:
    """K = sum_m (theta_m - theta)/m for weights converging to theta.

    mode selects the summability condition being relied on (and checked):
    "per-m" tests sum |theta_m - theta|/m, "absolute" tests
    sum |theta_m - theta|.  Convergence is declared when dyadic blocks of
    the tested series decay geometrically and the extrapolated tail drops
    below tol; otherwise ConvergenceError.
    """
    if mode not in ("per-m", "absolute"):
        raise UsageError(f"mode must be 'per-m' or 'absolute', got {mode!r}")
    theta_fn = theta_seq.theta if isinstance(theta_seq, WeightSequence) else theta_seq
    total = 0.0
    block_lo = 1
    prev_block = None
    # Full dyadic blocks only: a truncated final block has an artificially
    # small sum and would fake geometric decay.
    while 2 * block_lo <= max_m + 1:
        block_hi = 2 * block_lo
        signed = 0.0
        tested = 0.0
        for m in range(block_lo, block_hi):
            diff = theta_fn(m) - theta_limit
            signed += diff / m
            tested += abs(diff) / m if mode == "per-m" else abs(diff)
        total += signed
        if prev_block is not None and block_lo >= 16:
            if tested <= max(prev_block, 1e-300) * 0.9:
                ratio = tested / prev_block if prev_block > 0 else 0.0
                tail = tested * ratio / (1.0 - ratio) if ratio > 0 else 0.0
                if tail <= tol:
                    return total
            elif tested <= tol * 1e-3:
                return total
        prev_block = tested
        block_lo = block_hi
    raise ConvergenceError(
        f"sum of (theta_m - {theta_limit})/m shows no geometric decay by m = {max_m}")


# -- coefficient asymptotics ------------------------------------------------


def _near_nonpositive_integer(z: complex, eps: float = 1e-13) -> bool:
    re_round = round(z.real)
    return (abs(z.imag) <= eps and re_round <= 0
            and abs(z.real - re_round) <= eps)


def hwang_estimate(cls: SingularityClass, s_at_r, n: int, w) -> complex:
    """Transfer main term for [t^n] exp(w*g(t)).

        e^{K w} * n^{w theta - 1} * r^{-n} * S(r, w) / Gamma(theta w)

    Returns 0 when theta*w sits on a pole of Gamma (the main term
    genuinely vanishes there and lower-order terms take over).
    """
    if not isinstance(cls, SingularityClass):
        raise UsageError("cls must be a SingularityClass")
    if not (isinstance(n, (int, float)) and n > 0):
        raise UsageError(f"n must be positive, got {n!r}")
    w = complex(w)
    z = cls.theta * w
    if _near_nonpositive_integer(z):
        return 0.0 + 0.0j
    exponent = cls.K * w + (w * cls.theta - 1.0) * math.log(n) - n * math.log(cls.r)
    try:
        scale = cmath.exp(exponent)
    except OverflowError as exc:
        raise UsageError(f"estimate overflows at n={n}, r={cls.r}") from exc
    return scale * complex(s_at_r) * reciprocal_gamma(z)


def asymptotic_hn(cls: SingularityClass, n: int) -> float:
    """Leading term of the normalization: e^K n^{theta-1} / (r^n Gamma(theta))."""
    if not isinstance(cls, SingularityClass):
        raise UsageError("cls must be a SingularityClass")
    if not (isinstance(n, (int, float)) and n > 0):
        raise UsageError(f"n must be positive, got {n!r}")
    if cls.theta <= 0 or cls.main_term_zero:
        raise UnsupportedClassError(
            "main term vanishes (theta = 0); no leading-order h_n available")
    log_value = cls.K + (cls.theta - 1.0) * math.log(n) - n * math.log(cls.r)
    try:
        return math.exp(log_value) / math.gamma(cls.theta)
    except OverflowError as exc:
        raise UsageError(f"estimate overflows at n={n}, r={cls.r}") from exc


def mod_poisson_limit(theta: float, s: float) -> complex:
    """Limiting function Gamma(theta)/Gamma(theta e^{is}) of the K_n law."""
    if theta <= 0:
        raise UsageError(f"theta must be > 0, got {theta}")
    return complex_gamma(theta) * reciprocal_gamma(theta * cmath.exp(1j * s))


@dataclass(frozen=True)
class LargeDeviationEstimate:
    estimate: float
    t_n: float
    x: float
    rate: float  # Cramer rate I(x) = x log x - x + 1 of the Poisson family
    tilt: float  # conjugate point h = log x


def large_deviation_estimate(theta: float, K: float, n, k: int) -> LargeDeviationEstimate:
    """Sharp large-deviation estimate for P[K_n = k], k ~ x * t_n.

        e^{-t_n} t_n^k / k! * Gamma(theta) / (Gamma(x) Gamma(theta x))

    with t_n = K + theta log n and x = k/t_n.  At x = 1 this collapses
    to the bare Poisson(t_n) mass.  n may be any positive real (so exact
    collapse points can be hit by an e^k surrogate).
    """
    if theta <= 0:
        raise UsageError(f"theta must be > 0, got {theta}")
    if not (isinstance(n, (int, float)) and n > 1):
        raise UsageError(f"n must be > 1, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise UsageError(f"k must be a positive integer, got {k!r}")
    t_n = K + theta * math.log(n)
    if t_n <= 0:
        raise UsageError(f"t_n = {t_n} must be > 0")
    x = k / t_n
    log_poisson = -t_n + k * math.log(t_n) - math.lgamma(k + 1)
    correction = math.lgamma(theta) - math.lgamma(x) - math.lgamma(theta * x)
    estimate = math.exp(log_poisson + correction)
    rate = x * math.log(x) - x + 1.0
    return LargeDeviationEstimate(estimate, t_n, x, rate, math.log(x))


# -- Lindelof integral continuation ----------------------------------------


@dataclass(frozen=True)
class LindelofResult:
    value: complex
    error_estimate: float


def lindelof_eval(phi: Callable[[complex], complex], t,
                  half_height: float = 24.0, step: float = 0.0625) -> LindelofResult:
    """Analytic continuation of g(t) = sum_k phi(k) (-t)^k by the integral

        g(t) = -(1/2 pi i) * int_{1/2 - i inf}^{1/2 + i inf}
                   phi(z) t^z pi/sin(pi z) dz,

    evaluated by the trapezoid rule on z = 1/2 + iy, |y| <= half_height.
    Valid while phi grows slower than e^{pi |z|} against the kernel decay
    2 pi e^{-pi |y|} weighted by e^{|arg t| |y|}; a non-decaying integrand
    raises ConvergenceError.  Returns the value and a truncation +
    discretization error estimate (coarse-grid comparison plus an
    exponential-tail extrapolation).
    """
    if not callable(phi):
        raise UsageError("phi must be callable")
    t = complex(t)
    if t == 0:
        raise UsageError("t must be nonzero")
    if t.real < 0 and t.imag == 0:
        raise UsageError("t on the negative real axis is outside |arg t| < pi")
    if not (half_height > 0 and step > 0):
        raise UsageError("half_height and step must be > 0")

    log_t = cmath.log(t)
    n_steps = int(math.ceil(half_height / step))
    height = n_steps * step

    def integrand(y: float) -> complex:
        z = complex(0.5, y)
        return phi(z) * cmath.exp(z * log_t) * math.pi / cmath.sin(math.pi * z)

    values = [integrand(-height + j * step) for j in range(2 * n_steps + 1)]
    mags = [abs(v) for v in values]
    peak = max(mags)
    end_lo, end_hi = mags[0], mags[-1]
    if peak > 0 and max(end_lo, end_hi) > 1e-6 * peak:
        raise ConvergenceError(
            "integrand has not decayed at the truncation height; "
            "increase half_height or reduce |arg t|")

    def trapezoid(vals, h):
        return h * (sum(vals[1:-1]) + 0.5 * (vals[0] + vals[-1]))

    fine = trapezoid(values, step)
    coarse = trapezoid(values[::2], 2 * step)
    value_fine = -fine / (2.0 * math.pi)
    value_coarse = -coarse / (2.0 * math.pi)
    discretization = abs(value_fine - value_coarse)

    # exponential tail extrapolation from the magnitudes at H/2 and H
    mid_mag = mags[len(mags) // 4] or 1e-300
    end_mag = max(end_lo, end_hi)
    tail = 0.0
    if end_mag > 0:
        rate = math.log(mid_mag / end_mag) / (height / 2.0)
        if rate <= 0:
            raise ConvergenceError("integrand magnitude is not decaying along the contour")
        tail = end_mag / rate / math.pi
    return LindelofResult(value_fine, discretization + tail)
