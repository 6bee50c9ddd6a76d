"""Generalized weighted permutations: weight F_m(c_m) per multiplicity.

Instead of theta_m^{C_m}, each cycle length m contributes F_m(C_m) with
F_m(0) = 1 and F_m > 0:

    P[sigma] = (1 / (h_n(F) n!)) * prod_m F_m(C_m(sigma)).

With the exponential-like series EG(A, x) = sum_k A(k) x^k / k!, the
normalization generating function factorizes over cycle lengths,

    sum_n h_n(F) t^n = prod_m EG(F_m, t^m / m),

and marginals/cycle-count laws come from truncating that product.  For
F_m(k) = theta_m^k every formula collapses to the plain weighted
measure, which the tests exploit as an exact reduction identity.

Two concrete constructions:

* exp_polynomial_weights: F_m(k) = k! [x^k] exp(theta x + sum b_j x^j),
  the same A for every m.  Then EG(F_m, x) = exp(P(x)) identically, so
  sum h_n t^n = exp(-theta log(1-t) + sum_j b_j Li_j(t^j)); the package
  exposes that second route as exp_polynomial_log_series for a two-path
  identity check.  Class F(1, theta) with K = sum_j b_j zeta(j).
* spatial models: a cycle of length m carries e^{-alpha_m} times a sum
  of mode factors e^{-eps_k m}, multiplicatively over cycles.  That is
  again a plain weighted measure with effective weights
  theta'_m = e^{-alpha_m} sum_k e^{-eps_k m}; spatial_class_params
  aggregates the singularity data of the base family over the modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .asymptotics import SingularityClass
from .errors import ConvergenceError, UsageError
from .measure import WeightSequence, _to_fraction
from .pmf import Pmf
from .series import DOUBLE, EXACT, TruncatedSeries, ts_exp
from .specfun import riemann_zeta

_VALUE_CACHE_LIMIT = 50_000


class GeneralizedWeights:
    """Per-multiplicity weights F_m(k) > 0 with F_m(0) = 1."""

    def __init__(self, eval_fn: Callable[[int, int], float], name: str = "custom",
                 exact_fn: Optional[Callable[[int, int], Fraction]] = None,
                 singularity=None):
        if not callable(eval_fn):
            raise UsageError("eval_fn must be callable")
        self._eval = eval_fn
        self._exact = exact_fn
        self.name = name
        self.singularity = singularity
        self._cache: dict = {}
        self._cache_exact: dict = {}

    @classmethod
    def from_theta(cls, theta: WeightSequence) -> "GeneralizedWeights":
        """The reduction F_m(k) = theta_m^k (requires theta_m > 0)."""

        def eval_fn(m: int, k: int) -> float:
            return theta.theta(m) ** k

        def exact_fn(m: int, k: int) -> Fraction:
            return theta.theta_exact(m) ** k

        return cls(eval_fn, name=f"power({theta.name})", exact_fn=exact_fn)

    def value(self, m: int, k: int) -> float:
        self._check(m, k)
        if k == 0:
            return 1.0
        key = (m, k)
        if key in self._cache:
            return self._cache[key]
        v = float(self._eval(m, k))
        if not (math.isfinite(v) and v > 0):
            raise UsageError(f"F_{m}({k}) = {v} must be finite and > 0")
        if len(self._cache) < _VALUE_CACHE_LIMIT:
            self._cache[key] = v
        return v

    def value_exact(self, m: int, k: int) -> Fraction:
        self._check(m, k)
        if k == 0:
            return Fraction(1)
        key = (m, k)
        if key in self._cache_exact:
            return self._cache_exact[key]
        if self._exact is not None:
            v = _to_fraction(self._exact(m, k))
        else:
            v = Fraction(self.value(m, k))
        if v <= 0:
            raise UsageError(f"F_{m}({k}) = {v} must be > 0")
        if len(self._cache_exact) < _VALUE_CACHE_LIMIT:
            self._cache_exact[key] = v
        return v

    def _check(self, m: int, k: int) -> None:
        if not isinstance(m, int) or m < 1:
            raise UsageError(f"cycle length must be an integer >= 1, got {m!r}")
        if not isinstance(k, int) or k < 0:
            raise UsageError(f"multiplicity must be an integer >= 0, got {k!r}")

    def __repr__(self) -> str:
        return f"GeneralizedWeights({self.name})"


def _check_backend(backend: str) -> None:
    if backend not in (EXACT, DOUBLE):
        raise UsageError(f"backend must be 'exact' or 'double', got {backend!r}")


def eg_series(fweights: GeneralizedWeights, m: int, order: int,
              backend: str = EXACT) -> TruncatedSeries:
    """EG(F_m, x) = sum_k F_m(k) x^k / k! truncated at x^order."""
    _check_backend(backend)
    if not isinstance(order, int) or order < 0:
        raise UsageError(f"order must be >= 0, got {order!r}")
    coeffs = []
    for k in range(order + 1):
        if backend == EXACT:
            coeffs.append(fweights.value_exact(m, k) / math.factorial(k))
        else:
            coeffs.append(fweights.value(m, k) / math.factorial(k))
    return TruncatedSeries(coeffs, backend)


def _factor_coeffs(fweights: GeneralizedWeights, m: int, kmax: int, backend: str) -> list:
    """Coefficients of EG(F_m, t^m/m) on the t^{m k} lattice, k = 0..kmax."""
    out = []
    for k in range(kmax + 1):
        if backend == EXACT:
            out.append(fweights.value_exact(m, k) / (math.factorial(k) * Fraction(m) ** k))
        else:
            out.append(fweights.value(m, k) / (math.factorial(k) * float(m) ** k))
    return out


def generalized_normalization(fweights: GeneralizedWeights, n_max: int,
                              backend: str = EXACT) -> list:
    """h_0(F), ..., h_{n_max}(F) via the product over cycle lengths."""
    _check_backend(backend)
    if not isinstance(n_max, int) or n_max < 0:
        raise UsageError(f"n_max must be >= 0, got {n_max!r}")
    zero = Fraction(0) if backend == EXACT else 0.0
    acc = [zero] * (n_max + 1)
    acc[0] = Fraction(1) if backend == EXACT else 1.0
    for m in range(1, n_max + 1):
        fac = _factor_coeffs(fweights, m, n_max // m, backend)
        new = [zero] * (n_max + 1)
        for j in range(n_max + 1):
            if acc[j] == 0:
                continue
            aj = acc[j]
            for k, fk in enumerate(fac):
                pos = j + m * k
                if pos > n_max:
                    break
                new[pos] += aj * fk
        acc = new
    return acc


def generalized_joint_cycle_pmf(fweights: GeneralizedWeights, n: int, b: int,
                                backend: str = EXACT) -> Pmf:
    """Law of (C_1, ..., C_b) under the generalized measure.

    P[c] = (1/h_n(F)) * prod_{m<=b} F_m(c_m)/(c_m! m^{c_m})
                      * [t^{n - sum m c_m}] prod_{m>b} EG(F_m, t^m/m)
    """
    _check_backend(backend)
    if not isinstance(n, int) or n < 1:
        raise UsageError(f"n must be a positive integer, got {n!r}")
    if not isinstance(b, int) or not 1 <= b <= n:
        raise UsageError(f"b must satisfy 1 <= b <= n, got {b!r}")

    zero = Fraction(0) if backend == EXACT else 0.0
    tail = [zero] * (n + 1)
    tail[0] = Fraction(1) if backend == EXACT else 1.0
    for m in range(b + 1, n + 1):
        fac = _factor_coeffs(fweights, m, n // m, backend)
        new = [zero] * (n + 1)
        for j in range(n + 1):
            if tail[j] == 0:
                continue
            aj = tail[j]
            for k, fk in enumerate(fac):
                pos = j + m * k
                if pos > n:
                    break
                new[pos] += aj * fk
        tail = new

    h = generalized_normalization(fweights, n, backend)
    hn = h[n]
    if hn == 0:
        from .errors import DegenerateMeasureError

        raise DegenerateMeasureError(f"normalization h_{n}(F) = 0")

    factors = [_factor_coeffs(fweights, m, n // m, backend) for m in range(1, b + 1)]
    mass: dict = {}

    def fill(m: int, budget: int, prefix: tuple, weight):
        if m > b:
            mass[prefix] = weight * tail[budget] / hn
            return
        for count in range(budget // m + 1):
            fill(m + 1, budget - m * count, prefix + (count,), weight * factors[m - 1][count])

    one = Fraction(1) if backend == EXACT else 1.0
    fill(1, n, (), one)
    tol = 0 if backend == EXACT else 1e-9
    return Pmf(mass, tol=tol)


def generalized_total_cycles_pmf(fweights: GeneralizedWeights, n: int,
                                 backend: str = EXACT) -> Pmf:
    """Law of the total cycle count: coefficient of u^k t^n in
    prod_m EG(F_m, u t^m / m), normalized by h_n(F)."""
    _check_backend(backend)
    if not isinstance(n, int) or n < 1:
        raise UsageError(f"n must be a positive integer, got {n!r}")
    zero = Fraction(0) if backend == EXACT else 0.0
    one = Fraction(1) if backend == EXACT else 1.0
    # rows[j][k] = coefficient of t^j u^k; each EG factor adds u^k with t^{mk}
    rows = [[zero] * (j + 1) for j in range(n + 1)]
    rows[0][0] = one
    for m in range(1, n + 1):
        fac = _factor_coeffs(fweights, m, n // m, backend)
        new = [[zero] * (j + 1) for j in range(n + 1)]
        for j in range(n + 1):
            row = rows[j]
            for k in range(min(j, len(row) - 1) + 1):
                if row[k] == 0:
                    continue
                v = row[k]
                for i, fi in enumerate(fac):
                    pos = j + m * i
                    if pos > n:
                        break
                    new[pos][k + i] += v * fi
        rows = new
    final = rows[n]
    hn = sum(final)
    if hn == 0:
        from .errors import DegenerateMeasureError

        raise DegenerateMeasureError(f"normalization h_{n}(F) = 0")
    mass = {k: final[k] / hn for k in range(1, n + 1)}
    tol = 0 if backend == EXACT else 1e-9
    return Pmf(mass, tol=tol)


# -- exponential-polynomial family ------------------------------------------


class _ExpPolynomialTable:
    """Lazily extended coefficients of exp(P(x)), exact when P is rational."""

    def __init__(self, poly: dict):
        self.poly = dict(poly)
        self.exact = all(isinstance(c, Fraction) for c in poly.values())
        self._coeffs: Optional[list] = None
        self._order = -1

    def coefficient(self, k: int):
        if k > self._order:
            order = max(16, 2 * k)
            kind = EXACT if self.exact else DOUBLE
            zero = Fraction(0) if self.exact else 0.0
            coeffs = [zero] * (order + 1)
            for j, c in self.poly.items():
                if j <= order:
                    coeffs[j] = c
            self._coeffs = list(ts_exp(TruncatedSeries(coeffs, kind)).coeffs)
            self._order = order
        return self._coeffs[k]


def exp_polynomial_weights(theta, higher: dict) -> GeneralizedWeights:
    """F_m(k) = k! [x^k] exp(theta x + sum_{j>=2} b_j x^j), independent of m.

    higher maps degree j >= 2 to b_j.  The attached singularity class is
    F(1, theta) with K = sum_j b_j zeta(j); see
    exp_polynomial_log_series for the matching direct route.
    """
    theta_f = _to_fraction(theta)
    if theta_f <= 0:
        raise UsageError(f"theta must be > 0, got {theta}")
    poly: dict = {1: theta_f}
    for j, b in higher.items():
        if not isinstance(j, int) or j < 2:
            raise UsageError(f"polynomial degrees must be integers >= 2, got {j!r}")
        poly[j] = _to_fraction(b)
    table = _ExpPolynomialTable(poly)

    def eval_fn(m: int, k: int) -> float:
        return float(table.coefficient(k)) * math.factorial(k)

    def exact_fn(m: int, k: int) -> Fraction:
        return table.coefficient(k) * math.factorial(k)

    K = sum(float(b) * riemann_zeta(float(j)) for j, b in poly.items() if j >= 2)
    cls = SingularityClass("F", 1.0, float(theta_f), K)
    name = "exp-poly(" + ",".join(f"{j}:{c}" for j, c in sorted(poly.items())) + ")"
    return GeneralizedWeights(eval_fn, name=name, exact_fn=exact_fn, singularity=cls)


def exp_polynomial_log_series(theta, higher: dict, order: int,
                              backend: str = EXACT) -> TruncatedSeries:
    """log of the normalization generating function of the exp-polynomial
    family, assembled directly:

        theta * sum_m t^m/m  +  sum_j b_j sum_i t^{ij} / i^j.

    ts_exp of this must reproduce generalized_normalization exactly.
    """
    _check_backend(backend)
    theta_f = _to_fraction(theta)
    zero = Fraction(0) if backend == EXACT else 0.0
    coeffs = [zero] * (order + 1)
    for m in range(1, order + 1):
        add = theta_f / m
        coeffs[m] += add if backend == EXACT else float(add)
    for j, b in higher.items():
        b_f = _to_fraction(b)
        for i in range(1, order // j + 1):
            add = b_f / Fraction(i) ** j
            coeffs[i * j] += add if backend == EXACT else float(add)
    return TruncatedSeries(coeffs, backend)


# -- spatial models ----------------------------------------------------------


@dataclass(frozen=True)
class SpatialModel:
    """Finitely many modes with energies eps_k >= 0 and site exponents alpha_m.

    decays holds exact per-mode factors e^{-eps_k}; by default the exact
    binary value of the float, so the generalized route and the
    effective-weight reduction consume identical numbers.
    """

    eps_values: tuple
    alpha: object = 0.0  # constant or callable m -> alpha_m
    truncation_note: str = ""
    decays: Optional[tuple] = None

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_values)
        if not eps:
            raise UsageError("a spatial model needs at least one mode")
        if any(e < 0 for e in eps):
            raise UsageError(f"mode energies must be >= 0, got {eps}")
        object.__setattr__(self, "eps_values", eps)
        if self.decays is None:
            object.__setattr__(self, "decays",
                               tuple(Fraction(math.exp(-e)) for e in eps))
        else:
            decays = tuple(_to_fraction(d) for d in self.decays)
            if len(decays) != len(eps):
                raise UsageError("decays must match eps_values in length")
            if any(not 0 < d <= 1 for d in decays):
                raise UsageError("decay factors must lie in (0, 1]")
            object.__setattr__(self, "decays", decays)

    @classmethod
    def from_decays(cls, decays: Sequence, alpha=0.0, note: str = "") -> "SpatialModel":
        decays = tuple(_to_fraction(d) for d in decays)
        eps = tuple(-math.log(float(d)) for d in decays)
        return cls(eps, alpha=alpha, truncation_note=note, decays=decays)

    def alpha_at(self, m: int) -> float:
        return float(self.alpha(m)) if callable(self.alpha) else float(self.alpha)


def spatial_effective_weights(model: SpatialModel) -> WeightSequence:
    """theta'_m = e^{-alpha_m} * sum_k e^{-eps_k m} (exact reduction)."""

    decay_floats = [float(d) for d in model.decays]

    def eval_fn(m: int) -> float:
        return math.exp(-model.alpha_at(m)) * sum(q**m for q in decay_floats)

    def exact_fn(m: int) -> Fraction:
        site = Fraction(math.exp(-model.alpha_at(m)))
        return site * sum(q**m for q in model.decays)

    return WeightSequence(eval_fn, name="spatial", exact_fn=exact_fn)


def spatial_F(model: SpatialModel) -> GeneralizedWeights:
    """The generalized-measure form of a spatial model: per-cycle mode sums
    act multiplicatively, i.e. F_m(k) = (theta'_m)^k."""
    return GeneralizedWeights.from_theta(spatial_effective_weights(model))


def spatial_class_params(model: SpatialModel, base_class: SingularityClass) -> SingularityClass:
    """Aggregate singularity data of g'(t) = sum_m theta'_m t^m / m.

    base_class describes g_base(t) = sum_m e^{-alpha_m} t^m / m.  With
    rr = min_k e^{eps_k} and A the number of minimizing modes,

        radius -> rr * r,   strength -> A * theta_base,
        K -> A * K_base + sum_{non-minimal k} g_base(e^{-eps_k} * rr * r).
    """
    if not isinstance(base_class, SingularityClass):
        raise UsageError("base_class must be a SingularityClass")
    decay_floats = [float(d) for d in model.decays]
    qmax = max(decay_floats)
    minimal = [abs(q - qmax) <= 1e-12 * qmax for q in decay_floats]
    mult = sum(minimal)
    r_total = base_class.r / qmax
    K = mult * base_class.K
    for q, is_min in zip(decay_floats, minimal):
        if not is_min:
            K += _g_base_value(model, base_class, q / qmax * base_class.r)
    return SingularityClass(base_class.kind, r_total, mult * base_class.theta, K,
                            gamma=base_class.gamma)


def _g_base_value(model: SpatialModel, base_class: SingularityClass, x: float) -> float:
    """g_base(x) = sum_m e^{-alpha_m} x^m / m for |x| < base radius."""
    if abs(x) >= base_class.r:
        raise UsageError(f"g evaluation point {x} outside radius {base_class.r}")
    total = 0.0
    power = 1.0
    for m in range(1, 1_000_000):
        power *= x
        term = math.exp(-model.alpha_at(m)) * power / m
        total += term
        if abs(term) <= 1e-17 * (1.0 + abs(total)) and m > 8:
            return total
    raise ConvergenceError(f"series for g({x}) converged too slowly")
