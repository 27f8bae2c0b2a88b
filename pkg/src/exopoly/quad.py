"""Gaussian quadrature for the classical weights and convergence-controlled
integration for their rational extensions.

The rational weights  x^k e^-x / (x+k)^2  on (0, inf)  and
(1-x)^a (1+x)^b / (x-b)^2  on [-1, 1]  are integrated by folding the rational
factor into the integrand and applying the underlying classical Gauss rule,
doubling the node count until two successive estimates agree.  The integrand
is then analytic in a neighbourhood of the domain (the poles at -k and b stay
outside), so the Gauss estimates converge geometrically and the doubling test
is a reliable error gauge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .polycore import Poly, RationalLike, as_rational
from .solver import tridiagonal_eigh

MAX_NODES_DEFAULT = 2**13
REL_TOL_DEFAULT = 1e-12


class QuadratureError(RuntimeError):
    """Raised when a rule cannot be built or an integral does not converge."""


@dataclass(frozen=True)
class WeightSpec:
    """A weight function for orthogonality integrals.

    kind is one of "laguerre", "jacobi", "x1-laguerre", "x1-jacobi"; the x1
    kinds carry the extra rational factor 1/(x+k)^2 resp. 1/(x-b)^2 on top of
    the classical density.  For x1-jacobi the parameters must keep |b| > 1 so
    that the denominator never vanishes on [-1, 1].
    """

    kind: str
    k: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind in ("laguerre", "x1-laguerre"):
            if self.k is None:
                raise ValueError(f"{self.kind} weight needs parameter k")
            if self.kind == "x1-laguerre" and self.k <= 0:
                raise ValueError("x1-laguerre weight requires k > 0")
            if self.kind == "laguerre" and self.k <= -1:
                raise ValueError("laguerre weight requires k > -1")
        elif self.kind in ("jacobi", "x1-jacobi"):
            if self.alpha is None or self.beta is None:
                raise ValueError(f"{self.kind} weight needs alpha and beta")
            if self.alpha <= -1 or self.beta <= -1:
                raise ValueError("jacobi weight requires alpha, beta > -1")
            if self.kind == "x1-jacobi":
                if self.alpha == self.beta:
                    raise ValueError("x1-jacobi requires alpha != beta")
                if abs(self.b_constant) <= 1:
                    raise ValueError(
                        "x1-jacobi weight has a pole inside [-1,1]: |b| <= 1"
                    )
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    # constructors ---------------------------------------------------------

    @staticmethod
    def laguerre(k: RationalLike) -> "WeightSpec":
        return WeightSpec(kind="laguerre", k=as_rational(k))

    @staticmethod
    def x1_laguerre(k: RationalLike) -> "WeightSpec":
        return WeightSpec(kind="x1-laguerre", k=as_rational(k))

    @staticmethod
    def jacobi(alpha: RationalLike, beta: RationalLike) -> "WeightSpec":
        return WeightSpec(kind="jacobi", alpha=as_rational(alpha), beta=as_rational(beta))

    @staticmethod
    def x1_jacobi(alpha: RationalLike, beta: RationalLike) -> "WeightSpec":
        return WeightSpec(
            kind="x1-jacobi", alpha=as_rational(alpha), beta=as_rational(beta)
        )

    # properties -----------------------------------------------------------

    @property
    def domain(self) -> tuple[float, float]:
        if self.kind in ("laguerre", "x1-laguerre"):
            return (0.0, math.inf)
        return (-1.0, 1.0)

    @property
    def b_constant(self) -> Fraction:
        """The pole location b = (beta+alpha)/(beta-alpha) of the x1-jacobi factor."""
        if self.alpha is None or self.beta is None or self.alpha == self.beta:
            raise ValueError("b is defined only for jacobi kinds with alpha != beta")
        return (self.beta + self.alpha) / (self.beta - self.alpha)

    @property
    def is_rational_extension(self) -> bool:
        return self.kind.startswith("x1-")

    def classical_base(self) -> "WeightSpec":
        """The classical weight underlying an x1 kind (identity otherwise)."""
        if self.kind == "x1-laguerre":
            return WeightSpec.laguerre(self.k)
        if self.kind == "x1-jacobi":
            return WeightSpec.jacobi(self.alpha, self.beta)
        return self

    def rational_factor(self, x: np.ndarray) -> np.ndarray:
        """The factor multiplying the classical density (1 for classical kinds)."""
        if self.kind == "x1-laguerre":
            return 1.0 / (x + float(self.k)) ** 2
        if self.kind == "x1-jacobi":
            return 1.0 / (x - float(self.b_constant)) ** 2
        return np.ones_like(np.asarray(x, dtype=float))

    def density(self, x: np.ndarray) -> np.ndarray:
        """Full weight density, for reference plots and direct oracles."""
        x = np.asarray(x, dtype=float)
        if self.kind in ("laguerre", "x1-laguerre"):
            base = x ** float(self.k) * np.exp(-x)
        else:
            base = (1 - x) ** float(self.alpha) * (1 + x) ** float(self.beta)
        return base * self.rational_factor(x)

    def cache_key(self) -> tuple:
        return (self.kind, str(self.k), str(self.alpha), str(self.beta))


@dataclass(frozen=True)
class Recurrence:
    """Monic three-term recurrence p_{i+1} = (x - a_i) p_i - b_i p_{i-1}.

    ``mu0`` is the total mass of the weight; b_0 is unused by the recurrence
    itself but kept 0 by convention.
    """

    a: np.ndarray
    b: np.ndarray
    mu0: float


def recurrence_coefficients(weight: WeightSpec, n: int) -> Recurrence:
    """Three-term recurrence coefficients of the classical weight, length n."""
    w = weight.classical_base()
    if w.kind == "laguerre":
        k = float(w.k)
        i = np.arange(n, dtype=float)
        a = 2 * i + k + 1
        b = i * (i + k)
        mu0 = math.gamma(k + 1)
        return Recurrence(a=a, b=b, mu0=mu0)
    al, be = float(w.alpha), float(w.beta)
    s = al + be
    i = np.arange(n, dtype=float)
    a = np.empty(n)
    b = np.zeros(n)
    a[0] = (be - al) / (s + 2)
    if n > 1:
        ii = i[1:]
        a[1:] = (be**2 - al**2) / ((2 * ii + s) * (2 * ii + s + 2))
        # i = 1 written with the (1 + s) factor cancelled so s = -1 stays finite
        b[1] = 4 * (1 + al) * (1 + be) / ((2 + s) ** 2 * (3 + s))
        if n > 2:
            jj = i[2:]
            b[2:] = (
                4 * jj * (jj + al) * (jj + be) * (jj + s)
                / ((2 * jj + s) ** 2 * (2 * jj + s + 1) * (2 * jj + s - 1))
            )
    mu0 = 2 ** (s + 1) * math.exp(
        math.lgamma(al + 1) + math.lgamma(be + 1) - math.lgamma(s + 2)
    )
    return Recurrence(a=a, b=b, mu0=mu0)


def legendre_recurrence(n: int) -> Recurrence:
    """Legendre is the alpha = beta = 0 Jacobi weight."""
    return recurrence_coefficients(WeightSpec.jacobi(0, 0), n)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights of an n-point Gauss rule; exact through degree 2n-1."""

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, np.asarray(f(self.nodes), dtype=float)))

    def to_csv(self, header: str = "") -> str:
        lines = []
        if header:
            lines.append(f"# {header}")
        lines.append("node,weight")
        for x, w in zip(self.nodes, self.weights):
            lines.append(f"{float(x)!r},{float(w)!r}")
        return "\n".join(lines) + "\n"


def golub_welsch(rec: Recurrence, n: int) -> QuadratureRule:
    """n-point Gauss rule from the symmetric tridiagonal Jacobi matrix.

    Nodes are the eigenvalues of the Jacobi matrix (via the tridiagonal
    solver of :mod:`exopoly.solver`).  Weights use the equivalent Christoffel
    form w_i = 1 / sum_m ptilde_m(x_i)^2 evaluated in log scale: the naive
    "first eigenvector component squared" loses the extreme Laguerre weights
    to absolute-precision underflow already around n = 32, whereas this form
    keeps every weight positive and relatively accurate.
    """
    if n < 1:
        raise ValueError("rule needs at least one node")
    if len(rec.a) < n:
        raise QuadratureError("recurrence does not provide enough coefficients")
    if np.any(rec.b[1:n] <= 0):
        raise QuadratureError("recurrence coefficients are not from a positive measure")
    diag = np.asarray(rec.a[:n], dtype=float)
    off = np.sqrt(np.asarray(rec.b[1:n], dtype=float))
    nodes = np.atleast_1d(tridiagonal_eigh(diag, off, values_only=True))
    weights = _christoffel_weights(rec, nodes, n)
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise QuadratureError("negative quadrature weight produced")
    # true weights below ~1e-308 (possible past n ~ 256 on unbounded domains)
    # underflow to +0.0; their contributions are below representability anyway
    if n <= 128 and np.any(weights == 0):
        raise QuadratureError("unexpected zero quadrature weight at small n")
    return QuadratureRule(nodes=nodes, weights=weights, exact_degree=2 * n - 1)


def _christoffel_weights(rec: Recurrence, nodes: np.ndarray, n: int) -> np.ndarray:
    """w_i = 1 / sum_{m<n} ptilde_m(x_i)^2 with the orthonormal recurrence.

    The orthonormal values are carried as q * exp(s) with a per-node log
    scale s, and the sum is accumulated with logaddexp, so extreme nodes
    (where the true weight is ~1e-200) neither overflow nor flush to zero.
    """
    x = nodes
    q_prev = np.zeros_like(x)
    q = np.ones_like(x)
    s = np.full_like(x, -0.5 * math.log(rec.mu0))  # ptilde_0 = 1/sqrt(mu0)
    log_sum = 2 * s.copy()
    sqrt_b = np.sqrt(np.maximum(rec.b[:n], 0.0))
    for m in range(n - 1):
        q_next = ((x - rec.a[m]) * q - sqrt_b[m] * q_prev) / sqrt_b[m + 1]
        q_prev, q = q, q_next
        mag = np.maximum(np.abs(q), np.abs(q_prev))
        big = mag > 1e120
        if np.any(big):
            q[big] *= 1e-120
            q_prev[big] *= 1e-120
            s[big] += math.log(1e120)
        nz = q != 0
        log_sum[nz] = np.logaddexp(log_sum[nz], 2 * (np.log(np.abs(q[nz])) + s[nz]))
    return np.exp(-log_sum)


_RULE_CACHE: dict[tuple, QuadratureRule] = {}


def gauss_rule(weight: WeightSpec, n: int) -> QuadratureRule:
    """Cached n-point Gauss rule for the classical base of ``weight``."""
    key = weight.classical_base().cache_key() + (n,)
    rule = _RULE_CACHE.get(key)
    if rule is None:
        rule = golub_welsch(recurrence_coefficients(weight, n), n)
        _RULE_CACHE[key] = rule
    return rule


def _as_callable(f) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, Poly):
        return f
    if callable(f):
        return f
    arr = np.asarray(f, dtype=float)  # ascending coefficients

    def evaluate(x):
        return np.polynomial.polynomial.polyval(x, arr)

    return evaluate


def integrate(
    f,
    weight: WeightSpec,
    rel_tol: float = REL_TOL_DEFAULT,
    max_nodes: int = MAX_NODES_DEFAULT,
) -> float:
    """Integral of f against the weight, with an explicit convergence check.

    For the x1 kinds the rational factor is folded into the integrand and the
    classical rule of the base weight is applied.  The node count doubles from
    16 until two successive estimates agree to ``rel_tol`` relative to the
    L1 size sum_i w_i |g(x_i)| of the integrand (so integrals that vanish by
    cancellation, e.g. orthogonality cross terms, still converge sensibly).
    Never silently returns: raises QuadratureError past ``max_nodes``.
    """
    func = _as_callable(f)
    factor_needed = weight.is_rational_extension

    def g(x):
        vals = np.asarray(func(x), dtype=float)
        if vals.shape == ():
            vals = np.full(np.shape(x), float(vals))
        if factor_needed:
            vals = vals * weight.rational_factor(x)
        return vals

    n = 16
    rule = gauss_rule(weight, n)
    prev = rule.integrate(g)
    while 2 * n <= max_nodes:
        n *= 2
        rule = gauss_rule(weight, n)
        vals = np.asarray(g(rule.nodes), dtype=float)
        cur = float(np.dot(rule.weights, vals))
        scale = float(np.dot(rule.weights, np.abs(vals)))
        if scale == 0.0:
            return 0.0
        if abs(cur - prev) <= rel_tol * max(scale, abs(cur)):
            return cur
        prev = cur
    raise QuadratureError(
        f"integral did not converge to rel_tol={rel_tol} within {max_nodes} nodes"
    )


def gram_matrix(
    polys: Sequence[Union[Poly, np.ndarray, Callable]],
    weight: WeightSpec,
    rel_tol: float = REL_TOL_DEFAULT,
) -> np.ndarray:
    """Matrix of pairwise inner products under the weight.

    Each entry is computed once and mirrored, so the result is symmetric by
    construction.  Convergence failures of :func:`integrate` propagate.
    """
    if not len(polys):
        raise ValueError("gram_matrix needs at least one polynomial")
    fs = [_as_callable(p) for p in polys]
    n = len(fs)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            fi, fj = fs[i], fs[j]
            val = integrate(lambda x: np.asarray(fi(x)) * np.asarray(fj(x)),
                            weight, rel_tol=rel_tol)
            g[i, j] = g[j, i] = val
    return g
