"""Exceptional (X1 and Xj) Laguerre and Jacobi polynomials.

Three independent construction routes are provided and cross-checked:

* the first-order ladder operator applied to a classical polynomial
  (exact rational coefficients),
* the exact nullspace of the cleared exceptional differential equation,
* Gram-Schmidt orthogonalization of the seed sequences under the rational
  weight (floating point, quadrature-based).

The defining equations are verified as exact polynomial identities: the
"residual" functions return the equation's left-hand side with denominators
cleared, which is the zero polynomial precisely on eigenpolynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg

from . import quad
from .quad import REL_TOL_DEFAULT
from .polycore import (
    JacobiConstants,
    Poly,
    RationalLike,
    X,
    as_rational,
    jacobi_classical,
    laguerre_classical,
    rational_nullspace,
    rational_str,
)


@dataclass(frozen=True)
class XFamilySpec:
    """Identifies one exceptional family: base family, codimension, parameters."""

    family: str  # "laguerre" | "jacobi"
    j: int = 1
    k: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    def __post_init__(self):
        if self.j < 1:
            raise ValueError("codimension j must be >= 1")
        if self.family == "laguerre":
            if self.k is None or self.k <= 0:
                raise ValueError("exceptional Laguerre requires k > 0")
        elif self.family == "jacobi":
            if self.alpha is None or self.beta is None:
                raise ValueError("exceptional Jacobi requires alpha and beta")
            if self.alpha <= -1 or self.beta <= -1 or self.alpha == self.beta:
                raise ValueError("need alpha, beta > -1 and alpha != beta")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    def weight(self) -> quad.WeightSpec:
        if self.family == "laguerre":
            return quad.WeightSpec.x1_laguerre(self.k)
        return quad.WeightSpec.x1_jacobi(self.alpha, self.beta)


# ---------------------------------------------------------------------------
# operator routes
# ---------------------------------------------------------------------------

def x1_laguerre_op_route(nu: int, k: RationalLike) -> Poly:
    """Ladder-operator construction of the exceptional Laguerre member.

    Applies (x+k)(d/dx - 1) - 1 to the classical L_nu^(k-1); the result has
    degree nu+1 and satisfies the exceptional equation at index n = nu+1.
    """
    kq = as_rational(k)
    if kq <= 0:
        raise ValueError("requires k > 0")
    L = laguerre_classical(nu, kq - 1)
    return Poly((kq, 1)) * (L.derivative() - L) - L


def x1_jacobi_op_route(n: int, alpha: RationalLike, beta: RationalLike) -> Poly:
    """Ladder-operator construction of the exceptional Jacobi member.

    Applies [alpha+beta-(beta-alpha)x]((1+x) d/dx + beta + 1) + (beta-alpha)(1+x)
    to the classical P_n^(alpha-1, beta+1); the result has degree n+1 and is
    proportional to the exceptional member of index n+1.  The proportionality
    constant is whatever it is -- measured, never assumed (see
    :func:`x1_jacobi_raising_constant`).
    """
    al, be = as_rational(alpha), as_rational(beta)
    if al == be:
        raise ValueError("requires alpha != beta")
    if al - 1 <= -1 or be + 1 <= -1:
        raise ValueError("requires alpha > 0 so P^(alpha-1, beta+1) exists")
    P = jacobi_classical(n, al - 1, be + 1)
    one_plus_x = Poly((1, 1))
    return Poly((al + be, -(be - al))) * (one_plus_x * P.derivative() + (be + 1) * P) \
        + (be - al) * one_plus_x * P


def x1_jacobi_raising_constant(n: int, alpha: RationalLike, beta: RationalLike,
                               reference: Poly) -> Fraction:
    """Measured ratio between the operator-route output and a reference polynomial."""
    out = x1_jacobi_op_route(n, alpha, beta)
    return out.leading / reference.leading


# ---------------------------------------------------------------------------
# cleared differential-equation residuals
# ---------------------------------------------------------------------------

def x1_laguerre_ode_residual(f: Poly, k: RationalLike, n: int) -> Poly:
    """Cleared residual of the exceptional Laguerre equation at eigenvalue index n.

    -x(x+k) f'' + (x-k)[(k+x+1) f' - f] - (n-1)(x+k) f, exactly.  Zero
    polynomial iff f is the index-n eigenpolynomial (the eigenvalue being
    n-1 in the uncleared equation).
    """
    kq = as_rational(k)
    lam = as_rational(n) - 1
    fp, fpp = f.derivative(), f.derivative().derivative()
    x_plus_k = Poly((kq, 1))
    return (
        -(X * x_plus_k) * fpp
        + Poly((-kq, 1)) * (Poly((kq + 1, 1)) * fp - f)
        - lam * x_plus_k * f
    )


def x1_jacobi_ode_residual(f: Poly, alpha: RationalLike, beta: RationalLike,
                           n: int) -> Poly:
    """Cleared residual of the exceptional Jacobi equation at index n.

    (b-x)(x^2-1) f'' + 2a(1-bx)[(x-c) f' - f] - lambda (b-x) f with
    lambda = (n-1)(alpha+beta+n) and a, b, c the derived constants.
    """
    al, be = as_rational(alpha), as_rational(beta)
    jc = JacobiConstants.from_parameters(al, be)
    lam = (as_rational(n) - 1) * (al + be + n)
    fp, fpp = f.derivative(), f.derivative().derivative()
    b_minus_x = Poly((jc.b, -1))
    return (
        b_minus_x * Poly((-1, 0, 1)) * fpp
        + 2 * jc.a * Poly((1, -jc.b)) * (Poly((-jc.c, 1)) * fp - f)
        - lam * b_minus_x * f
    )


def xj_laguerre_ode_residual(f: Poly, k: RationalLike, j: int, n: RationalLike) -> Poly:
    """Cleared residual of the codimension-j exceptional Laguerre equation.

    -x(x+k) f'' + [(x-k)(k+x+1) - 2x(j-1)] f' - j(x-k) f - (n-j)(x+k) f.
    Reduces to :func:`x1_laguerre_ode_residual` at j=1.  The index n is
    accepted as a free rational: which n admit polynomial solutions is a
    question for :func:`xj_polynomial_solve`, not an assumption.
    """
    if j < 1:
        raise ValueError("codimension j must be >= 1")
    kq = as_rational(k)
    nq = as_rational(n)
    fp, fpp = f.derivative(), f.derivative().derivative()
    x_plus_k = Poly((kq, 1))
    first_order = Poly((-kq, 1)) * Poly((kq + 1, 1)) - (2 * (j - 1)) * X
    return (
        -(X * x_plus_k) * fpp
        + first_order * fp
        - j * Poly((-kq, 1)) * f
        - (nq - j) * x_plus_k * f
    )


def xj_polynomial_solve(k: RationalLike, j: int, n: RationalLike,
                        max_degree: int) -> list[Poly]:
    """Exact basis of polynomial solutions of the codimension-j equation.

    Builds the residual's action on monomials and computes the rational
    nullspace up to the requested degree.  An empty list is a legitimate
    answer (for j >= 2 the equation as stated generically has none).
    Basis vectors are returned monic.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    ncols = max_degree + 1
    nrows = max_degree + 2
    cols = []
    for d in range(ncols):
        res = xj_laguerre_ode_residual(Poly([0] * d + [1]), k, j, n)
        cols.append([res.coefficient(r) for r in range(nrows)])
    rows = [[cols[c][r] for c in range(ncols)] for r in range(nrows)]
    basis = rational_nullspace(rows)
    return [Poly(vec).monic() for vec in basis]


def xj_index_scan(k: RationalLike, j: int, n_values, max_degree: int) -> dict:
    """Report which indices n admit polynomial solutions, and their degrees."""
    found = {}
    for n in n_values:
        sols = xj_polynomial_solve(k, j, n, max_degree)
        if sols:
            found[str(as_rational(n))] = [p.degree for p in sols]
    return found


# ---------------------------------------------------------------------------
# quotient-compatible Xj instances (matrix pencil in the shifted variable)
# ---------------------------------------------------------------------------

def xj_quotient_residual_coeffs(f: np.ndarray, k: float, j: int,
                                A: float, B: float, c: float) -> np.ndarray:
    """Coefficients of the cleared quotient identity for g = f/(x+k)^j.

    Returns (x+k)^(j+2) * [x g'' + (k+1-x) g' + (c - A/(x+k) - B/(x+k)^2) g]
    as a float coefficient array; all-zero (to roundoff) iff the identity holds.
    """
    pp = np.polynomial.polynomial
    f = np.asarray(f, dtype=float)
    fp, fpp = pp.polyder(f), pp.polyder(f, 2)
    t = np.array([k, 1.0])  # x + k
    t2 = pp.polymul(t, t)
    x = np.array([0.0, 1.0])
    inner2 = pp.polysub(pp.polymul(fpp, t2),
                        pp.polymul(2.0 * j * fp, t))
    inner2 = pp.polyadd(inner2, j * (j + 1) * f)
    inner1 = pp.polysub(pp.polymul(fp, t), j * f)
    res = pp.polymul(x, inner2)
    res = pp.polyadd(res, pp.polymul(pp.polymul(np.array([k + 1, -1.0]), t), inner1))
    pot = pp.polysub(c * t2, pp.polyadd(A * t, np.array([B])))
    return pp.polyadd(res, pp.polymul(pot, f))


def xj_quotient_solve(k: float, j: int, n: int, drop_reducible: bool = True) -> list[dict]:
    """Polynomials f of degree n for which f/(x+k)^j solves a rational extension
    of the Laguerre equation.

    Demands  x g'' + (k+1-x) g' + (c - A/(x+k) - B/(x+k)^2) g = 0  with
    g = f/(x+k)^j.  Writing F(t) = f(t-k) in the shifted variable t = x+k and
    matching powers of t forces c = n-j and, whenever f(-k) != 0 (the
    non-reducible case), B = -j(j+1)k; the remaining unknowns are exactly the
    eigenpairs of a small tridiagonal matrix, with A the eigenvalue.  Each
    returned entry {"f": ascending monic float coefficients, "A", "B", "c"}
    has been re-verified against the cleared identity.

    Solutions with f(-k) = 0 are reducible (the quotient collapses to a lower
    codimension) and are dropped by default.  For j = 1 the branch A = 1
    appears at every n and carries the exceptional family; the remaining
    branches -- all of them for j >= 2 -- have n-dependent A, so no single
    n-independent potential of this form exists beyond the A = 1 family.
    """
    if j < 1 or n < j:
        raise ValueError("need j >= 1 and n >= j")
    kf = float(k)
    B = -j * (j + 1) * kf
    c = float(n - j)
    size = n + 1
    # coefficient matrix of the identity in the t-monomial basis; the t^(i+1)
    # row carries the -A t F term, so A is a plain eigenvalue
    m = np.zeros((size, size))
    for i in range(size):
        q = (i - j) * (i - j - 1)  # from t^2 F'' - 2j t F' + j(j+1) F on t^i
        m[i, i] = q + (i - j) * (2 * kf + 1)
        if i >= 1:
            m[i - 1, i] = -kf * q - B
        if i + 1 < size:
            m[i + 1, i] = n - i
    vals, vecs = scipy.linalg.eig(m)
    out = []
    for idx in np.argsort(vals.real):
        a_val = vals[idx]
        if abs(a_val.imag) > 1e-9 * (1 + abs(a_val.real)):
            continue
        phi = vecs[:, idx].real
        if abs(phi[-1]) < 1e-10:
            continue  # degree < n; belongs to a lower index
        phi = phi / phi[-1]
        if drop_reducible and abs(phi[0]) < 1e-8 * np.max(np.abs(phi)):
            continue
        # back to f(x) = sum_p phi_p (x+k)^p
        fcoef = np.zeros(size)
        powk = np.array([1.0])
        for p in range(size):
            fcoef[: len(powk)] += phi[p] * powk
            powk = np.polynomial.polynomial.polymul(powk, np.array([kf, 1.0]))
        resid = xj_quotient_residual_coeffs(fcoef, kf, j, float(a_val.real), B, c)
        if np.max(np.abs(resid)) > 1e-7 * max(1.0, float(np.max(np.abs(fcoef)))):
            continue
        if not any(abs(e["A"] - a_val.real) < 1e-9 for e in out):
            out.append({"f": fcoef, "A": float(a_val.real), "B": B, "c": c})
    return out


# ---------------------------------------------------------------------------
# Gram-Schmidt route
# ---------------------------------------------------------------------------

def exceptional_seeds(weight: quad.WeightSpec, count: int) -> list[np.ndarray]:
    """The seed sequence of the exceptional family, as float coefficient arrays.

    Laguerre: v_1 = x+k+1, v_i = (x+k)^i.  Jacobi: u_1 = x-c, u_i = (x-b)^i.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    seeds = []
    if weight.kind == "x1-laguerre":
        kf = float(weight.k)
        seeds.append(np.array([kf + 1.0, 1.0]))
        base = np.array([kf, 1.0])
    elif weight.kind == "x1-jacobi":
        jc = JacobiConstants.from_parameters(weight.alpha, weight.beta)
        seeds.append(np.array([-float(jc.c), 1.0]))
        base = np.array([-float(jc.b), 1.0])
    else:
        raise ValueError("seeds are defined for the x1 weights only")
    power = base.copy()
    for _ in range(2, count + 1):
        power = np.polynomial.polynomial.polymul(power, base)
        seeds.append(power.copy())
    return seeds


def gram_schmidt_family(weight: quad.WeightSpec, count: int,
                        rel_tol: float = REL_TOL_DEFAULT) -> list[np.ndarray]:
    """First ``count`` members of the exceptional family by modified Gram-Schmidt.

    Inner products are quadrature-based (so convergence failures surface as
    QuadratureError).  Members are unit-norm with positive leading
    coefficient; member i has degree i.
    """
    seeds = exceptional_seeds(weight, count)
    members: list[np.ndarray] = []
    for seed in seeds:
        w = seed.astype(float)
        for _ in range(2):  # second pass removes the O(eps * kappa) residue
            for e in members:
                proj = quad.integrate(_pair_product(w, e), weight, rel_tol=rel_tol)
                w = _poly_sub(w, proj * e)
        nrm2 = quad.integrate(_pair_product(w, w), weight, rel_tol=rel_tol)
        if not nrm2 > 0:
            raise quad.QuadratureError("Gram-Schmidt produced a null vector")
        w = w / np.sqrt(nrm2)
        if w[-1] < 0:
            w = -w
        members.append(w)
    return members


def _pair_product(p: np.ndarray, q: np.ndarray):
    def f(x):
        return np.polynomial.polynomial.polyval(x, p) * np.polynomial.polynomial.polyval(x, q)

    return f


def _poly_sub(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    n = max(len(p), len(q))
    out = np.zeros(n)
    out[: len(p)] += p
    out[: len(q)] -= q
    return out


def best_approximation_errors(weight: quad.WeightSpec, members: list[np.ndarray],
                              rel_tol: float = REL_TOL_DEFAULT) -> list[float]:
    """L2(weight) best-approximation error of the constant 1 by the first N members.

    err_N^2 = ||1||^2 - sum_{i<=N} (1, e_i)^2 for orthonormal members; the
    sequence strictly decreasing in N is the completeness proxy.
    """
    one = np.array([1.0])
    total = quad.integrate(_pair_product(one, one), weight, rel_tol=rel_tol)
    errs = []
    acc = 0.0
    for e in members:
        proj = quad.integrate(_pair_product(one, e), weight, rel_tol=rel_tol)
        acc += proj * proj
        errs.append(float(np.sqrt(max(total - acc, 0.0))))
    return errs


# ---------------------------------------------------------------------------
# route comparison
# ---------------------------------------------------------------------------

def unit_leading(coeffs) -> np.ndarray:
    """Scale a coefficient array (or exact Poly) to leading coefficient 1."""
    arr = np.asarray(coeffs.to_floats() if isinstance(coeffs, Poly) else coeffs,
                     dtype=float)
    if not len(arr) or arr[-1] == 0:
        raise ValueError("cannot normalize an empty or degenerate polynomial")
    return arr / arr[-1]


def coefficient_rel_diff(p, q) -> float:
    """Coefficientwise relative difference after unit-leading normalization."""
    a, b = unit_leading(p), unit_leading(q)
    if len(a) != len(b):
        return float("inf")
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def family_by_route(spec: XFamilySpec, n: int, route: str):
    """Dispatch one member by route: "operator" | "nullspace" (exact Poly) or
    "gram-schmidt" (float array)."""
    if n < 1:
        raise ValueError("exceptional families have no degree-0 member")
    if route == "operator":
        if spec.family == "laguerre":
            return x1_laguerre_op_route(n - 1, spec.k)
        return x1_jacobi_op_route(n - 1, spec.alpha, spec.beta)
    if route == "nullspace":
        if spec.family == "laguerre":
            sols = xj_polynomial_solve(spec.k, 1, n, n)
        else:
            sols = _x1_jacobi_nullspace(spec.alpha, spec.beta, n)
        if len(sols) != 1:
            raise ValueError(
                f"nullspace route expected exactly one solution, got {len(sols)}"
            )
        return sols[0]
    if route == "gram-schmidt":
        return gram_schmidt_family(spec.weight(), n)[n - 1]
    raise ValueError(f"unknown route {route!r}")


def _x1_jacobi_nullspace(alpha, beta, n: int) -> list[Poly]:
    ncols = n + 1
    nrows = n + 3
    cols = []
    for d in range(ncols):
        res = x1_jacobi_ode_residual(Poly([0] * d + [1]), alpha, beta, n)
        cols.append([res.coefficient(r) for r in range(nrows)])
    rows = [[cols[c][r] for c in range(ncols)] for r in range(nrows)]
    return [Poly(v).monic() for v in rational_nullspace(rows)]


def emit_family_csv(members, route: str, params: str) -> str:
    """CSV table: degree, coefficient list, route tag, params.

    Exact routes serialize coefficients as "num/den"; numeric routes as
    decimals.  Coefficients within a row are space-separated, ascending power.
    """
    lines = ["degree,coefficients,route,params"]
    for member in members:
        if isinstance(member, Poly):
            coeffs = " ".join(rational_str(c) for c in member.coeffs)
            deg = member.degree
        else:
            arr = np.asarray(member, dtype=float)
            coeffs = " ".join(repr(float(c)) for c in arr)
            deg = len(arr) - 1
        lines.append(f'{deg},"{coeffs}",{route},"{params}"')
    return "\n".join(lines) + "\n"
