"""Exact rational polynomial algebra and classical orthogonal polynomials.

Everything in this module is exact: coefficients are `fractions.Fraction`,
no floating point ever enters, and an identity that holds here holds as a
theorem, not as a numerical coincidence.  The rest of the package builds the
exceptional families out of these primitives and only drops to floats at the
quadrature/eigensolver layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[Fraction, int, str, float]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, "num/den"/decimal strings, and float literals
    to an exact Fraction.

    Floats are read as their shortest decimal literal (0.1 -> 1/10), not as
    the underlying binary value; exact work should still prefer strings or
    Fractions.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        if not value == value or value in (float("inf"), float("-inf")):
            raise ValueError("non-finite value is not rational")
        return Fraction(repr(value))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_str(value: RationalLike) -> str:
    """Canonical "num/den" form (denominator always written, always positive)."""
    q = as_rational(value)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    """Dense univariate polynomial with exact rational coefficients.

    Coefficients are stored ascending in the power of the variable; trailing
    zeros are stripped, so the zero polynomial has an empty coefficient tuple
    and ``degree == -1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def constant(c: RationalLike) -> "Poly":
        return Poly((as_rational(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    # ring operations ------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly.zero()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for jj, b in enumerate(other.coeffs):
                    out[i + jj] += a * b
            return Poly(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c: RationalLike) -> "Poly":
        q = as_rational(c)
        return Poly(tuple(q * a for a in self.coeffs))

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def compose_linear(self, a: RationalLike, b: RationalLike) -> "Poly":
        """Exact substitution x -> a*x + b, via Horner over the polynomial ring."""
        inner = Poly((as_rational(b), as_rational(a)))
        out = Poly.zero()
        for c in reversed(self.coeffs):
            out = out * inner + Poly.constant(c)
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Exact polynomial division with remainder."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d, lead = other.degree, other.leading
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            shift = len(rem) - 1 - d
            factor = rem[-1] / lead
            quo[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= factor * c
            rem.pop()
        return Poly(quo), Poly(rem)

    # evaluation -----------------------------------------------------------

    def __call__(self, value):
        """Horner evaluation: exact for Fraction/int input, float for float.

        Also evaluates on anything supporting * and + (e.g. numpy arrays),
        with coefficients coerced to float in that case.
        """
        if isinstance(value, (Fraction, int)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * value + c
            return acc
        acc = 0.0 * value
        for c in reversed(self.coeffs):
            acc = acc * value + float(c)
        return acc

    def monic(self) -> "Poly":
        return self.scale(1 / self.leading)

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    # serialization --------------------------------------------------------

    def to_json(self) -> list[str]:
        """JSON form: array of "num/den" strings, ascending power."""
        return [rational_str(c) for c in self.coeffs]

    @staticmethod
    def from_json(items: Sequence[str]) -> "Poly":
        return Poly(tuple(Fraction(s) for s in items))

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = str(c)
            terms.append(cs if i == 0 else (f"{cs}*x^{i}" if i > 1 else f"{cs}*x"))
        return "Poly(" + " + ".join(terms) + ")"


X = Poly.x()


# ---------------------------------------------------------------------------
# classical families
# ---------------------------------------------------------------------------

def laguerre_classical(n: int, m: RationalLike) -> Poly:
    """Generalized Laguerre polynomial L_n^(m), exact coefficients.

    Standard normalization: leading coefficient (-1)^n / n!.  Generated by the
    three-term recurrence
        (i+1) L_{i+1} = (2i + 1 + m - x) L_i - (i + m) L_{i-1}.
    The parameter m may be any rational (non-integer values are first-class).
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    mq = as_rational(m)
    p_prev = Poly.one()
    if n == 0:
        return p_prev
    p = Poly((1 + mq, -1))
    for i in range(1, n):
        nxt = (Poly((2 * i + 1 + mq, -1)) * p - (i + mq) * p_prev).scale(
            Fraction(1, i + 1)
        )
        p_prev, p = p, nxt
    return p


def jacobi_classical(n: int, alpha: RationalLike, beta: RationalLike) -> Poly:
    """Jacobi polynomial P_n^(alpha,beta), exact coefficients.

    Standard normalization P_n(1) = binomial(n + alpha, n).  Requires
    alpha, beta > -1 so the family is orthogonal under its weight.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    a, b = as_rational(alpha), as_rational(beta)
    if a <= -1 or b <= -1:
        raise ValueError("jacobi parameters must satisfy alpha, beta > -1")
    p_prev = Poly.one()
    if n == 0:
        return p_prev
    p = Poly((Fraction(a - b, 2), Fraction(a + b + 2, 2)))
    for i in range(2, n + 1):
        s = a + b
        c1 = 2 * i * (i + s) * (2 * i + s - 2)
        c2 = (2 * i + s - 1) * (a * a - b * b)
        c3 = (2 * i + s - 1) * (2 * i + s) * (2 * i + s - 2)
        c4 = 2 * (i + a - 1) * (i + b - 1) * (2 * i + s)
        nxt = (Poly((c2, c3)) * p - c4 * p_prev).scale(Fraction(1) / c1)
        p_prev, p = p, nxt
    return p


@dataclass(frozen=True)
class JacobiConstants:
    """The derived constants a = (beta-alpha)/2, b = (beta+alpha)/(beta-alpha),
    c = b + 1/a that control the exceptional Jacobi construction.

    For alpha, beta > -1 with alpha != beta and both positive, |b| > 1, which
    keeps the rational weight denominator (x - b)^2 away from [-1, 1].
    """

    a: Fraction
    b: Fraction
    c: Fraction

    @staticmethod
    def from_parameters(alpha: RationalLike, beta: RationalLike) -> "JacobiConstants":
        al, be = as_rational(alpha), as_rational(beta)
        if al == be:
            raise ValueError("alpha == beta leaves the constants a, b, c undefined")
        a = (be - al) / 2
        b = (be + al) / (be - al)
        return JacobiConstants(a=a, b=b, c=b + 1 / a)


def classical_ode_residual(g: Poly, family: str, params, eig: RationalLike) -> Poly:
    """Exact residual of the classical Laguerre/Jacobi differential equation.

    family="laguerre": params is m, residual = x g'' + (m+1-x) g' + eig*g.
    family="jacobi":   params is (alpha, beta),
                       residual = (1-z^2) g'' + [beta-alpha-(alpha+beta+2) z] g' + eig*g.

    ``eig`` is the degree-based eigenvalue: n for Laguerre and
    n(n+alpha+beta+1) for Jacobi.  The residual is the zero polynomial exactly
    when g is an eigenpolynomial at that eigenvalue.
    """
    lam = as_rational(eig)
    gp, gpp = g.derivative(), g.derivative().derivative()
    if family == "laguerre":
        m = as_rational(params)
        return X * gpp + Poly((m + 1, -1)) * gp + lam * g
    if family == "jacobi":
        alpha, beta = (as_rational(params[0]), as_rational(params[1]))
        return (
            Poly((1, 0, -1)) * gpp
            + Poly((beta - alpha, -(alpha + beta + 2))) * gp
            + lam * g
        )
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# exact linear algebra (small systems only)
# ---------------------------------------------------------------------------

def rational_rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rref, pivot columns)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [v - factor * w for v, w in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rational_nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact basis of the nullspace of a small rational matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = rational_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(vec)
    return basis
