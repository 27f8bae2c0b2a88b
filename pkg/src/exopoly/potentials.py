"""Preset potentials, their rational extensions, and closed-form eigenstates.

Conventions: natural units with Hamiltonian H = -d^2/dx^2 + V(x) throughout
(matching the grid discretizer).  Each preset knows its classical potential,
the derived rational extension that makes the exceptional closed forms exact
eigenstates, the extension formula in its printed textbook variable (kept
verbatim for auditing, even where it disagrees with the derived one), and
closed-form eigenstates of both kinds.

The extension enters the physical potential with a preset-specific energy
scale (e.g. a factor 2 for the oscillator from the d/dx -> d/dxi chain rule);
for the Coulomb and Morse presets the exact extension is unavoidably
level-dependent, which is flagged rather than hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .polycore import Poly, RationalLike, as_rational, laguerre_classical, jacobi_classical
from .solver import Grid, GridFunction, discretize, eigen_residual, rayleigh_quotient
from .xop import x1_jacobi_op_route, x1_laguerre_op_route


class PotentialError(ValueError):
    """Inadmissible parameters, quantum numbers, or a pole inside the domain."""


# ---------------------------------------------------------------------------
# the extension terms, exactly as functions
# ---------------------------------------------------------------------------

def ve_laguerre(x, k, j: int = 1):
    """Rational Laguerre extension j/(x+k) - j(j+1)k/(x+k)^2 (pole at -k)."""
    kf = float(k) if isinstance(k, float) else float(as_rational(k))
    x = np.asarray(x, dtype=float)
    return j / (x + kf) - j * (j + 1) * kf / (x + kf) ** 2


def ve_jacobi(z, b: float):
    """Rational Jacobi extension 2/(z-b) - 2b/(z-b)^2; needs |b| > 1."""
    if abs(b) <= 1:
        raise PotentialError(f"pole z=b={b} lies inside [-1,1]")
    z = np.asarray(z, dtype=float)
    return 2.0 / (z - b) - 2.0 * b / (z - b) ** 2


# ---------------------------------------------------------------------------
# closed-form eigenstates
# ---------------------------------------------------------------------------

@dataclass
class EigenstateClosedForm:
    """A bound state as prefactor(x) * polynomial(variable(x)).

    For exceptional states the prefactor already carries the 1/(u + k) or
    1/(z - b) divisor, so __call__ gives the full wavefunction.
    """

    preset: str
    kind: str  # "classical" | "exceptional"
    quantum_numbers: dict
    energy: float
    polynomial: Poly
    variable: Callable[[np.ndarray], np.ndarray]
    prefactor: Callable[[np.ndarray], np.ndarray]
    variable_name: str = "x"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.prefactor(x) * self.polynomial(self.variable(x))

    def on_grid(self, grid: Grid, normalize: bool = True) -> GridFunction:
        gf = GridFunction(grid, self(grid.points()))
        return gf.normalized() if normalize else gf


def hamiltonian_residual(state: EigenstateClosedForm, potential, grid: Grid) -> float:
    """Relative grid residual ||(H - E) psi|| / ||psi|| of a closed-form state."""
    op = discretize(potential, grid)
    psi = state.on_grid(grid, normalize=False)
    return eigen_residual(op, state.energy, psi.values)


def state_rayleigh(state: EigenstateClosedForm, potential, grid: Grid) -> float:
    """Rayleigh quotient of a closed-form state under a (possibly extended) potential."""
    op = discretize(potential, grid)
    return rayleigh_quotient(op, state.on_grid(grid, normalize=False))


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Oscillator3D:
    """Radial isotropic oscillator: V = x^2/4 + l(l+1)/x^2, E_n = 2n + l + 3/2.

    Laguerre variable u = x^2/2 with parameter k = l + 1/2.  The rational
    extension enters the physical potential as +2 * ve_laguerre(u, k); the
    factor 2 is the chain-rule energy scale between the u-equation and x.
    """

    l: int = 0
    energy_shift: float = 0.0

    def __post_init__(self):
        if self.l < 0:
            raise PotentialError("angular momentum l must be >= 0")

    name = "oscillator3d"

    @property
    def k(self) -> Fraction:
        return Fraction(2 * self.l + 1, 2)

    def params(self) -> dict:
        return {"l": self.l, "energy_shift": self.energy_shift}

    def default_domain(self) -> tuple[float, float]:
        return (0.0, 14.0)

    def variable(self, x):
        return np.asarray(x, dtype=float) ** 2 / 2

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        v = x**2 / 4 + self.energy_shift
        if self.l:
            v = v + self.l * (self.l + 1) / x**2
        return v

    def extension(self, x, n: Optional[int] = None):
        return 2.0 * ve_laguerre(self.variable(x), self.k)

    def extended_potential(self, x, n: Optional[int] = None):
        return self.potential(x) + self.extension(x)

    def ve_printed(self, u):
        """The extension in its printed form, as a function of u = x^2/2."""
        return ve_laguerre(u, self.k)

    def classical_energy(self, n: int) -> float:
        return 2 * n + self.l + 1.5 + self.energy_shift

    def exceptional_energy(self, n: int) -> float:
        return 2 * (n - 1) + self.l + 1.5 + self.energy_shift

    def classical_state(self, n: int) -> EigenstateClosedForm:
        if n < 0:
            raise PotentialError("radial quantum number must be >= 0")
        lp1 = self.l + 1

        def pref(x):
            return x**lp1 * np.exp(-(x**2) / 4)

        return EigenstateClosedForm(
            preset=self.name, kind="classical",
            quantum_numbers={"n": n, "l": self.l},
            energy=self.classical_energy(n),
            polynomial=laguerre_classical(n, self.k),
            variable=self.variable, prefactor=pref, variable_name="u",
        )

    def exceptional_state(self, n: int) -> EigenstateClosedForm:
        if n < 1:
            raise PotentialError("exceptional family has no degree-0 member")
        kf = float(self.k)
        lp1 = self.l + 1

        def pref(x):
            x = np.asarray(x, dtype=float)
            return x**lp1 * np.exp(-(x**2) / 4) / (x**2 / 2 + kf)

        return EigenstateClosedForm(
            preset=self.name, kind="exceptional",
            quantum_numbers={"n": n, "l": self.l},
            energy=self.exceptional_energy(n),
            polynomial=x1_laguerre_op_route(n - 1, self.k),
            variable=self.variable, prefactor=pref, variable_name="u",
        )


@dataclass(frozen=True)
class CoulombRadial:
    """Radial Coulomb problem: V = -1/x + l(l+1)/x^2, E_N = -1/(4 N^2).

    The Laguerre variable of the level-N state is t = x/N, so the exact
    rational extension is level-dependent in the physical coordinate --
    flagged, and reported rather than asserted anywhere.
    """

    l: int = 0
    energy_shift: float = 0.0

    def __post_init__(self):
        if self.l < 0:
            raise PotentialError("angular momentum l must be >= 0")

    name = "coulomb"

    @property
    def k(self) -> Fraction:
        return Fraction(2 * self.l + 1)

    def params(self) -> dict:
        return {"l": self.l, "energy_shift": self.energy_shift}

    def default_domain(self, max_principal: int = 3) -> tuple[float, float]:
        return (0.0, 60.0 * max_principal)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        v = -1.0 / x + self.energy_shift
        if self.l:
            v = v + self.l * (self.l + 1) / x**2
        return v

    def extension(self, x, n: int):
        """Exact extension for the level-n exceptional state (level-dependent)."""
        if n is None or n < 1:
            raise PotentialError("coulomb extension needs the exceptional index n >= 1")
        big_n = n + self.l
        x = np.asarray(x, dtype=float)
        return ve_laguerre(x / big_n, self.k) / (big_n * x)

    def extended_potential(self, x, n: int):
        return self.potential(x) + self.extension(x, n)

    def ve_printed(self, r):
        """Printed form: ve in the variable r with parameter 2l+1."""
        return ve_laguerre(r, self.k)

    def classical_energy(self, n: int) -> float:
        big_n = n + self.l + 1
        return -1.0 / (4 * big_n**2) + self.energy_shift

    def exceptional_energy(self, n: int) -> float:
        big_n = n + self.l
        return -1.0 / (4 * big_n**2) + self.energy_shift

    def classical_state(self, n: int) -> EigenstateClosedForm:
        if n < 0:
            raise PotentialError("radial quantum number must be >= 0")
        big_n = n + self.l + 1
        lp1 = self.l + 1

        def var(x):
            return np.asarray(x, dtype=float) / big_n

        def pref(x):
            t = var(x)
            return t**lp1 * np.exp(-t / 2)

        return EigenstateClosedForm(
            preset=self.name, kind="classical",
            quantum_numbers={"n": n, "l": self.l, "principal": big_n},
            energy=self.classical_energy(n),
            polynomial=laguerre_classical(n, self.k),
            variable=var, prefactor=pref, variable_name="t",
        )

    def exceptional_state(self, n: int) -> EigenstateClosedForm:
        if n < 1:
            raise PotentialError("exceptional family has no degree-0 member")
        big_n = n + self.l
        kf = float(self.k)
        lp1 = self.l + 1

        def var(x):
            return np.asarray(x, dtype=float) / big_n

        def pref(x):
            t = var(x)
            return t**lp1 * np.exp(-t / 2) / (t + kf)

        return EigenstateClosedForm(
            preset=self.name, kind="exceptional",
            quantum_numbers={"n": n, "l": self.l, "principal": big_n},
            energy=self.exceptional_energy(n),
            polynomial=x1_laguerre_op_route(n - 1, self.k),
            variable=var, prefactor=pref, variable_name="t",
        )


@dataclass(frozen=True)
class Morse:
    """Morse potential A^2 + B^2 e^(-2 a x) - 2B(A + a/2) e^(-a x) on the line.

    Laguerre variable y = (2B/a) e^(-a x), s = A/a; level n (with n < s) has
    parameter 2(s-n) and energy A^2 - (A - n a)^2.  The printed extension
    carries the denominator (y + s - n): kept verbatim for auditing, while the
    derived extension uses the consistent parameter 2(s-n) and is
    level-dependent (both oddities are flagged in reports).
    """

    A: Fraction
    B: Fraction
    alpha: Fraction = Fraction(1)
    energy_shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "A", as_rational(self.A))
        object.__setattr__(self, "B", as_rational(self.B))
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.A <= 0 or self.B <= 0 or self.alpha <= 0:
            raise PotentialError("morse requires A, B, alpha > 0")

    name = "morse"

    @property
    def s(self) -> Fraction:
        return self.A / self.alpha

    def params(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "alpha": str(self.alpha),
                "energy_shift": self.energy_shift}

    def max_level(self) -> int:
        return max(int(math.ceil(float(self.s) - 1e-9)) - 1, -1)

    def variable(self, x):
        af, bf = float(self.alpha), float(self.B)
        return (2 * bf / af) * np.exp(-af * np.asarray(x, dtype=float))

    def default_domain(self, n: int = 0) -> tuple[float, float]:
        af, bf = float(self.alpha), float(self.B)
        x_left = -math.log(af * 80.0 / (2 * bf)) / af  # y(x_left) = 80
        s_minus_n = float(self.s) - n
        y_right = 10.0 ** (-14.0 / max(s_minus_n, 0.5))
        x_right = -math.log(af * y_right / (2 * bf)) / af
        return (x_left, x_right)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        af, bf, a_ = float(self.alpha), float(self.B), float(self.A)
        return (a_**2 + bf**2 * np.exp(-2 * af * x)
                - 2 * bf * (a_ + af / 2) * np.exp(-af * x) + self.energy_shift)

    def extension(self, x, n: int):
        """Derived level-n extension: alpha^2 * y * ve_laguerre(y, 2(s-n))."""
        self._check_level(n)
        y = self.variable(x)
        m = 2 * (self.s - n)
        return float(self.alpha) ** 2 * y * ve_laguerre(y, m)

    def extended_potential(self, x, n: int):
        return self.potential(x) + self.extension(x, n)

    def ve_printed(self, y, n: int):
        """Printed form 1/(y+s-n) - 2(s-n)/(y+s-n)^2, verbatim (pole checked)."""
        self._check_level(n)
        smn = float(self.s) - n
        if smn <= 0:
            raise PotentialError(f"printed extension has a pole at y={-smn} inside (0,inf)")
        return ve_laguerre(y, Fraction(self.s - n))

    def _check_level(self, n) -> None:
        if n is None or n < 0 or n >= float(self.s):
            raise PotentialError(f"morse bound level needs 0 <= n < s = {self.s}")

    def classical_energy(self, n: int) -> float:
        a_, af = float(self.A), float(self.alpha)
        return a_**2 - (a_ - n * af) ** 2 + self.energy_shift

    def classical_state(self, n: int) -> EigenstateClosedForm:
        self._check_level(n)
        m = 2 * (self.s - n)
        exponent = float(self.s) - n

        def pref(x):
            y = self.variable(x)
            return y**exponent * np.exp(-y / 2)

        return EigenstateClosedForm(
            preset=self.name, kind="classical",
            quantum_numbers={"n": n},
            energy=self.classical_energy(n),
            polynomial=laguerre_classical(n, m),
            variable=self.variable, prefactor=pref, variable_name="y",
        )

    def exceptional_state(self, n: int) -> EigenstateClosedForm:
        """Exceptional partner of classical level n (same energy, degree n+1)."""
        self._check_level(n)
        m = 2 * (self.s - n)
        exponent = float(self.s) - n
        mf = float(m)

        def pref(x):
            y = self.variable(x)
            return y**exponent * np.exp(-y / 2) / (y + mf)

        return EigenstateClosedForm(
            preset=self.name, kind="exceptional",
            quantum_numbers={"n": n},
            energy=self.classical_energy(n),
            polynomial=x1_laguerre_op_route(n, m),
            variable=self.variable, prefactor=pref, variable_name="y",
        )


@dataclass(frozen=True)
class ScarfTrig:
    """Trigonometric Scarf potential on (-pi/2a, pi/2a).

    V = -A^2 + (A^2 + B^2 - A a) sec^2(a x) - B(2A - a) tan(a x) sec(a x),
    E_n = (A + n a)^2 - A^2, with Jacobi variable z = sin(a x) and parameters
    (s - L - 1/2, s + L - 1/2), s = A/a, L = B/a.  Admissibility A > |B| + a/2
    keeps the states normalizable and the extension pole |b| > 1.
    """

    A: Fraction
    B: Fraction
    alpha: Fraction = Fraction(1)
    energy_shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "A", as_rational(self.A))
        object.__setattr__(self, "B", as_rational(self.B))
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.alpha <= 0:
            raise PotentialError("scarf requires alpha > 0")
        if self.B == 0:
            raise PotentialError("scarf exceptional extension needs B != 0")
        if not self.A > abs(self.B) + self.alpha / 2:
            raise PotentialError("scarf requires A > |B| + alpha/2")

    name = "scarf"

    @property
    def s(self) -> Fraction:
        return self.A / self.alpha

    @property
    def lam(self) -> Fraction:
        return self.B / self.alpha

    @property
    def jacobi_alpha(self) -> Fraction:
        return self.s - self.lam - Fraction(1, 2)

    @property
    def jacobi_beta(self) -> Fraction:
        return self.s + self.lam - Fraction(1, 2)

    @property
    def b_constant(self) -> Fraction:
        return (2 * self.s - 1) / (2 * self.lam)

    def params(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "alpha": str(self.alpha),
                "energy_shift": self.energy_shift}

    def default_domain(self, margin: float = 1e-8) -> tuple[float, float]:
        """Box between the sec^2 singularities, ends pulled inward by ``margin``.

        The margin must stay far below h^2: the true states vanish only at the
        singularities themselves, so a larger shift plants an O(psi(b)/h^2)
        boundary residual that grows under refinement.
        """
        half = math.pi / (2 * float(self.alpha))
        return (-half + margin, half - margin)

    def variable(self, x):
        return np.sin(float(self.alpha) * np.asarray(x, dtype=float))

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        a_, bf, af = float(self.A), float(self.B), float(self.alpha)
        sec = 1.0 / np.cos(af * x)
        return (-(a_**2) + (a_**2 + bf**2 - a_ * af) * sec**2
                - bf * (2 * a_ - af) * np.tan(af * x) * sec + self.energy_shift)

    def extension(self, x, n: Optional[int] = None):
        """Derived extension -2 a^2 [ b/(z-b) + (b^2-1)/(z-b)^2 ]."""
        bq = float(self.b_constant)
        af = float(self.alpha)
        z = self.variable(x)
        return -2 * af**2 * (bq / (z - bq) + (bq**2 - 1) / (z - bq) ** 2)

    def extended_potential(self, x, n: Optional[int] = None):
        return self.potential(x) + self.extension(x)

    def ve_printed(self, z):
        """Printed extension A(2A-1)/(2A-1-2Bz) - (A(2A-1)^2-4B^2)/(2A-1-2Bz)^2.

        Kept verbatim for auditing; its pole (2A-1)/(2B) is rejected if it
        falls inside [-1, 1].
        """
        a_, bf = float(self.A), float(self.B)
        pole = (2 * a_ - 1) / (2 * bf)
        if abs(pole) <= 1:
            raise PotentialError(f"printed extension has a pole at z={pole} inside [-1,1]")
        z = np.asarray(z, dtype=float)
        den = 2 * a_ - 1 - 2 * bf * z
        return a_ * (2 * a_ - 1) / den - (a_ * (2 * a_ - 1) ** 2 - 4 * bf**2) / den**2

    def classical_energy(self, n: int) -> float:
        a_, af = float(self.A), float(self.alpha)
        return (a_ + n * af) ** 2 - a_**2 + self.energy_shift

    def exceptional_energy(self, n: int) -> float:
        return self.classical_energy(n - 1)

    def classical_state(self, n: int) -> EigenstateClosedForm:
        if n < 0:
            raise PotentialError("quantum number must be >= 0")
        p = float(self.s - self.lam) / 2
        q = float(self.s + self.lam) / 2
        af = float(self.alpha)

        def pref(x):
            z = np.sin(af * np.asarray(x, dtype=float))
            return (1 - z) ** p * (1 + z) ** q

        return EigenstateClosedForm(
            preset=self.name, kind="classical",
            quantum_numbers={"n": n},
            energy=self.classical_energy(n),
            polynomial=jacobi_classical(n, self.jacobi_alpha, self.jacobi_beta),
            variable=self.variable, prefactor=pref, variable_name="z",
        )

    def exceptional_state(self, n: int) -> EigenstateClosedForm:
        if n < 1:
            raise PotentialError("exceptional family has no degree-0 member")
        p = float(self.s - self.lam) / 2
        q = float(self.s + self.lam) / 2
        af = float(self.alpha)
        bq = float(self.b_constant)

        def pref(x):
            z = np.sin(af * np.asarray(x, dtype=float))
            return (1 - z) ** p * (1 + z) ** q / (z - bq)

        return EigenstateClosedForm(
            preset=self.name, kind="exceptional",
            quantum_numbers={"n": n},
            energy=self.exceptional_energy(n),
            polynomial=x1_jacobi_op_route(n - 1, self.jacobi_alpha, self.jacobi_beta),
            variable=self.variable, prefactor=pref, variable_name="z",
        )


PRESETS = {
    "oscillator3d": Oscillator3D,
    "coulomb": CoulombRadial,
    "morse": Morse,
    "scarf": ScarfTrig,
}


def make_preset(name: str, params: dict):
    """Build a preset from its registry id and a parameter dict.

    Numeric parameters may be given as ints, decimals, or exact "num/den"
    strings.
    """
    cls = PRESETS.get(name)
    if cls is None:
        raise PotentialError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    try:
        return cls(**params)
    except TypeError as exc:
        raise PotentialError(f"bad parameters for preset {name}: {exc}") from exc


def ve_preset(preset, coordinate, n: Optional[int] = None):
    """The preset's extension term in its natural variable, exactly as printed.

    ``preset`` is a preset object or registry id (default parameters).  The
    Morse form needs the level index n; the others ignore it.  Poles inside
    the domain raise with the pole location.
    """
    if isinstance(preset, str):
        preset = make_preset(preset, {})
    if preset.name == "morse":
        if n is None:
            raise PotentialError("the morse extension is level-dependent; pass n")
        return preset.ve_printed(coordinate, n)
    return preset.ve_printed(coordinate)


def closed_form_eigenstate(preset, n: int, kind: str = "classical") -> EigenstateClosedForm:
    """Closed-form bound state of a preset, classical or exceptional.

    The exceptional kind divides the prefactor by (u + k) (Laguerre presets)
    or (z - b) (Scarf) and carries the exceptional polynomial; inadmissible
    quantum numbers raise.
    """
    if isinstance(preset, str):
        preset = make_preset(preset, {})
    if kind == "classical":
        return preset.classical_state(n)
    if kind == "exceptional":
        return preset.exceptional_state(n)
    raise PotentialError(f"kind must be classical or exceptional, got {kind!r}")


# ---------------------------------------------------------------------------
# the quotient identity
# ---------------------------------------------------------------------------

def quotient_identity_check(f, k: RationalLike, grid: Grid, j: int = 1,
                            rational_coeffs: Optional[tuple[float, float]] = None) -> float:
    """Max grid residual of the quotient form of the extended Laguerre equation.

    Evaluates  x g'' + (k+1-x) g' + (c - A/(x+k) - B/(x+k)^2) g  with
    g = f/(x+k)^j and c = deg(f) - j, using analytic derivatives of the
    quotient.  For j = 1 the coefficients default to the exceptional-family
    values (A, B) = (1, -2k); for j >= 2 they must be supplied (see
    :func:`exopoly.xop.xj_quotient_solve`, which also explains why no
    n-independent choice exists).  A small residual confirms the identity for
    this f; a wrong polynomial fails loudly.  The value is the raw maximum,
    so it scales with |f| on the grid: for high degrees on wide grids expect
    the roundoff floor around 1e-16 * max|f|.
    """
    kf = float(k) if isinstance(k, float) else float(as_rational(k))
    if isinstance(f, Poly):
        coeffs = np.array(f.to_floats())
        deg = f.degree
    else:
        coeffs = np.asarray(f, dtype=float)
        deg = len(coeffs) - 1
    if rational_coeffs is None:
        if j != 1:
            raise PotentialError("j >= 2 needs explicit rational coefficients (A, B)")
        a_coef, b_coef = 1.0, -2.0 * kf
    else:
        a_coef, b_coef = float(rational_coeffs[0]), float(rational_coeffs[1])
    c = float(deg - j)
    pp = np.polynomial.polynomial
    x = grid.points()
    t = x + kf
    fv = pp.polyval(x, coeffs)
    fpv = pp.polyval(x, pp.polyder(coeffs))
    fppv = pp.polyval(x, pp.polyder(coeffs, 2))
    g = fv / t**j
    gp = (fpv - j * fv / t) / t**j
    gpp = (fppv - 2 * j * fpv / t + j * (j + 1) * fv / t**2) / t**j
    slot = c - a_coef / t - b_coef / t**2
    res = x * gpp + (kf + 1 - x) * gp + slot * g
    return float(np.max(np.abs(res)))
