"""Superpotentials, partner potentials, and intertwining-operator checks.

The factorization conventions are
    A = d/dx + W,   Adag = -d/dx + W,
    H+ = Adag A = -d^2/dx^2 + W^2 - W',   H- = A Adag = -d^2/dx^2 + W^2 + W',
so V+/- = W^2 -/+ W' + E and V- - V+ = 2 W'.  (Printed sources sometimes
state the difference with the opposite sign; the construction identity tested
here is the one the factorization actually implies.)

Everything preset-specific is run in verify-or-falsify mode: the printed
superpotential candidate and the printed extension identities are evaluated
and their deviations reported, never assumed.  The intertwiner that provably
maps classical oscillator states onto exceptional ones is derived from the
polynomial ladder operator and carries that construction in
:func:`oscillator_intertwiner`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .polycore import jacobi_classical
from .potentials import Oscillator3D, ScarfTrig, ve_laguerre
from .solver import Grid, GridFunction, discretize
from .xop import x1_jacobi_op_route, x1_laguerre_op_route

# re-exported polynomial ladder routes, used here composed with prefactors
op_route_raising = x1_laguerre_op_route
op_route_jacobi = x1_jacobi_op_route


@dataclass(frozen=True)
class Superpotential:
    """Evaluable W and W' with a provenance tag.

    provenance: "printed-candidate" (taken verbatim from the source under
    audit), "ground-state-derived" (from -psi0'/psi0), or "user".
    """

    w: Callable[[np.ndarray], np.ndarray]
    w_prime: Callable[[np.ndarray], np.ndarray]
    provenance: str = "user"
    label: str = ""


@dataclass(frozen=True)
class PartnerPair:
    """V+/- = W^2 -/+ W' + E, by construction."""

    v_plus: Callable[[np.ndarray], np.ndarray]
    v_minus: Callable[[np.ndarray], np.ndarray]
    factorization_energy: float


def partner_potentials(w: Superpotential, energy: float = 0.0) -> PartnerPair:
    """Build the partner pair; V- - V+ = 2 W' identically."""

    def v_plus(x):
        return w.w(x) ** 2 - w.w_prime(x) + energy

    def v_minus(x):
        return w.w(x) ** 2 + w.w_prime(x) + energy

    return PartnerPair(v_plus=v_plus, v_minus=v_minus, factorization_energy=energy)


def apply_A(w: Superpotential, psi: GridFunction, dagger: bool = False) -> GridFunction:
    """(d/dx + W) psi, or (-d/dx + W) psi with dagger.

    The derivative is centered in the interior and 3-point one-sided at the
    two end nodes (no Dirichlet ghost is assumed for psi' itself).
    """
    h = psi.grid.h
    v = psi.values
    if len(v) < 3:
        raise ValueError("grid too small for one-sided stencils")
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
    d[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    if dagger:
        d = -d
    return GridFunction(psi.grid, d + w.w(psi.grid.points()) * v)


def formal_zero_mode(w: Superpotential, grid: Grid) -> GridFunction:
    """exp(-integral W) by grid quadrature; the formal kernel of A."""
    x = grid.points()
    wx = w.w(x)
    acc = np.concatenate(([0.0], np.cumsum((wx[1:] + wx[:-1]) * grid.h / 2)))
    acc -= acc.min()  # keep the exponent bounded
    return GridFunction(grid, np.exp(-acc))


def intertwine_check(w: Superpotential, psi_source: GridFunction,
                     psi_target: GridFunction) -> dict:
    """Least-squares match of A psi_source against psi_target.

    Returns the scale s minimizing ||A psi_source - s psi_target|| and the
    relative residual ||A psi_source - s psi_target|| / ||psi_target||.  A
    small residual certifies the classical -> exceptional mapping for this
    pairing; mismatched pairings come out O(1).
    """
    if psi_source.grid != psi_target.grid:
        raise ValueError("both functions must live on the same grid")
    tgt_norm = psi_target.norm()
    if tgt_norm == 0:
        raise ValueError("target function is zero")
    phi = apply_A(w, psi_source)
    scale = phi.inner(psi_target) / tgt_norm**2
    diff = GridFunction(phi.grid, phi.values - scale * psi_target.values)
    return {"scale": float(scale), "rel_residual": float(diff.norm() / tgt_norm)}


def superpotential_from_ground_state(psi0: GridFunction) -> Superpotential:
    """Diagnostic W = -psi0'/psi0 by centered differences.

    Requires psi0 strictly positive in the grid interior (a node makes the
    log-derivative meaningless).  The returned callables interpolate the grid
    samples linearly.
    """
    v = psi0.values
    if np.any(v <= 0):
        bad = int(np.argmax(v <= 0))
        raise ValueError(
            f"ground state must be strictly positive; violated at node {bad}"
        )
    h = psi0.grid.h
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
    d[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    wvals = -d / v
    dw = np.gradient(wvals, h)
    x0 = psi0.grid.points()

    def w(x):
        return np.interp(x, x0, wvals)

    def w_prime(x):
        return np.interp(x, x0, dw)

    return Superpotential(w=w, w_prime=w_prime, provenance="ground-state-derived",
                          label="-psi0'/psi0 from grid samples")


# ---------------------------------------------------------------------------
# the oscillator intertwiner and the printed candidate
# ---------------------------------------------------------------------------

def oscillator_intertwiner(l: int) -> Superpotential:
    """Superpotential whose A = d/dx + W maps classical oscillator states with
    angular momentum l-1 onto the exceptional states with angular momentum l.

    W(x) = -l/x - x/2 - x/(x^2/2 + k), k = l + 1/2.  Derived by pushing the
    polynomial ladder operator through the oscillator prefactors; the mapping
    A psi+_nu = psi-_(nu+1) is exact at the closed-form level, so grid
    residuals of the intertwining check are pure O(h^2).
    """
    if l < 1:
        raise ValueError("need l >= 1 so the classical side l-1 is a radial channel")
    kf = l + 0.5

    def w(x):
        x = np.asarray(x, dtype=float)
        u = x**2 / 2 + kf
        return -l / x - x / 2 - x / u

    def w_prime(x):
        x = np.asarray(x, dtype=float)
        u = x**2 / 2 + kf
        return l / x**2 - 0.5 - 1.0 / u + x**2 / u**2

    return Superpotential(w=w, w_prime=w_prime, provenance="user",
                          label=f"oscillator ladder intertwiner, l={l}")


def printed_superpotential_candidate(l: int, k: float) -> Superpotential:
    """The printed candidate W = -l/x - 1/2 - 1/(x+k), taken verbatim.

    Its variable convention is ambiguous in the source (x versus x^2/2), so it
    is audited under both readings rather than trusted; see
    :func:`verify_claims`.
    """
    kf = float(k)

    def w(x):
        x = np.asarray(x, dtype=float)
        return -l / x - 0.5 - 1.0 / (x + kf)

    def w_prime(x):
        x = np.asarray(x, dtype=float)
        return l / x**2 + 1.0 / (x + kf) ** 2

    return Superpotential(w=w, w_prime=w_prime, provenance="printed-candidate",
                          label=f"printed candidate, l={l}, k={kf}")


def random_smooth_functions(grid: Grid, count: int, seed: int = 0) -> list[GridFunction]:
    """Seeded smooth test functions vanishing to high order at both ends.

    sin^6 envelope times a random low-order trigonometric polynomial: smooth,
    deterministic, and boundary-compatible with the Dirichlet discretization
    through the fifth derivative, so one-sided end stencils composed with the
    Laplacian stay O(h^2) accurate instead of injecting boundary jumps.
    """
    rng = np.random.default_rng(seed)
    x = grid.points()
    s = (x - grid.a) / (grid.b - grid.a)
    window = np.sin(np.pi * s) ** 6
    out = []
    for _ in range(count):
        c = rng.standard_normal(4)
        bump = c[0] + c[1] * s + c[2] * np.sin(2 * np.pi * s) + c[3] * np.cos(np.pi * s)
        out.append(GridFunction(grid, window * bump).normalized())
    return out


def intertwining_operator_residual(w: Superpotential, grid: Grid,
                                   psi: GridFunction,
                                   energy: float = 0.0) -> float:
    """||(A H+ - H- A) psi|| / ||psi|| with H+/- built from the same W.

    The continuum identity A H+ = H- A holds exactly for any W; on the grid
    the residual is O(h^2) for smooth boundary-compatible psi.
    """
    pair = partner_potentials(w, energy)
    h_plus = discretize(lambda x: pair.v_plus(x) - energy, grid)
    h_minus = discretize(lambda x: pair.v_minus(x) - energy, grid)
    lhs = apply_A(w, GridFunction(grid, h_plus.matvec(psi.values)))
    rhs = GridFunction(grid, h_minus.matvec(apply_A(w, psi).values))
    diff = GridFunction(grid, lhs.values - rhs.values)
    return diff.norm() / psi.norm()


# ---------------------------------------------------------------------------
# claim audit
# ---------------------------------------------------------------------------

def _row(claim: str, params: dict, lhs_max: float, rhs_max: float,
         dev: float, tol: Optional[float], status: str) -> dict:
    return {
        "claim": claim,
        "params": params,
        "lhs_max": float(lhs_max),
        "rhs_max": float(rhs_max),
        "max_abs_dev": float(dev),
        "tol": tol,
        "status": status,
    }


def verify_claims(preset: str, grid_points: int = 4000) -> list[dict]:
    """Evaluate the preset-specific printed identities and report deviations.

    Every row carries the measured numbers; construction identities that hold
    by algebra are pass/fail at tight tolerance, while printed preset-specific
    formulas are always status "reported" (their deviations are findings, not
    test failures).  Presets: "oscillator3d", "coulomb", "scarf".
    """
    if preset == "oscillator3d":
        return _oscillator_claims(grid_points)
    if preset == "coulomb":
        return _coulomb_claims(grid_points)
    if preset == "scarf":
        return _scarf_claims(grid_points)
    raise ValueError(f"claim audit covers oscillator3d, coulomb, scarf; got {preset!r}")


def _oscillator_claims(grid_points: int) -> list[dict]:
    l = 1
    kf = l + 0.5
    grid = Grid(0.0, 12.0, grid_points)
    # audit window away from the centrifugal singularity
    x = grid.points()
    win = x > 0.25
    xw = x[win]
    rows = []
    params = {"preset": "oscillator3d", "l": l, "k": kf}

    w_der = oscillator_intertwiner(l)
    pair = partner_potentials(w_der, 0.0)
    vdiff = pair.v_minus(xw) - pair.v_plus(xw)
    two_wp = 2 * w_der.w_prime(xw)
    dev = float(np.max(np.abs(vdiff - two_wp)))
    scale = float(np.max(np.abs(two_wp)))
    rows.append(_row("partner-construction-difference", params,
                     scale, scale, dev, 1e-10 * max(scale, 1.0),
                     "pass" if dev <= 1e-10 * max(scale, 1.0) else "fail"))

    w_printed = printed_superpotential_candidate(l, kf)
    direct = np.abs(w_printed.w(xw) - w_der.w(xw))
    rows.append(_row("superpotential-printed-direct-reading", params,
                     float(np.max(np.abs(w_printed.w(xw)))),
                     float(np.max(np.abs(w_der.w(xw)))),
                     float(np.max(direct)), None, "reported"))
    chain = np.abs(xw * w_printed.w(xw**2 / 2) - w_der.w(xw))
    rows.append(_row("superpotential-printed-chain-rule-reading", params,
                     float(np.max(np.abs(xw * w_printed.w(xw**2 / 2)))),
                     float(np.max(np.abs(w_der.w(xw)))),
                     float(np.max(chain)), None, "reported"))

    # printed claim: 2W' equals the oscillator extension term
    ext = 2.0 * ve_laguerre(xw**2 / 2, kf)
    rows.append(_row("oscillator-extension-vs-2wprime", params,
                     float(np.max(np.abs(two_wp))), float(np.max(np.abs(ext))),
                     float(np.max(np.abs(two_wp - ext))), None, "reported"))
    # ... and the gap is exactly the centrifugal step 2l/x^2 - 1 between the
    # partner channels, which identifies the claim's missing terms
    gap = two_wp - ext - (2 * l / xw**2 - 1.0)
    rows.append(_row("oscillator-2wprime-extension-gap-structure", params,
                     float(np.max(np.abs(two_wp - ext))),
                     float(np.max(np.abs(2 * l / xw**2 - 1.0))),
                     float(np.max(np.abs(gap))), None, "reported"))
    printed_rhs = -l / xw**2 + 2 * xw**2 / (xw**2 + kf) ** 2 - 1.0 / (xw**2 + kf)
    rows.append(_row("oscillator-2wprime-printed-rhs", params,
                     float(np.max(np.abs(two_wp))), float(np.max(np.abs(printed_rhs))),
                     float(np.max(np.abs(two_wp - printed_rhs))), None, "reported"))

    # does the conventional ground-state recipe recover the intertwiner? (it should not)
    osc = Oscillator3D(l=l)
    psi0 = osc.exceptional_state(1).on_grid(grid)
    if psi0.values.sum() < 0:  # closed forms are defined up to sign
        psi0 = GridFunction(grid, -psi0.values)
    w_gs = superpotential_from_ground_state(psi0)
    dev_gs = np.abs(w_gs.w(xw) - w_der.w(xw))
    rows.append(_row("ground-state-superpotential-diagnostic", params,
                     float(np.max(np.abs(w_gs.w(xw)))),
                     float(np.max(np.abs(w_der.w(xw)))),
                     float(np.max(dev_gs)), None, "reported"))
    return rows


def _coulomb_claims(grid_points: int) -> list[dict]:
    l = 0
    kf = 2 * l + 1
    grid = Grid(0.0, 80.0, grid_points)
    r = grid.points()
    win = r > 0.5
    rw = r[win]
    params = {"preset": "coulomb", "l": l, "k": kf}
    rows = []

    # printed mapped expression: -l/r^2 + (1/r)(1/(r+k) - 2k/(r+k)^2)
    printed = -l / rw**2 + (1.0 / rw) * (1.0 / (rw + kf) - 2 * kf / (rw + kf) ** 2)
    for n in (1, 2):
        big_n = n + l
        derived = ve_laguerre(rw / big_n, kf) / (big_n * rw)
        rows.append(_row(f"coulomb-mapped-2wprime-vs-level{n}-extension",
                         {**params, "n": n},
                         float(np.max(np.abs(printed))), float(np.max(np.abs(derived))),
                         float(np.max(np.abs(printed - derived))), None, "reported"))
    return rows


def _scarf_claims(grid_points: int) -> list[dict]:
    sc = ScarfTrig(A=3, B=1)
    a, b = sc.default_domain()
    grid = Grid(a, b, grid_points)
    x = grid.points()
    z = sc.variable(x)
    params = {"preset": "scarf", "A": str(sc.A), "B": str(sc.B)}
    rows = []

    printed = sc.ve_printed(z)
    derived = sc.extension(x)
    dev = printed - derived
    rows.append(_row("scarf-printed-extension-vs-derived", params,
                     float(np.max(np.abs(printed))), float(np.max(np.abs(derived))),
                     float(np.max(np.abs(dev))), None, "reported"))
    rows.append(_row("scarf-printed-extension-offset", params,
                     float(np.mean(dev)), 0.0,
                     float(np.max(dev) - np.min(dev)), None, "reported"))

    # raising-operator normalization: measured leading-coefficient ratio vs claim
    al, be = sc.jacobi_alpha, sc.jacobi_beta
    for n in range(0, 5):
        out = x1_jacobi_op_route(n, al, be)
        ref = jacobi_classical(n + 1, al, be)
        measured = float(out.leading / ref.leading)
        claimed = float(2 * (be - al) * (be + n))
        rows.append(_row("jacobi-raising-constant",
                         {**params, "n": n, "measured": measured, "claimed": claimed},
                         measured, claimed, abs(measured - claimed), None, "reported"))
    return rows
