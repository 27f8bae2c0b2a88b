"""Finite-difference Schrödinger eigensolver on a uniform grid.

The Hamiltonian convention everywhere is H = -d^2/dx^2 + V(x) with Dirichlet
boundaries at both ends of the (truncated) domain, discretized with the
standard 3-point Laplacian.  The symmetric tridiagonal eigenproblems go
through LAPACK's bisection + inverse-iteration path (scipy
``eigh_tridiagonal``), which also serves the Golub-Welsch construction in
:mod:`exopoly.quad`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal


class SolverError(RuntimeError):
    """Raised when a discretization or eigensolve cannot proceed."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid with N interior points on (a, b); h = (b-a)/(N+1).

    Dirichlet values at a and b are implicit and never stored.  For radial
    problems a = 0 is the exact boundary point of the half-line; the potential
    is only ever evaluated at interior nodes, so centrifugal terms are safe.
    """

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("grid requires a < b")
        if self.n < 16:
            raise ValueError("grid requires at least 16 interior points")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    def points(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.n + 1)


@dataclass
class GridFunction:
    """Values of a function at the interior nodes of a Grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise ValueError("values must match the grid size")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function contains non-finite values")

    def norm(self) -> float:
        return float(np.sqrt(self.grid.h * np.dot(self.values, self.values)))

    def inner(self, other: "GridFunction") -> float:
        return float(self.grid.h * np.dot(self.values, other.values))

    def normalized(self) -> "GridFunction":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero grid function")
        return GridFunction(self.grid, self.values / nrm)

    @staticmethod
    def sample(f: Callable[[np.ndarray], np.ndarray], grid: Grid) -> "GridFunction":
        return GridFunction(grid, np.asarray(f(grid.points()), dtype=float))


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal operator: main diagonal and (constant-length-1) off diagonal."""

    diag: np.ndarray
    off: np.ndarray

    @property
    def n(self) -> int:
        return len(self.diag)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out


def discretize(potential: Callable[[np.ndarray], np.ndarray], grid: Grid) -> Tridiagonal:
    """3-point discretization of -d^2/dx^2 + V with Dirichlet boundaries.

    Diagonal entries 2/h^2 + V(x_i), off-diagonal -1/h^2.  A potential that
    evaluates to a non-finite value anywhere on the grid is rejected, naming
    the offending node.
    """
    x = grid.points()
    v = np.asarray(potential(x), dtype=float)
    if v.shape == ():
        v = np.full(grid.n, float(v))
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        raise SolverError(f"potential is not finite at grid node x={x[bad[0]]!r}")
    h2 = grid.h**2
    return Tridiagonal(diag=2.0 / h2 + v, off=np.full(grid.n - 1, -1.0 / h2))


def tridiagonal_eigh(
    diag: np.ndarray,
    off: np.ndarray,
    count: Optional[int] = None,
    values_only: bool = False,
):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    With ``count`` set, only the lowest ``count`` pairs are computed via
    bisection on Sturm sequences plus inverse iteration; otherwise the full
    decomposition is returned.  ``values_only`` skips eigenvectors (used by
    the Golub-Welsch quadrature construction, where large rules would not fit
    a full eigenvector matrix).
    """
    try:
        if count is None:
            if values_only:
                return eigh_tridiagonal(diag, off, eigvals_only=True)
            return eigh_tridiagonal(diag, off)
        return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    except Exception as exc:  # pragma: no cover - LAPACK failures are exotic
        raise SolverError(f"tridiagonal eigensolve failed: {exc}") from exc


def eigen_lowest(op: Tridiagonal, count: int, grid: Optional[Grid] = None):
    """Lowest ``count`` eigenpairs of a tridiagonal operator, ascending.

    Eigenvectors are normalized (in the h-weighted grid norm when ``grid`` is
    given, Euclidean otherwise).  Returns a list of (eigenvalue, vector) with
    vector a GridFunction when ``grid`` is given, else a plain array.
    """
    if count < 1 or count > op.n:
        raise ValueError("count must be between 1 and the matrix size")
    w, v = tridiagonal_eigh(op.diag, op.off, count=count)
    pairs = []
    for i in range(count):
        vec = v[:, i]
        if grid is not None:
            gf = GridFunction(grid, vec / np.sqrt(grid.h * np.dot(vec, vec)))
            pairs.append((float(w[i]), gf))
        else:
            pairs.append((float(w[i]), vec / np.linalg.norm(vec)))
    return pairs


def eigen_residual(op: Tridiagonal, value: float, vec: np.ndarray) -> float:
    """Discrete residual ||T psi - E psi|| / ||psi|| (norm-independent)."""
    r = op.matvec(vec) - value * vec
    return float(np.linalg.norm(r) / np.linalg.norm(vec))


def rayleigh_quotient(op: Tridiagonal, psi) -> float:
    """<psi, T psi> / <psi, psi> for a grid function or plain vector."""
    v = psi.values if isinstance(psi, GridFunction) else np.asarray(psi, dtype=float)
    denom = float(np.dot(v, v))
    if denom == 0.0:
        raise ValueError("rayleigh quotient of the zero vector")
    return float(np.dot(v, op.matvec(v)) / denom)


# ---------------------------------------------------------------------------
# spectrum reports and comparison
# ---------------------------------------------------------------------------

@dataclass
class SpectrumReport:
    """Eigenvalues of one Hamiltonian with per-pair discrete residuals."""

    preset: str
    params: dict
    grid: Grid
    eigenvalues: list[float]
    residuals: list[float]
    mapping: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "preset": self.preset,
            "params": self.params,
            "grid": {"a": self.grid.a, "b": self.grid.b, "N": self.grid.n},
            "levels": [
                {"E": e, "residual": r}
                for e, r in zip(self.eigenvalues, self.residuals)
            ],
        }
        if self.mapping is not None:
            out["mapping"] = self.mapping
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    def to_csv(self) -> str:
        lines = ["index,E,residual"]
        for i, (e, r) in enumerate(zip(self.eigenvalues, self.residuals)):
            lines.append(f"{i},{e!r},{r!r}")
        return "\n".join(lines) + "\n"


def solve_spectrum(
    potential: Callable[[np.ndarray], np.ndarray],
    grid: Grid,
    count: int,
    preset: str = "custom",
    params: Optional[dict] = None,
) -> SpectrumReport:
    """Discretize, solve for the lowest ``count`` levels, and package a report."""
    op = discretize(potential, grid)
    pairs = eigen_lowest(op, count, grid=grid)
    eigs = [e for e, _ in pairs]
    residuals = [eigen_residual(op, e, gf.values) for e, gf in pairs]
    return SpectrumReport(
        preset=preset,
        params=dict(params or {}),
        grid=grid,
        eigenvalues=eigs,
        residuals=residuals,
    )


def spectrum_compare(a: Sequence[float], b: Sequence[float], tol: float) -> dict:
    """Greedy nearest-match mapping of spectrum ``b`` into spectrum ``a``.

    Candidate pairs are taken in order of increasing |E_a - E_b| and accepted
    while both levels are unused and the gap is within ``tol``.  The result
    reports matched index pairs, the unmatched levels of each side, and the
    worst matched gap; it deliberately does not presuppose which side (if
    either) is missing a state -- the mapping itself is the evidence.
    """
    a = list(a)
    b = list(b)
    cand = sorted(
        ((abs(ea - eb), i, j) for i, ea in enumerate(a) for j, eb in enumerate(b)),
        key=lambda t: t[0],
    )
    used_a: set[int] = set()
    used_b: set[int] = set()
    pairs = []
    for gap, i, j in cand:
        if gap > tol:
            break
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        pairs.append({"a": i, "b": j, "diff": gap})
    pairs.sort(key=lambda p: p["a"])
    return {
        "pairs": pairs,
        "unmatched_a": [i for i in range(len(a)) if i not in used_a],
        "unmatched_b": [j for j in range(len(b)) if j not in used_b],
        "max_pair_diff": max((p["diff"] for p in pairs), default=0.0),
    }


def convergence_order(
    potential: Callable[[np.ndarray], np.ndarray],
    domain: tuple[float, float],
    exact: float,
    sizes: Sequence[int],
    level: int = 0,
) -> float:
    """Measured eigenvalue convergence exponent p in error ~ h^p.

    Solves the same problem on each grid size and fits log|E - exact| against
    log h by least squares.
    """
    hs, errs = [], []
    for n in sizes:
        g = Grid(domain[0], domain[1], n)
        op = discretize(potential, g)
        w, _ = tridiagonal_eigh(op.diag, op.off, count=level + 1)
        hs.append(g.h)
        errs.append(abs(float(w[level]) - exact))
    if any(e == 0 for e in errs):
        raise SolverError("exact eigenvalue hit to roundoff; cannot fit an order")
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    return float(slope)
