"""Degenerate radial Sturm-Liouville eigenproblems by weighted P1 finite elements.

Discretizes -d/dr(r^p dR/dr) = rho * r^q * R on an interval with Dirichlet
conditions imposed strongly at either end.  Element integrals of power
weights are evaluated in closed form, so the only discretization errors are
interpolation and mass lumping.  The generalized pencil is lumped to a
symmetric tridiagonal standard problem and solved by Sturm-sequence
bisection plus inverse iteration (LAPACK stebz/stein via scipy), the
smallest eigenvalues first.

The weighted stiffness integral r^alpha |R'|^2 and the weighted masses with
exponents alpha, alpha - 2, 1, -1 are exactly the bilinear forms behind the
separated structure of the degenerate wave operator and behind the
Hardy-Poincare quotients; closed-form Bessel eigenfunctions are provided as
an independent cross-check route.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import brentq
from scipy.special import gamma as gamma_fn
from scipy.special import jv

from .errors import ConvergenceFailure, DivergentWeight, InvalidMeshSpec

__all__ = [
    "RadialMesh",
    "WeightedMatrices",
    "RadialEigenpair",
    "RadialBasis",
    "build_graded_mesh",
    "build_log_mesh",
    "build_uniform_mesh",
    "assemble_weighted_system",
    "solve_eigenpairs",
    "refine_smallest_eigenpair",
    "solve_radial_basis",
    "elliptic_identity_residual",
    "one_sided_flux",
    "bessel_eigenvalue",
    "bessel_radial_mode",
    "eigenpairs_to_csv",
]


@dataclass(frozen=True)
class RadialMesh:
    """Strictly increasing node vector of a 1D piecewise-linear mesh."""

    nodes: np.ndarray
    grading: float = 1.0

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise InvalidMeshSpec("mesh needs at least 2 cells")
        if np.any(np.diff(nodes) <= 0.0):
            raise InvalidMeshSpec("mesh nodes must be strictly increasing")
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_cells(self) -> int:
        return self.nodes.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])


def build_graded_mesh(N: int, g: float) -> RadialMesh:
    """Mesh on [0, 1] with nodes (j/N)^g; g = 1 is uniform, g > 1 crowds r = 0."""
    if N < 2 or int(N) != N:
        raise InvalidMeshSpec(f"need an integer cell count N >= 2, got {N}")
    if g < 1.0:
        raise InvalidMeshSpec(f"grading exponent must satisfy g >= 1, got {g}")
    return RadialMesh((np.arange(N + 1) / N) ** g, grading=float(g))


def build_log_mesh(N: int, delta: float) -> RadialMesh:
    """Geometric mesh on [delta, 1], uniform in ln r (for truncated problems)."""
    if N < 2 or int(N) != N:
        raise InvalidMeshSpec(f"need an integer cell count N >= 2, got {N}")
    if not 0.0 < delta < 1.0:
        raise InvalidMeshSpec("delta must lie in (0, 1)")
    return RadialMesh(np.exp(np.linspace(math.log(delta), 0.0, N + 1)))


def build_uniform_mesh(N: int, a: float = 0.0, b: float = 1.0) -> RadialMesh:
    """Uniform mesh with N cells on [a, b]."""
    if N < 2 or int(N) != N:
        raise InvalidMeshSpec(f"need an integer cell count N >= 2, got {N}")
    if not b > a:
        raise InvalidMeshSpec("interval must satisfy a < b")
    return RadialMesh(np.linspace(a, b, N + 1))


def power_integral(a: np.ndarray, b: np.ndarray, m: float) -> np.ndarray:
    """Exact integral of r^m over [a, b]; +inf where it diverges at a = 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore"):
        if m == -1.0:
            out = np.log(b) - np.where(a > 0.0, np.log(a), -np.inf)
        else:
            e = m + 1.0
            pa = np.where(a > 0.0, a**e, np.where(e > 0.0, 0.0, np.inf))
            out = (b**e - pa) / e
    return out


_LEFT_DIRICHLET = {"dirichlet-dirichlet", "dirichlet-left-only"}
_RIGHT_DIRICHLET = {"dirichlet-dirichlet", "dirichlet-right-only"}
_BC_KINDS = _LEFT_DIRICHLET | _RIGHT_DIRICHLET


@dataclass(frozen=True)
class WeightedMatrices:
    """Assembled tridiagonal stiffness/mass pair for one weighted pencil.

    Full-mesh symmetric tridiagonals are kept (diagonal kd/md, off-diagonal
    ke/me) together with the constrained dof window [i0, i1); `lumped` holds
    the row sums of the full mass rows restricted to that window, i.e. the
    discrete mass inner product used by the eigensolver.
    """

    mesh: RadialMesh
    p: float
    q: float
    bc: str
    kd: np.ndarray
    ke: np.ndarray
    md: np.ndarray
    me: np.ndarray
    i0: int
    i1: int

    @property
    def n_dof(self) -> int:
        return self.i1 - self.i0

    @property
    def kd_dof(self) -> np.ndarray:
        return self.kd[self.i0 : self.i1]

    @property
    def ke_dof(self) -> np.ndarray:
        return self.ke[self.i0 : self.i1 - 1]

    @property
    def md_dof(self) -> np.ndarray:
        return self.md[self.i0 : self.i1]

    @property
    def me_dof(self) -> np.ndarray:
        return self.me[self.i0 : self.i1 - 1]

    @property
    def lumped(self) -> np.ndarray:
        row = self.md.copy()
        row[:-1] += self.me
        row[1:] += self.me
        return row[self.i0 : self.i1]

    def expand(self, x: np.ndarray) -> np.ndarray:
        """Zero-pad a dof vector back to the full node set."""
        full = np.zeros(self.mesh.nodes.size)
        full[self.i0 : self.i1] = x
        return full

    def stiffness_action(self, x: np.ndarray) -> np.ndarray:
        return _tridiag_matvec(self.kd_dof, self.ke_dof, x)

    def mass_action(self, x: np.ndarray) -> np.ndarray:
        return _tridiag_matvec(self.md_dof, self.me_dof, x)

    def stiffness_product(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ self.stiffness_action(y))

    def mass_product(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ self.mass_action(y))


def _tridiag_matvec(d: np.ndarray, e: np.ndarray, x: np.ndarray) -> np.ndarray:
    y = d * x
    y[:-1] += e * x[1:]
    y[1:] += e * x[:-1]
    return y


def assemble_weighted_system(
    mesh: RadialMesh, p: float, q: float, bc: str
) -> WeightedMatrices:
    """Assemble K_ij = int r^p phi_i' phi_j' and M_ij = int r^q phi_i phi_j.

    All element integrals are closed-form power integrals; no quadrature.
    On meshes touching r = 0 the weights must keep every assembled entry
    finite: p > -1 always, and q > -2 with a left Dirichlet condition
    (q >= 0 without one, since the unconstrained corner basis function does
    not vanish at the degenerate point).
    """
    if bc not in _BC_KINDS:
        raise ValueError(f"unknown boundary condition kind: {bc!r}")
    nodes = mesh.nodes
    touches_zero = nodes[0] == 0.0
    if touches_zero:
        if p <= -1.0:
            raise DivergentWeight(f"stiffness weight r^{p} is not integrable at 0")
        if bc in _LEFT_DIRICHLET:
            if q <= -2.0:
                raise DivergentWeight(
                    f"mass weight r^{q} diverges on the first cell even with "
                    "a left Dirichlet condition"
                )
        elif q < 0.0:
            raise DivergentWeight(
                f"mass weight r^{q} needs a left Dirichlet condition on "
                "meshes touching r = 0"
            )

    a, b = nodes[:-1], nodes[1:]
    h = b - a
    ip = power_integral(a, b, p)
    iq = power_integral(a, b, q)
    iq1 = power_integral(a, b, q + 1.0)
    iq2 = power_integral(a, b, q + 2.0)

    # local stiffness is (int r^p / h^2) * [[1, -1], [-1, 1]]
    k_cell = ip / h**2
    # local mass from the monomial expansion of the hat-function products
    with np.errstate(invalid="ignore"):
        m_ll = (b**2 * iq - 2.0 * b * iq1 + iq2) / h**2
        m_lr = (-iq2 + (a + b) * iq1 - a * b * iq) / h**2
        m_rr = (iq2 - 2.0 * a * iq1 + a**2 * iq) / h**2
    if touches_zero:
        # a = 0 terms multiply divergent integrals by zero: their true value
        # is zero, not nan, because the vanishing basis function tames r^q
        m_lr[0] = (-iq2[0] + b[0] * iq1[0]) / h[0] ** 2
        m_rr[0] = iq2[0] / h[0] ** 2

    n = nodes.size
    kd = np.zeros(n)
    kd[:-1] += k_cell
    kd[1:] += k_cell
    md = np.zeros(n)
    md[:-1] += m_ll
    md[1:] += m_rr

    i0 = 1 if bc in _LEFT_DIRICHLET else 0
    i1 = n - 1 if bc in _RIGHT_DIRICHLET else n
    mats = WeightedMatrices(
        mesh=mesh, p=p, q=q, bc=bc, kd=kd, ke=-k_cell, md=md, me=m_lr, i0=i0, i1=i1
    )
    if not np.all(np.isfinite(mats.kd_dof)) or not np.all(np.isfinite(mats.lumped)):
        raise DivergentWeight("assembled dof entries are not all finite")
    return mats


@dataclass(frozen=True)
class RadialEigenpair:
    """One eigenpair: eigenvalue, full nodal eigenvector, boundary flux.

    R carries the boundary nodes (zero where constrained) and is normalized
    to unit discrete (lumped) mass with the first interior value positive;
    flux_at_1 is the variationally recovered derivative at the right
    endpoint, negative for the ground mode under this orientation.
    """

    rho: float
    R: np.ndarray
    flux_at_1: float
    weighted_energy: float


def solve_eigenpairs(mats: WeightedMatrices, k_max: int) -> list[RadialEigenpair]:
    """Smallest k_max eigenpairs of K x = rho M x with M lumped to diagonal.

    The lumped pencil is transformed to the standard symmetric tridiagonal
    problem D^{-1/2} K D^{-1/2} and solved by bisection plus inverse
    iteration; eigenvectors are re-orthonormalized in the lumped inner
    product and oriented to start positive.

    Extreme grading caution: bisection resolves eigenvalues to an absolute
    tolerance tied to the norm of the transformed matrix, whose first
    diagonal entries grow like N^{g(1+p)} near r = 0.  Once that norm
    exceeds about 1/eps times the target eigenvalue (g >= 3 at N ~ 10^4)
    the low end of the spectrum drowns in roundoff; use
    `refine_smallest_eigenpair` on the consistent pencil in that regime.
    """
    n = mats.n_dof
    if not 1 <= k_max <= n:
        raise ValueError(f"k_max must lie in [1, {n}], got {k_max}")
    d_lump = mats.lumped
    if np.any(d_lump <= 0.0):
        raise DivergentWeight("lumped mass must be positive on all dofs")
    sqrt_d = np.sqrt(d_lump)
    diag = mats.kd_dof / d_lump
    off = mats.ke_dof / (sqrt_d[:-1] * sqrt_d[1:])
    try:
        vals, vecs = scipy.linalg.eigh_tridiagonal(
            diag, off, select="i", select_range=(0, k_max - 1), lapack_driver="stebz"
        )
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(f"tridiagonal eigensolver failed: {exc}") from exc

    x = vecs / sqrt_d[:, None]
    # modified Gram-Schmidt in the lumped inner product; bisection+stein can
    # lose orthogonality only for pathologically clustered eigenvalues, but
    # the invariant is cheap to enforce unconditionally
    for j in range(k_max):
        for i in range(j):
            x[:, j] -= (x[:, i] * d_lump) @ x[:, j] * x[:, i]
        nrm = math.sqrt((x[:, j] * d_lump) @ x[:, j])
        if nrm == 0.0:
            raise ConvergenceFailure(f"inverse iteration returned a null vector at {j}")
        x[:, j] /= nrm

    pairs = []
    for j in range(k_max):
        xj = x[:, j]
        nz = np.flatnonzero(xj)
        if nz.size and xj[nz[0]] < 0.0:
            xj = -xj
        # bisection locates eigenvalues only to ~eps * ||T||, which the huge
        # near-origin diagonal entries can make coarse; the Rayleigh quotient
        # of the computed eigenvector is second-order accurate in its
        # residual and restores near-machine eigenvalues
        energy = mats.stiffness_product(xj, xj)
        rho = energy  # x is unit-norm in the lumped mass
        full = mats.expand(xj)
        pairs.append(
            RadialEigenpair(
                rho=rho,
                R=full,
                flux_at_1=_variational_flux(mats, full, rho),
                weighted_energy=energy,
            )
        )
    return pairs


def refine_smallest_eigenpair(
    mats: WeightedMatrices,
    x0: np.ndarray | None = None,
    tol: float = 1e-10,
    max_iter: int = 400,
) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of the consistent pencil K x = rho M x.

    Inverse iteration with the exact (unlumped) mass, normalized in M, with
    the Rayleigh quotient as the eigenvalue estimate.  Removes the lumping
    perturbation of `solve_eigenpairs` and stays robust under strong mesh
    grading, where the lumped similarity transform exhausts the dynamic
    range of floating point and Sturm bisection loses the low end of the
    spectrum.  Stops on relative stagnation of the quotient, or once its
    decrements stop shrinking (roundoff floor of the quotient, well below
    any discretization error).
    """
    n = mats.n_dof
    ab = np.zeros((2, n))
    ab[0, 1:] = mats.ke_dof
    ab[1, :] = mats.kd_dof
    x = np.ones(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    rho_old = np.inf
    change_old = np.inf
    stalls = 0
    for it in range(max_iter):
        y = scipy.linalg.solveh_banded(ab, mats.mass_action(x))
        nrm = math.sqrt(y @ mats.mass_action(y))
        if nrm == 0.0:
            raise ConvergenceFailure("inverse iteration collapsed to zero")
        x = y / nrm
        rho = float(x @ mats.stiffness_action(x))
        change = abs(rho - rho_old)
        if change <= tol * abs(rho):
            return rho, x
        if it >= 3 and change >= change_old:
            stalls += 1
            if stalls >= 3:
                return rho, x
        else:
            stalls = 0
        rho_old, change_old = rho, change
    raise ConvergenceFailure(
        f"consistent inverse iteration did not converge in {max_iter} steps"
    )


def _variational_flux(mats: WeightedMatrices, full: np.ndarray, rho: float) -> float:
    """Boundary derivative at the right endpoint by variational recovery.

    Tests the eigen-equation against the boundary hat function: the residual
    of the last full row equals r^p R' there.  Falls back to a one-sided
    difference when the recovered value is not finite.
    """
    kd, ke, md, me = mats.kd, mats.ke, mats.md, mats.me
    k_row = ke[-1] * full[-2] + kd[-1] * full[-1]
    m_row = me[-1] * full[-2] + md[-1] * full[-1]
    flux = (k_row - rho * m_row) / mats.mesh.nodes[-1] ** mats.p
    if not math.isfinite(flux):  # pragma: no cover - defensive
        return one_sided_flux(mats.mesh, full)
    return float(flux)


def one_sided_flux(mesh: RadialMesh, R: np.ndarray) -> float:
    """Second-order one-sided derivative at the right endpoint.

    Differentiates the quadratic through the last three nodes; valid on
    nonuniform meshes.
    """
    r2, r1, r0 = mesh.nodes[-3], mesh.nodes[-2], mesh.nodes[-1]
    f2, f1, f0 = R[-3], R[-2], R[-1]
    h1 = r0 - r1
    h2 = r0 - r2
    return float(f0 * (1.0 / h1 + 1.0 / h2) - f1 * h2 / (h1 * (h2 - h1)) + f2 * h1 / (h2 * (h2 - h1)))


# ---------------------------------------------------------------------------
# Eigenbasis wrapper used by the wave simulator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialBasis:
    """Solved Dirichlet eigenbasis of -d/dr(r^alpha d/dr) on (0, 1)."""

    alpha: float
    mats: WeightedMatrices
    rho: np.ndarray  # (k_max,)
    R: np.ndarray  # (k_max, n_nodes) nodal values
    flux: np.ndarray  # (k_max,) boundary derivatives at r = 1
    weighted_energy: np.ndarray  # (k_max,) int r^alpha (R_k')^2 dr

    @property
    def mesh(self) -> RadialMesh:
        return self.mats.mesh

    @property
    def k_max(self) -> int:
        return self.rho.size

    def consistent_gram(self) -> np.ndarray:
        """Exact pairwise integrals int R_j R_k dr (consistent mass products)."""
        dof = self.R[:, self.mats.i0 : self.mats.i1]
        return dof @ np.array([self.mats.mass_action(x) for x in dof]).T


def solve_radial_basis(
    alpha: float, N: int = 2048, g: float = 2.0, k_max: int = 16
) -> RadialBasis:
    """Assemble and solve the weighted eigenbasis on a graded mesh."""
    mesh = build_graded_mesh(N, g)
    mats = assemble_weighted_system(mesh, p=alpha, q=0.0, bc="dirichlet-dirichlet")
    pairs = solve_eigenpairs(mats, k_max)
    return RadialBasis(
        alpha=alpha,
        mats=mats,
        rho=np.array([p.rho for p in pairs]),
        R=np.array([p.R for p in pairs]),
        flux=np.array([p.flux_at_1 for p in pairs]),
        weighted_energy=np.array([p.weighted_energy for p in pairs]),
    )


# ---------------------------------------------------------------------------
# Stationary identity of the separated elliptic operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EllipticIdentityReport:
    """Both sides of ||g||^2 = mu^2 ||u||^2 + ||Lu||^2 + 2 mu int r^alpha |u'|^2."""

    lhs: float
    rhs: float
    mu: float
    relative_residual: float


def elliptic_identity_residual(
    basis: RadialBasis, mu_n: float, coeffs: Sequence[float]
) -> EllipticIdentityReport:
    """Discrete residual of the separated-mode elliptic energy identity.

    For u a combination of computed eigenpairs and g = mu*u - d/dr(r^a u'),
    the stiffness action per mode is rho_k R_k in the solver (lumped) inner
    product; evaluating every norm with the exact consistent mass instead
    makes the two sides differ only by the lumping perturbation, which is
    what this residual measures.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.size > basis.k_max:
        raise ValueError("more coefficients than computed eigenpairs")
    i0, i1 = basis.mats.i0, basis.mats.i1
    u = (c[:, None] * basis.R[: c.size, i0:i1]).sum(axis=0)
    lu = (c[:, None] * basis.rho[: c.size, None] * basis.R[: c.size, i0:i1]).sum(axis=0)
    g = mu_n * u + lu

    m = basis.mats.mass_product
    lhs = m(g, g)
    rhs = mu_n**2 * m(u, u) + m(lu, lu) + 2.0 * mu_n * basis.mats.stiffness_product(u, u)
    scale = max(lhs, rhs, np.finfo(float).tiny)
    return EllipticIdentityReport(
        lhs=lhs, rhs=rhs, mu=mu_n, relative_residual=abs(lhs - rhs) / scale
    )


# ---------------------------------------------------------------------------
# Closed-form Bessel eigenfunctions (independent cross-check route)
# ---------------------------------------------------------------------------


def _bessel_root(nu: float, k: int) -> float:
    """k-th positive zero of J_nu via bracketing from the McMahon estimate."""
    est = (k + 0.5 * nu - 0.25) * math.pi
    lo, hi = max(est - 0.6 * math.pi, 1e-8), est + 0.6 * math.pi
    f = lambda z: jv(nu, z)
    # widen the bracket until it straddles the k-th sign change
    zeros_found = 0
    z_prev, f_prev = 1e-8, f(1e-8)
    z = z_prev
    step = 0.05
    while zeros_found < k:
        z += step
        fz = f(z)
        if f_prev * fz < 0.0:
            zeros_found += 1
            lo, hi = z - step, z
        f_prev = fz
        if z > est + 20.0:  # pragma: no cover - cannot happen for moderate k
            raise ConvergenceFailure("Bessel root bracketing failed")
    return float(brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16))


def bessel_eigenvalue(alpha: float, k: int) -> float:
    """Exact k-th Dirichlet eigenvalue of -d/dr(r^alpha d/dr) on (0, 1).

    rho_k = ((2-alpha)/2)^2 j_{nu,k}^2 with nu = (1-alpha)/(2-alpha).
    """
    nu = (1.0 - alpha) / (2.0 - alpha)
    j = _bessel_root(nu, k)
    return ((2.0 - alpha) / 2.0 * j) ** 2


def bessel_radial_mode(
    alpha: float, k: int
) -> tuple[float, Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray], float]:
    """Closed-form k-th eigenfunction, its derivative, and the boundary flux.

    Returns (rho, R, dR, R'(1)) with R(r) up-normalized to unit L2 mass on
    (0, 1), positive near r = 0.  R(r) = C r^{(1-alpha)/2} J_nu(j r^{(2-alpha)/2})
    with C^2 = (2-alpha)/J_{nu+1}(j)^2 and |R'(1)| = (2-alpha)^{3/2} j / 2.
    """
    nu = (1.0 - alpha) / (2.0 - alpha)
    j = _bessel_root(nu, k)
    rho = ((2.0 - alpha) / 2.0 * j) ** 2
    tail = jv(nu + 1.0, j)
    c = math.sqrt(2.0 - alpha) / abs(tail)
    half = 0.5 * (1.0 - alpha)
    pow_arg = 0.5 * (2.0 - alpha)

    def R(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return c * r**half * jv(nu, j * r**pow_arg)

    def dR(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        z = j * r**pow_arg
        jp = jv(nu - 1.0, z) - nu / np.where(z > 0.0, z, np.inf) * jv(nu, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            term1 = half * r ** (half - 1.0) * jv(nu, z)
            term2 = r**half * jp * j * pow_arg * r ** (pow_arg - 1.0)
        return c * (term1 + term2)

    flux = -0.5 * (2.0 - alpha) ** 1.5 * j * math.copysign(1.0, tail)
    return rho, R, dR, flux


def bessel_small_r_coefficient(alpha: float, k: int) -> float:
    """Leading coefficient a0 of R(r) = a0 r^{1-alpha} (1 + O(r^{2-alpha}))."""
    nu = (1.0 - alpha) / (2.0 - alpha)
    j = _bessel_root(nu, k)
    c = math.sqrt(2.0 - alpha) / abs(jv(nu + 1.0, j))
    return c * (0.5 * j) ** nu / gamma_fn(nu + 1.0)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def eigenpairs_to_csv(basis: RadialBasis) -> str:
    """Eigenpair table with columns k, rho, flux_at_1, weighted_energy, mesh_N, grading, alpha."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "rho", "flux_at_1", "weighted_energy", "mesh_N", "grading", "alpha"])
    for k in range(basis.k_max):
        writer.writerow(
            [
                k + 1,
                repr(float(basis.rho[k])),
                repr(float(basis.flux[k])),
                repr(float(basis.weighted_energy[k])),
                basis.mesh.n_cells,
                basis.mesh.grading,
                basis.alpha,
            ]
        )
    return buf.getvalue()
