"""Carleman weight machinery: closed-form derivative package and grid checks.

The weight exponent is xi = theta^2 + r^(2-alpha) - beta (t - t0)^2 and
sigma = exp(lambda xi).  Every derivative of sigma that the conjugated
operator uses has a closed form; this module evaluates the whole package,
realizes the conjugation eta = exp(s sigma) psi, measures the conjugation
identity exp(s sigma) h = P+ eta + P- eta as a finite-difference residual
on a tensor grid, and computes the named component integrals of the
observability-producing estimate for empirical constant scans.

Exact smooth modal solutions (Bessel radial profiles) are used wherever a
residual is differentiated numerically: second-order convergence of the
centered stencils needs four bounded derivatives, which the piecewise
linear eigenvectors of the solver cannot offer.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateCellTouched, GridMismatch
from .params import CarlemanParams, CutoffSpec, eval_cutoff, theta_cutoff, time_cutoff
from .radial import bessel_radial_mode

__all__ = [
    "WeightDerivatives",
    "WeightField",
    "SmoothMode",
    "SmoothModalSolution",
    "ConjugationReport",
    "ComponentIntegrals",
    "eval_xi_sigma",
    "eval_b",
    "build_weight_field",
    "conjugate_field",
    "bessel_mode",
    "conjugation_residual",
    "conjugation_order_study",
    "carleman_component_integrals",
    "carleman_constant_scan",
]


@dataclass(frozen=True)
class WeightDerivatives:
    """Closed-form weight package at given points (all fields broadcast alike).

    Gradient components are ordered (theta, r); `xi_hess_rr` carries the
    factor (2-alpha)(1-alpha) r^(-alpha), flagged +inf at r = 0 rather than
    evaluated silently.
    """

    xi: np.ndarray
    sigma: np.ndarray
    xi_t: np.ndarray
    xi_grad_theta: np.ndarray
    xi_grad_r: np.ndarray
    a_xi_grad_theta: np.ndarray
    a_xi_grad_r: np.ndarray
    xi_hess_theta: np.ndarray
    xi_hess_rr: np.ndarray
    sigma_t: np.ndarray
    sigma_grad_theta: np.ndarray
    sigma_grad_r: np.ndarray
    a_sigma_grad_theta: np.ndarray
    a_sigma_grad_r: np.ndarray
    a_grad_sigma_dot_grad_sigma: np.ndarray
    div_a_grad_sigma: np.ndarray
    div_a_grad_sigma_grad_theta: np.ndarray
    div_a_grad_sigma_grad_r: np.ndarray
    sigma_hess_theta_theta: np.ndarray
    sigma_hess_theta_r: np.ndarray
    sigma_hess_rr: np.ndarray
    sigma_tt: np.ndarray
    sigma_tt_grad_theta: np.ndarray
    sigma_tt_grad_r: np.ndarray
    b_xi: np.ndarray
    sym_zero_order: np.ndarray  # (sigma_t)^2 - A grad sigma . grad sigma
    anti_zero_order: np.ndarray  # sigma_tt - Div(A grad sigma)


def eval_b(params: CarlemanParams, alpha: float, point) -> np.ndarray:
    """b(xi) = |xi_t|^2 - A grad xi . grad xi, in closed form."""
    theta, r, t = (np.asarray(x, dtype=float) for x in point)
    return (
        4.0 * params.beta**2 * (t - params.t0) ** 2
        - (4.0 * theta**2 + (2.0 - alpha) ** 2 * r ** (2.0 - alpha))
    )


def eval_xi_sigma(params: CarlemanParams, alpha: float, point) -> WeightDerivatives:
    """Evaluate xi, sigma, and every derivative combination the estimate uses."""
    theta, r, t = (np.asarray(x, dtype=float) for x in point)
    beta, lam, t0 = params.beta, params.lam, params.t0
    two_a = 2.0 - alpha

    xi = theta**2 + r**two_a - beta * (t - t0) ** 2
    sigma = np.exp(lam * xi)
    xi_t = -2.0 * beta * (t - t0)
    g_theta = 2.0 * theta
    g_r = two_a * r ** (1.0 - alpha)
    with np.errstate(divide="ignore"):
        inv_pow = np.where(r > 0.0, r ** (-alpha), np.inf)
    hess_rr = two_a * (1.0 - alpha) * inv_pow
    quad = 4.0 * theta**2 + two_a**2 * r**two_a
    b = xi_t**2 - quad
    div_a = (4.0 - alpha) * lam * sigma + lam**2 * sigma * quad
    sig_tt = -2.0 * beta * lam * sigma + 4.0 * beta**2 * lam**2 * sigma * (t - t0) ** 2

    return WeightDerivatives(
        xi=xi,
        sigma=sigma,
        xi_t=xi_t * np.ones_like(xi),
        xi_grad_theta=g_theta * np.ones_like(xi),
        xi_grad_r=g_r * np.ones_like(xi),
        a_xi_grad_theta=2.0 * theta * np.ones_like(xi),
        a_xi_grad_r=two_a * r * np.ones_like(xi),
        xi_hess_theta=2.0 * np.ones_like(xi),
        xi_hess_rr=hess_rr * np.ones_like(xi),
        sigma_t=lam * sigma * xi_t,
        sigma_grad_theta=lam * sigma * g_theta,
        sigma_grad_r=lam * sigma * g_r,
        a_sigma_grad_theta=lam * sigma * 2.0 * theta,
        a_sigma_grad_r=lam * sigma * two_a * r,
        a_grad_sigma_dot_grad_sigma=lam**2 * sigma**2 * quad,
        div_a_grad_sigma=div_a,
        div_a_grad_sigma_grad_theta=(
            lam**2 * sigma * (16.0 - 2.0 * alpha) * theta
            + lam**3 * sigma * quad * g_theta
        ),
        # the bracket is (4 - alpha) + (2 - alpha)^2 = 8 - 5 alpha + alpha^2,
        # verified against centered differences of Div(A grad sigma)
        div_a_grad_sigma_grad_r=(
            lam**2 * sigma * two_a * (8.0 - 5.0 * alpha + alpha**2) * r ** (1.0 - alpha)
            + lam**3 * sigma * quad * g_r
        ),
        sigma_hess_theta_theta=lam * sigma * 2.0 + lam**2 * sigma * 4.0 * theta**2,
        sigma_hess_theta_r=lam**2 * sigma * 2.0 * two_a * theta * r ** (1.0 - alpha),
        sigma_hess_rr=lam * sigma * hess_rr + lam**2 * sigma * two_a**2 * r ** (2.0 - 2.0 * alpha),
        sigma_tt=sig_tt,
        sigma_tt_grad_theta=(
            (-2.0 * beta * lam**2 + 4.0 * beta**2 * lam**3 * (t - t0) ** 2) * sigma * g_theta
        ),
        sigma_tt_grad_r=(
            (-2.0 * beta * lam**2 + 4.0 * beta**2 * lam**3 * (t - t0) ** 2) * sigma * g_r
        ),
        b_xi=b,
        sym_zero_order=lam**2 * sigma**2 * b,
        anti_zero_order=-(4.0 - alpha + 2.0 * beta) * lam * sigma + lam**2 * sigma * b,
    )


@dataclass(frozen=True)
class WeightField:
    """sigma and its analytic factors cached on a tensor grid (theta, r, t)."""

    params: CarlemanParams
    alpha: float
    theta: np.ndarray
    r: np.ndarray
    t: np.ndarray
    sigma: np.ndarray  # (n_theta, n_r, n_t)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.theta.size, self.r.size, self.t.size)


def build_weight_field(
    params: CarlemanParams, alpha: float, theta: np.ndarray, r: np.ndarray, t: np.ndarray
) -> WeightField:
    """Materialize sigma on the tensor grid; other factors derive by broadcasting."""
    theta = np.asarray(theta, dtype=float)
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    xi = (
        theta[:, None, None] ** 2
        + r[None, :, None] ** (2.0 - alpha)
        - params.beta * (t[None, None, :] - params.t0) ** 2
    )
    return WeightField(
        params=params, alpha=alpha, theta=theta, r=r, t=t, sigma=np.exp(params.lam * xi)
    )


def conjugate_field(psi: np.ndarray, field: WeightField, inverse: bool = False) -> np.ndarray:
    """eta = exp(s sigma) psi pointwise on the field grid (or its exact inverse)."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != field.sigma.shape:
        raise GridMismatch(
            f"field shape {psi.shape} does not match grid shape {field.sigma.shape}"
        )
    s = -field.params.s if inverse else field.params.s
    return np.exp(s * field.sigma) * psi


# ---------------------------------------------------------------------------
# Exact smooth modal solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothMode:
    """One separated mode amp(t) sin(n pi theta) R(r) with exact radial profile."""

    n: int
    rho: float
    omega: float
    a: float
    b: float
    radial: Callable[[np.ndarray], np.ndarray]
    radial_deriv: Callable[[np.ndarray], np.ndarray]
    flux_at_1: float

    def amplitude(self, t: np.ndarray) -> np.ndarray:
        return self.a * np.cos(self.omega * t) + self.b / self.omega * np.sin(self.omega * t)

    def velocity(self, t: np.ndarray) -> np.ndarray:
        return -self.a * self.omega * np.sin(self.omega * t) + self.b * np.cos(self.omega * t)


def bessel_mode(alpha: float, n: int, k: int, a: float = 1.0, b: float = 0.0) -> SmoothMode:
    """Exact eigenmode with the k-th Bessel radial profile and sine order n."""
    rho, R, dR, flux = bessel_radial_mode(alpha, k)
    omega = math.sqrt((n * math.pi) ** 2 + rho)
    return SmoothMode(
        n=n, rho=rho, omega=omega, a=a, b=b, radial=R, radial_deriv=dR, flux_at_1=flux
    )


@dataclass(frozen=True)
class SmoothModalSolution:
    """Finite superposition of exact modes; solves the wave equation pointwise."""

    alpha: float
    modes: tuple[SmoothMode, ...]

    def _sum(self, theta, r, t, time_part: str, angular: str, radial: str) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        r = np.asarray(r, dtype=float)
        t = np.asarray(t, dtype=float)
        out = 0.0
        for m in self.modes:
            tp = m.amplitude(t) if time_part == "amp" else m.velocity(t)
            ang = np.sin(m.n * math.pi * theta)
            if angular == "deriv":
                ang = m.n * math.pi * np.cos(m.n * math.pi * theta)
            rad = m.radial(r) if radial == "value" else m.radial_deriv(r)
            out = out + tp * ang * rad
        return out

    def phi(self, theta, r, t) -> np.ndarray:
        return self._sum(theta, r, t, "amp", "value", "value")

    def phi_t(self, theta, r, t) -> np.ndarray:
        return self._sum(theta, r, t, "vel", "value", "value")

    def phi_theta(self, theta, r, t) -> np.ndarray:
        return self._sum(theta, r, t, "amp", "deriv", "value")

    def phi_r(self, theta, r, t) -> np.ndarray:
        return self._sum(theta, r, t, "amp", "value", "deriv")

    def trace_r1(self, theta, t) -> np.ndarray:
        """Normal derivative on the top side r = 1."""
        theta = np.asarray(theta, dtype=float)
        t = np.asarray(t, dtype=float)
        out = 0.0
        for m in self.modes:
            out = out + m.amplitude(t) * np.sin(m.n * math.pi * theta) * m.flux_at_1
        return out


# ---------------------------------------------------------------------------
# Conjugation identity residual
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugationReport:
    """Discrete L2 residual of exp(s sigma) h = P+ eta + P- eta."""

    residual_norm: float
    reference_norm: float
    relative: float
    shape: tuple[int, int, int]
    spacings: tuple[float, float, float]
    r_min: float


def _residual_axes(
    params: CarlemanParams, shape: tuple[int, int, int], r_min: float, T: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n_theta, n_r, n_t = shape
    d0 = params.delta0
    theta = np.linspace(d0, 1.0 - d0, n_theta + 1)
    hr = (1.0 - r_min) / n_r
    r = r_min + (np.arange(n_r) + 0.5) * hr
    if r[0] - hr <= 0.0:
        raise DegenerateCellTouched(
            "radial stencil would reach r <= 0; raise r_min or the resolution"
        )
    t = np.linspace(0.0, T, n_t + 1)
    return theta, r, t


def conjugation_residual(
    solution: SmoothModalSolution,
    params: CarlemanParams,
    shape: tuple[int, int, int] = (768, 96, 512),
    r_min: float = 0.1,
    zeta: CutoffSpec | None = None,
    kcut: CutoffSpec | None = None,
    t_chunk: int = 0,
) -> ConjugationReport:
    """Finite-difference residual of the conjugation identity on a tensor grid.

    psi = k(t) zeta(theta) phi with phi an exact modal solution, so
    h = 2 zeta k' phi_t + zeta k'' phi - 2 k zeta' phi_theta - k zeta'' phi
    is analytic; eta = exp(s sigma) psi is differentiated by second-order
    centered stencils while every sigma factor is analytic.  The norm is
    taken over (delta0, 1-delta0) x (r_min, 1) x (0, T) with the radial grid
    staggered by half a cell; r_min is held fixed across resolutions so that
    convergence ratios compare norms over one and the same domain (the
    radial profiles behave like r^(1-alpha) at the degenerate end, whose
    unbounded higher derivatives would otherwise contaminate the order).
    """
    alpha = params.alpha
    lam, s, beta = params.lam, params.s, params.beta
    theta, r, t = _residual_axes(params, shape, r_min, params.T)
    h_theta = theta[1] - theta[0]
    h_r = r[1] - r[0]
    h_t = t[1] - t[0]
    zeta = zeta or theta_cutoff(params.delta0)
    kcut = kcut or time_cutoff(params.epsilon, params.T)

    zv, zd1, zd2 = eval_cutoff(zeta, theta)
    two_a = 2.0 - alpha
    r_pow = r**two_a
    r_alpha = r**alpha
    r_alpha_m1 = alpha * r ** (alpha - 1.0)
    quad_rad = two_a**2 * r_pow

    th_c = theta[1:-1][:, None, None]
    zv_c = zv[1:-1][:, None, None]
    r_c = r[1:-1][None, :, None]
    r_alpha_c = r_alpha[1:-1][None, :, None]
    r_alpha_m1_c = r_alpha_m1[1:-1][None, :, None]

    acc_res = 0.0
    acc_ref = 0.0
    if t_chunk <= 0:
        # slabs of ~1.6M points keep every temporary cache-resident
        t_chunk = max(4, int(1.6e6 / (theta.size * r.size)))

    # sigma = exp(lam xi) factorizes over the three axes; only exp(s sigma)
    # needs a full-volume transcendental per chunk
    sig_theta = np.exp(lam * theta**2)
    sig_r = np.exp(lam * r_pow)

    for lo in range(1, t.size - 1, t_chunk):
        hi = min(lo + t_chunk, t.size - 1)
        slab = slice(lo - 1, hi + 1)
        ts = t[slab]
        kv, kd1, kd2 = eval_cutoff(kcut, ts)

        phi = solution.phi(theta[:, None, None], r[None, :, None], ts[None, None, :])
        sig_t = np.exp(-lam * beta * (ts - params.t0) ** 2)
        sigma = sig_theta[:, None, None] * (sig_r[:, None] * sig_t[None, :])[None, :, :]
        esig = np.exp(s * sigma)
        eta = esig * ((zv[:, None] * kv[None, :])[:, None, :] * phi)

        # second-order centered differences, sliced to the common interior
        eta_tt = (eta[:, :, 2:] - 2.0 * eta[:, :, 1:-1] + eta[:, :, :-2])[1:-1, 1:-1, :] / h_t**2
        eta_t = (eta[:, :, 2:] - eta[:, :, :-2])[1:-1, 1:-1, :] / (2.0 * h_t)
        eta_thth = (eta[2:] - 2.0 * eta[1:-1] + eta[:-2])[:, 1:-1, 1:-1] / h_theta**2
        eta_th = (eta[2:] - eta[:-2])[:, 1:-1, 1:-1] / (2.0 * h_theta)
        eta_rr = (eta[:, 2:] - 2.0 * eta[:, 1:-1] + eta[:, :-2])[1:-1, :, 1:-1] / h_r**2
        eta_r = (eta[:, 2:] - eta[:, :-2])[1:-1, :, 1:-1] / (2.0 * h_r)

        sig_i = sigma[1:-1, 1:-1, 1:-1]
        eta_i = eta[1:-1, 1:-1, 1:-1]
        ts_i = ts[1:-1][None, None, :]
        xi_t = -2.0 * beta * (ts_i - params.t0)
        sigma_t = lam * sig_i * xi_t
        b = xi_t**2 - (4.0 * th_c**2 + quad_rad[1:-1][None, :, None])

        p1_plus = eta_tt - (eta_thth + r_alpha_c * eta_rr + r_alpha_m1_c * eta_r)
        p2_plus = s**2 * lam**2 * sig_i**2 * b * eta_i
        p1_minus = 2.0 * s * (
            -eta_t * sigma_t
            + lam * sig_i * (2.0 * th_c * eta_th + two_a * r_c * eta_r)
        )
        p2_minus = s * eta_i * ((4.0 - alpha + 2.0 * beta) * lam * sig_i - lam**2 * sig_i * b)

        phi_i = phi[1:-1, 1:-1, 1:-1]
        phi_t = solution.phi_t(
            theta[1:-1][:, None, None], r[1:-1][None, :, None], ts[1:-1][None, None, :]
        )
        phi_th = solution.phi_theta(
            theta[1:-1][:, None, None], r[1:-1][None, :, None], ts[1:-1][None, None, :]
        )
        kv_i = kv[1:-1][None, None, :]
        kd1_i = kd1[1:-1][None, None, :]
        kd2_i = kd2[1:-1][None, None, :]
        h_src = (
            2.0 * zv_c * kd1_i * phi_t
            + zv_c * kd2_i * phi_i
            - 2.0 * kv_i * zd1[1:-1][:, None, None] * phi_th
            - kv_i * zd2[1:-1][:, None, None] * phi_i
        )
        lhs = esig[1:-1, 1:-1, 1:-1] * h_src

        diff = lhs - (p1_plus + p2_plus + p1_minus + p2_minus)
        acc_res += float(np.sum(diff**2))
        acc_ref += float(np.sum(lhs**2))

    vol = h_theta * h_r * h_t
    res = math.sqrt(acc_res * vol)
    ref = math.sqrt(acc_ref * vol)
    return ConjugationReport(
        residual_norm=res,
        reference_norm=ref,
        relative=res / max(ref, np.finfo(float).tiny),
        shape=shape,
        spacings=(h_theta, h_r, h_t),
        r_min=r_min,
    )


def conjugation_order_study(
    solution: SmoothModalSolution,
    params: CarlemanParams,
    base_shape: tuple[int, int, int],
    levels: int = 3,
    r_min: float = 0.1,
) -> tuple[list[ConjugationReport], float]:
    """Residuals under uniform grid halving and the mean observed order."""
    reports = [
        conjugation_residual(
            solution, params, shape=tuple(c * 2**lvl for c in base_shape), r_min=r_min
        )
        for lvl in range(levels)
    ]
    orders = [
        math.log2(reports[i].residual_norm / reports[i + 1].residual_norm)
        for i in range(levels - 1)
    ]
    return reports, float(np.mean(orders))


# ---------------------------------------------------------------------------
# Component integrals of the coercive estimate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentIntegrals:
    """Named integrals of the estimate, with the empirical quotient C-hat."""

    lhs_gradient: float  # s l int sigma [(psi_t)^2 + A grad psi . grad psi] e^{2 s sigma}
    lhs_zero_order: float  # s^3 l^3 int sigma^3 psi^2 e^{2 s sigma}
    rhs_trace: float  # s l int sigma (d_r phi)^2 on the restricted top segment
    rhs_interior: float  # int_omega (s^2 phi^2 + A grad phi . grad phi + phi_t^2) e^{2 s sigma}
    rhs_commutator: float  # int_omega (k' phi_t + k'' phi)^2 e^{2 s sigma}
    chat: float
    s: float
    lam: float
    log_offset: float  # peak of 2 s sigma subtracted inside the quadratures


def _weighted_region_integrals(
    solution: SmoothModalSolution,
    params: CarlemanParams,
    theta_lo: float,
    theta_hi: float,
    n_theta: int,
    n_r: int,
    n_t: int,
    log_offset: float,
    with_cutoffs: bool,
    zeta: CutoffSpec,
    kcut: CutoffSpec,
) -> dict[str, float]:
    """Tensor quadrature of the weighted integrands over one theta interval.

    Trapezoid in theta and t, midpoint in r (the radial grid is staggered
    because A grad phi . grad phi ~ r^{-alpha} is integrable but unbounded
    at the degenerate side).  e^{2 s sigma} enters as
    e^{2 s sigma - log_offset}; the caller restores the scale.
    """
    alpha, lam, s, beta = params.alpha, params.lam, params.s, params.beta
    theta = np.linspace(theta_lo, theta_hi, n_theta + 1)
    w_th = np.full(theta.size, (theta_hi - theta_lo) / n_theta)
    w_th[[0, -1]] *= 0.5
    hr = 1.0 / n_r
    r = (np.arange(n_r) + 0.5) * hr
    t = np.linspace(0.0, params.T, n_t + 1)
    w_t = np.full(t.size, params.T / n_t)
    w_t[[0, -1]] *= 0.5
    zv, zd1, _ = eval_cutoff(zeta, theta)
    kv, kd1, kd2 = eval_cutoff(kcut, t)
    r_alpha = r[None, :, None] ** alpha
    wvol_2d = w_th[:, None, None] * (hr * np.ones_like(r))[None, :, None]

    out = (
        {"lhs_gradient": 0.0, "lhs_zero_order": 0.0}
        if with_cutoffs
        else {"rhs_interior": 0.0, "rhs_commutator": 0.0}
    )
    block = max(4, int(4e6 / ((n_theta + 1) * n_r)))
    for lo in range(0, t.size, block):
        sl = slice(lo, lo + block)
        th3, r3, t3 = theta[:, None, None], r[None, :, None], t[sl][None, None, :]
        sigma = np.exp(lam * (th3**2 + r3 ** (2.0 - alpha) - beta * (t3 - params.t0) ** 2))
        weight = np.exp(2.0 * s * sigma - log_offset)
        wvol = wvol_2d * w_t[sl][None, None, :]

        phi = solution.phi(th3, r3, t3)
        phi_t = solution.phi_t(th3, r3, t3)
        if with_cutoffs:
            phi_th = solution.phi_theta(th3, r3, t3)
            phi_r = solution.phi_r(th3, r3, t3)
            zv3, zd13 = zv[:, None, None], zd1[:, None, None]
            kv3, kd13 = kv[sl][None, None, :], kd1[sl][None, None, :]
            psi = kv3 * zv3 * phi
            psi_t = kd13 * zv3 * phi + kv3 * zv3 * phi_t
            psi_th = kv3 * (zd13 * phi + zv3 * phi_th)
            psi_r = kv3 * zv3 * phi_r
            grad_sq = psi_t**2 + psi_th**2 + r_alpha * psi_r**2
            out["lhs_gradient"] += s * lam * float(np.sum(sigma * grad_sq * weight * wvol))
            out["lhs_zero_order"] += s**3 * lam**3 * float(
                np.sum(sigma**3 * psi**2 * weight * wvol)
            )
        else:
            phi_th = solution.phi_theta(th3, r3, t3)
            phi_r = solution.phi_r(th3, r3, t3)
            kd13, kd23 = kd1[sl][None, None, :], kd2[sl][None, None, :]
            interior = s**2 * phi**2 + phi_th**2 + r_alpha * phi_r**2 + phi_t**2
            commutator = (kd13 * phi_t + kd23 * phi) ** 2
            out["rhs_interior"] += float(np.sum(interior * weight * wvol))
            out["rhs_commutator"] += float(np.sum(commutator * weight * wvol))
    return out


def carleman_component_integrals(
    solution: SmoothModalSolution,
    params: CarlemanParams,
    n_theta: int = 192,
    n_r: int = 128,
    n_t: int = 384,
) -> ComponentIntegrals:
    """Compute every named integral of the estimate for one modal solution.

    The left side lives on the core (3 delta0, 1 - 3 delta0) x (0, 1) with
    psi = k zeta phi; the right side carries the restricted top-side trace
    term (no exponential factor), the interior term over the lateral strip
    pair, and the temporal cutoff commutator term.  All exponentially
    weighted quadratures share one log-space offset so the reported
    quotient is formed from overflow-safe mantissas.
    """
    d0 = params.delta0
    alpha, lam, s = params.alpha, params.lam, params.s
    zeta = theta_cutoff(d0)
    kcut = time_cutoff(params.epsilon, params.T)

    # global peak of 2 s sigma: xi is maximal at (theta, r, t) = (1, 1, t0)
    sigma_max = math.exp(lam * 2.0)
    log_offset = 2.0 * s * sigma_max

    lhs = _weighted_region_integrals(
        solution, params, 3.0 * d0, 1.0 - 3.0 * d0, n_theta, n_r, n_t,
        log_offset, True, zeta, kcut,
    )
    strip = {"rhs_interior": 0.0, "rhs_commutator": 0.0}
    for lo, hi in ((0.0, 4.0 * d0), (1.0 - 4.0 * d0, 1.0)):
        part = _weighted_region_integrals(
            solution, params, lo, hi, max(32, n_theta // 4), n_r, n_t,
            log_offset, False, zeta, kcut,
        )
        strip["rhs_interior"] += part["rhs_interior"]
        strip["rhs_commutator"] += part["rhs_commutator"]

    # restricted top-side trace: s l int sigma (d_r phi)^2, no exponential
    theta = np.linspace(d0, 1.0 - d0, n_theta + 1)
    w_th = np.full(theta.size, (1.0 - 2.0 * d0) / n_theta)
    w_th[[0, -1]] *= 0.5
    t = np.linspace(0.0, params.T, n_t + 1)
    w_t = np.full(t.size, params.T / n_t)
    w_t[[0, -1]] *= 0.5
    xi_top = theta[:, None] ** 2 + 1.0 - params.beta * (t[None, :] - params.t0) ** 2
    sigma_top = np.exp(lam * xi_top)
    tr = solution.trace_r1(theta[:, None], t[None, :])
    rhs_trace = s * lam * float(np.sum(sigma_top * tr**2 * w_th[:, None] * w_t[None, :]))

    denom = rhs_trace * math.exp(-log_offset) + strip["rhs_interior"] + strip["rhs_commutator"]
    chat = (lhs["lhs_gradient"] + lhs["lhs_zero_order"]) / max(denom, np.finfo(float).tiny)
    scale = math.exp(log_offset) if log_offset < 700.0 else math.inf
    return ComponentIntegrals(
        lhs_gradient=lhs["lhs_gradient"] * scale,
        lhs_zero_order=lhs["lhs_zero_order"] * scale,
        rhs_trace=rhs_trace,
        rhs_interior=strip["rhs_interior"] * scale,
        rhs_commutator=strip["rhs_commutator"] * scale,
        chat=chat,
        s=s,
        lam=lam,
        log_offset=log_offset,
    )


def carleman_constant_scan(
    solution: SmoothModalSolution,
    params: CarlemanParams,
    s_values: Sequence[float],
    n_theta: int = 160,
    n_r: int = 96,
    n_t: int = 320,
) -> list[ComponentIntegrals]:
    """Empirical quotient C-hat over an s-scan at fixed lambda."""
    out = []
    for s in s_values:
        p = dataclasses.replace(params, s=float(s))
        out.append(
            carleman_component_integrals(solution, p, n_theta=n_theta, n_r=n_r, n_t=n_t)
        )
    return out
