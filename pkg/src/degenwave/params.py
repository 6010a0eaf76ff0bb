"""Scalar parameters and smooth cutoff functions for the degenerate wave model.

The diffusion matrix is diag(1, r^alpha) on the unit square with coordinates
z = (theta, r).  This module owns the degeneracy exponent, the interior /
boundary region bookkeeping driven by the corner margin delta0, the Carleman
weight parameters (lambda, s, beta, t0, T) together with their derived
admissibility data (gamma, gamma_hat, epsilon, A0, A1), and the two smooth
cutoffs: the angular plateau cutoff and the temporal plateau cutoff.  All
types are immutable; all functions are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import (
    BetaOutOfRange,
    NoAdmissibleEpsilon,
    NonPositiveInput,
    TimeTooShort,
)

#: grid density (points per unit length per axis) used when certifying the
#: weight sign conditions that select epsilon and gamma_hat
CERTIFICATION_GRID_PER_UNIT = 256


@dataclass(frozen=True)
class DegeneracyParams:
    """Degeneracy exponent alpha with the induced radial weight w = r^alpha.

    ``critical=True`` admits alpha = 1 and is meant only for the truncated
    Hardy-Poincare constants; the wave and Carleman machinery requires
    0 < alpha < 1.
    """

    alpha: float
    critical: bool = False

    def __post_init__(self) -> None:
        if self.critical:
            if self.alpha != 1.0:
                raise ValueError("critical flag requires alpha = 1")
        elif not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    def weight(self, r: np.ndarray | float) -> np.ndarray | float:
        """Radial diffusion coefficient w(r) = r^alpha."""
        return np.asarray(r) ** self.alpha


@dataclass(frozen=True)
class DomainSpec:
    """Corner margin delta0 and the regions it derives on the unit square.

    The observation strip pair near the lateral sides is
    [(0, 4*delta0) + (1-4*delta0, 1)] x (0, 1), the localized core is
    (delta0, 1-delta0) x (0, 1), and the restricted top observation segment
    is (delta0, 1-delta0) x {1}.
    """

    delta0: float

    def __post_init__(self) -> None:
        if not 0.0 < self.delta0 < 1.0 / 32.0:
            raise ValueError(f"delta0 must lie in (0, 1/32), got {self.delta0}")

    @property
    def omega_theta_strips(self) -> tuple[tuple[float, float], ...]:
        """Theta intervals of the interior observation region (disjoint union)."""
        return theta_strips(self.delta0)

    @property
    def core_theta_interval(self) -> tuple[float, float]:
        """Theta interval of the localized region (delta0, 1-delta0)."""
        return (self.delta0, 1.0 - self.delta0)

    @property
    def restricted_top_segment(self) -> tuple[float, float]:
        """Theta interval of the restricted top-side observation segment."""
        return (self.delta0, 1.0 - self.delta0)


def theta_strips(delta0: float) -> tuple[tuple[float, float], ...]:
    """Lateral observation strips as disjoint theta intervals.

    For delta0 >= 1/8 the two strips meet or overlap and are merged; the
    admissible range delta0 < 1/32 always yields two disjoint strips, but the
    merged form keeps region-exhaustion diagnostics well defined.
    """
    c = 4.0 * delta0
    if c >= 0.5:
        return ((0.0, 1.0),)
    return ((0.0, c), (1.0 - c, 1.0))


@dataclass(frozen=True)
class CarlemanParams:
    """Validated Carleman weight parameters and their derived quantities.

    gamma certifies the endpoint sign condition of the weight exponent
    xi = theta^2 + r^(2-alpha) - beta*(t - t0)^2; gamma_hat and epsilon
    certify the two-sided band conditions used to remove the auxiliary
    terminal constraint, and A0 = exp(-lambda*gamma_hat),
    A1 = exp(-2*lambda*gamma_hat) are the absorption constants.
    """

    alpha: float
    delta0: float
    beta: float
    T: float
    lam: float
    s: float
    t0: float
    gamma: float
    gamma_hat: float
    epsilon: float
    A0: float
    A1: float

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < self.T / 16.0:
            raise ValueError("epsilon must lie in (0, T/16)")
        if not 0.0 < self.gamma_hat < 0.5 * self.gamma:
            raise ValueError("gamma_hat must lie in (0, gamma/2)")
        if not self.A1 < self.A0:
            raise ValueError("A1 < A0 must hold")


def beta_upper_bound(alpha: float, delta0: float) -> float:
    """Supremum of the admissible curvature interval for beta."""
    return 0.5 * min((2.0 - alpha) ** 2 / 8.0, delta0)


def observation_time_threshold(delta0: float, beta: float) -> float:
    """Minimal admissible observation horizon max{4/sqrt(delta0), sqrt(8/beta)}."""
    if delta0 <= 0.0 or beta <= 0.0:
        raise NonPositiveInput("delta0 and beta must be positive")
    return max(4.0 * delta0 ** -0.5, math.sqrt(8.0 / beta))


def _xi_spatial_range(alpha: float, grid_per_unit: int) -> tuple[float, float]:
    """Min and max of theta^2 + r^(2-alpha) over a spatial certification grid."""
    n = max(2, grid_per_unit)
    axis = np.linspace(0.0, 1.0, n + 1)
    spatial = axis[:, None] ** 2 + axis[None, :] ** (2.0 - alpha)
    return float(spatial.min()), float(spatial.max())


def _band_certified(
    alpha: float,
    beta: float,
    T: float,
    gamma_hat: float,
    epsilon: float,
    grid_per_unit: int,
    spatial_range: tuple[float, float] | None = None,
) -> bool:
    """Grid check of the two band conditions on xi for a candidate epsilon.

    Outer bands (0, 2*epsilon) and (T - 2*epsilon, T): xi <= -2*gamma_hat
    everywhere.  Center band |t - T/2| <= epsilon: xi >= -gamma_hat
    everywhere.  Band endpoints are always included, so the check is
    conservative under refinement (xi is monotone in |t - T/2|).
    """
    lo, hi = spatial_range or _xi_spatial_range(alpha, grid_per_unit)
    t0 = 0.5 * T

    def tgrid(a: float, b: float) -> np.ndarray:
        n = max(2, int(math.ceil((b - a) * grid_per_unit)))
        return np.linspace(a, b, n + 1)

    for a, b in ((0.0, 2.0 * epsilon), (T - 2.0 * epsilon, T)):
        xi_max = hi - beta * (tgrid(a, b) - t0) ** 2
        if not np.all(xi_max <= -2.0 * gamma_hat):
            return False
    xi_min = lo - beta * (tgrid(t0 - epsilon, t0 + epsilon) - t0) ** 2
    return bool(np.all(xi_min >= -gamma_hat))


def validate_carleman_params(
    alpha: float,
    domain: DomainSpec,
    beta: float,
    T: float,
    lam: float = 1.0,
    s: float = 2.0,
    grid_per_unit: int = CERTIFICATION_GRID_PER_UNIT,
) -> CarlemanParams:
    """Validate raw weight parameters and derive the admissibility package.

    gamma is set to half its maximal admissible value,
    gamma = (min{delta0, beta} T^2 - 8)/8, gamma_hat = gamma/4, and epsilon
    is the largest band half-width in (0, T/16) certified on a dense grid,
    found by bisection and shrunk by a small safety factor.

    Raises:
        NonPositiveInput: a raw scalar is not positive.
        BetaOutOfRange: beta outside (0, min{(2-alpha)^2/8, delta0}/2).
        TimeTooShort: T at or below the observation threshold.
        NoAdmissibleEpsilon: certification failed for every candidate.
    """
    DegeneracyParams(alpha)
    delta0 = domain.delta0
    if min(beta, T, lam, s) <= 0.0:
        raise NonPositiveInput("beta, T, lambda, s must all be positive")
    bmax = beta_upper_bound(alpha, delta0)
    # the endpoint beta = bmax is admitted: every derived quantity stays
    # well defined there, and the canonical configuration delta0 = 0.01,
    # beta = 0.005 sits exactly on it
    if beta > bmax:
        raise BetaOutOfRange(f"beta = {beta} must not exceed {bmax}")
    threshold = observation_time_threshold(delta0, beta)
    if not T > threshold:
        raise TimeTooShort(f"T = {T} must exceed {threshold}")

    gamma = (min(delta0, beta) * T * T - 8.0) / 8.0
    gamma_hat = 0.25 * gamma
    spatial = _xi_spatial_range(alpha, grid_per_unit)

    def ok(eps: float) -> bool:
        return _band_certified(
            alpha, beta, T, gamma_hat, eps, grid_per_unit, spatial_range=spatial
        )

    # just above the horizon threshold the admissible half-width shrinks to
    # zero with gamma, so the certified starting point must shrink too
    lo = T * 1e-6
    while lo > T * 1e-16 and not ok(lo):
        lo /= 10.0
    if not ok(lo):
        raise NoAdmissibleEpsilon(
            "no band half-width certifies the weight sign conditions"
        )
    hi = T / 16.0 * (1.0 - 1e-9)
    if ok(hi):
        lo = hi
    else:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if ok(mid):
                lo = mid
            else:
                hi = mid
    epsilon = 0.999 * lo
    if not ok(epsilon):  # pragma: no cover - safety margin never fails
        raise NoAdmissibleEpsilon("bisection produced an uncertified epsilon")

    return CarlemanParams(
        alpha=alpha,
        delta0=delta0,
        beta=beta,
        T=T,
        lam=lam,
        s=s,
        t0=0.5 * T,
        gamma=gamma,
        gamma_hat=gamma_hat,
        epsilon=epsilon,
        A0=math.exp(-lam * gamma_hat),
        A1=math.exp(-2.0 * lam * gamma_hat),
    )


# ---------------------------------------------------------------------------
# Smooth cutoffs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutoffSpec:
    """A C-infinity plateau cutoff built from the exp(-1/x) mollifier ramp.

    Zero on (-inf, rise[0]] and [fall[1], +inf), one on [rise[1], fall[0]],
    with smooth monotone ramps on the two transition bands.
    """

    kind: str  # "theta" or "time"
    rise: tuple[float, float]
    fall: tuple[float, float]

    def __post_init__(self) -> None:
        a, b = self.rise
        c, d = self.fall
        if not a < b <= c < d:
            raise ValueError("cutoff bands must satisfy rise < plateau < fall")

    def __call__(self, x: np.ndarray | float):
        return eval_cutoff(self, x)


def theta_cutoff(delta0: float) -> CutoffSpec:
    """Angular cutoff: 1 on (3*delta0, 1-3*delta0), 0 off (2*delta0, 1-2*delta0)."""
    if not 0.0 < delta0 < 1.0 / 32.0:
        raise ValueError("delta0 must lie in (0, 1/32)")
    return CutoffSpec(
        kind="theta",
        rise=(2.0 * delta0, 3.0 * delta0),
        fall=(1.0 - 3.0 * delta0, 1.0 - 2.0 * delta0),
    )


def time_cutoff(epsilon: float, T: float) -> CutoffSpec:
    """Temporal cutoff: 1 on (2*epsilon, T-2*epsilon), 0 off (epsilon, T-epsilon)."""
    if not 0.0 < epsilon < T / 16.0:
        raise ValueError("epsilon must lie in (0, T/16)")
    return CutoffSpec(
        kind="time",
        rise=(epsilon, 2.0 * epsilon),
        fall=(T - 2.0 * epsilon, T - epsilon),
    )


def _smoothstep(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """exp(-1/x) smoothstep S on [0, 1] with first and second derivatives.

    S = g(x) / (g(x) + g(1-x)) with g(x) = exp(-1/x); all three outputs are
    exact 0/1 (resp. 0) outside (0, 1).  Underflow of g near the endpoints
    reproduces the exact limit values, so no clamping is needed.
    """
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 1.0)
    xi = np.where(inside, x, 0.5)  # dummy abscissa keeps exp() finite
    with np.errstate(under="ignore"):
        u = np.exp(-1.0 / xi)
        v = np.exp(-1.0 / (1.0 - xi))
        du = u / xi**2
        dv = v / (1.0 - xi) ** 2
        ddu = u * (1.0 - 2.0 * xi) / xi**4
        ddv = v * (1.0 - 2.0 * (1.0 - xi)) / (1.0 - xi) ** 4
        den = u + v
        s = u / den
        num1 = du * v + u * dv
        ds = num1 / den**2
        # d/dx of v(x) = g(1-x) is -g'(1-x); sign bookkeeping is folded in here
        num2 = ddu * v - u * ddv
        dden = du - dv
        dds = (num2 * den - 2.0 * num1 * dden) / den**3
    s = np.where(inside, s, np.where(x <= 0.0, 0.0, 1.0))
    ds = np.where(inside, ds, 0.0)
    dds = np.where(inside, dds, 0.0)
    return s, ds, dds


def eval_cutoff(
    spec: CutoffSpec, x: np.ndarray | float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate a cutoff and its first two derivatives; total on the real line.

    Plateau and off-support values are exactly 1 and 0 with exactly zero
    derivatives, so spec(x)*(1 - spec(x)) vanishes identically outside the
    two transition bands.
    """
    x = np.asarray(x, dtype=float)
    a, b = spec.rise
    c, d = spec.fall
    val = np.where((x >= b) & (x <= c), 1.0, 0.0)
    d1 = np.zeros_like(val)
    d2 = np.zeros_like(val)

    up = (x > a) & (x < b)
    if np.any(up):
        w = b - a
        s, ds, dds = _smoothstep((x[up] - a) / w)
        val[up] = s
        d1[up] = ds / w
        d2[up] = dds / w**2
    down = (x > c) & (x < d)
    if np.any(down):
        w = d - c
        s, ds, dds = _smoothstep((d - x[down]) / w)
        val[down] = s
        d1[down] = -ds / w
        d2[down] = dds / w**2
    return val, d1, d2


def eval_cutoff_theta(spec: CutoffSpec, theta: np.ndarray | float):
    """Angular cutoff value and derivatives (alias of the generic evaluator)."""
    return eval_cutoff(spec, theta)


def eval_cutoff_time(spec: CutoffSpec, t: np.ndarray | float):
    """Temporal cutoff value and derivatives (alias of the generic evaluator)."""
    return eval_cutoff(spec, t)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------

_JSON_KEYS = ("alpha", "delta0", "beta", "T", "lambda", "s")


def carleman_params_from_json(doc: str | dict) -> CarlemanParams:
    """Build validated parameters from a JSON document with the standard keys."""
    data = json.loads(doc) if isinstance(doc, str) else dict(doc)
    missing = [k for k in _JSON_KEYS if k not in data]
    if missing:
        raise KeyError(f"missing parameter keys: {missing}")
    return validate_carleman_params(
        alpha=float(data["alpha"]),
        domain=DomainSpec(float(data["delta0"])),
        beta=float(data["beta"]),
        T=float(data["T"]),
        lam=float(data["lambda"]),
        s=float(data["s"]),
    )


def carleman_params_to_json(params: CarlemanParams) -> str:
    """Serialize parameters, derived quantities included, to a JSON string."""
    payload = asdict(params)
    payload["lambda"] = payload.pop("lam")
    return json.dumps(payload, indent=2, sort_keys=True)
