"""Scalar comparison functions and the Sturm/barrier machinery.

Contains the geodesic-sphere mean curvature C_b, its primitive-side companion
phi_b, the Lorentzian counterpart C_{-b}, admissible curvature-growth bounds
G, the Cauchy problem g'' = G^2 g, the explicit supersolution quotient psi,
and the barrier ingredients phi (A10-style primitive) and the finite
supremum Lambda.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, HypothesisViolationError, NumericalError


def c_b(b: float, t: float) -> float:
    """Mean curvature of the geodesic sphere of radius t, curvature b.

    sqrt(b) cot(sqrt(b) t) for b > 0 (valid for t < pi/(2 sqrt(b))),
    1/t for b = 0, sqrt(-b) coth(sqrt(-b) t) for b < 0.
    """
    if t <= 0.0:
        raise DomainError("c_b requires t > 0")
    if b > 0.0:
        sb = math.sqrt(b)
        if t >= math.pi / (2.0 * sb):
            raise DomainError("c_b requires t < pi/(2 sqrt(b)) when b > 0")
        return sb / math.tan(sb * t)
    if b == 0.0:
        return 1.0 / t
    sb = math.sqrt(-b)
    return sb / math.tanh(sb * t)


def c_hat_b(b: float, t: float) -> float:
    """Future mean curvature of the Lorentzian distance level set: C_{-b}(t)."""
    return c_b(-b, t)


def phi_b(b: float, t: float) -> float:
    """Increasing solution of phi'' - C_b(t) phi' = 0 with phi(0) = 0.

    1 - cos(sqrt(b) t) for b > 0, t^2 for b = 0, cosh(sqrt(-b) t) - 1 for
    b < 0.  The hyperbolic branch is the unique choice with phi' > 0 that
    actually satisfies the defining equation (coth fails both).
    """
    if b > 0.0:
        return 1.0 - math.cos(math.sqrt(b) * t)
    if b == 0.0:
        return t * t
    return math.cosh(math.sqrt(-b) * t) - 1.0


def phi_b_d1(b: float, t: float) -> float:
    if b > 0.0:
        sb = math.sqrt(b)
        return sb * math.sin(sb * t)
    if b == 0.0:
        return 2.0 * t
    sb = math.sqrt(-b)
    return sb * math.sinh(sb * t)


def phi_b_d2(b: float, t: float) -> float:
    if b > 0.0:
        return b * math.cos(math.sqrt(b) * t)
    if b == 0.0:
        return 2.0
    return -b * math.cosh(math.sqrt(-b) * t)


def phi_ode_residual(b: float, t: float) -> float:
    """phi_b''(t) - C_b(t) phi_b'(t); zero on the valid domain."""
    return phi_b_d2(b, t) - c_b(b, t) * phi_b_d1(b, t)


# ---------------------------------------------------------------------------
# admissible curvature bounds G
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityFlags:
    positive_at_zero: bool
    nondecreasing: bool
    reciprocal_not_integrable: bool

    @property
    def ok(self) -> bool:
        return self.positive_at_zero and self.nondecreasing and self.reciprocal_not_integrable


@dataclass(frozen=True)
class CurvatureBoundG:
    """A curvature-growth bound G with the three admissibility conditions.

    Admissibility means G(0) > 0, G' >= 0 and 1/G not integrable at infinity.
    The last condition is asymptotic, hence only heuristically checkable: we
    accept G when the reciprocal integral over decade windows [10^k, 10^k+1]
    is not shrinking geometrically (or when the total mass is already large).
    """

    fn: Callable[[float], float]
    dfn: Callable[[float], float] | None = None
    name: str = "G"

    def __call__(self, t: float) -> float:
        return float(self.fn(t))

    def derivative(self, t: float, h: float = 1e-6) -> float:
        if self.dfn is not None:
            return float(self.dfn(t))
        return (self.fn(t + h) - self.fn(max(t - h, 0.0))) / (h + min(t, h))

    def admissibility(self) -> AdmissibilityFlags:
        g0 = self(0.0)
        grid = np.linspace(0.0, 100.0, 501)
        nondec = all(self.derivative(float(t)) >= -1e-10 for t in grid)
        windows = []
        for k in range(6):
            val, _ = integrate.quad(lambda s: 1.0 / self(s), 10.0**k, 10.0 ** (k + 1), limit=200)
            windows.append(val)
        total = sum(windows)
        not_l1 = total > 50.0 or windows[5] >= 0.5 * windows[4]
        return AdmissibilityFlags(g0 > 0.0, nondec, not_l1)

    def require_admissible(self) -> None:
        flags = self.admissibility()
        if not flags.ok:
            raise HypothesisViolationError(
                f"{self.name} is not an admissible growth bound: {flags}"
            )


_BOUND_PATTERN = re.compile(r"^\s*(\w+)\s*\(\s*([^)]*)\s*\)\s*$")


def make_bound(spec: str) -> CurvatureBoundG:
    """Build a named growth bound: const(c), affine(a,b), sqrt_growth(a)."""
    m = _BOUND_PATTERN.match(spec)
    if not m:
        raise DomainError(f"cannot parse growth-bound spec {spec!r}")
    name, raw = m.group(1), m.group(2)
    try:
        args = [float(s) for s in raw.split(",")] if raw.strip() else []
    except ValueError as exc:
        raise DomainError(f"bad parameters in {spec!r}") from exc
    if name == "const" and len(args) == 1:
        c = args[0]
        return CurvatureBoundG(lambda t: c, lambda t: 0.0, spec.strip())
    if name == "affine" and len(args) == 2:
        a, sl = args
        return CurvatureBoundG(lambda t: a + sl * t, lambda t: sl, spec.strip())
    if name == "sqrt_growth" and len(args) == 1:
        a = args[0]
        return CurvatureBoundG(
            lambda t: 1.0 + math.sqrt(a + t),
            lambda t: 0.5 / math.sqrt(a + t),
            spec.strip(),
        )
    raise DomainError(f"unknown growth bound {spec!r}")


# ---------------------------------------------------------------------------
# the Cauchy problem g'' = G^2 g and the Sturm quotient comparison
# ---------------------------------------------------------------------------


@dataclass
class OdeSolution:
    """Solution of g'' = G^2 g, g(0) = 0, g'(0) = 1 on a grid over [0, T].

    ``integral_G`` carries int_0^t G alongside, so quotient comparisons can
    be formed without re-quadrature.
    """

    grid: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    integral_G: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def solve_cauchy_g(G: CurvatureBoundG, T: float, num: int = 1001) -> OdeSolution:
    """Integrate the Cauchy problem with an adaptive high-order RK scheme.

    The first step is taken from the series g = t + G(0)^2 t^3/6 + O(t^4) to
    avoid quotient singularities at t = 0.
    """
    if T <= 0.0:
        raise DomainError("solve_cauchy_g requires T > 0")
    G.require_admissible()
    g0sq = G(0.0) ** 2
    t0 = min(1e-6, T * 1e-6)
    y0 = [
        t0 + g0sq * t0**3 / 6.0,
        1.0 + g0sq * t0**2 / 2.0,
        integrate.quad(G, 0.0, t0)[0],
    ]

    def rhs(t, y):
        gval = G(t)
        return [y[1], gval * gval * y[0], gval]

    sol = integrate.solve_ivp(
        rhs, (t0, T), y0, method="DOP853", rtol=1e-9, atol=1e-12, dense_output=True
    )
    if not sol.success:
        raise NumericalError(f"Cauchy integration failed: {sol.message}")
    grid = np.linspace(0.0, T, num)
    vals = np.empty((3, num))
    vals[:, 0] = [0.0, 1.0, 0.0]
    inside = grid > t0
    vals[:, inside] = sol.sol(grid[inside])
    small = (~inside) & (grid > 0.0)
    if small.any():
        ts = grid[small]
        vals[0, small] = ts + g0sq * ts**3 / 6.0
        vals[1, small] = 1.0 + g0sq * ts**2 / 2.0
        vals[2, small] = ts * G(0.0)
    if np.any(vals[0, grid > 0.0] <= 0.0):
        raise NumericalError("positivity of g lost: bound inadmissible or tolerance too loose")
    return OdeSolution(
        grid=grid,
        g=vals[0],
        dg=vals[1],
        integral_G=vals[2],
        diagnostics={"nfev": sol.nfev, "status": sol.status},
    )


def psi(G: CurvatureBoundG, t: float) -> float:
    """Explicit subsolution (e^{int_0^t G} - 1)/G(0) of the Cauchy problem."""
    if t < 0.0:
        raise DomainError("psi requires t >= 0")
    if t == 0.0:
        return 0.0
    total, _ = integrate.quad(G, 0.0, t, limit=200)
    return math.expm1(total) / G(0.0)


def psi_quotient(G: CurvatureBoundG, integral: np.ndarray, t: np.ndarray) -> np.ndarray:
    """psi'/psi = G(t) e^I / (e^I - 1), evaluated overflow-free."""
    gvals = np.array([G(float(ti)) for ti in np.atleast_1d(t)])
    return gvals / (-np.expm1(-np.asarray(integral)))


def sturm_profile(G: CurvatureBoundG, T: float, num: int = 1000):
    """Grid, g, g', psi, and the margin psi'/psi - g'/g over (0, T]."""
    if T < 0.1:
        raise DomainError("sturm comparison requires T >= 0.1")
    sol = solve_cauchy_g(G, T, num=num + 1)
    grid = sol.grid[1:]
    g = sol.g[1:]
    dg = sol.dg[1:]
    integral = sol.integral_G[1:]
    margins = psi_quotient(G, integral, grid) - dg / g
    psi_vals = np.expm1(integral) / G(0.0)
    return grid, g, dg, psi_vals, margins


def sturm_margin(G: CurvatureBoundG, T: float, num: int = 1000) -> float:
    """Minimum of psi'/psi - g'/g over a grid on (0, T]; nonnegative in theory."""
    _, _, _, _, margins = sturm_profile(G, T, num=num)
    return float(margins.min())


# ---------------------------------------------------------------------------
# barrier ingredients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaResult:
    value: float
    argmax: float
    tail_limit: float


def lambda_sup(G: CurvatureBoundG, t_max: float = 50.0, num: int = 2000) -> LambdaResult:
    """Supremum over [2, t_max] of e^{int_0^t G} / (e^{int_1^t G} - 1).

    Evaluated in the overflow-free form e^{I1} / (1 - e^{-(I-I1)}), refined
    with golden-section search around the grid argmax.  The tail limit
    e^{int_0^1 G} is reported separately.
    """
    G.require_admissible()
    fine = np.linspace(0.0, t_max, 8 * num + 1)
    gvals = np.array([G(float(t)) for t in fine])
    running = integrate.cumulative_simpson(gvals, x=fine, initial=0.0)

    def I(t):
        return float(np.interp(t, fine, running))

    i1 = I(1.0)

    def F(t):
        return math.exp(i1) / (-math.expm1(-(I(t) - i1)))

    ts = np.linspace(2.0, t_max, num)
    vals = np.array([F(float(t)) for t in ts])
    i_best = int(vals.argmax())
    lo = ts[max(i_best - 1, 0)]
    hi = ts[min(i_best + 1, num - 1)]
    res = optimize.minimize_scalar(lambda t: -F(t), bounds=(lo, hi), method="bounded")
    t_star = float(res.x)
    v_star = float(-res.fun)
    if vals[i_best] >= v_star:
        t_star, v_star = float(ts[i_best]), float(vals[i_best])
    return LambdaResult(value=v_star, argmax=t_star, tail_limit=math.exp(i1))


def phi_gamma(G: CurvatureBoundG, t: float) -> float:
    """Increasing concave primitive int_0^t ds / G(s+1) of the barrier."""
    if t < 0.0:
        raise DomainError("phi_gamma requires t >= 0")
    if t == 0.0:
        return 0.0
    val, _ = integrate.quad(lambda s: 1.0 / G(s + 1.0), 0.0, t, limit=200)
    return val


@dataclass(frozen=True)
class ComparisonProfile:
    """C_b, phi_b and the Lorentzian C_{-b} bundled for one curvature value."""

    b: float

    def c(self, t: float) -> float:
        return c_b(self.b, t)

    def phi(self, t: float) -> float:
        return phi_b(self.b, t)

    def phi_d1(self, t: float) -> float:
        return phi_b_d1(self.b, t)

    def c_hat(self, t: float) -> float:
        return c_hat_b(self.b, t)
