"""Sharp-constant probing with extremizer families.

Sharp constants are limit statements, so they are verified structurally:
ratio curves along near-extremal sequences must climb monotonically toward 1
(after normalizing by the claimed constant) without ever exceeding it, the
equality witnesses of the weighted inequalities must satisfy their pointwise
identities on cutoff plateaus, and the critical double-log case must match
its exact two-sided decomposition term by term (its convergence is
triple-logarithmic, hopeless to observe directly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import VERIFIERS, Tolerances, DEFAULT_TOL
from .errors import ConfigError, DomainError
from .euler import euler_apply
from .groups import HomogeneousGroup
from .profiles import FuncForm, LogGrid, PiecewiseLogForm, RadialProfile
from .slz import (SlzClosedForm, slz_closed_forms, slz_difference_integral,
                  slz_gradient_integral)

__all__ = [
    "smoothstep",
    "smoothstep_deriv",
    "cutoff",
    "cutoff_deriv",
    "ExtremizerFamily",
    "PowerCutoffFamily",
    "LogPowerCutoffFamily",
    "SlzSequenceFamily",
    "fl_profile",
    "RatioCurve",
    "ratio_curve",
    "OptimizationResult",
    "optimize_ratio",
    "golden_section_max",
    "SlzAsymptotics",
    "slz_asymptotics",
    "holder_witness_residual_power",
    "holder_witness_residual_log",
]


# ---------------------------------------------------------------------------
# Smooth cutoffs built from the exp(-1/t) mollifier
# ---------------------------------------------------------------------------

def _mollifier(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smoothstep(t):
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1."""
    a = _mollifier(t)
    b = _mollifier(1.0 - np.asarray(t, dtype=float))
    return a / (a + b)


def smoothstep_deriv(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    inside = (t > 0) & (t < 1)
    ti = t[inside]
    a = np.exp(-1.0 / ti)
    b = np.exp(-1.0 / (1.0 - ti))
    out[inside] = a * b * (1.0 / ti**2 + 1.0 / (1.0 - ti) ** 2) / (a + b) ** 2
    return out


def cutoff(y):
    """Smooth bump: 1 on [1, 2], 0 outside [1/2, 4]."""
    y = np.asarray(y, dtype=float)
    return smoothstep((y - 0.5) / 0.5) * smoothstep((4.0 - y) / 2.0)


def cutoff_deriv(y):
    y = np.asarray(y, dtype=float)
    up = smoothstep((y - 0.5) / 0.5)
    dn = smoothstep((4.0 - y) / 2.0)
    return (smoothstep_deriv((y - 0.5) / 0.5) / 0.5 * dn
            - up * smoothstep_deriv((4.0 - y) / 2.0) / 2.0)


def _sized_grid(u_lo: float, u_hi: float, target_h: float = 0.02) -> LogGrid:
    span = u_hi - u_lo
    n = 1 << max(8, int(math.ceil(math.log2(span / target_h))))
    n = min(n, 1 << 17)
    return LogGrid(u_lo, u_hi, n)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

class ExtremizerFamily:
    """A parametric family of profiles bound to a group and exponents."""

    name = "family"
    param_names: tuple = ()

    def member(self, *params) -> RadialProfile:
        raise NotImplementedError

    def default_params(self) -> list:
        """Member parameter tuples ordered from far-from- to near-extremal."""
        raise NotImplementedError

    def verifier_kwargs(self, verifier_id: str) -> dict:
        raise ConfigError(f"family {self.name} does not drive verifier {verifier_id!r}")

    # optimizer hooks: vector space with bounds, mapped to member params
    def optimizer_bounds(self) -> list:
        return []

    def member_from_vector(self, x) -> tuple:
        return tuple(x)


class PowerCutoffFamily(ExtremizerFamily):
    """phi_eps(r) = r^(alpha - Q/p + eps) * zeta(r^eps).

    The cutoff argument r^eps spreads the support like [2^(-1/eps), 4^(1/eps)]
    as eps -> 0, so in the log coordinate the profile converges to the
    homogeneous extremizer shape of degree alpha - Q/p (which itself is never
    integrable, hence never attains equality)."""

    name = "power_cutoff"
    param_names = ("eps",)

    def __init__(self, group: HomogeneousGroup, p: float = 2.0, alpha: float = 0.0,
                 eps_grid=(0.4, 0.2, 0.1, 0.05, 0.025)):
        if not p > 1:
            raise DomainError(f"need p > 1, got {p}")
        self.group = group
        self.p = float(p)
        self.alpha = float(alpha)
        self.eps_grid = tuple(eps_grid)

    def default_params(self):
        return [(e,) for e in self.eps_grid]

    def member(self, eps: float) -> RadialProfile:
        if not eps > 0:
            raise DomainError(f"need eps > 0, got {eps}")
        a = self.alpha - self.group.Q / self.p + eps

        def val(u):
            return np.exp(a * u) * cutoff(np.exp(eps * u))

        def dval(u):
            y = np.exp(eps * u)
            return np.exp(a * u) * (a * cutoff(y) + eps * y * cutoff_deriv(y))

        u_lo = -math.log(2.0) / eps
        u_hi = math.log(4.0) / eps
        grid = _sized_grid(u_lo - 2.0, u_hi + 2.0)
        return RadialProfile.from_form(grid, FuncForm(val, dval),
                                       name=f"power_cutoff(eps={eps:g})")

    def verifier_kwargs(self, verifier_id: str) -> dict:
        if verifier_id == "sobolev_lp":
            if self.alpha != 0.0:
                raise ConfigError("sobolev_lp needs the alpha = 0 family")
            return {"p": self.p}
        if verifier_id == "weighted_l2":
            if self.p != 2.0:
                raise ConfigError("weighted_l2 needs the p = 2 family")
            return {"alpha": self.alpha}
        if verifier_id == "weighted_lp":
            return {"p": self.p, "alpha": self.alpha}
        return super().verifier_kwargs(verifier_id)

    def optimizer_bounds(self):
        return [(math.log10(0.02), math.log10(0.5))]

    def member_from_vector(self, x):
        return (10.0 ** float(x[0]),)


class LogPowerCutoffFamily(ExtremizerFamily):
    """(log r)^(1/p)-shaped profiles for the critical weight alpha*p = Q.

    Members have a plateau log-range [1, U] carrying the equality witness
    (log r)^(1/p) and a decay range [U, U*V]; the normalized ratio approaches
    1 as both U and V grow."""

    name = "log_power_cutoff"
    param_names = ("U", "V")

    def __init__(self, group: HomogeneousGroup, p: float = 2.0,
                 param_grid=((4.0, 4.0), (10.0, 10.0), (25.0, 25.0))):
        if not p > 1:
            raise DomainError(f"need p > 1, got {p}")
        self.group = group
        self.p = float(p)
        self.param_grid = tuple(param_grid)

    def default_params(self):
        return list(self.param_grid)

    def member(self, U: float, V: float) -> RadialProfile:
        if U <= 1.5 or V <= 1.5:
            raise DomainError("need U > 1.5 and V > 1.5")
        c = 1.0 / self.p
        hi = U * V
        ramp_w = hi - U

        def val(u):
            u = np.asarray(u, dtype=float)
            core = np.where(u > 0, np.maximum(u, 0.0) ** c, 0.0)
            return core * smoothstep((u - 0.5) / 0.5) * smoothstep((hi - u) / ramp_w)

        def dval(u):
            u = np.asarray(u, dtype=float)
            pos = u > 0
            core = np.where(pos, np.maximum(u, 1e-300) ** c, 0.0)
            dcore = np.where(pos, c * np.maximum(u, 1e-300) ** (c - 1.0), 0.0)
            s1 = smoothstep((u - 0.5) / 0.5)
            s2 = smoothstep((hi - u) / ramp_w)
            d1 = smoothstep_deriv((u - 0.5) / 0.5) / 0.5
            d2 = -smoothstep_deriv((hi - u) / ramp_w) / ramp_w
            return dcore * s1 * s2 + core * d1 * s2 + core * s1 * d2

        grid = _sized_grid(-2.0, hi + 2.0)
        return RadialProfile.from_form(grid, FuncForm(val, dval),
                                       name=f"log_power_cutoff(U={U:g},V={V:g})")

    def verifier_kwargs(self, verifier_id: str) -> dict:
        if verifier_id == "weighted_lp":
            return {"p": self.p, "alpha": self.group.Q / self.p}
        return super().verifier_kwargs(verifier_id)

    def optimizer_bounds(self):
        return [(math.log(2.0), math.log(40.0)), (math.log(2.0), math.log(40.0))]

    def member_from_vector(self, x):
        return (math.exp(float(x[0])), math.exp(float(x[1])))


def fl_profile(q: float, gamma: float, R: float, ell: float,
               grid: LogGrid | None = None) -> RadialProfile:
    """The three-piece near-extremal profile of the critical double-log case:

        (log log(ell*e*R))^((gamma-1)/q)                  for r <= 1/ell,
        (log log(e*R/r))^((gamma-1)/q)                    for 1/ell <= r <= R/2,
        (log log(2e))^((gamma-1)/q) * (2/R) * (R - r)     for R/2 <= r <= R,

    and 0 beyond R.  Only piecewise smooth: its Euler derivative is attached
    in closed piecewise form (spectral differentiation would ring at the kinks).
    """
    if ell * math.e * R <= math.e**math.e:
        raise DomainError(
            f"need ell*e*R > e^e for the triple logarithm, got {ell * math.e * R:g}")
    if 1.0 / ell >= R / 2.0:
        raise DomainError("need 1/ell < R/2 so the pieces are ordered")
    c = (gamma - 1.0) / q
    u1, u2, u3 = -math.log(ell), math.log(R / 2.0), math.log(R)
    ueR = math.log(R) + 1.0
    top = math.log(math.log(ell * math.e * R)) ** c
    k_ramp = math.log(math.log(2.0 * math.e)) ** c * 2.0 / R

    def mid(u):
        return np.log(ueR - np.asarray(u, dtype=float)) ** c

    def dmid(u):
        t = ueR - np.asarray(u, dtype=float)
        return -c * np.log(t) ** (c - 1.0) / t

    def ramp(u):
        return k_ramp * (R - np.exp(np.asarray(u, dtype=float)))

    def dramp(u):
        return -k_ramp * np.exp(np.asarray(u, dtype=float))

    zero = lambda u: np.zeros(np.shape(u))
    form = PiecewiseLogForm(
        (u1, u2, u3),
        (lambda u: np.full(np.shape(u), top), mid, ramp, zero),
        (zero, dmid, dramp, zero))
    if grid is None:
        grid = LogGrid(min(u1 - 5.0, -20.0), max(u3 + 5.0, 20.0), 4096)
    return RadialProfile.from_form(grid, form, name=f"fl(ell={ell:g})",
                                   breakpoints_u=(u1, u2, u3), check_support=False)


class SlzSequenceFamily(ExtremizerFamily):
    """The three-piece sequence above, parametrized by ell."""

    name = "slz_fl"
    param_names = ("ell",)

    def __init__(self, q: float, gamma: float, R: float = 1.0,
                 ell_grid=(1e2, 1e3, 1e4, 1e6)):
        self.q = float(q)
        self.gamma = float(gamma)
        self.R = float(R)
        self.ell_grid = tuple(ell_grid)

    def default_params(self):
        return [(ell,) for ell in self.ell_grid]

    def member(self, ell: float) -> RadialProfile:
        return fl_profile(self.q, self.gamma, self.R, ell)

    def verifier_kwargs(self, verifier_id: str) -> dict:
        if verifier_id == "slz":
            return {"q": self.q, "gamma": self.gamma, "R": self.R}
        return super().verifier_kwargs(verifier_id)

    def optimizer_bounds(self):
        return [(2.0, 6.0)]  # log10(ell)

    def member_from_vector(self, x):
        return (10.0 ** float(x[0]),)


# ---------------------------------------------------------------------------
# Ratio curves
# ---------------------------------------------------------------------------

@dataclass
class RatioCurve:
    family: str
    verifier: str
    param_names: tuple
    params: list
    ratios: list

    def max_ratio(self) -> float:
        return max(self.ratios)

    def no_violation(self, tol: float = 1e-10) -> bool:
        return all(r <= 1.0 + tol for r in self.ratios)

    def monotone_increasing(self, tol: float = 1e-6) -> bool:
        return all(b >= a - tol for a, b in zip(self.ratios, self.ratios[1:]))

    def rows(self):
        for params, ratio in zip(self.params, self.ratios):
            yield dict(zip(self.param_names, params)) | {"ratio": ratio}


def ratio_curve(family: ExtremizerFamily, verifier_id: str,
                group: HomogeneousGroup, params=None,
                tol: Tolerances = DEFAULT_TOL) -> RatioCurve:
    """Normalized quotient lhs/rhs along the family (rhs carries the sharp
    constant, so the quotient climbs toward 1 as members approach extremal)."""
    kwargs = family.verifier_kwargs(verifier_id)
    fn = VERIFIERS[verifier_id]["fn"]
    params = family.default_params() if params is None else list(params)
    ratios = []
    for ptuple in params:
        prof = family.member(*ptuple)
        report = fn(group, prof, tol=tol, **kwargs)
        ratios.append(report.lhs / report.rhs)
    return RatioCurve(family.name, verifier_id, family.param_names, params, ratios)


# ---------------------------------------------------------------------------
# Derivative-free ratio maximization
# ---------------------------------------------------------------------------

@dataclass
class OptimizationResult:
    best_params: tuple
    best_ratio: float
    evaluations: int
    converged: bool


def golden_section_max(f, lo: float, hi: float, budget: int = 200,
                       xtol: float = 1e-3):
    """Maximize f on [lo, hi] by golden-section search.

    Returns (x, f(x), evaluations, converged); deterministic."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals = 2
    converged = False
    while evals < budget:
        if hi - lo <= xtol:
            converged = True
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        evals += 1
    if f1 >= f2:
        return x1, f1, evals, converged
    return x2, f2, evals, converged


def optimize_ratio(family: ExtremizerFamily, verifier_id: str,
                   group: HomogeneousGroup, budget: int = 200,
                   tol: Tolerances = DEFAULT_TOL) -> OptimizationResult:
    """Maximize lhs/rhs over the family parameters.

    Golden-section search for 1-parameter families, Nelder-Mead for
    2-parameter ones; both deterministic given the family's bounds."""
    kwargs = family.verifier_kwargs(verifier_id)
    fn = VERIFIERS[verifier_id]["fn"]
    evals = 0

    def ratio_at(params):
        nonlocal evals
        evals += 1
        prof = family.member(*params)
        rep = fn(group, prof, tol=tol, **kwargs)
        return rep.lhs / rep.rhs

    bounds = family.optimizer_bounds()
    if len(bounds) == 0:
        members = family.default_params()
        if len(members) != 1:
            raise ConfigError(f"family {family.name} exposes no optimizer space")
        params = members[0]
        return OptimizationResult(tuple(params), ratio_at(params), evals, True)
    if len(bounds) == 1:
        xbest, rbest, used, conv = golden_section_max(
            lambda x: ratio_at(family.member_from_vector([x])),
            bounds[0][0], bounds[0][1], budget=budget)
        evals = used
        return OptimizationResult(family.member_from_vector([xbest]), rbest,
                                  evals, conv)
    if len(bounds) == 2:
        from scipy.optimize import minimize
        x0 = np.array([0.5 * (lo + hi) for lo, hi in bounds])

        def neg(x):
            x = np.clip(x, [b[0] for b in bounds], [b[1] for b in bounds])
            return -ratio_at(family.member_from_vector(x))

        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"maxfev": budget, "xatol": 1e-3, "fatol": 1e-10})
        xb = np.clip(res.x, [b[0] for b in bounds], [b[1] for b in bounds])
        return OptimizationResult(family.member_from_vector(xb), -res.fun,
                                  evals, bool(res.success))
    raise ConfigError("only 1- or 2-parameter families are supported")


# ---------------------------------------------------------------------------
# Exact asymptotic decomposition of the critical double-log case
# ---------------------------------------------------------------------------

@dataclass
class SlzAsymptotics:
    ell: float
    quad_gradient: float
    quad_difference: float
    closed: SlzClosedForm
    rel_err_gradient: float
    rel_err_difference: float
    quotient: float
    quotient_closed: float
    quotient_limit: float
    margin: float


def slz_asymptotics(g: HomogeneousGroup, q: float, gamma: float, R: float,
                    ell: float) -> SlzAsymptotics:
    """Compare direct quadrature of the two sides along the three-piece
    sequence against their exact decompositions; the quotient
    gradient/difference tends to ((gamma-1)/q)^q, whose reciprocal q-th root
    is the sharp constant."""
    closed = slz_closed_forms(q, gamma, R, ell)
    prof = fl_profile(q, gamma, R, ell)
    e = euler_apply(g, prof)
    u_eR = math.log(R) + 1.0
    quad_diff = slz_difference_integral(prof, q, gamma, u_eR, "inner")
    quad_grad = slz_gradient_integral(e, q, gamma, u_eR, "inner")
    rel_g = abs(quad_grad - closed.gradient_side) / abs(closed.gradient_side)
    rel_d = abs(quad_diff - closed.difference_side) / abs(closed.difference_side)
    const = q / (gamma - 1.0)
    margin = const * quad_grad ** (1.0 / q) - quad_diff ** (1.0 / q)
    return SlzAsymptotics(
        ell=ell, quad_gradient=quad_grad, quad_difference=quad_diff,
        closed=closed, rel_err_gradient=rel_g, rel_err_difference=rel_d,
        quotient=quad_grad / quad_diff,
        quotient_closed=closed.gradient_side / closed.difference_side,
        quotient_limit=closed.quotient_limit, margin=margin)


# ---------------------------------------------------------------------------
# Pointwise equality witnesses of the weighted inequalities
# ---------------------------------------------------------------------------

def _plateau_profile(core, dcore, u_lo, u_hi, pad=4.0):
    """core * smooth plateau cutoff, exactly equal to core on [u_lo, u_hi]."""

    def val(u):
        u = np.asarray(u, dtype=float)
        s = (smoothstep((u - (u_lo - pad)) / pad)
             * smoothstep(((u_hi + pad) - u) / pad))
        return core(u) * s

    def dval(u):
        u = np.asarray(u, dtype=float)
        s1 = smoothstep((u - (u_lo - pad)) / pad)
        s2 = smoothstep(((u_hi + pad) - u) / pad)
        d1 = smoothstep_deriv((u - (u_lo - pad)) / pad) / pad
        d2 = -smoothstep_deriv(((u_hi + pad) - u) / pad) / pad
        return dcore(u) * s1 * s2 + core(u) * (d1 * s2 + s1 * d2)

    return FuncForm(val, dval)


def holder_witness_residual_power(g: HomogeneousGroup, p: float, alpha: float,
                                  C: float, n_points: int = 64) -> float:
    """Pointwise equality-condition residual for the witness r^(-C).

    On the cutoff plateau, |1/C|^p (|E w| / r^alpha)^p must equal
    (|w|^(p-1) / r^(alpha(p-1)))^(p/(p-1)) exactly; returns max relative
    mismatch over plateau samples."""
    if C == 0.0:
        raise DomainError("witness exponent C must be nonzero")
    u_lo, u_hi = -1.5, 1.5
    form = _plateau_profile(lambda u: np.exp(-C * np.asarray(u, dtype=float)),
                            lambda u: -C * np.exp(-C * np.asarray(u, dtype=float)),
                            u_lo, u_hi)
    grid = _sized_grid(u_lo - 10.0, u_hi + 10.0)
    prof = RadialProfile.from_form(grid, form, name=f"witness_pow({C:g})")
    e = euler_apply(g, prof)
    u = np.linspace(u_lo, u_hi, n_points)
    w = prof.eval_log(u).real
    ew = e.eval_log(u).real
    r_a = np.exp(alpha * u)
    lhs = abs(1.0 / C) ** p * (np.abs(ew) / r_a) ** p
    rhs = (np.abs(w) ** (p - 1.0) / np.exp(alpha * (p - 1.0) * u)) ** (p / (p - 1.0))
    return float(np.max(np.abs(lhs - rhs) / rhs))


def holder_witness_residual_log(g: HomogeneousGroup, p: float, C: float,
                                n_points: int = 64) -> float:
    """Pointwise equality-condition residual for the witness (log r)^C in the
    critical case alpha*p = Q: |1/C|^p (|E w| |log r| / r^(Q/p))^p must equal
    (|w|^(p-1) / r^(Q(p-1)/p))^(p/(p-1)) on the plateau."""
    if C == 0.0:
        raise DomainError("witness exponent C must be nonzero")
    u_lo, u_hi = 2.0, 6.0

    def core(u):
        return np.asarray(u, dtype=float) ** C

    def dcore(u):
        return C * np.asarray(u, dtype=float) ** (C - 1.0)

    # keep the left cutoff inside u > 0 so log r stays positive on the support
    def val(u):
        u = np.asarray(u, dtype=float)
        s = smoothstep((u - 1.0) / 1.0) * smoothstep((u_hi + 4.0 - u) / 4.0)
        return np.where(u > 0, core(np.maximum(u, 1e-300)), 0.0) * s

    def dval(u):
        u = np.asarray(u, dtype=float)
        s1 = smoothstep((u - 1.0) / 1.0)
        s2 = smoothstep((u_hi + 4.0 - u) / 4.0)
        d1 = smoothstep_deriv((u - 1.0) / 1.0)
        d2 = -smoothstep_deriv((u_hi + 4.0 - u) / 4.0) / 4.0
        cu = np.where(u > 0, core(np.maximum(u, 1e-300)), 0.0)
        dcu = np.where(u > 0, dcore(np.maximum(u, 1e-300)), 0.0)
        return dcu * s1 * s2 + cu * (d1 * s2 + s1 * d2)

    grid = _sized_grid(-2.0, u_hi + 10.0)
    prof = RadialProfile.from_form(grid, FuncForm(val, dval),
                                   name=f"witness_log({C:g})")
    e = euler_apply(g, prof)
    Q = g.Q
    u = np.linspace(u_lo, u_hi, n_points)
    w = prof.eval_log(u).real
    ew = e.eval_log(u).real
    lhs = abs(1.0 / C) ** p * (np.abs(ew) * np.abs(u) / np.exp(Q / p * u)) ** p
    rhs = (np.abs(w) ** (p - 1.0) / np.exp(Q * (p - 1.0) / p * u)) ** (p / (p - 1.0))
    return float(np.max(np.abs(lhs - rhs) / rhs))
