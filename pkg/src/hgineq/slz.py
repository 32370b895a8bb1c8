"""Quadrature for the critical log-Lorentz inequalities.

The two sides of the double-log embedding inequality are, for radial f with
trace phi(u) = f(e^u) and a scale b (b = eR for the inner part, b = S for the
outer part),

  difference side:   int |phi - phi(ref)|^q / (|log|log(b/r)||^gamma |log(b/r)|) dr/r
  gradient side:     int |log(b/r)|^(q-1) |log|log(b/r)||^(q-gamma) |E phi|^q dr/r

(the group measure r^(Q-1) dr combined with the dx/|x|^Q and |x|^(q-Q)
factors leaves dr/r and |E phi|^q = |r f'(r)|^q, so Q cancels throughout).

The difference side is integrated in the variable w = log|log(b/r)|, where
it becomes |phi(u(w)) - phi(ref)|^q |w|^(-gamma) dw over the whole line with
a single integrable singularity at w = 0; the gradient side is integrated
directly in u with breakpoints at the weight's singular radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .profiles import RadialProfile
from .quadrature import quad_pieces

__all__ = [
    "check_slz_exponents",
    "slz_difference_integral",
    "slz_gradient_integral",
    "SlzClosedForm",
    "slz_closed_forms",
]


def check_slz_exponents(q: float, gamma: float):
    if not 1.0 < gamma < math.inf:
        raise DomainError(f"need 1 < gamma < inf, got gamma = {gamma}")
    if not max(1.0, gamma - 1.0) < q < math.inf:
        raise DomainError(
            f"need max(1, gamma-1) < q < inf, got q = {q} with gamma = {gamma}")


# log-radii are clamped here before profile evaluation: every admissible
# profile (grid-sampled, decaying closed form, or piecewise with constant
# first/last pieces) has reached its limiting value long before |u| = 1e6,
# and the clamp keeps adaptive-quadrature probes of the substituted variable
# from overflowing closed-form evaluation.
_U_CLIP = 1e6


def _eval_scalar(prof: RadialProfile, u: float) -> complex:
    u = min(max(u, -_U_CLIP), _U_CLIP)
    return complex(np.asarray(prof.eval_log(u)).reshape(()))


def slz_difference_integral(prof: RadialProfile, q: float, gamma: float,
                            scale_u: float, side: str) -> float:
    """The q-th-power difference integral on one side of the scale b = e^scale_u.

    side = "inner": r in (0, b), reference value phi(b/e);
    side = "outer": r in (b, inf), reference value phi(b*e).
    """
    check_slz_exponents(q, gamma)
    sgn = -1.0 if side == "inner" else (1.0 if side == "outer" else None)
    if sgn is None:
        raise ValueError(f"side must be 'inner' or 'outer', got {side!r}")
    ref = _eval_scalar(prof, scale_u + sgn)

    def u_of_w(w):
        return scale_u + sgn * math.exp(min(w, 700.0))

    def integrand(w):
        du = abs(_eval_scalar(prof, u_of_w(w)) - ref)
        if du == 0.0:
            return 0.0
        return du**q * abs(w) ** (-gamma)

    # breakpoints: profile kinks mapped into w, on each side of the singularity
    pts_neg, pts_pos = [], []
    for ub in prof.breakpoints_u:
        t = sgn * (ub - scale_u)
        if t > 0:
            w = math.log(t)
            (pts_neg if w < 0 else pts_pos).append(w)
    left, _ = quad_pieces(integrand, -np.inf, 0.0, pts_neg)
    right, _ = quad_pieces(integrand, 0.0, np.inf, pts_pos)
    return left + right


def slz_gradient_integral(eprof: RadialProfile, q: float, gamma: float,
                          scale_u: float, side: str,
                          support: tuple | None = None) -> float:
    """The q-th-power gradient integral with weight based at b = e^scale_u.

    ``eprof`` is the Euler derivative E phi (so the integrand uses |E phi|^q).
    """
    check_slz_exponents(q, gamma)
    if side == "inner":
        lo, hi = -np.inf, scale_u
    elif side == "outer":
        lo, hi = scale_u, np.inf
    else:
        raise ValueError(f"side must be 'inner' or 'outer', got {side!r}")
    if support is None:
        mags = np.abs(eprof.values)
        nz = np.nonzero(mags > 0.0)[0]
        if nz.size == 0:
            return 0.0
        u = eprof.grid.u
        support = (u[nz[0]] - eprof.grid.h, u[nz[-1]] + eprof.grid.h)
    lo = max(lo, support[0])
    hi = min(hi, support[1])
    if not lo < hi:
        return 0.0

    def integrand(u):
        ev = abs(_eval_scalar(eprof, u))
        if ev == 0.0:
            return 0.0
        t = abs(scale_u - u)
        if t == 0.0:
            return 0.0
        return t ** (q - 1.0) * abs(math.log(t)) ** (q - gamma) * ev**q

    pts = [scale_u - 1.0, scale_u + 1.0] + list(eprof.breakpoints_u)
    val, _ = quad_pieces(integrand, lo, hi, pts)
    return val


@dataclass(frozen=True)
class SlzClosedForm:
    """Closed-form decomposition of the two sides along the three-piece
    extremizing sequence, plus the finite tail constants (evaluated by their
    defining 1-D integrals in the substituted variable s = log|log(eR/r)|)."""

    gradient_side: float
    difference_side: float
    c_tail_gradient: float
    c_tail_difference: float
    log3_span: float
    quotient_limit: float


def slz_closed_forms(q: float, gamma: float, R: float, ell: float) -> SlzClosedForm:
    """Exact decomposition values of the two q-th-power integrals for the
    three-piece profile with parameters (q, gamma, R, ell); sphere mass 1."""
    check_slz_exponents(q, gamma)
    if ell * math.e * R <= math.e**math.e:
        raise DomainError(
            f"need ell*e*R > e^e for the triple logarithm, got {ell * math.e * R:g}")
    ll2e = math.log(math.log(2.0 * math.e))
    span = math.log(math.log(math.log(ell * math.e * R))) - math.log(ll2e)

    def c_gradient_integrand(s):
        return s ** (q - gamma) * math.exp(q * (s - math.exp(s)))

    c_grad, _ = quad_pieces(c_gradient_integrand, 0.0, ll2e)
    c_grad *= (2.0 * math.e) ** q * ll2e ** (gamma - 1.0)

    def c_difference_integrand(s):
        return (1.0 - math.exp(1.0 - math.exp(s))) ** q * s ** (-gamma)

    c_diff, _ = quad_pieces(c_difference_integrand, 0.0, ll2e)
    c_diff *= 2.0**q * ll2e ** (gamma - 1.0)

    ratio = ((gamma - 1.0) / q) ** q
    return SlzClosedForm(
        gradient_side=ratio * span + c_grad,
        difference_side=1.0 / (gamma - 1.0) + span + c_diff,
        c_tail_gradient=c_grad,
        c_tail_difference=c_diff,
        log3_span=span,
        quotient_limit=ratio,
    )
