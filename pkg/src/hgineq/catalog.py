"""One verifier per functional identity/inequality of the Euler calculus.

Every verifier evaluates left side, right side and (where an exact remainder
exists) the remainder, and returns a :class:`VerificationReport`.  Identity
verifiers use the normalization  rhs^p - lhs^p = remainder,  report the
relative residual of that identity, and additionally report the inequality
margin rhs - lhs obtained by dropping the (nonnegative) remainder.

All norms fold the sphere mass as 1.0: it multiplies both sides of every
radial identity and inequality identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .euler import OperatorSymbol, euler_apply, euler_power, multiplier_apply
from .groups import HomogeneousGroup
from .profiles import LogGrid, RadialProfile
from .quadrature import (WeightSpec, ip_kernel, log_trapz, refine_scalars,
                         weighted_integral_values, weighted_lp_norm)
from .slz import check_slz_exponents, slz_difference_integral, slz_gradient_integral
from .special import embedding_constant

__all__ = [
    "Tolerances",
    "VerificationReport",
    "verify_lp_sobolev",
    "verify_hardy_equivalence",
    "verify_weighted_lp",
    "verify_weighted_l2_identity",
    "verify_higher_order",
    "verify_fractional",
    "verify_embedding_norms",
    "verify_poincare",
    "verify_slz",
    "verify_dilation_scaling",
    "verify_polar_mc",
    "scaling_quotient",
    "VERIFIERS",
    "describe_verifier",
]

_TINY = 1e-300


@dataclass(frozen=True)
class Tolerances:
    identity_rel: float = 1e-6       # relative residual allowed for identities
    margin_rel: float = 1e-10        # margin >= -margin_rel * rhs
    refine_rel: float = 1e-9         # grid refinement stops below this change
    max_grid_n: int = 1 << 18


DEFAULT_TOL = Tolerances()


@dataclass
class VerificationReport:
    theorem_id: str
    group: str
    parameters: dict
    lhs: float
    rhs: float
    status: str                      # "pass" | "fail" | "inconclusive"
    remainder: float | None = None   # present iff the statement supplies one
    residual: float | None = None    # identity mismatch, relative
    margin: float | None = None      # rhs - lhs for inequalities
    details: dict = field(default_factory=dict)
    grid_meta: dict = field(default_factory=dict)
    notes: tuple = ()

    def __post_init__(self):
        if self.residual is None and self.margin is None:
            raise ValueError("a report must carry a residual or a margin")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "theorem_id": self.theorem_id,
            "group": self.group,
            "parameters": self.parameters,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "remainder": self.remainder,
            "residual": self.residual,
            "margin": self.margin,
            "status": self.status,
            "details": self.details,
            "grid_meta": self.grid_meta,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------

def _regrid(prof: RadialProfile, grid: LogGrid) -> RadialProfile:
    return prof if grid is prof.grid else prof.with_grid(grid)


def _run_refined(prof: RadialProfile, fn, tol: Tolerances, derive=None):
    """Refine fn(grid) on doubling grids when the profile can be regridded.

    The raw quantities count as stabilized when either the refinement target
    ``refine_rel`` was met or the final inter-level change sits two orders of
    magnitude below the identity criterion (the grid cap can legitimately be
    reached first on slowly-converging kinked integrands).  When ``derive``
    maps the raw vector to decision scalars (margins, residuals), their own
    inter-level changes are also returned, so a verdict far from its
    threshold can stand even if the raw norms are still drifting."""
    if prof.form is None:
        vals = np.atleast_1d(np.asarray(fn(prof.grid), dtype=float))
        meta = {"refined": False, "n": prof.grid.n}
        return vals, meta, True, None
    res = refine_scalars(fn, prof.grid, rtol=tol.refine_rel, max_n=tol.max_grid_n)
    stable = res.converged or res.last_change <= 0.01 * tol.identity_rel
    meta = {"refined": True, "levels": res.history, "converged": res.converged,
            "last_change": res.last_change, "stable": stable}
    changes = None
    if derive is not None and len(res.history) >= 2:
        prev = np.asarray(res.history[-2]["values"], dtype=float)
        d_prev = np.atleast_1d(np.asarray(derive(prev), dtype=float))
        d_cur = np.atleast_1d(np.asarray(derive(res.values), dtype=float))
        changes = np.abs(d_cur - d_prev)
        meta["decision_changes"] = changes.tolist()
    return res.values, meta, stable, changes


def _wpow(g, vals, grid, p, alpha=0.0):
    """integral (|vals| / r^alpha)^p r^(Q-1) dr on the grid (trapezoid)."""
    return float(log_trapz(grid, weighted_integral_values(
        g, vals, grid, WeightSpec(p=p, alpha=alpha))))


def _status(ok: bool, converged: bool) -> str:
    if not converged:
        return "inconclusive"
    return "pass" if ok else "fail"


def _status_decided(checks, stable: bool, changes) -> str:
    """Resolve pass/fail/inconclusive from (ok, distance_to_threshold) pairs.

    A verdict stands when the raw quantities stabilized, or when every check
    sits at least 10x its own measured inter-level drift away from its
    threshold; otherwise the quadrature has not settled the question."""
    ok = all(c[0] for c in checks)
    if stable:
        return "pass" if ok else "fail"
    if changes is not None and len(changes) >= len(checks):
        decisive = all(abs(dist) >= 10.0 * chg
                       for (_, dist), chg in zip(checks, changes))
        if decisive:
            return "pass" if ok else "fail"
    return "inconclusive"


def _margin_ok(margin, rhs, tol: Tolerances) -> bool:
    return margin >= -tol.margin_rel * max(abs(rhs), _TINY)


# ---------------------------------------------------------------------------
# L^p Sobolev with exact remainder
# ---------------------------------------------------------------------------

def verify_lp_sobolev(g: HomogeneousGroup, prof: RadialProfile, p: float,
                      tol: Tolerances = DEFAULT_TOL,
                      identity: str = "auto") -> VerificationReport:
    """||phi||_p <= (p/Q) ||E phi||_p, with the exact remainder

        ||u||_p^p - ||v||_p^p = p * int I_p(v, u) |v - u|^2 dmu,

    where u = -(p/Q) E phi and v = phi.  The identity path requires a
    real-valued profile unless p = 2 (where it holds for complex values)."""
    if not p > 1:
        raise DomainError(f"need p > 1, got {p}")
    can_identity = prof.is_real or p == 2.0
    if identity is True and not can_identity:
        raise PreconditionError(
            "the remainder identity needs a real-valued profile for p != 2")
    do_identity = can_identity if identity == "auto" else bool(identity)
    Q = g.Q

    def fn(grid):
        ph = _regrid(prof, grid)
        e = euler_apply(g, ph)
        lhs_p = _wpow(g, ph.values, grid, p)
        rhs_p = _wpow(g, (p / Q) * e.values, grid, p)
        out = [lhs_p, rhs_p]
        if do_identity:
            u_vals = -(p / Q) * e.values
            v_vals = ph.values
            diff2 = np.abs(v_vals - u_vals) ** 2
            if p == 2.0:
                integrand = diff2  # p * I_2 = 1
            else:
                kern = ip_kernel(v_vals.real, u_vals.real, p)
                integrand = p * kern * diff2
            out.append(float(log_trapz(grid, integrand * np.exp(Q * grid.u))))
        return out

    def derive(vals):
        lhs = vals[0] ** (1.0 / p)
        rhs = vals[1] ** (1.0 / p)
        out = [rhs - lhs]
        if do_identity:
            scale = max(vals[0], vals[1], _TINY)
            out.append(abs((vals[1] - vals[0]) - vals[2]) / scale)
            out.append(vals[2] / scale)
        return out

    vals, meta, stable, changes = _run_refined(prof, fn, tol, derive)
    lhs_p, rhs_p = vals[0], vals[1]
    lhs, rhs = lhs_p ** (1.0 / p), rhs_p ** (1.0 / p)
    d = derive(vals)
    margin = d[0]
    floor = tol.margin_rel * max(rhs, _TINY)
    checks = [(margin >= -floor, margin + floor)]
    residual = remainder = None
    if do_identity:
        remainder = vals[2]
        residual = d[1]
        checks.append((residual <= tol.identity_rel, tol.identity_rel - residual))
        checks.append((d[2] >= -tol.identity_rel, d[2] + tol.identity_rel))
    return VerificationReport(
        "sobolev_lp", g.name or str(g), {"p": p, "profile": prof.name},
        lhs, rhs, _status_decided(checks, stable, changes), remainder=remainder,
        residual=residual, margin=margin, grid_meta=meta)


# ---------------------------------------------------------------------------
# Hardy inequality and its p=2 norm identity
# ---------------------------------------------------------------------------

def verify_hardy_equivalence(g: HomogeneousGroup, prof: RadialProfile, p: float,
                             tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """||phi/|x| ||_p <= p/(Q-p) ||phi'||_p, and for p = 2 the identity
    ||E phi||^2 = (Q-1) ||phi||^2 + ||phi + E phi||^2  (from g = |x| phi)."""
    Q = g.Q
    if p == 2.0:
        if Q < 3.0:
            raise DomainError(f"the p=2 equivalence path needs Q >= 3, got Q={Q:g}")
    elif not 1.0 < p < Q:
        raise DomainError(f"need 1 < p < Q, got p={p}, Q={Q:g}")

    def fn(grid):
        ph = _regrid(prof, grid)
        e = euler_apply(g, ph)
        lhs_p = _wpow(g, ph.values, grid, p, alpha=1.0)
        rhs_p = _wpow(g, e.values, grid, p, alpha=1.0)  # |phi'| = |E phi| / r
        out = [lhs_p, rhs_p]
        if p == 2.0:
            out += [_wpow(g, e.values, grid, 2),
                    _wpow(g, ph.values, grid, 2),
                    _wpow(g, ph.values + e.values, grid, 2)]
        return out

    def derive(vals):
        lhs = vals[0] ** (1.0 / p)
        rhs = (p / (Q - p)) * vals[1] ** (1.0 / p)
        out = [rhs - lhs]
        if p == 2.0:
            pred = (Q - 1.0) * vals[3] + vals[4]
            out.append(abs(vals[2] - pred) / max(vals[2], pred, _TINY))
        return out

    vals, meta, stable, changes = _run_refined(prof, fn, tol, derive)
    lhs = vals[0] ** (1.0 / p)
    rhs = (p / (Q - p)) * vals[1] ** (1.0 / p)
    d = derive(vals)
    margin = d[0]
    floor = tol.margin_rel * max(rhs, _TINY)
    checks = [(margin >= -floor, margin + floor)]
    residual = None
    details = {}
    if p == 2.0:
        residual = d[1]
        checks.append((residual <= tol.identity_rel, tol.identity_rel - residual))
        details = {"norm_E_sq": vals[2], "norm_sq": vals[3],
                   "norm_radial_deriv_sq": vals[4]}
    return VerificationReport(
        "hardy", g.name or str(g), {"p": p, "profile": prof.name},
        lhs, rhs, _status_decided(checks, stable, changes), residual=residual,
        margin=margin, details=details, grid_meta=meta)


# ---------------------------------------------------------------------------
# Weighted L^p (power and logarithmic branches)
# ---------------------------------------------------------------------------

def verify_weighted_lp(g: HomogeneousGroup, prof: RadialProfile, p: float,
                       alpha: float, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """||phi/|x|^alpha||_p <= |p/(Q-alpha p)| || |x|^-alpha E phi ||_p for
    alpha p != Q; at the critical exponent alpha p = Q the constant becomes p
    and the right side gains the factor |log|x||."""
    if not p > 1:
        raise DomainError(f"need p > 1, got {p}")
    Q = g.Q
    crit = abs(alpha * p - Q) <= 1e-12
    notes = []
    if not crit and abs(Q - alpha * p) < 1e-3 * max(Q, 1.0):
        notes.append(f"near-critical weight: |Q - alpha*p| = {abs(Q - alpha * p):.2e}, "
                     "constant |p/(Q-alpha p)| is large")
    if crit:
        e = euler_apply(g, prof)
        lhs = weighted_lp_norm(g, prof, WeightSpec(p=p, alpha=Q / p))
        rhs = p * weighted_lp_norm(
            g, e, WeightSpec(p=p, alpha=Q / p, lam1=1.0, R=1.0, log_shifted=False))
        meta = {"refined": False, "n": prof.grid.n, "branch": "log"}
        margin = rhs - lhs
        status = _status(_margin_ok(margin, rhs, tol), True)
    else:
        const = abs(p / (Q - alpha * p))

        def fn(grid):
            ph = _regrid(prof, grid)
            e = euler_apply(g, ph)
            return [_wpow(g, ph.values, grid, p, alpha),
                    _wpow(g, e.values, grid, p, alpha)]

        def derive(vals):
            return [const * vals[1] ** (1.0 / p) - vals[0] ** (1.0 / p)]

        vals, meta, stable, changes = _run_refined(prof, fn, tol, derive)
        meta["branch"] = "power"
        lhs = vals[0] ** (1.0 / p)
        rhs = const * vals[1] ** (1.0 / p)
        margin = rhs - lhs
        floor = tol.margin_rel * max(rhs, _TINY)
        status = _status_decided([(margin >= -floor, margin + floor)],
                                 stable, changes)
    return VerificationReport(
        "weighted_lp", g.name or str(g),
        {"p": p, "alpha": alpha, "profile": prof.name},
        lhs, rhs, status, margin=margin, grid_meta=meta, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Weighted L^2 identity with exact remainder
# ---------------------------------------------------------------------------

def _weighted_l2_scalars(g, prof, alpha, grid):
    ph = _regrid(prof, grid)
    e = euler_apply(g, ph)
    c = 0.5 * (g.Q - 2.0 * alpha)
    return [_wpow(g, e.values, grid, 2, alpha),            # ||r^-a E phi||^2
            _wpow(g, ph.values, grid, 2, alpha),           # ||phi/r^a||^2
            _wpow(g, e.values + c * ph.values, grid, 2, alpha)]  # remainder term


def verify_weighted_l2_identity(g: HomogeneousGroup, prof: RadialProfile,
                                alpha: float,
                                tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """|| r^-a E phi ||^2 = (Q/2-a)^2 ||phi/r^a||^2 + || r^-a E phi + (Q-2a)/(2 r^a) phi ||^2,
    reported in the normalization rhs^2 - lhs^2 = remainder with
    lhs = ||phi/r^a||, rhs = 2/|Q-2a| * ||r^-a E phi||  (for Q != 2a)."""
    Q = g.Q
    vals, meta, converged, _ = _run_refined(
        prof, lambda grid: _weighted_l2_scalars(g, prof, alpha, grid), tol)
    a_sq, b_sq, c_sq = vals
    if abs(Q - 2.0 * alpha) <= 1e-12:
        # degenerate constant: check the identity in its raw form, no margin
        pred = 0.25 * (Q - 2.0 * alpha) ** 2 * b_sq + c_sq
        residual = abs(a_sq - pred) / max(a_sq, pred, _TINY)
        ok = residual <= tol.identity_rel
        return VerificationReport(
            "weighted_l2", g.name or str(g),
            {"alpha": alpha, "profile": prof.name},
            math.sqrt(a_sq), math.sqrt(pred), _status(ok, converged),
            remainder=c_sq, residual=residual, grid_meta=meta,
            notes=("critical weight Q = 2*alpha: identity only",))
    scale2 = (2.0 / abs(Q - 2.0 * alpha)) ** 2
    lhs = math.sqrt(b_sq)
    rhs = math.sqrt(scale2 * a_sq)
    remainder = scale2 * c_sq
    scale = max(scale2 * a_sq, b_sq, _TINY)
    residual = abs(scale2 * a_sq - b_sq - remainder) / scale
    margin = rhs - lhs
    ok = (residual <= tol.identity_rel and _margin_ok(margin, rhs, tol)
          and remainder >= -tol.identity_rel * scale)
    return VerificationReport(
        "weighted_l2", g.name or str(g), {"alpha": alpha, "profile": prof.name},
        lhs, rhs, _status(ok, converged), remainder=remainder,
        residual=residual, margin=margin, grid_meta=meta)


# ---------------------------------------------------------------------------
# Higher order (iterated) inequalities with telescoped remainder
# ---------------------------------------------------------------------------

def verify_higher_order(g: HomogeneousGroup, prof: RadialProfile, alpha: float,
                        k: int, p: float = 2.0,
                        tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """||phi/r^a||_p <= |p/(Q-a p)|^k || r^-a E^k phi ||_p; for p = 2 also the
    exact telescoped remainder (sum over orders m = 1..k)."""
    if k < 1 or k != int(k):
        raise DomainError(f"order k must be a positive integer, got {k}")
    if not p > 1:
        raise DomainError(f"need p > 1, got {p}")
    Q = g.Q
    k = int(k)

    if p != 2.0:
        if abs(Q - alpha * p) <= 1e-12:
            raise DomainError("the L^p branch needs Q != alpha*p")
        const = abs(p / (Q - alpha * p)) ** k

        def fn(grid):
            ph = _regrid(prof, grid)
            ek = euler_power(g, ph, k)
            return [_wpow(g, ph.values, grid, p, alpha),
                    _wpow(g, ek.values, grid, p, alpha)]

        def derive(vals):
            return [const * vals[1] ** (1.0 / p) - vals[0] ** (1.0 / p)]

        vals, meta, stable, changes = _run_refined(prof, fn, tol, derive)
        lhs = vals[0] ** (1.0 / p)
        rhs = const * vals[1] ** (1.0 / p)
        margin = rhs - lhs
        floor = tol.margin_rel * max(rhs, _TINY)
        status = _status_decided([(margin >= -floor, margin + floor)],
                                 stable, changes)
        return VerificationReport(
            "higher_order", g.name or str(g),
            {"alpha": alpha, "k": k, "p": p, "profile": prof.name},
            lhs, rhs, status, margin=margin, grid_meta=meta)

    c = 0.5 * (Q - 2.0 * alpha)
    degenerate = abs(c) <= 1e-12

    def fn(grid):
        ph = _regrid(prof, grid)
        chain = [ph]
        for _ in range(k):
            chain.append(euler_apply(g, chain[-1]))
        out = [_wpow(g, chain[k].values, grid, 2, alpha),   # ||r^-a E^k phi||^2
               _wpow(g, ph.values, grid, 2, alpha)]         # ||phi/r^a||^2
        for m in range(1, k + 1):
            combo = chain[m].values + c * chain[m - 1].values
            out.append(_wpow(g, combo, grid, 2, alpha))
        return out

    vals, meta, converged, _ = _run_refined(prof, fn, tol)
    ek_sq, f_sq = vals[0], vals[1]
    terms = vals[2:]
    if degenerate:
        pred = sum(t * c ** (2 * (k - m)) for m, t in enumerate(terms, start=1))
        pred += c ** (2 * k) * f_sq
        residual = abs(ek_sq - pred) / max(ek_sq, pred, _TINY)
        ok = residual <= tol.identity_rel
        return VerificationReport(
            "higher_order", g.name or str(g),
            {"alpha": alpha, "k": k, "p": p, "profile": prof.name},
            math.sqrt(ek_sq), math.sqrt(max(pred, 0.0)), _status(ok, converged),
            remainder=sum(terms), residual=residual, grid_meta=meta,
            notes=("critical weight Q = 2*alpha: identity only",))
    # normalization rhs^2 - lhs^2 = remainder, dividing the identity by c^(2k)
    lhs = math.sqrt(f_sq)
    rhs = abs(1.0 / c) ** k * math.sqrt(ek_sq)
    remainder = sum(t / c ** (2 * m) for m, t in enumerate(terms, start=1))
    scale = max(rhs**2, lhs**2, _TINY)
    residual = abs(rhs**2 - lhs**2 - remainder) / scale
    margin = rhs - lhs
    ok = (residual <= tol.identity_rel and _margin_ok(margin, rhs, tol)
          and remainder >= -tol.identity_rel * scale)
    return VerificationReport(
        "higher_order", g.name or str(g),
        {"alpha": alpha, "k": k, "p": p, "profile": prof.name},
        lhs, rhs, _status(ok, converged), remainder=remainder,
        residual=residual, margin=margin, grid_meta=meta)


# ---------------------------------------------------------------------------
# Fractional powers |E|^beta
# ---------------------------------------------------------------------------

def verify_fractional(g: HomogeneousGroup, prof: RadialProfile, beta, k: int,
                      tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Moment bound ||  |E|^-beta phi || <= C(k-beta/2, k) ||phi||^(1-t) ||A^-k phi||^t
    with t = Re(beta)/(2k), and the embedding bound
    ||phi|| <= C(k-beta/2, k) (2/Q)^Re(beta) || |E|^beta phi ||."""
    beta = complex(beta)
    if not beta.real > 0:
        raise DomainError(f"need Re(beta) > 0, got {beta}")
    if k != int(k) or k <= beta.real / 2.0:
        raise DomainError(f"need integer k > Re(beta)/2, got k={k}, beta={beta}")
    k = int(k)
    Q = g.Q
    C = embedding_constant(k - beta / 2.0, k)
    theta = beta.real / (2.0 * k)

    def fn(grid):
        ph = _regrid(prof, grid)
        neg_b = multiplier_apply(g, ph, OperatorSymbol.fractional(-beta))
        neg_k = multiplier_apply(g, ph, OperatorSymbol.fractional(-2 * k))
        pos_b = multiplier_apply(g, ph, OperatorSymbol.fractional(beta))
        return [_wpow(g, ph.values, grid, 2),
                _wpow(g, neg_b.values, grid, 2),
                _wpow(g, neg_k.values, grid, 2),
                _wpow(g, pos_b.values, grid, 2)]

    vals, meta, converged, _ = _run_refined(prof, fn, tol)
    n_phi = math.sqrt(vals[0])
    n_neg_b = math.sqrt(vals[1])
    n_neg_k = math.sqrt(vals[2])
    n_pos_b = math.sqrt(vals[3])
    moment_rhs = C * n_phi ** (1.0 - theta) * n_neg_k**theta
    moment_margin = moment_rhs - n_neg_b
    lhs = n_phi
    rhs = C * (2.0 / Q) ** beta.real * n_pos_b
    margin = rhs - lhs
    ok = _margin_ok(margin, rhs, tol) and _margin_ok(moment_margin, moment_rhs, tol)
    return VerificationReport(
        "fractional", g.name or str(g),
        {"beta": [beta.real, beta.imag], "k": k, "profile": prof.name},
        lhs, rhs, _status(ok, converged), margin=margin,
        details={"constant": C, "moment_lhs": n_neg_b, "moment_rhs": moment_rhs,
                 "moment_margin": moment_margin},
        grid_meta=meta)


# ---------------------------------------------------------------------------
# Embedding norm bounds over a suite of profiles
# ---------------------------------------------------------------------------

def verify_embedding_norms(g: HomogeneousGroup, profiles, p: float, k: int = 1,
                           beta=None, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """sup over the suite of ||phi||_p / ||E^k phi||_p against the bound (p/Q)^k;
    with ``beta`` set (p must be 2), the fractional bound
    C(k - beta/2, k) (2/Q)^Re(beta) is used with || |E|^beta phi || downstairs."""
    profiles = list(profiles)
    if not profiles:
        raise PreconditionError("embedding check needs a non-empty profile suite")
    if beta is not None and p != 2.0:
        raise DomainError("the fractional embedding bound is an L^2 statement")
    notes = []
    ratios = {}
    for prof in profiles:
        num = weighted_lp_norm(g, prof, WeightSpec(p=p))
        if beta is None:
            den_prof = euler_power(g, prof, k)
        else:
            den_prof = multiplier_apply(g, prof, OperatorSymbol.fractional(beta))
        den = weighted_lp_norm(g, den_prof, WeightSpec(p=p))
        if den == 0.0:
            notes.append(f"profile {prof.name}: ||E^k phi|| = 0, skipped "
                         "(constants are annihilated)")
            continue
        ratios[prof.name] = num / den
    if not ratios:
        raise PreconditionError("all profiles in the suite were skipped")
    if beta is None:
        bound = (p / g.Q) ** k
        params = {"p": p, "k": k, "suite_size": len(profiles)}
    else:
        beta = complex(beta)
        bound = embedding_constant(k - beta / 2.0, k) * (2.0 / g.Q) ** beta.real
        params = {"p": p, "k": k, "beta": [beta.real, beta.imag],
                  "suite_size": len(profiles)}
    worst = max(ratios, key=ratios.get)
    lhs = ratios[worst]
    margin = bound - lhs
    ok = _margin_ok(margin, bound, tol)
    return VerificationReport(
        "embedding", g.name or str(g), params, lhs, bound,
        _status(ok, True), margin=margin,
        details={"ratios": ratios, "worst_profile": worst},
        grid_meta={"refined": False}, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Poincare inequality on a ball
# ---------------------------------------------------------------------------

def verify_poincare(g: HomogeneousGroup, prof: RadialProfile, p: float, R: float,
                    tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """||phi||_p <= (R p / Q) || phi' ||_p for profiles supported in {r < R}."""
    if not p > 1:
        raise DomainError(f"need p > 1, got {p}")
    if not R > 0:
        raise DomainError(f"need R > 0, got {R}")
    outside = prof.grid.u >= math.log(R)
    peak = np.abs(prof.values).max()
    if peak > 0 and np.any(outside):
        leak = np.abs(prof.values[outside]).max()
        if leak > 1e-12 * peak:
            raise PreconditionError(
                f"profile support escapes the ball of radius {R:g} "
                f"(leak/peak = {leak / peak:.2e})")

    def fn(grid):
        ph = _regrid(prof, grid)
        e = euler_apply(g, ph)
        return [_wpow(g, ph.values, grid, p),
                _wpow(g, e.values, grid, p, alpha=1.0)]

    const = R * p / g.Q

    def derive(vals):
        return [const * vals[1] ** (1.0 / p) - vals[0] ** (1.0 / p)]

    vals, meta, stable, changes = _run_refined(prof, fn, tol, derive)
    lhs = vals[0] ** (1.0 / p)
    rhs = const * vals[1] ** (1.0 / p)
    margin = rhs - lhs
    floor = tol.margin_rel * max(rhs, _TINY)
    status = _status_decided([(margin >= -floor, margin + floor)], stable, changes)
    return VerificationReport(
        "poincare", g.name or str(g), {"p": p, "R": R, "profile": prof.name},
        lhs, rhs, status, margin=margin, grid_meta=meta)


# ---------------------------------------------------------------------------
# Critical log-Lorentz embedding
# ---------------------------------------------------------------------------

def verify_slz(g: HomogeneousGroup, prof: RadialProfile, q: float, gamma: float,
               R: float, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """The double-log embedding inequality with constant q/(gamma-1):
    combined form (difference against phi(R) inside B(0,eR) and against
    phi(e^2 R) outside), plus its two halves separately."""
    check_slz_exponents(q, gamma)
    if not R > 0:
        raise DomainError(f"need R > 0, got {R}")
    e = euler_apply(g, prof)
    const = q / (gamma - 1.0)
    u_eR = math.log(R) + 1.0

    diff_inner = slz_difference_integral(prof, q, gamma, u_eR, "inner")
    grad_inner = slz_gradient_integral(e, q, gamma, u_eR, "inner")
    diff_outer_shift = slz_difference_integral(prof, q, gamma, u_eR, "outer")
    grad_outer_shift = slz_gradient_integral(e, q, gamma, u_eR, "outer")
    # the dual half at its own scale R (complement of B(0,R))
    diff_outer = slz_difference_integral(prof, q, gamma, math.log(R), "outer")
    grad_outer = slz_gradient_integral(e, q, gamma, math.log(R), "outer")

    inv_q = 1.0 / q
    lhs = (diff_inner + diff_outer_shift) ** inv_q
    rhs = const * (grad_inner + grad_outer_shift) ** inv_q
    margin = rhs - lhs
    m_inner = const * grad_inner**inv_q - diff_inner**inv_q
    m_outer = const * grad_outer**inv_q - diff_outer**inv_q
    ok = (_margin_ok(margin, rhs, tol)
          and _margin_ok(m_inner, const * grad_inner**inv_q, tol)
          and _margin_ok(m_outer, const * grad_outer**inv_q, tol))
    return VerificationReport(
        "slz", g.name or str(g),
        {"q": q, "gamma": gamma, "R": R, "profile": prof.name},
        lhs, rhs, _status(ok, True), margin=margin,
        details={"margin_inner": m_inner, "margin_outer": m_outer,
                 "inner_lhs": diff_inner**inv_q,
                 "inner_rhs": const * grad_inner**inv_q,
                 "outer_lhs": diff_outer**inv_q,
                 "outer_rhs": const * grad_outer**inv_q},
        grid_meta={"refined": False, "method": "adaptive-quad"})


# ---------------------------------------------------------------------------
# Dilation covariance of the norm quotient
# ---------------------------------------------------------------------------

def scaling_quotient(g: HomogeneousGroup, prof: RadialProfile, p: float,
                     q: float, lam: float = 1.0) -> float:
    """||phi o D_lam||_p / ||E(phi o D_lam)||_q.

    Scales as lam^(Q/q - Q/p): constant in lam exactly when p = q, which is
    why the two exponents must agree in the unweighted inequality."""
    ph = prof.dilated(lam) if lam != 1.0 else prof
    num = weighted_lp_norm(g, ph, WeightSpec(p=p))
    den = weighted_lp_norm(g, euler_apply(g, ph), WeightSpec(p=q))
    return num / den


def verify_dilation_scaling(g: HomogeneousGroup, prof: RadialProfile, p: float,
                            q: float, lams=(0.25, 4.0),
                            tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """The quotient ||phi o D_lam||_p / ||E(phi o D_lam)||_q must scale exactly
    as lam^(Q/q - Q/p); for p = q it is dilation invariant."""
    if not (p > 1 and q > 1):
        raise DomainError(f"need p, q > 1, got p={p}, q={q}")
    base = scaling_quotient(g, prof, p, q, 1.0)
    expo = g.Q / q - g.Q / p
    residual = 0.0
    measured = {}
    for lam in lams:
        got = scaling_quotient(g, prof, p, q, lam) / base
        want = lam**expo
        residual = max(residual, abs(got - want) / abs(want))
        measured[f"lam={lam:g}"] = got
    ok = residual <= tol.identity_rel
    return VerificationReport(
        "scaling", g.name or str(g),
        {"p": p, "q": q, "lams": list(lams), "profile": prof.name},
        base, base, _status(ok, True), residual=residual,
        details={"exponent": expo, "relative_quotients": measured},
        grid_meta={"refined": False})


# ---------------------------------------------------------------------------
# Polar decomposition cross-validation (two independent MC estimators)
# ---------------------------------------------------------------------------

def verify_polar_mc(g: HomogeneousGroup, prof: RadialProfile, samples: int,
                    seed: int, n_sigma: float = 3.0,
                    tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Factorized (radial quadrature x sphere MC) against direct n-dimensional
    MC of the same group integral; they must agree within n_sigma pooled
    standard errors, which validates the polar decomposition numerically."""
    from .montecarlo import separable_group_integral
    if samples < 2:
        raise DomainError("need at least 2 samples")
    cmp = separable_group_integral(g, prof, None, samples, seed)
    margin = n_sigma * cmp.pooled_sigma - abs(cmp.factorized - cmp.direct)
    ok = margin >= 0.0
    return VerificationReport(
        "polar_mc", g.name or str(g),
        {"samples": samples, "seed": seed, "n_sigma": n_sigma,
         "profile": prof.name},
        cmp.factorized, cmp.direct, _status(ok, True), margin=margin,
        details={"factorized_err": cmp.factorized_err,
                 "direct_err": cmp.direct_err,
                 "sigma_distance": cmp.sigma_distance},
        grid_meta={"refined": False, "method": "monte-carlo"})


# ---------------------------------------------------------------------------
# Registry (drives the CLI and config validation)
# ---------------------------------------------------------------------------

def _check_weighted_lp(params, g):
    p, alpha = params.get("p", 2.0), params.get("alpha", 0.0)
    if not p > 1:
        raise DomainError(f"weighted_lp: need p > 1, got {p}")
    _ = alpha


def _check_higher_order(params, g):
    p = params.get("p", 2.0)
    alpha = params.get("alpha", 0.0)
    k = params.get("k", 1)
    if k < 1:
        raise DomainError(f"higher_order: need k >= 1, got {k}")
    if p == 2.0 and abs(g.Q - 2.0 * alpha) <= 1e-12:
        raise DomainError(
            f"higher_order: the inequality needs Q != 2*alpha "
            f"(Q = {g.Q:g}, alpha = {alpha:g})")
    if p != 2.0 and abs(g.Q - alpha * p) <= 1e-12:
        raise DomainError("higher_order: the L^p branch needs Q != alpha*p")


def _check_hardy(params, g):
    p = params.get("p", 2.0)
    if p == 2.0:
        if g.Q < 3.0:
            raise DomainError(f"hardy: p=2 path needs Q >= 3, got Q = {g.Q:g}")
    elif not 1.0 < p < g.Q:
        raise DomainError(f"hardy: need 1 < p < Q, got p = {p}, Q = {g.Q:g}")


def _check_fractional(params, g):
    beta = complex(params.get("beta", 1.0) if not isinstance(params.get("beta"), list)
                   else complex(*params["beta"]))
    k = params.get("k", 1)
    if not beta.real > 0:
        raise DomainError(f"fractional: need Re(beta) > 0, got {beta}")
    if k <= beta.real / 2.0:
        raise DomainError(f"fractional: need k > Re(beta)/2, got k={k}")


def _check_slz(params, g):
    check_slz_exponents(params.get("q", 2.0), params.get("gamma", 2.0))
    if not params.get("R", 1.0) > 0:
        raise DomainError("slz: need R > 0")


def _check_poincare(params, g):
    if not params.get("p", 2.0) > 1:
        raise DomainError("poincare: need p > 1")
    if not params.get("R", 1.0) > 0:
        raise DomainError("poincare: need R > 0")


VERIFIERS = {
    "sobolev_lp": {
        "fn": verify_lp_sobolev,
        "params": ("p",),
        "kind": "identity+inequality",
        "summary": ("||f||_p <= (p/Q) ||E f||_p for 1 < p < inf, sharp constant "
                    "p/Q, equality only at f = 0; exact remainder "
                    "||u||_p^p - ||v||_p^p = p int I_p(v,u) |v-u|^2 dx with "
                    "u = -(p/Q) E f, v = f (real-valued f; complex allowed at p=2)."),
        "validate": lambda params, g: None if params.get("p", 2.0) > 1 else
        (_ for _ in ()).throw(DomainError("sobolev_lp: need p > 1")),
    },
    "hardy": {
        "fn": verify_hardy_equivalence,
        "params": ("p",),
        "kind": "identity+inequality",
        "summary": ("||f/|x|||_p <= p/(Q-p) ||f'||_p (radial derivative); at "
                    "p=2, Q>=3 equivalent to the unweighted bound via "
                    "||E f||^2 = (Q-1)||f||^2 + ||f + E f||^2."),
        "validate": _check_hardy,
    },
    "weighted_lp": {
        "fn": verify_weighted_lp,
        "params": ("p", "alpha"),
        "kind": "inequality",
        "summary": ("||f/|x|^a||_p <= |p/(Q-a p)| |||x|^-a E f||_p for a p != Q "
                    "(sharp constant |p/(Q-a p)|); at the critical exponent "
                    "a p = Q the sharp constant is p with weight |log|x|| on "
                    "the right."),
        "validate": _check_weighted_lp,
    },
    "weighted_l2": {
        "fn": verify_weighted_l2_identity,
        "params": ("alpha",),
        "kind": "identity+inequality",
        "summary": ("|||x|^-a E f||^2 = (Q/2-a)^2 ||f/|x|^a||^2 + "
                    "|||x|^-a E f + (Q-2a)/(2|x|^a) f||^2; dropping the last "
                    "term gives ||f/|x|^a|| <= 2/|Q-2a| |||x|^-a E f|| with "
                    "sharp constant 2/|Q-2a|, equality only at f = 0."),
        "validate": lambda params, g: None,
    },
    "higher_order": {
        "fn": verify_higher_order,
        "params": ("alpha", "k", "p"),
        "kind": "identity+inequality",
        "summary": ("||f/|x|^a||_p <= |p/(Q-a p)|^k |||x|^-a E^k f||_p; for p=2 "
                    "the sharp constant is (2/|Q-2a|)^k with the exact "
                    "telescoped remainder summed over orders m = 1..k."),
        "validate": _check_higher_order,
    },
    "fractional": {
        "fn": verify_fractional,
        "params": ("beta", "k"),
        "kind": "inequality",
        "summary": ("|| |E|^-b f || <= C(k-b/2,k) ||f||^(1-Re b/2k) "
                    "||A^-k f||^(Re b/2k) and ||f|| <= C(k-b/2,k) (2/Q)^Re(b) "
                    "|| |E|^b f ||, where |E|^b = A^(b/2), A = E E*, and "
                    "C(b,k) = Gamma(k+1)/|Gamma(b)Gamma(k-b)| "
                    "* 2^(k-Re b)/(Re b (k-Re b))."),
        "validate": _check_fractional,
    },
    "embedding": {
        "fn": verify_embedding_norms,
        "params": ("p", "k"),
        "kind": "inequality",
        "summary": ("embedding norm bound: sup ||f||_p / ||E^k f||_p <= (p/Q)^k "
                    "over the profile suite; fractional variant bounded by "
                    "C(k-b/2,k) (2/Q)^Re(b)."),
        "validate": lambda params, g: None,
    },
    "poincare": {
        "fn": verify_poincare,
        "params": ("p", "R"),
        "kind": "inequality",
        "summary": ("||f||_p <= (R p / Q) ||f'||_p for f supported in the "
                    "quasi-ball of radius R (constant R p / Q)."),
        "validate": _check_poincare,
    },
    "slz": {
        "fn": verify_slz,
        "params": ("q", "gamma", "R"),
        "kind": "inequality",
        "summary": ("critical double-log embedding: the |f - f_R|-type "
                    "integral against |log log(eR/|x|)|^-gamma "
                    "|log(eR/|x|)|^-1 dx/|x|^Q is bounded by q/(gamma-1) "
                    "times the weighted gradient integral; sharp constant "
                    "q/(gamma-1), for 1 < gamma and max(1, gamma-1) < q."),
        "validate": _check_slz,
    },
    "scaling": {
        "fn": verify_dilation_scaling,
        "params": ("p", "q"),
        "kind": "identity",
        "summary": ("dilation covariance: ||f o D_lam||_p / ||E(f o D_lam)||_q "
                    "scales exactly as lam^(Q/q - Q/p); p = q is therefore "
                    "necessary for the unweighted inequality."),
        "validate": lambda params, g: None if (params.get("p", 2.0) > 1
                                               and params.get("q", 2.0) > 1)
        else (_ for _ in ()).throw(DomainError("scaling: need p, q > 1")),
    },
    "polar_mc": {
        "fn": verify_polar_mc,
        "params": ("samples",),
        "kind": "statistical",
        "summary": ("polar decomposition cross-check: factorized radial x "
                    "sphere Monte Carlo against direct n-dimensional Monte "
                    "Carlo of the same group integral, compared in pooled "
                    "standard errors."),
        "validate": lambda params, g: None if params.get("samples", 1) >= 2
        else (_ for _ in ()).throw(DomainError("polar_mc: need samples >= 2")),
    },
}


def describe_verifier(verifier_id: str) -> str:
    try:
        meta = VERIFIERS[verifier_id]
    except KeyError:
        raise KeyError(f"unknown verifier id {verifier_id!r}") from None
    lines = [f"{verifier_id} [{meta['kind']}]",
             f"  parameters: {', '.join(meta['params'])}",
             f"  {meta['summary']}"]
    return "\n".join(lines)
