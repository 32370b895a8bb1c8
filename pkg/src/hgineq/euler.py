"""Euler operator calculus on log-radius grids.

On radial profiles the Euler operator E = r d/dr acts as d/du in the log
coordinate u = log r.  Its formal adjoint in L^2 with measure r^(Q-1) dr is
E* = -Q - E, and A = E E* is positive.  The unitary map
(U phi)(u) = e^(Qu/2) phi(e^u) from L^2(r^(Q-1) dr) onto L^2(du) conjugates
E to d/du - Q/2, hence A to -d^2/du^2 + Q^2/4, so functions of A become
Fourier multipliers in u:

    euler      ->  i*xi - Q/2
    a          ->  xi^2 + Q^2/4
    resolvent  ->  1 / (lam + xi^2 + Q^2/4),        lam > 0
    fractional ->  (xi^2 + Q^2/4)^(beta/2),         beta complex

``fractional`` with exponent beta realizes |E|^beta = A^(beta/2) concretely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridAccuracyError
from .groups import HomogeneousGroup
from .profiles import RadialProfile

__all__ = [
    "OperatorSymbol",
    "euler_apply",
    "euler_adjoint_apply",
    "euler_power",
    "multiplier_apply",
    "finite_difference_euler",
]

#: Decay required of the U-weighted profile before the FFT path is trusted.
_WEIGHTED_SUPPORT_TOL = 1e-10

#: Decay required of inputs to the spectral derivative.  Looser than the
#: construction-time invariant: outputs of a previous FFT pass carry a
#: roundoff floor of ~1e-14 of the peak at the edges, which is harmless for
#: periodization but would trip the strict check.
_SPECTRAL_SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class OperatorSymbol:
    """A Fourier multiplier m(xi) acting after the unitary log conjugation."""

    kind: str
    lam: float = 0.0
    beta: complex = 0.0

    @classmethod
    def euler(cls):
        return cls("euler")

    @classmethod
    def a(cls):
        return cls("a")

    @classmethod
    def resolvent(cls, lam: float):
        if not lam > 0:
            raise ValueError(f"resolvent shift must be positive, got {lam}")
        return cls("resolvent", lam=float(lam))

    @classmethod
    def fractional(cls, beta):
        return cls("fractional", beta=complex(beta))

    def evaluate(self, xi: np.ndarray, Q: float) -> np.ndarray:
        a = xi**2 + 0.25 * Q * Q
        if self.kind == "euler":
            return 1j * xi - 0.5 * Q
        if self.kind == "a":
            return a
        if self.kind == "resolvent":
            return 1.0 / (self.lam + a)
        if self.kind == "fractional":
            if self.beta == 2:  # exact A, avoids spurious imaginary round-off
                return a
            return np.exp(0.5 * self.beta * np.log(a))
        raise ValueError(f"unknown symbol kind {self.kind!r}")

    def is_real(self) -> bool:
        return self.kind in ("a", "resolvent") or (
            self.kind == "fractional" and self.beta.imag == 0.0)


def _spectral_udiff(prof: RadialProfile, order: int = 1) -> np.ndarray:
    """d^order/du^order of the sampled trace via the FFT (periodic)."""
    prof.require_support(tol=_SPECTRAL_SUPPORT_TOL)
    xi = prof.grid.xi
    out = np.fft.ifft((1j * xi) ** order * np.fft.fft(prof.values))
    return out.real if prof.is_real else out


def euler_apply(g: HomogeneousGroup, prof: RadialProfile) -> RadialProfile:
    """E phi = r phi'(r), i.e. d/du of the log trace.

    Uses the profile's exact derivative chain when available, spectral
    differentiation otherwise (which requires compact numerical support).
    """
    if prof.form is not None:
        dform = prof.form.diff()
        if dform is not None:
            return RadialProfile.from_form(prof.grid, dform, f"E[{prof.name}]",
                                           prof.breakpoints_u, check_support=False)
    vals = _spectral_udiff(prof)
    return RadialProfile(prof.grid, vals, name=f"E[{prof.name}]", check_support=False)


def euler_adjoint_apply(g: HomogeneousGroup, prof: RadialProfile) -> RadialProfile:
    """E* phi = -Q phi - E phi."""
    e = euler_apply(g, prof)
    vals = -g.Q * prof.values - e.values
    form = None
    if prof.form is not None and e.form is not None:
        try:
            form = (-g.Q) * prof.form + (-1.0) * e.form
        except TypeError:
            from .profiles import FuncForm
            form = FuncForm(lambda u, f=prof.form, d=e.form, Q=g.Q: -Q * f(u) - d(u))
    return RadialProfile(prof.grid, vals, form, f"E*[{prof.name}]",
                         prof.breakpoints_u, check_support=False)


def euler_power(g: HomogeneousGroup, prof: RadialProfile, k: int) -> RadialProfile:
    """E^k phi: exact chain as far as it goes, one spectral multiplier after."""
    if k < 1 or k != int(k):
        raise ValueError(f"power must be a positive integer, got {k}")
    current = prof
    remaining = int(k)
    while remaining > 0 and current.form is not None and current.form.diff() is not None:
        current = euler_apply(g, current)
        remaining -= 1
    if remaining > 0:
        vals = _spectral_udiff(current, order=remaining)
        current = RadialProfile(current.grid, vals, name=f"E^{k}[{prof.name}]",
                                check_support=False)
    return current


def multiplier_apply(g: HomogeneousGroup, prof: RadialProfile,
                     sym: OperatorSymbol) -> RadialProfile:
    """U^-1 m(xi) U phi with (U phi)(u) = e^(Qu/2) phi(e^u)."""
    grid = prof.grid
    if 0.5 * g.Q * max(abs(grid.u_min), abs(grid.u_max)) > 300.0:
        raise GridAccuracyError("grid too wide for the weighted multiplier path")
    half_weight = np.exp(0.5 * g.Q * grid.u)
    psi = half_weight * prof.values
    peak = np.abs(psi).max()
    if peak > 0:
        edge = max(np.abs(psi[:2]).max(), np.abs(psi[-2:]).max())
        if edge > _WEIGHTED_SUPPORT_TOL * peak:
            raise GridAccuracyError(
                f"weighted profile support touches the grid boundary "
                f"(edge/peak = {edge / peak:.2e}); enlarge the grid")
    m = sym.evaluate(grid.xi, g.Q)
    out = np.fft.ifft(m * np.fft.fft(psi)) / half_weight
    if prof.is_real and sym.is_real():
        out = out.real
    return RadialProfile(grid, out, name=f"{sym.kind}[{prof.name}]",
                         check_support=False)


def finite_difference_euler(prof: RadialProfile) -> np.ndarray:
    """4th-order central differences in u; the cross-check oracle for E."""
    v, h = prof.values, prof.grid.h
    return (-np.roll(v, -2) + 8 * np.roll(v, -1) - 8 * np.roll(v, 1) + np.roll(v, 2)) / (12 * h)
