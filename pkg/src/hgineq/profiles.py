"""Radial profiles on a uniform log-radius grid.

A radial function phi(r) on (0, infty) is stored through its log-radius trace
``phi~(u) = phi(e^u)`` sampled on a uniform grid in u.  In this coordinate the
Euler operator r d/dr becomes d/du, so profiles that carry an exact
differentiable closed form (a :class:`LogForm`) admit exact Euler derivatives
of any order, while plain sampled profiles fall back to spectral calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from .errors import GridAccuracyError

__all__ = [
    "LogGrid",
    "LogForm",
    "GaussPolyForm",
    "FuncForm",
    "PiecewiseLogForm",
    "RadialProfile",
    "DEFAULT_GRID",
    "standard_battery",
    "complex_gauss_profile",
    "bump_form",
    "random_gausspoly_form",
    "SUPPORT_DECAY_TOL",
]

#: Values at the outermost grid nodes must stay below this fraction of the peak.
SUPPORT_DECAY_TOL = 1e-14


@dataclass(frozen=True)
class LogGrid:
    """Uniform grid u_j = u_min + j*h, j = 0..n-1, h = (u_max-u_min)/n.

    Nodes represent radii r_j = exp(u_j).  ``n`` must be a power of two
    (>= 16) because the multiplier calculus runs through the FFT.
    """

    u_min: float = -20.0
    u_max: float = 20.0
    n: int = 4096

    def __post_init__(self):
        if not self.u_min < self.u_max:
            raise ValueError("need u_min < u_max")
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"grid size must be a power of two >= 16, got {self.n}")

    @property
    def h(self) -> float:
        return (self.u_max - self.u_min) / self.n

    @property
    def u(self) -> np.ndarray:
        return _grid_nodes(self.u_min, self.u_max, self.n)

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.u)

    @property
    def xi(self) -> np.ndarray:
        """Angular frequencies matching numpy's FFT layout."""
        return _grid_freqs(self.u_min, self.u_max, self.n)

    def refined(self, widen: float = 1.0, max_n: int = 1 << 18) -> "LogGrid":
        """Double the node count, optionally widening the window about its center."""
        if 2 * self.n > max_n:
            raise ValueError("grid refinement cap reached")
        c = 0.5 * (self.u_min + self.u_max)
        half = 0.5 * (self.u_max - self.u_min) * widen
        return LogGrid(c - half, c + half, 2 * self.n)


@lru_cache(maxsize=64)
def _grid_nodes(u_min, u_max, n):
    h = (u_max - u_min) / n
    return u_min + h * np.arange(n)


@lru_cache(maxsize=64)
def _grid_freqs(u_min, u_max, n):
    h = (u_max - u_min) / n
    return 2.0 * np.pi * np.fft.fftfreq(n, d=h)


DEFAULT_GRID = LogGrid()


# ---------------------------------------------------------------------------
# Closed forms in the log coordinate
# ---------------------------------------------------------------------------

class LogForm:
    """A closed form for phi~(u) = phi(e^u).

    Subclasses may support exact differentiation in u (``diff``) and shifts
    u -> u + a (``shift``), which realizes the dilation phi o D_(e^a).
    Either may return None when the operation is not available.
    """

    def __call__(self, u):
        raise NotImplementedError

    def diff(self):
        return None

    def shift(self, a):
        return FuncForm(lambda u, f=self, a=a: f(np.asarray(u) + a))


class GaussPolyForm(LogForm):
    """Sum of terms P(u) * exp(-((u - c)/s)^2).

    Closed under d/du, u-shifts, addition and scalar multiplication, so any
    Euler power of such a profile is available exactly.  Coefficients and
    centers may be complex (a complex center encodes an oscillatory factor).
    """

    def __init__(self, terms):
        # terms: iterable of (Polynomial-or-coeffs, center, width)
        self.terms = tuple((p if isinstance(p, Polynomial) else Polynomial(p), c, s)
                           for p, c, s in terms)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape, dtype=complex)
        for p, c, s in self.terms:
            out = out + p(u) * np.exp(-(((u - c) / s) ** 2))
        if all(np.isrealobj(p.coef) and np.isreal(c) for p, c, _ in self.terms):
            return out.real
        return out

    def diff(self):
        new = []
        for p, c, s in self.terms:
            # d/du [P e^(-v^2)] with v=(u-c)/s:  (P' - (2/s^2)(u-c) P) e^(-v^2)
            new.append((p.deriv() - (2.0 / s**2) * (Polynomial([-c, 1.0]) * p), c, s))
        return GaussPolyForm(new)

    def shift(self, a):
        comp = Polynomial([a, 1.0])
        return GaussPolyForm([(p(comp), c - a, s) for p, c, s in self.terms])

    def __add__(self, other):
        if isinstance(other, GaussPolyForm):
            return GaussPolyForm(self.terms + other.terms)
        return NotImplemented

    def __mul__(self, scalar):
        return GaussPolyForm([(p * scalar, c, s) for p, c, s in self.terms])

    __rmul__ = __mul__


class FuncForm(LogForm):
    """Wrap arbitrary callables; ``df`` is the exact first u-derivative if known."""

    def __init__(self, f, df=None):
        self.f = f
        self.df = df

    def __call__(self, u):
        return self.f(np.asarray(u, dtype=float))

    def diff(self):
        return FuncForm(self.df) if self.df is not None else None

    def shift(self, a):
        df = (lambda u, d=self.df, a=a: d(np.asarray(u) + a)) if self.df else None
        return FuncForm(lambda u, f=self.f, a=a: f(np.asarray(u) + a), df)


class PiecewiseLogForm(LogForm):
    """Piecewise definition in u with breakpoints; pieces are callables of u.

    Evaluation picks piece i for u in [breaks[i-1], breaks[i]); the first and
    last pieces extend to -inf/+inf.  ``dpieces``, when given, are the exact
    u-derivatives of the pieces (the derivative may jump at the breakpoints).
    """

    def __init__(self, breaks, pieces, dpieces=None):
        if len(pieces) != len(breaks) + 1:
            raise ValueError("need len(pieces) == len(breaks) + 1")
        self.breaks = tuple(float(b) for b in breaks)
        self.pieces = tuple(pieces)
        self.dpieces = tuple(dpieces) if dpieces is not None else None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        idx = np.searchsorted(self.breaks, u, side="right")
        out = np.zeros(u.shape, dtype=complex)
        anyreal = True
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                vals = np.asarray(piece(u[mask]))
                anyreal = anyreal and np.isrealobj(vals)
                out[mask] = vals
        return out.real if anyreal else out

    def diff(self):
        if self.dpieces is None:
            return None
        return PiecewiseLogForm(self.breaks, self.dpieces)

    def shift(self, a):
        pieces = [(lambda u, p=p, a=a: p(np.asarray(u) + a)) for p in self.pieces]
        dpieces = None
        if self.dpieces is not None:
            dpieces = [(lambda u, p=p, a=a: p(np.asarray(u) + a)) for p in self.dpieces]
        return PiecewiseLogForm([b - a for b in self.breaks], pieces, dpieces)


# ---------------------------------------------------------------------------
# Radial profiles
# ---------------------------------------------------------------------------

class RadialProfile:
    """phi(r) sampled on a LogGrid, optionally backed by a closed form.

    ``breakpoints_u`` lists log-radii where the closed form is not smooth
    (kinks); adaptive quadrature routines split there.
    """

    def __init__(self, grid: LogGrid, values, form: LogForm | None = None,
                 name: str = "", breakpoints_u=(), check_support: bool = True):
        values = np.asarray(values)
        if values.shape != (grid.n,):
            raise ValueError(f"values shape {values.shape} does not match grid size {grid.n}")
        self.grid = grid
        self.values = values
        self.form = form
        self.name = name
        self.breakpoints_u = tuple(breakpoints_u)
        if check_support:
            self.require_support()

    @classmethod
    def from_form(cls, grid: LogGrid, form: LogForm, name: str = "",
                  breakpoints_u=(), check_support: bool = True):
        return cls(grid, form(grid.u), form, name, breakpoints_u, check_support)

    def support_margin(self) -> float:
        """max boundary magnitude relative to the peak magnitude."""
        mags = np.abs(self.values)
        peak = mags.max()
        if peak == 0.0:
            return 0.0
        edge = max(mags[:2].max(), mags[-2:].max())
        return float(edge / peak)

    def require_support(self, tol: float = SUPPORT_DECAY_TOL):
        m = self.support_margin()
        if m > tol:
            raise GridAccuracyError(
                f"profile {self.name or '<anon>'} support touches the grid boundary "
                f"(edge/peak = {m:.2e} > {tol:.0e}); enlarge the grid")

    @property
    def is_real(self) -> bool:
        return bool(np.isrealobj(self.values))

    def eval_log(self, u):
        """phi~(u); closed form when available, cubic interpolation otherwise."""
        u = np.asarray(u, dtype=float)
        if self.form is not None:
            return self.form(u)
        return self._interpolator()(u)

    def eval_r(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("radii must be positive")
        return self.eval_log(np.log(r))

    def _interpolator(self):
        from scipy.interpolate import CubicSpline
        interp = getattr(self, "_interp", None)
        if interp is None:
            cs = CubicSpline(self.grid.u, self.values, extrapolate=False)
            lo, hi = self.grid.u[0], self.grid.u[-1]

            def interp(u, cs=cs, lo=lo, hi=hi):
                u = np.asarray(u, dtype=float)
                out = cs(np.clip(u, lo, hi))
                return np.where((u < lo) | (u > hi), 0.0, out)

            self._interp = interp
        return interp

    def with_grid(self, grid: LogGrid) -> "RadialProfile":
        if self.form is None:
            raise GridAccuracyError(
                f"profile {self.name or '<anon>'} has no closed form; cannot regrid")
        return RadialProfile.from_form(grid, self.form, self.name,
                                       self.breakpoints_u, check_support=False)

    def dilated(self, lam: float) -> "RadialProfile":
        """phi o D_lam, i.e. r -> phi(lam r): a shift by log(lam) in u."""
        if not lam > 0:
            raise ValueError("dilation parameter must be positive")
        a = float(np.log(lam))
        if self.form is not None:
            form = self.form.shift(a)
            return RadialProfile.from_form(self.grid, form, f"{self.name}*D{lam:g}",
                                           tuple(b - a for b in self.breakpoints_u),
                                           check_support=False)
        return RadialProfile(self.grid, self.eval_log(self.grid.u + a),
                             name=f"{self.name}*D{lam:g}", check_support=False)

    def map_values(self, fn, name=None) -> "RadialProfile":
        return RadialProfile(self.grid, fn(self.values), form=None,
                             name=name or self.name, check_support=False)

    def __repr__(self):
        return (f"RadialProfile({self.name or '<anon>'}, n={self.grid.n}, "
                f"u=[{self.grid.u_min:g},{self.grid.u_max:g}])")


# ---------------------------------------------------------------------------
# Built-in profile families
# ---------------------------------------------------------------------------

def standard_battery(grid: LogGrid = DEFAULT_GRID) -> list[RadialProfile]:
    """Five positive smooth test profiles with exact Euler-derivative chains."""
    specs = [
        ("gauss_log", GaussPolyForm([([1.0], 0.0, 1.0)])),
        ("gauss_log_shift", GaussPolyForm([([1.0], 1.0, np.sqrt(2.0))])),
        ("poly_gauss", GaussPolyForm([([1.0, 0.0, 1.0], 0.0, 2.0)])),
        ("asym_gauss", GaussPolyForm([([2.0, 1.0, 0.3], -0.5, 1.5)])),
        ("bimodal_gauss", GaussPolyForm([([1.0], 2.0, 1.0), ([1.0], -2.0, 1.0)])),
    ]
    return [RadialProfile.from_form(grid, form, name) for name, form in specs]


def complex_gauss_profile(grid: LogGrid = DEFAULT_GRID, freq: float = 3.0) -> RadialProfile:
    """exp(-u^2) * exp(i*freq*u) as a Gaussian with complex center:
    exp(-(u-c)^2) = exp(-u^2 + i*freq*u - c^2) with c = i*freq/2."""
    c = 0.5j * freq
    form = GaussPolyForm([([np.exp(c**2)], c, 1.0)])
    return RadialProfile.from_form(grid, form, f"complex_gauss{freq:g}")


def bump_form(u_lo: float, u_hi: float) -> FuncForm:
    """C-infinity bump exp(-1/((u-lo)(hi-u))) on (u_lo, u_hi), 0 elsewhere."""
    if not u_lo < u_hi:
        raise ValueError("need u_lo < u_hi")

    def val(u):
        u = np.asarray(u, dtype=float)
        inside = (u > u_lo) & (u < u_hi)
        out = np.zeros(u.shape)
        g = (u[inside] - u_lo) * (u_hi - u[inside])
        out[inside] = np.exp(-1.0 / g)
        return out

    def dval(u):
        u = np.asarray(u, dtype=float)
        inside = (u > u_lo) & (u < u_hi)
        out = np.zeros(u.shape)
        ui = u[inside]
        g = (ui - u_lo) * (u_hi - ui)
        out[inside] = np.exp(-1.0 / g) * (u_hi + u_lo - 2.0 * ui) / g**2
        return out

    return FuncForm(val, dval)


def random_gausspoly_form(rng: np.random.Generator, n_terms: int = 3,
                          complex_valued: bool = False) -> GaussPolyForm:
    """Random smooth profile with an exact derivative chain (for property tests)."""
    terms = []
    for _ in range(n_terms):
        deg = int(rng.integers(0, 3))
        coef = rng.uniform(-1.0, 1.0, size=deg + 1)
        if complex_valued:
            coef = coef + 1j * rng.uniform(-1.0, 1.0, size=deg + 1)
        c = rng.uniform(-3.0, 3.0)
        s = rng.uniform(0.6, 2.0)
        terms.append((coef, c, s))
    return GaussPolyForm(terms)
