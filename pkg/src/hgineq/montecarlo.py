"""Monte Carlo estimation of the quasi-sphere surface measure.

The polar decomposition
    int_G f dx = int_0^inf int_wp f(D_r y) r^(Q-1) dsigma(y) dr
induces a Borel measure sigma on the unit quasi-sphere wp = {|x| = 1}.
Inverting it over a shell R1 < |x| < R2 gives

    int_wp h dsigma = Q / (R2^Q - R1^Q) * int_shell h(D_(1/|x|) x) dx,

which is estimated here by rejection sampling from an enclosing box.  All
streams use a counter-based generator keyed by (seed, stream), so estimates
are deterministic and safely parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .groups import HomogeneousGroup, quasi_norm
from .profiles import RadialProfile
from .quadrature import radial_integral

__all__ = [
    "SphereMeasureEstimate",
    "GroupIntegralComparison",
    "sphere_integral_mc",
    "separable_group_integral",
    "direct_group_integral_mc",
]

_CHUNK = 1 << 20


@dataclass(frozen=True)
class SphereMeasureEstimate:
    value: float
    std_error: float
    samples: int

    def within(self, target: float, n_sigma: float = 3.0) -> bool:
        return abs(self.value - target) <= n_sigma * self.std_error


@dataclass(frozen=True)
class GroupIntegralComparison:
    """Factorized (radial x sphere) vs direct n-dimensional MC estimates."""
    factorized: float
    factorized_err: float
    direct: float
    direct_err: float

    @property
    def pooled_sigma(self) -> float:
        return float(np.hypot(self.factorized_err, self.direct_err))

    @property
    def sigma_distance(self) -> float:
        s = self.pooled_sigma
        return abs(self.factorized - self.direct) / s if s > 0 else np.inf


def _rng(seed: int, stream: int) -> np.random.Generator:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                    np.uint64(stream & 0xFFFFFFFFFFFFFFFF)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _mc_box_mean(fn, n_dim, half_widths, samples, seed, stream):
    """Mean/stderr of fn over the uniform box prod [-w_i, w_i], in chunks."""
    rng = _rng(seed, stream)
    count = 0
    mean = 0.0
    m2 = 0.0
    accepted = 0
    remaining = int(samples)
    while remaining > 0:
        m = min(remaining, _CHUNK)
        pts = rng.uniform(-1.0, 1.0, size=(m, n_dim)) * half_widths
        vals, acc = fn(pts)
        accepted += int(acc)
        # Welford merge of the chunk into the running accumulator
        cm = float(vals.mean())
        cm2 = float(((vals - cm) ** 2).sum())
        delta = cm - mean
        tot = count + m
        mean += delta * m / tot
        m2 += cm2 + delta**2 * count * m / tot
        count = tot
        remaining -= m
    var = m2 / (count - 1) if count > 1 else 0.0
    return mean, float(np.sqrt(var / count)), accepted


def sphere_integral_mc(g: HomogeneousGroup, h, samples: int, seed: int,
                       r_lo: float = 1.0, r_hi: float = 2.0,
                       stream: int = 0) -> SphereMeasureEstimate:
    """Estimate int_wp h dsigma by shell rejection sampling.

    ``h`` maps an (m, n) array of unit-sphere points to (m,) values; pass
    ``None`` for h == 1 (the sphere mass |wp|).
    """
    if not 0 < r_lo < r_hi:
        raise ValueError("need 0 < r_lo < r_hi")
    half = r_hi ** max(g.weights)
    half_widths = np.full(g.n, half)
    box_vol = float(np.prod(2.0 * half_widths))

    def fn(pts):
        norms = quasi_norm(g, pts)
        mask = (norms > r_lo) & (norms < r_hi)
        vals = np.zeros(len(pts))
        if np.any(mask):
            if h is None:
                vals[mask] = 1.0
            else:
                unit = pts[mask] * (norms[mask][:, None]
                                    ** (-np.asarray(g.weights)[None, :]))
                vals[mask] = h(unit)
        return vals, mask.sum()

    mean, serr, accepted = _mc_box_mean(fn, g.n, half_widths, samples, seed, stream)
    if accepted == 0:
        raise GeometryError(
            f"no samples accepted in the shell {r_lo} < |x| < {r_hi} "
            f"after {samples} draws")
    scale = g.Q / (r_hi**g.Q - r_lo**g.Q) * box_vol
    return SphereMeasureEstimate(scale * mean, scale * serr, int(samples))


def direct_group_integral_mc(g: HomogeneousGroup, prof: RadialProfile, h,
                             samples: int, seed: int, r_max: float,
                             stream: int = 1):
    """Plain n-dimensional MC of int_G phi(|x|) h(D_(1/|x|) x) dx over a box.

    The profile must be numerically supported in {|x| < r_max}.
    """
    half_widths = r_max ** np.asarray(g.weights)
    box_vol = float(np.prod(2.0 * half_widths))

    def fn(pts):
        norms = quasi_norm(g, pts)
        mask = norms > 0
        vals = np.zeros(len(pts))
        if np.any(mask):
            vals[mask] = np.real(prof.eval_log(np.log(norms[mask])))
            if h is not None:
                unit = pts[mask] * (norms[mask][:, None]
                                    ** (-np.asarray(g.weights)[None, :]))
                vals[mask] *= h(unit)
        return vals, mask.sum()

    mean, serr, _ = _mc_box_mean(fn, g.n, half_widths, samples, seed, stream)
    return box_vol * mean, box_vol * serr


def separable_group_integral(g: HomogeneousGroup, prof: RadialProfile, h,
                             samples: int, seed: int,
                             r_max: float | None = None) -> GroupIntegralComparison:
    """Factorized and direct estimates of int_G phi(|x|) h(D_(1/|x|) x) dx.

    Factorized route: (int_0^inf phi r^(Q-1) dr) * (int_wp h dsigma); the
    direct route cross-validates the polar decomposition itself.
    """
    radial = float(np.real(radial_integral(g, prof, refine=False)))
    sphere = sphere_integral_mc(g, h, samples, seed, stream=0)
    if r_max is None:
        mags = np.abs(prof.values)
        nz = np.nonzero(mags > 1e-15 * mags.max())[0]
        if nz.size == 0:
            r_max = 1.0
        else:
            r_max = float(np.exp(prof.grid.u[nz[-1]] + prof.grid.h))
    direct, direct_err = direct_group_integral_mc(g, prof, h, samples, seed,
                                                  r_max, stream=1)
    return GroupIntegralComparison(radial * sphere.value,
                                   abs(radial) * sphere.std_error,
                                   direct, direct_err)
