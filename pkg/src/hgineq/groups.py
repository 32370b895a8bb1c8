"""Anisotropic dilation structures on R^n.

A group is modeled as R^n equipped with componentwise power dilations
``D_lam(x) = (lam^nu_1 x_1, ..., lam^nu_n x_n)`` and a homogeneous quasi-norm
(continuous, symmetric, exactly 1-homogeneous under the dilations, vanishing
only at 0).  The homogeneous dimension is ``Q = nu_1 + ... + nu_n`` and the
Haar measure is Lebesgue measure.  Group multiplication is never needed: all
computations downstream only use dilations, quasi-norms and integrals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

__all__ = [
    "QuasiNormSpec",
    "HomogeneousGroup",
    "dilate",
    "quasi_norm",
    "euclidean_group",
    "anisotropic_group",
    "heisenberg_group",
    "group_from_config",
    "BUILTIN_GROUPS",
]

_Q_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class QuasiNormSpec:
    """Choice of homogeneous quasi-norm.

    variant:
        "euclidean"  -- sqrt(sum x_i^2); requires all dilation weights equal 1.
        "power"      -- (sum |x_i|^(2M/nu_i))^(1/(2M)) with parameter M > 0.
        "koranyi"    -- ((x^2+y^2)^2 + t^2)^(1/4); requires n=3, weights (1,1,2).
    """

    variant: str = "power"
    power_m: float | None = None

    def __post_init__(self):
        if self.variant not in ("euclidean", "power", "koranyi"):
            raise ConfigError(f"unknown quasi-norm variant: {self.variant!r}")
        if self.power_m is not None and not self.power_m > 0:
            raise ConfigError("power-norm parameter M must be positive")


@dataclass(frozen=True)
class HomogeneousGroup:
    """R^n with dilation weights ``weights`` and a fixed quasi-norm.

    ``Q`` is always recomputed from the weights; a user-supplied value is only
    accepted if it matches the recomputed one to machine precision.
    """

    weights: tuple
    norm: QuasiNormSpec = field(default_factory=QuasiNormSpec)
    name: str = ""

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if len(w) == 0:
            raise ConfigError("group needs at least one dilation weight")
        if any(v <= 0 for v in w):
            raise ConfigError("all dilation weights must be strictly positive")
        object.__setattr__(self, "weights", w)
        if self.norm.variant == "euclidean" and any(v != 1.0 for v in w):
            raise ConfigError("euclidean norm requires all dilation weights equal to 1")
        if self.norm.variant == "koranyi" and w != (1.0, 1.0, 2.0):
            raise ConfigError("koranyi norm requires n=3 with weights (1, 1, 2)")

    @classmethod
    def create(cls, weights, norm=None, Q=None, name=""):
        norm = norm or QuasiNormSpec()
        g = cls(tuple(weights), norm, name)
        if Q is not None and abs(Q - g.Q) > _Q_MATCH_TOL * max(1.0, abs(g.Q)):
            raise ConfigError(
                f"supplied Q={Q} does not match sum of weights {g.Q}")
        return g

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def Q(self) -> float:
        return float(sum(self.weights))

    @property
    def power_m(self) -> float:
        return self.norm.power_m if self.norm.power_m is not None else max(self.weights)

    def dilate(self, lam, x):
        return dilate(self, lam, x)

    def quasi_norm(self, x):
        return quasi_norm(self, x)

    def __str__(self):
        tag = self.name or f"R^{self.n}"
        return f"{tag}(weights={self.weights}, Q={self.Q:g}, norm={self.norm.variant})"


def dilate(g: HomogeneousGroup, lam: float, x):
    """Apply D_lam componentwise: (lam^nu_1 x_1, ..., lam^nu_n x_n).

    ``x`` may be a single point of shape (n,) or a batch of shape (..., n).
    """
    if not lam > 0:
        raise ValueError(f"dilation parameter must be positive, got {lam}")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != g.n:
        raise ValueError(f"point dimension {x.shape[-1]} != group dimension {g.n}")
    return x * np.power(float(lam), np.asarray(g.weights))


def quasi_norm(g: HomogeneousGroup, x):
    """Evaluate the group's quasi-norm at x (single point or batch (..., n))."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != g.n:
        raise ValueError(f"point dimension {x.shape[-1]} != group dimension {g.n}")
    v = g.norm.variant
    if v == "euclidean":
        return np.sqrt(np.sum(x * x, axis=-1))
    if v == "koranyi":
        xy2 = x[..., 0] ** 2 + x[..., 1] ** 2
        return (xy2**2 + x[..., 2] ** 2) ** 0.25
    m = g.power_m
    expo = 2.0 * m / np.asarray(g.weights)
    return np.sum(np.abs(x) ** expo, axis=-1) ** (1.0 / (2.0 * m))


def euclidean_group(n: int) -> HomogeneousGroup:
    return HomogeneousGroup((1.0,) * n, QuasiNormSpec("euclidean"), name=f"euclidean{n}")


def anisotropic_group(weights, power_m=None) -> HomogeneousGroup:
    return HomogeneousGroup(tuple(weights), QuasiNormSpec("power", power_m),
                            name="aniso" + "x".join(f"{w:g}" for w in weights))


def heisenberg_group() -> HomogeneousGroup:
    """R^3 with weights (1,1,2) and the fourth-root gauge; Q = 4."""
    return HomogeneousGroup((1.0, 1.0, 2.0), QuasiNormSpec("koranyi"), name="heisenberg")


#: The three groups used by the standard verification battery.
BUILTIN_GROUPS = {
    "euclidean3": euclidean_group(3),
    "aniso12": anisotropic_group((1.0, 2.0)),
    "heisenberg": heisenberg_group(),
}


def group_from_config(cfg: dict) -> HomogeneousGroup:
    """Build a group from a config mapping.

    Keys: ``weights = [nu_1, ..., nu_n]``, ``norm = "euclidean"|"power"|"koranyi"``,
    optional ``power_M``, optional ``name``, optional ``Q`` (validated only).
    """
    if "name" in cfg and "weights" not in cfg:
        try:
            return BUILTIN_GROUPS[cfg["name"]]
        except KeyError:
            raise ConfigError(f"unknown built-in group {cfg['name']!r}") from None
    try:
        weights = cfg["weights"]
    except KeyError:
        raise ConfigError("group config requires 'weights'") from None
    norm = QuasiNormSpec(cfg.get("norm", "power"), cfg.get("power_M"))
    return HomogeneousGroup.create(weights, norm, Q=cfg.get("Q"),
                                   name=cfg.get("name", ""))
