"""Suite configuration: TOML (or JSON) in, validated cells out.

The config grammar is TOML: top-level scalars, ``[grid]``/``[tolerances]``
tables, ``[[groups]]`` and ``[[theorems]]`` array tables, and an optional
``[sharpness]`` section.  A theorem entry carries the verifier id plus one
value (or a list of values) per parameter; the cell grid is the cartesian
product of the lists.  Complex parameters (``beta``) are two-element
``[re, im]`` arrays; a list of such arrays is a grid of complex values.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import VERIFIERS, Tolerances
from .errors import ConfigError
from .groups import group_from_config
from .profiles import (LogGrid, RadialProfile, bump_form, complex_gauss_profile,
                       standard_battery)

__all__ = ["SuiteConfig", "TheoremCells", "load_config", "profile_library",
            "DEFAULT_CONFIG_PATH"]

DEFAULT_CONFIG_PATH = Path(__file__).parent / "data" / "default.toml"

#: Parameters that take complex values encoded as [re, im].
_COMPLEX_PARAMS = {"beta"}


def profile_library(grid: LogGrid) -> dict:
    """Built-in profiles by name on the given grid."""
    lib = {p.name: p for p in standard_battery(grid)}
    lib["complex_gauss"] = complex_gauss_profile(grid)
    ball = bump_form(-1.609438, -0.223144)  # supported in 0.2 < r < 0.8
    lib["bump_ball"] = RadialProfile.from_form(grid, ball, "bump_ball")
    return lib


@dataclass
class TheoremCells:
    verifier_id: str
    combos: list          # list of parameter dicts
    profiles: list | None  # None = suite default


@dataclass
class SuiteConfig:
    groups: list
    theorems: list
    profiles: list
    tolerances: Tolerances
    grid: LogGrid
    seed: int = 12345
    mc_sigma: float = 3.0
    sharpness: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "SuiteConfig":
        gcfg = raw.get("grid", {})
        try:
            grid = LogGrid(gcfg.get("u_min", -20.0), gcfg.get("u_max", 20.0),
                           gcfg.get("n", 4096))
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None
        tcfg = raw.get("tolerances", {})
        tol = Tolerances(
            identity_rel=tcfg.get("identity_rel", 1e-6),
            margin_rel=tcfg.get("margin_rel", 1e-10),
            refine_rel=tcfg.get("refine_rel", 1e-9),
            max_grid_n=gcfg.get("max_n", 1 << 18),
        )
        groups = []
        for i, gc in enumerate(raw.get("groups", [])):
            try:
                groups.append(group_from_config(gc))
            except ConfigError as exc:
                raise ConfigError(f"groups[{i}]: {exc}") from None
        theorems = []
        for i, tc in enumerate(raw.get("theorems", [])):
            if "id" not in tc:
                raise ConfigError(f"theorems[{i}]: missing 'id'")
            vid = tc["id"]
            params = {k: v for k, v in tc.items() if k not in ("id", "profiles")}
            combos = _expand_grid(vid, params, where=f"theorems[{i}]")
            theorems.append(TheoremCells(vid, combos, tc.get("profiles")))
        return cls(
            groups=groups,
            theorems=theorems,
            profiles=list(raw.get("profiles", [])),
            tolerances=tol,
            grid=grid,
            seed=int(raw.get("seed", 12345)),
            mc_sigma=float(raw.get("mc_sigma", 3.0)),
            sharpness=raw.get("sharpness", {}),
        )

    def validate(self):
        """Raise ConfigError naming the first offending key."""
        if not self.groups:
            raise ConfigError("groups: at least one group is required")
        lib = profile_library(self.grid)
        for j, name in enumerate(self.profiles):
            if name not in lib:
                raise ConfigError(f"profiles[{j}]: unknown profile {name!r}")
        for i, cells in enumerate(self.theorems):
            if cells.verifier_id not in VERIFIERS:
                raise ConfigError(
                    f"theorems[{i}].id: unknown verifier {cells.verifier_id!r}")
            if cells.profiles is not None:
                for j, name in enumerate(cells.profiles):
                    if name not in lib:
                        raise ConfigError(
                            f"theorems[{i}].profiles[{j}]: unknown profile {name!r}")
            validate = VERIFIERS[cells.verifier_id]["validate"]
            for combo in cells.combos:
                for g in self.groups:
                    try:
                        validate(combo, g)
                    except Exception as exc:
                        raise ConfigError(
                            f"theorems[{i}] ({cells.verifier_id}) on group "
                            f"{g.name or g}: {exc}") from None


def _expand_grid(vid: str, params: dict, where: str) -> list:
    """Cartesian product of per-parameter value lists."""
    keys = sorted(params)
    axes = []
    for k in keys:
        v = params[k]
        if k in _COMPLEX_PARAMS:
            if isinstance(v, list) and v and isinstance(v[0], list):
                axes.append([complex(a, b) for a, b in v])
            elif isinstance(v, list) and len(v) == 2 and all(
                    isinstance(x, (int, float)) for x in v):
                axes.append([complex(v[0], v[1])])
            else:
                raise ConfigError(f"{where}.{k}: complex values must be "
                                  f"[re, im] pairs")
        elif isinstance(v, list):
            if not v:
                raise ConfigError(f"{where}.{k}: empty parameter list")
            axes.append(list(v))
        else:
            axes.append([v])
    return [dict(zip(keys, combo)) for combo in itertools.product(*axes)]


def load_config(path) -> SuiteConfig:
    """Load TOML (default) or JSON by file suffix."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        if path.suffix.lower() == ".json":
            raw = json.loads(path.read_text())
        else:
            try:
                import tomllib  # Python >= 3.11
            except ModuleNotFoundError:
                import tomli as tomllib
            raw = tomllib.loads(path.read_text())
    except (json.JSONDecodeError, ValueError) as exc:
        raise ConfigError(f"cannot parse {path.name}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a table/object")
    return SuiteConfig.from_dict(raw)
