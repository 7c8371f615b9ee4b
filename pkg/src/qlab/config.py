"""Experiment configuration: TOML parsing, defaults, validation.

The resolved configuration is the experiment content only; the output
directory is a run-time concern handled by the command line wrapper so
that identical experiments produce identical reports wherever they are
written.  ``to_dict``/``from_dict`` round-trip exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib as _toml
except ModuleNotFoundError:
    import tomli as _toml

from .errors import ConfigError

MODEL_KINDS = ("chain", "klein_gordon", "custom")
EXPERIMENT_KINDS = (
    "locality",
    "knight",
    "coherent",
    "licht",
    "cyclicity",
    "separability",
    "measure",
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
DEFAULT_COEFF_GRID = (
    (complex(_INV_SQRT2), complex(_INV_SQRT2)),
    (complex(_INV_SQRT2), complex(0.0, _INV_SQRT2)),
    (complex(_INV_SQRT2), complex(-_INV_SQRT2)),
)


@dataclass(frozen=True)
class ExperimentConfig:
    model_kind: str
    model_params: tuple[tuple[str, object], ...]
    region_members: tuple[int, ...]
    experiment: str
    sampler_count: int
    sampler_amplitude: float
    sampler_seed: int
    fock_truncation: int
    fock_max_degree: int
    window_site: int
    window_lo: float
    window_hi: float
    coherent_q: tuple[float, ...]
    coherent_p: tuple[float, ...]
    licht_x1_q: tuple[float, ...]
    licht_x1_p: tuple[float, ...]
    licht_x2_q: tuple[float, ...]
    licht_x2_p: tuple[float, ...]
    licht_coeff_grid: tuple[tuple[complex, complex], ...]
    separability_draws: int
    separability_max_degree: int

    @property
    def n(self) -> int:
        return _model_dimension(self.model_kind, dict(self.model_params))

    def to_dict(self) -> dict:
        """Nested plain-data form, fixed key order, complex as [re, im]."""
        model = {"kind": self.model_kind}
        for key, value in self.model_params:
            if key == "entries":
                model[key] = [list(row) for row in value]
            else:
                model[key] = value
        return {
            "model": model,
            "region": {"members": list(self.region_members)},
            "experiment": {"kind": self.experiment},
            "sampler": {
                "count": self.sampler_count,
                "amplitude": self.sampler_amplitude,
                "seed": self.sampler_seed,
            },
            "fock": {
                "truncation": self.fock_truncation,
                "max_degree": self.fock_max_degree,
            },
            "window": {
                "site": self.window_site,
                "lo": self.window_lo,
                "hi": self.window_hi,
            },
            "coherent": {"q": list(self.coherent_q), "p": list(self.coherent_p)},
            "licht": {
                "x1_q": list(self.licht_x1_q),
                "x1_p": list(self.licht_x1_p),
                "x2_q": list(self.licht_x2_q),
                "x2_p": list(self.licht_x2_p),
                "coeff_grid": [
                    [[a.real, a.imag], [b.real, b.imag]]
                    for a, b in self.licht_coeff_grid
                ],
            },
            "separability": {
                "draws": self.separability_draws,
                "max_degree": self.separability_max_degree,
            },
        }


def _fail(key: str, message: str) -> ConfigError:
    return ConfigError(f"config key '{key}': {message}")


def _as_int(raw, key: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise _fail(key, f"expected an integer, got {raw!r}")
    return raw


def _as_float(raw, key: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise _fail(key, f"expected a number, got {raw!r}")
    return float(raw)


def _as_vector(raw, n: int, key: str) -> tuple[float, ...]:
    if not isinstance(raw, (list, tuple)):
        raise _fail(key, f"expected a list of {n} numbers")
    vec = tuple(_as_float(v, key) for v in raw)
    if len(vec) != n:
        raise _fail(key, f"expected length {n}, got {len(vec)}")
    return vec


def _model_dimension(kind: str, params: dict) -> int:
    if kind == "chain":
        return int(params["n"])
    if kind == "klein_gordon":
        return int(params["grid_points"])
    return len(params["entries"])


def _resolve_model(raw: dict, custom_raw: dict) -> tuple[str, tuple[tuple[str, object], ...]]:
    kind = raw.get("kind")
    if kind not in MODEL_KINDS:
        raise _fail("model.kind", f"must be one of {MODEL_KINDS}, got {kind!r}")
    if kind == "chain":
        params = (
            ("n", _as_int(raw.get("n"), "model.n")),
            ("coupling", _as_float(raw.get("coupling", 1.0), "model.coupling")),
            ("pinning", _as_float(raw.get("pinning", 1.0), "model.pinning")),
            ("periodic", bool(raw.get("periodic", False))),
        )
    elif kind == "klein_gordon":
        params = (
            ("grid_points", _as_int(raw.get("grid_points"), "model.grid_points")),
            ("mass", _as_float(raw.get("mass"), "model.mass")),
            ("spacing", _as_float(raw.get("spacing", 1.0), "model.spacing")),
        )
    else:
        # row-major matrix, accepted under [model] entries or [custom] entries
        entries = raw.get("entries", custom_raw.get("entries"))
        if not isinstance(entries, (list, tuple)) or not len(entries):
            raise _fail("model.entries", "expected a non-empty array of rows")
        rows = tuple(
            tuple(_as_float(v, "model.entries") for v in row) for row in entries
        )
        if any(len(row) != len(rows) for row in rows):
            raise _fail("model.entries", "expected a square row-major matrix")
        params = (("entries", rows),)
    return kind, params


def from_dict(raw: dict) -> ExperimentConfig:
    """Resolve a nested plain-data configuration, applying defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("top-level config must be a table")
    known = {
        "model",
        "custom",
        "region",
        "experiment",
        "sampler",
        "fock",
        "window",
        "coherent",
        "licht",
        "separability",
        "output",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    model_raw = raw.get("model")
    if not isinstance(model_raw, dict):
        raise _fail("model", "section is required")
    kind, params = _resolve_model(model_raw, raw.get("custom", {}))
    n = _model_dimension(kind, dict(params))
    if n < 1:
        raise _fail("model", "system must have at least one site")

    region_raw = raw.get("region", {})
    members_raw = region_raw.get("members", [0])
    if not isinstance(members_raw, list) or not members_raw:
        raise _fail("region.members", "expected a non-empty list of site indices")
    members = tuple(sorted(_as_int(j, "region.members") for j in members_raw))
    if len(set(members)) != len(members):
        raise _fail("region.members", f"duplicate indices in {list(members)}")
    if members[0] < 0 or members[-1] >= n:
        raise _fail("region.members", f"indices {list(members)} outside [0, {n})")

    experiment = raw.get("experiment", {}).get("kind", "all")
    if experiment != "all" and experiment not in EXPERIMENT_KINDS:
        raise _fail(
            "experiment.kind",
            f"must be 'all' or one of {EXPERIMENT_KINDS}, got {experiment!r}",
        )

    sampler_raw = raw.get("sampler", {})
    count = _as_int(sampler_raw.get("count", 200), "sampler.count")
    amplitude = _as_float(sampler_raw.get("amplitude", 1.0), "sampler.amplitude")
    seed = _as_int(sampler_raw.get("seed", 20260808), "sampler.seed")
    if count < 1:
        raise _fail("sampler.count", "must be positive")
    if amplitude <= 0:
        raise _fail("sampler.amplitude", "must be positive")

    fock_raw = raw.get("fock", {})
    truncation = _as_int(fock_raw.get("truncation", 12), "fock.truncation")
    max_degree = _as_int(fock_raw.get("max_degree", 6), "fock.max_degree")
    if truncation < 2:
        raise _fail("fock.truncation", "must be at least 2")
    if max_degree < 0:
        raise _fail("fock.max_degree", "must be nonnegative")

    window_raw = raw.get("window", {})
    window_site = _as_int(window_raw.get("site", members[0]), "window.site")
    window_lo = _as_float(window_raw.get("lo", -0.1), "window.lo")
    window_hi = _as_float(window_raw.get("hi", 0.1), "window.hi")
    if not 0 <= window_site < n:
        raise _fail("window.site", f"site {window_site} outside [0, {n})")
    if not window_lo < window_hi:
        raise _fail("window", "needs lo < hi")

    coherent_raw = raw.get("coherent", {})
    indicator = tuple(1.0 if j in members else 0.0 for j in range(n))
    coherent_q = _as_vector(coherent_raw.get("q", list(indicator)), n, "coherent.q")
    coherent_p = _as_vector(coherent_raw.get("p", [0.0] * n), n, "coherent.p")

    licht_raw = raw.get("licht", {})
    first = members[0]
    witness1 = tuple(1.0 if j == first else 0.0 for j in range(n))
    witness2 = tuple(2.0 if j == first else 0.0 for j in range(n))
    licht_x1_q = _as_vector(licht_raw.get("x1_q", list(witness1)), n, "licht.x1_q")
    licht_x1_p = _as_vector(licht_raw.get("x1_p", [0.0] * n), n, "licht.x1_p")
    licht_x2_q = _as_vector(licht_raw.get("x2_q", list(witness2)), n, "licht.x2_q")
    licht_x2_p = _as_vector(licht_raw.get("x2_p", [0.0] * n), n, "licht.x2_p")
    grid_raw = licht_raw.get("coeff_grid")
    if grid_raw is None:
        grid = DEFAULT_COEFF_GRID
    else:
        grid = []
        for pair in grid_raw:
            try:
                (ar, ai), (br, bi) = pair
            except (TypeError, ValueError):
                raise _fail(
                    "licht.coeff_grid", "expected entries [[re, im], [re, im]]"
                )
            grid.append(
                (
                    complex(_as_float(ar, "licht.coeff_grid"), _as_float(ai, "licht.coeff_grid")),
                    complex(_as_float(br, "licht.coeff_grid"), _as_float(bi, "licht.coeff_grid")),
                )
            )
        grid = tuple(grid)
        if not grid:
            raise _fail("licht.coeff_grid", "must not be empty")
        if any(a == 0 and b == 0 for a, b in grid):
            raise _fail("licht.coeff_grid", "contains the zero pair")

    sep_raw = raw.get("separability", {})
    draws = _as_int(sep_raw.get("draws", 100), "separability.draws")
    sep_degree = _as_int(sep_raw.get("max_degree", 3), "separability.max_degree")
    if draws < 1:
        raise _fail("separability.draws", "must be positive")
    if sep_degree < 0:
        raise _fail("separability.max_degree", "must be nonnegative")

    return ExperimentConfig(
        model_kind=kind,
        model_params=params,
        region_members=members,
        experiment=experiment,
        sampler_count=count,
        sampler_amplitude=amplitude,
        sampler_seed=seed,
        fock_truncation=truncation,
        fock_max_degree=max_degree,
        window_site=window_site,
        window_lo=window_lo,
        window_hi=window_hi,
        coherent_q=coherent_q,
        coherent_p=coherent_p,
        licht_x1_q=licht_x1_q,
        licht_x1_p=licht_x1_p,
        licht_x2_q=licht_x2_q,
        licht_x2_p=licht_x2_p,
        licht_coeff_grid=grid,
        separability_draws=draws,
        separability_max_degree=sep_degree,
    )


def load(path) -> tuple[ExperimentConfig, str | None]:
    """Parse a TOML file; returns the config and the optional output dir."""
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            raw = _toml.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}")
    out_dir = None
    output_raw = raw.get("output", {})
    if output_raw:
        out_dir = output_raw.get("dir")
        if out_dir is not None:
            if not isinstance(out_dir, str):
                raise ConfigError("config key 'output.dir': expected a string")
            # relative output locations live next to the config file
            out_dir = str((path.parent / out_dir))
    return from_dict(raw), out_dir
