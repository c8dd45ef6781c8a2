"""Run and sweep configuration: dataclasses, validation, YAML parsing.

Config documents are YAML mappings whose keys are exactly the dataclass
field names. Unknown keys are a hard error so that typos in experiment
definitions surface immediately instead of silently falling back to a
default.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any

import yaml

from .core import LAMBDA_MAX, LAMBDA_MIN

MODELS = ("mixed", "lattice")

# Fields that only make sense for one model; supplying them for the other
# is rejected as a likely configuration mistake.
_LATTICE_ONLY = ("rows", "cols", "torus", "reproduction_includes_self", "snapshot_every")
_MIXED_ONLY = ("n", "ns")

_MAX_SEED = 2**64


class ConfigError(ValueError):
    """A malformed or invalid configuration document."""


@dataclass(frozen=True)
class SimConfig:
    """All parameters of a single simulation run."""

    model: str
    cb: float
    gmax: int
    n: int | None = None
    ns: int | None = None
    rows: int | None = None
    cols: int | None = None
    mu: float = 0.1
    init_coop_frac: float = 0.1
    lambda_init_lo: float = LAMBDA_MIN
    lambda_init_hi: float = LAMBDA_MAX
    torus: bool = True
    reproduction_includes_self: bool = True
    burn_in_frac: float = 1.0 / 3.0
    snapshot_every: int | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"model={self.model!r} must be one of {MODELS}")
        if not 0.0 < self.cb < 1.0:
            raise ConfigError(f"cb={self.cb} violates 0 < cb < 1")
        if not 0.0 <= self.mu <= 1.0:
            raise ConfigError(f"mu={self.mu} violates 0 <= mu <= 1")
        if self.gmax < 1:
            raise ConfigError(f"gmax={self.gmax} must be >= 1")
        if not 0.0 <= self.init_coop_frac <= 1.0:
            raise ConfigError(
                f"init_coop_frac={self.init_coop_frac} violates 0 <= init_coop_frac <= 1"
            )
        if not (
            LAMBDA_MIN <= self.lambda_init_lo <= self.lambda_init_hi <= LAMBDA_MAX
        ):
            raise ConfigError(
                f"lambda_init bounds ({self.lambda_init_lo}, {self.lambda_init_hi}) "
                f"violate {LAMBDA_MIN} <= lo <= hi <= {LAMBDA_MAX}"
            )
        if not 0.0 <= self.burn_in_frac < 1.0:
            raise ConfigError(
                f"burn_in_frac={self.burn_in_frac} violates 0 <= burn_in_frac < 1"
            )
        if not 0 <= self.seed < _MAX_SEED:
            raise ConfigError(f"seed={self.seed} must be a 64-bit unsigned integer")
        if self.model == "mixed":
            if self.n is None or self.ns is None:
                raise ConfigError("model=mixed requires both n and ns")
            if self.n < 2:
                raise ConfigError(f"n={self.n} must be >= 2")
            if not 1 <= self.ns <= self.n - 1:
                raise ConfigError(f"ns={self.ns} violates 1 <= ns <= n-1 (n={self.n})")
            for name in _LATTICE_ONLY:
                if getattr(self, name) != SimConfig.__dataclass_fields__[name].default:
                    raise ConfigError(f"{name} is only valid for model=lattice")
        else:
            if self.rows is None or self.cols is None:
                raise ConfigError("model=lattice requires both rows and cols")
            if self.rows < 3 or self.cols < 3:
                raise ConfigError(
                    f"rows={self.rows}, cols={self.cols} must both be >= 3"
                )
            if self.n is not None or self.ns is not None:
                raise ConfigError("n and ns are only valid for model=mixed")
            if self.snapshot_every is not None and self.snapshot_every < 1:
                raise ConfigError(f"snapshot_every={self.snapshot_every} must be >= 1")

    @property
    def population_size(self) -> int:
        if self.model == "mixed":
            assert self.n is not None
            return self.n
        assert self.rows is not None and self.cols is not None
        return self.rows * self.cols

    @property
    def burn_in(self) -> int:
        return math.ceil(self.burn_in_frac * self.gmax)


@dataclass(frozen=True)
class SweepSpec:
    """A cross product of parameter values, replicated and seeded.

    ``n`` (mixed) or the zipped ``rows``/``cols`` pairs (lattice) form the
    population-size axis; that axis, ``ns``, ``cb`` and ``mu`` are crossed
    into cells, each executed ``runs_per_cell`` times with seeds derived
    from ``master_seed``.
    """

    model: str
    cb: tuple[float, ...]
    gmax: int
    runs_per_cell: int
    n: tuple[int, ...] = ()
    ns: tuple[int, ...] = ()
    rows: tuple[int, ...] = ()
    cols: tuple[int, ...] = ()
    mu: tuple[float, ...] = (0.1,)
    init_coop_frac: float = 0.1
    lambda_init_lo: float = LAMBDA_MIN
    lambda_init_hi: float = LAMBDA_MAX
    torus: bool = True
    reproduction_includes_self: bool = True
    burn_in_frac: float = 1.0 / 3.0
    master_seed: int = 0

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"model={self.model!r} must be one of {MODELS}")
        if self.runs_per_cell < 1:
            raise ConfigError(f"runs_per_cell={self.runs_per_cell} must be >= 1")
        if not self.cb:
            raise ConfigError("cb list must be nonempty")
        if not self.mu:
            raise ConfigError("mu list must be nonempty")
        if not 0 <= self.master_seed < _MAX_SEED:
            raise ConfigError(
                f"master_seed={self.master_seed} must be a 64-bit unsigned integer"
            )
        if math.ceil(self.burn_in_frac * self.gmax) >= self.gmax:
            raise ConfigError(
                f"burn_in_frac={self.burn_in_frac} leaves an empty aggregation "
                f"window for gmax={self.gmax}"
            )
        if self.model == "mixed":
            if not self.n or not self.ns:
                raise ConfigError("model=mixed sweeps require n and ns lists")
            if self.rows or self.cols:
                raise ConfigError("rows and cols are only valid for model=lattice")
        else:
            if not self.rows or not self.cols:
                raise ConfigError("model=lattice sweeps require rows and cols lists")
            if len(self.rows) != len(self.cols):
                raise ConfigError(
                    "rows and cols lists must have equal length (they are "
                    "paired into grid sizes, not crossed)"
                )
            if self.n or self.ns:
                raise ConfigError("n and ns are only valid for model=mixed")
        # Every cell must be a valid SimConfig; surface problems before
        # any simulation starts.
        for cfg, _, _ in _iter_cells(self):
            cfg.validate()


def _iter_cells(spec: SweepSpec):
    """Yield (SimConfig, cell_index, param_tuple) in canonical order."""
    from itertools import product

    cell = 0
    if spec.model == "mixed":
        for n, ns, cb, mu in product(
            sorted(set(spec.n)), sorted(set(spec.ns)), sorted(set(spec.cb)), sorted(set(spec.mu))
        ):
            cfg = SimConfig(
                model="mixed",
                n=n,
                ns=ns,
                cb=cb,
                mu=mu,
                gmax=spec.gmax,
                init_coop_frac=spec.init_coop_frac,
                lambda_init_lo=spec.lambda_init_lo,
                lambda_init_hi=spec.lambda_init_hi,
                burn_in_frac=spec.burn_in_frac,
            )
            yield cfg, cell, (n, ns, cb, mu)
            cell += 1
    else:
        grids = sorted(set(zip(spec.rows, spec.cols)))
        for (rows, cols), cb, mu in product(grids, sorted(set(spec.cb)), sorted(set(spec.mu))):
            cfg = SimConfig(
                model="lattice",
                rows=rows,
                cols=cols,
                cb=cb,
                mu=mu,
                gmax=spec.gmax,
                init_coop_frac=spec.init_coop_frac,
                lambda_init_lo=spec.lambda_init_lo,
                lambda_init_hi=spec.lambda_init_hi,
                torus=spec.torus,
                reproduction_includes_self=spec.reproduction_includes_self,
                burn_in_frac=spec.burn_in_frac,
            )
            yield cfg, cell, (rows, cols, cb, mu)
            cell += 1


_SWEEP_MARKERS = ("runs_per_cell", "master_seed")
_SWEEPABLE = ("n", "ns", "rows", "cols", "cb", "mu")


def parse_config(text: str):
    """Parse a YAML document into a SimConfig or a SweepSpec.

    A document is a sweep if it carries runs_per_cell or master_seed, or
    lists any sweepable parameter; otherwise it is a single run.
    """
    doc = _load_mapping(text)
    is_sweep = any(k in doc for k in _SWEEP_MARKERS) or any(
        isinstance(doc.get(k), (list, tuple)) for k in _SWEEPABLE
    )
    return parse_sweep_spec(doc) if is_sweep else parse_sim_config(doc)


def parse_sim_config(doc: dict[str, Any]) -> SimConfig:
    _check_keys(doc, SimConfig)
    try:
        cfg = SimConfig(**_coerced(doc, SimConfig))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def parse_sweep_spec(doc: dict[str, Any]) -> SweepSpec:
    _check_keys(doc, SweepSpec)
    coerced = _coerced(doc, SweepSpec)
    # Scalars are accepted wherever a list is expected.
    for name in _SWEEPABLE:
        if name in coerced and not isinstance(coerced[name], tuple):
            coerced[name] = (coerced[name],)
    try:
        spec = SweepSpec(**coerced)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    spec.validate()
    return spec


def _load_mapping(text: str) -> dict[str, Any]:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping of parameter names")
    return doc


def _check_keys(doc: dict[str, Any], cls) -> None:
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(
            f"unknown config key(s) {unknown}; known keys: {sorted(known)}"
        )


def _coerced(doc: dict[str, Any], cls) -> dict[str, Any]:
    """Light type normalization: ints stay ints, lists become tuples."""
    out: dict[str, Any] = {}
    for key, val in doc.items():
        if isinstance(val, list):
            out[key] = tuple(val)
        else:
            out[key] = val
    return out


def resolved_doc(cfg) -> dict[str, Any]:
    """A plain mapping that parses back to the same config (metadata echo)."""
    doc = asdict(cfg)
    for key, val in list(doc.items()):
        if isinstance(val, tuple):
            doc[key] = list(val)
    # Drop inapplicable Nones so the echo is minimal but round-trips.
    return {k: v for k, v in doc.items() if v is not None}


def with_seed(cfg, seed: int):
    """Copy of a config with its (master_)seed replaced."""
    if isinstance(cfg, SweepSpec):
        return replace(cfg, master_seed=int(seed))
    return replace(cfg, seed=int(seed))
