"""Run configuration: a flat ``key = value`` text format plus CLI overrides.

The grammar is intentionally small.  Scalar keys::

    mode = analytic | montecarlo | verify
    preset = fig2 | fig3 | fig4
    mu / bins / seed / streams / routing   (source parameters)
    normalization = analytic | measured
    out = <path>
    gnuplot = true | false
    angles = radians | degrees

plus per-parameter keys ``sweep.<param> = start:stop:step`` and
``fix.<param> = value`` for explicit grids.  ``#`` starts a comment; blank
lines are ignored.  Later occurrences of a key are rejected rather than
silently shadowed.  CLI flags arrive here as an override mapping in the same
grammar and take precedence over file values.

``angles = degrees`` is a parse directive: it converts every angle-valued
entry to radians while parsing and is not stored -- a parsed RunConfig is
always in radians, and its canonical text form is too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .correlation import PRESETS, SWEEP_PARAMS, SweepAxis, SweepSpec
from .montecarlo import ROUTING_MODES, SourceParams

MODES = ("analytic", "montecarlo", "verify")
NORMALIZATIONS = ("analytic", "measured")

_SCALAR_KEYS = (
    "mode",
    "preset",
    "mu",
    "bins",
    "seed",
    "streams",
    "routing",
    "normalization",
    "out",
    "gnuplot",
    "angles",
)

_DEFAULT_MU = 0.05
_DEFAULT_BINS = 1_000_000

_TRUE_WORDS = ("true", "yes", "on", "1")
_FALSE_WORDS = ("false", "no", "off", "0")


class ConfigError(ValueError):
    """A configuration problem the user can fix; the message names the key."""


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run request, all angles in radians."""

    mode: str
    preset: str | None = None
    sweep_axes: tuple[SweepAxis, ...] = ()
    fixed: tuple[tuple[str, float], ...] = ()
    source: SourceParams | None = None
    normalization: str = "analytic"
    out_path: str | None = None
    gnuplot: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(
                f"normalization must be one of {NORMALIZATIONS}, "
                f"got {self.normalization!r}"
            )
        if self.preset is not None and self.sweep_axes:
            axes = ", ".join(f"sweep.{a.name}" for a in self.sweep_axes)
            raise ConfigError(
                f"preset {self.preset!r} conflicts with explicit sweep axes "
                f"({axes}); give one or the other"
            )

    @property
    def fixed_values(self) -> dict:
        return dict(self.fixed)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _validate_key(key: str) -> None:
    if key in _SCALAR_KEYS:
        return
    for prefix in ("sweep.", "fix."):
        if key.startswith(prefix):
            param = key[len(prefix):]
            if param in SWEEP_PARAMS:
                return
            raise ConfigError(
                f"unknown config key {key!r}: parameter must be one of "
                f"{SWEEP_PARAMS}"
            )
    raise ConfigError(f"unknown config key {key!r}")


def _parse_lines(text: str) -> dict:
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = _strip_comment(line).strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(
                f"malformed config line {lineno}: {line.strip()!r} "
                "(expected key = value)"
            )
        key, _, value = body.partition("=")
        key = key.strip()
        value = value.strip()
        _validate_key(key)
        if key in raw:
            raise ConfigError(f"duplicate config key {key!r} (line {lineno})")
        if not value:
            raise ConfigError(f"config key {key!r} has an empty value")
        raw[key] = value
    return raw


def _as_float(key: str, value: str) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected a number, got {value!r}")
    if not math.isfinite(out):
        raise ConfigError(f"config key {key!r}: value must be finite, got {value!r}")
    return out


def _as_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected an integer, got {value!r}")


def _as_bool(key: str, value: str) -> bool:
    word = value.lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ConfigError(f"config key {key!r}: expected true/false, got {value!r}")


def parse_config(
    text: str | None = None, overrides: Mapping[str, str] | None = None
) -> RunConfig:
    """Build a RunConfig from config-file text and/or override entries.

    ``overrides`` uses the same key grammar as the file and wins on
    conflicts (the CLI layer routes flags through it).  Every diagnostic
    names the offending key.
    """
    raw = _parse_lines(text) if text else {}
    for key, value in (overrides or {}).items():
        _validate_key(key)
        raw[key] = value

    angles = raw.pop("angles", "radians")
    if angles not in ("radians", "degrees"):
        raise ConfigError(
            f"config key 'angles': expected radians or degrees, got {angles!r}"
        )
    to_radians = math.radians if angles == "degrees" else (lambda x: x)

    mode = raw.pop("mode", None)
    if mode is None:
        raise ConfigError("missing config key 'mode'")
    if mode not in MODES:
        raise ConfigError(f"config key 'mode': expected one of {MODES}, got {mode!r}")

    preset = raw.pop("preset", None)
    if preset is not None and preset not in PRESETS:
        raise ConfigError(
            f"config key 'preset': expected one of {tuple(PRESETS)}, got {preset!r}"
        )

    axes = []
    fixed = {}
    for key in list(raw):
        if key.startswith("sweep."):
            param = key[len("sweep."):]
            pieces = raw.pop(key).split(":")
            if len(pieces) != 3:
                raise ConfigError(
                    f"config key {key!r}: expected start:stop:step, "
                    f"got {':'.join(pieces)!r}"
                )
            start, stop, step = (to_radians(_as_float(key, p)) for p in pieces)
            if step <= 0.0:
                raise ConfigError(
                    f"config key {key!r}: step must be positive, got {step}"
                )
            if start >= stop:
                raise ConfigError(
                    f"config key {key!r}: start must be below stop, "
                    f"got [{start}, {stop}]"
                )
            try:
                axes.append(SweepAxis(param, start, stop, step))
            except ValueError as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from exc
        elif key.startswith("fix."):
            param = key[len("fix."):]
            fixed[param] = to_radians(_as_float(key, raw.pop(key)))

    if preset is None and not axes and mode != "verify":
        raise ConfigError(
            "no sweep specified: give 'preset' or at least one 'sweep.<param>'"
        )

    source_keys = ("mu", "bins", "seed", "streams", "routing")
    source = None
    if mode in ("montecarlo", "verify") or any(k in raw for k in source_keys):
        try:
            source = SourceParams(
                mean_photon_number=_as_float("mu", raw.pop("mu", str(_DEFAULT_MU))),
                n_time_bins=_as_int("bins", raw.pop("bins", str(_DEFAULT_BINS))),
                rng_seed=_as_int("seed", raw.pop("seed", "0")),
                n_streams=_as_int("streams", raw.pop("streams", "1")),
                routing=raw.pop("routing", "paired"),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    normalization = raw.pop("normalization", "analytic")
    out_path = raw.pop("out", None)
    gnuplot = _as_bool("gnuplot", raw.pop("gnuplot", "false"))

    if raw:
        # _validate_key should have caught everything; keep a guard anyway.
        raise ConfigError(f"unknown config key {sorted(raw)[0]!r}")

    return RunConfig(
        mode=mode,
        preset=preset,
        sweep_axes=tuple(axes),
        fixed=tuple(sorted(fixed.items())),
        source=source,
        normalization=normalization,
        out_path=out_path,
        gnuplot=gnuplot,
    )


def canonical_config_text(config: RunConfig) -> str:
    """Emit a config in canonical form: radians, ``repr`` floats, fixed order.

    Parsing the result reproduces ``config`` exactly, including float bits.
    """
    lines = [f"mode = {config.mode}"]
    if config.preset is not None:
        lines.append(f"preset = {config.preset}")
    for axis in config.sweep_axes:
        lines.append(
            f"sweep.{axis.name} = {axis.start!r}:{axis.stop!r}:{axis.step!r}"
        )
    for name, value in config.fixed:
        lines.append(f"fix.{name} = {value!r}")
    if config.source is not None:
        src = config.source
        lines.append(f"mu = {src.mean_photon_number!r}")
        lines.append(f"bins = {src.n_time_bins}")
        lines.append(f"seed = {src.rng_seed}")
        lines.append(f"streams = {src.n_streams}")
        lines.append(f"routing = {src.routing}")
    lines.append(f"normalization = {config.normalization}")
    if config.out_path is not None:
        lines.append(f"out = {config.out_path}")
    if config.gnuplot:
        lines.append("gnuplot = true")
    return "\n".join(lines) + "\n"


def build_sweep_spec(config: RunConfig) -> SweepSpec:
    """Resolve the config's grid: a preset (with fix overrides) or raw axes."""
    if config.preset is not None:
        base = PRESETS[config.preset]
        if not config.fixed:
            return base
        merged = dict(base.fixed)
        merged.update(config.fixed_values)
        return SweepSpec(axes=base.axes, fixed=merged, i0=base.i0)
    if not config.sweep_axes:
        raise ConfigError(
            "no sweep specified: give 'preset' or at least one 'sweep.<param>'"
        )
    return SweepSpec(axes=config.sweep_axes, fixed=config.fixed_values)
