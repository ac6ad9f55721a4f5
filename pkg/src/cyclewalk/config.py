"""Experiment configuration: flat ``key = value`` text, repeated keys for lists.

Example::

    command = evolve
    n = 301
    initial = localized
    site = 150
    coin = unbiased
    engine = momentum
    t = 100

Angles accept a trailing ``pi`` (``alpha = 0.3pi``); anything after ``#`` is a comment.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from cyclewalk.core import UNBIASED_COIN, BlochCoin, coin_density
from cyclewalk.decoherence import NoiseModel
from cyclewalk.walk import localized_state, mixture_state, momentum_state, superposition_state

COMMANDS = ("evolve", "wigner", "entropy", "sweep")
ENGINES = ("direct", "momentum", "superoperator", "montecarlo")
INITIAL_KINDS = {"localized": 1, "superposition": 2, "mixture": 2, "momentum": 1}
FORMATS = ("csv", "txt", "pgm", "ppm")

LIST_KEYS = ("t", "alpha", "site", "format")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def parse_angle(text: str) -> float:
    text = str(text).strip().replace(" ", "")
    try:
        if text.endswith("pi"):
            head = text[:-2].rstrip("*")
            return float(head or 1.0) * np.pi
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def format_angle(alpha: float) -> str:
    """Canonical spelling: multiples of pi/100 as '0.3pi', otherwise plain radians."""
    ratio = alpha / np.pi
    if abs(ratio * 100 - round(ratio * 100)) < 1e-9:
        return f"{round(ratio * 100) / 100:g}pi"
    return repr(float(alpha))


def parse_coin(text: str) -> BlochCoin:
    text = text.strip()
    if text == "unbiased":
        return UNBIASED_COIN
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"coin must be 'unbiased' or 'px,py,pz' (got {text!r})") from None
    if len(parts) != 3:
        raise ConfigError("coin needs three Bloch components")
    try:
        return BlochCoin(*parts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def format_coin(coin: BlochCoin) -> str:
    if coin == UNBIASED_COIN:
        return "unbiased"
    return ",".join(repr(float(x)) for x in coin.as_array())


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "evolve"
    n: int = 41
    initial: str = "localized"
    sites: tuple[int, ...] = (20,)
    coin: BlochCoin = UNBIASED_COIN
    axis: str | None = None
    alphas: tuple[float, ...] = ()
    ts: tuple[int, ...] = (0,)
    seed: int = 0
    samples: int = 1000
    engine: str = "momentum"
    formats: tuple[str, ...] = ()
    label: str = ""

    def validate(self) -> "ExperimentConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.n < 2:
            raise ConfigError("n must be >= 2")
        if self.initial not in INITIAL_KINDS:
            raise ConfigError(f"unknown initial state {self.initial!r}")
        if len(self.sites) != INITIAL_KINDS[self.initial]:
            raise ConfigError(f"initial={self.initial} needs {INITIAL_KINDS[self.initial]} site value(s)")
        for s in self.sites:
            if not 0 <= s < self.n:
                raise ConfigError(f"site/momentum index {s} outside [0, {self.n})")
        if self.initial in ("superposition", "mixture") and self.sites[0] == self.sites[1]:
            raise ConfigError("two distinct sites required")
        if not self.ts or any(t < 0 for t in self.ts):
            raise ConfigError("t values must be nonnegative and at least one is required")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.axis is not None and self.axis not in ("x", "y", "z"):
            raise ConfigError("axis must be x, y or z")
        for a in self.alphas:
            if not 0 <= a <= np.pi / 2 + 1e-12:
                raise ConfigError(f"alpha {a!r} outside [0, pi/2]")
        noisy = any(a > 0 for a in self.alphas)
        if self.engine in ("direct", "momentum") and noisy:
            raise ConfigError(f"engine {self.engine} is noiseless; use superoperator or montecarlo")
        if self.engine in ("superoperator", "montecarlo") and not self.alphas:
            raise ConfigError(f"engine {self.engine} needs at least one alpha")
        if self.engine == "montecarlo" and self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.command == "entropy" and len(self.alphas) > 1:
            raise ConfigError("entropy computes a single curve; use sweep for several alphas")
        for f in self.formats:
            if f not in FORMATS:
                raise ConfigError(f"unknown format {f!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        return self

    # -- derived objects --

    @property
    def noise_axis(self) -> str:
        return self.axis or "y"

    def noise_models(self) -> list[NoiseModel | None]:
        if not self.alphas:
            return [None]
        return [NoiseModel(self.noise_axis, a) for a in self.alphas]

    def walker_state(self) -> np.ndarray:
        N, s = self.n, self.sites
        if self.initial == "localized":
            return localized_state(N, s[0])
        if self.initial == "superposition":
            return superposition_state(N, s[0], s[1])
        if self.initial == "mixture":
            return mixture_state(N, s[0], s[1])
        return momentum_state(N, s[0])

    def coin_state(self) -> np.ndarray:
        return coin_density(self.coin)

    # -- text form --

    def to_text(self) -> str:
        lines = [
            f"command = {self.command}",
            f"n = {self.n}",
            f"initial = {self.initial}",
            *(f"site = {s}" for s in self.sites),
            f"coin = {format_coin(self.coin)}",
            f"engine = {self.engine}",
            *(f"t = {t}" for t in self.ts),
        ]
        if self.axis is not None:
            lines.append(f"axis = {self.axis}")
        lines += [f"alpha = {format_angle(a)}" for a in self.alphas]
        lines += [f"seed = {self.seed}", f"samples = {self.samples}"]
        lines += [f"format = {f}" for f in self.formats]
        if self.label:
            lines.append(f"label = {self.label}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def with_updates(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)


def parse_config(text: str) -> ExperimentConfig:
    return config_from_mapping(read_mapping(text))


def read_mapping(text: str) -> dict[str, list[str]]:
    """Raw key -> list of values, without validation."""
    values: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        values.setdefault(key.lower(), []).append(val)
    return values


def config_from_mapping(values: dict[str, list[str]]) -> ExperimentConfig:
    known = {"command", "n", "initial", "site", "coin", "axis", "alpha", "t",
             "seed", "samples", "engine", "format", "label"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    for key, vals in values.items():
        if key not in LIST_KEYS and len(vals) > 1:
            raise ConfigError(f"key {key!r} given more than once")

    def one(key, default=None):
        return values[key][0] if key in values else default

    def as_int(key, text):
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{key} must be an integer (got {text!r})") from None

    kw = {}
    for key in ("command", "initial", "engine", "label"):
        if key in values:
            kw[key] = one(key)
    if "n" in values:
        kw["n"] = as_int("n", one("n"))
    if "site" in values:
        kw["sites"] = tuple(as_int("site", v) for v in _split_all(values["site"]))
    if "coin" in values:
        kw["coin"] = parse_coin(one("coin"))
    if "axis" in values:
        kw["axis"] = None if one("axis") == "none" else one("axis")
    if "alpha" in values:
        kw["alphas"] = tuple(_angles(_split_all(values["alpha"], ranges=False)))
    if "t" in values:
        kw["ts"] = tuple(as_int("t", v) for v in _split_all(values["t"]))
    if "seed" in values:
        kw["seed"] = as_int("seed", one("seed"))
    if "samples" in values:
        kw["samples"] = as_int("samples", one("samples"))
    if "format" in values:
        kw["formats"] = tuple(_split_all(values["format"]))
    return ExperimentConfig(**kw).validate()


def _angles(parts: list[str]) -> list[float]:
    """Parse angles; ``lo:hi:step`` expands to lo, lo+step, ... up to hi inclusive."""
    out = []
    for part in parts:
        if part.count(":") != 2:
            out.append(parse_angle(part))
            continue
        lo, hi, step = (parse_angle(x) for x in part.split(":"))
        if step <= 0 or hi < lo:
            raise ConfigError(f"bad angle range {part!r}")
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        out += [parse_angle(format_angle(lo + i * step)) for i in range(count)]
    return out


def _split_all(vals: list[str], ranges: bool = True) -> list[str]:
    """Repeated keys and comma lists are both accepted; ``a:b:c`` expands to a range."""
    out = []
    for v in vals:
        for part in v.split(","):
            part = part.strip()
            if not part:
                continue
            if ranges and part.count(":") == 2:
                lo, hi, step = (int(x) for x in part.split(":"))
                out += [str(x) for x in range(lo, hi + 1, step)]
            else:
                out.append(part)
    return out


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    runs: tuple[ExperimentConfig, ...] = field(default_factory=tuple)


def _pi(*xs: float) -> tuple[float, ...]:
    return tuple(x * np.pi for x in xs)


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset("fig1", "Wigner functions of a localized state and a two-site superposition, N=41", (
            ExperimentConfig("wigner", 41, "localized", (8,), ts=(0,), label="localized"),
            ExperimentConfig("wigner", 41, "superposition", (6, 9), ts=(0,), label="superposition"),
        )),
        Preset("fig2", "Unitary position distribution, N=301, n0=150, t=100", (
            ExperimentConfig("evolve", 301, "localized", (150,), ts=(100,)),
        )),
        Preset("fig3", "Wigner function of a localized walker at t=2,4,8, N=41, n0=20", (
            ExperimentConfig("wigner", 41, "localized", (20,), ts=(2, 4, 8)),
        )),
        Preset("fig4", "Wigner function of a two-site superposition at t=2,3,6, N=81", (
            ExperimentConfig("wigner", 81, "superposition", (28, 52), ts=(2, 3, 6)),
        )),
        Preset("fig5", "Decohered Wigner functions at t=11, N=41, n0=20", (
            ExperimentConfig("wigner", 41, "localized", (20,), ts=(11,), axis="y",
                             alphas=(0.1,) + _pi(0.3, 0.5), engine="superoperator"),
        )),
        Preset("fig6", "Decohered position distributions at t=100, N=301, n0=150", (
            ExperimentConfig("evolve", 301, "localized", (150,), ts=(100,), axis="y",
                             alphas=_pi(0.05, 0.1, 0.2), engine="superoperator"),
        )),
        Preset("fig7", "Delocalized state under full decoherence, t=6, N=101", (
            ExperimentConfig("wigner", 101, "superposition", (38, 62), ts=(6,), axis="y",
                             alphas=_pi(0.5), engine="superoperator"),
        )),
        Preset("fig8", "Linear entropy versus time, mixture and superposition, N=401", (
            ExperimentConfig("sweep", 401, "mixture", (150, 250), ts=tuple(range(0, 301, 5)), axis="y",
                             alphas=_pi(0, 0.1, 0.2, 0.5), engine="superoperator", label="mixture"),
            ExperimentConfig("sweep", 401, "superposition", (150, 250), ts=tuple(range(0, 301, 5)), axis="y",
                             alphas=_pi(0, 0.1, 0.2, 0.5), engine="superoperator", label="superposition"),
        )),
        Preset("fig9", "Linear entropy versus coupling strength, localized start, N=401", (
            ExperimentConfig("sweep", 401, "localized", (200,), ts=(5, 10, 50, 100, 300, 500), axis="y",
                             alphas=_pi(*(0.05 * i for i in range(11))), engine="superoperator"),
        )),
    ]
}
