"""Core value types, scenario configuration schema, and validation.

Everything in this module is an immutable value object: safe to share,
hash-friendly where it matters, and free of behavior beyond construction
checks and (de)serialization of the scenario JSON document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from .netmodel import NetworkProfile

MAX_SEED = 2**64 - 1


class NetworkKind(Enum):
    """The three access networks. DSRC is the default attachment.

    The declaration order is the fixed total ordering used for
    deterministic tie-breaking everywhere in the simulator.
    """

    DSRC = "dsrc"
    LTE = "lte"
    WIFI = "wifi"

    @property
    def order(self) -> int:
        return _NETWORK_ORDER[self]


_NETWORK_ORDER = {NetworkKind.DSRC: 0, NetworkKind.LTE: 1, NetworkKind.WIFI: 2}

#: All networks in tie-break order.
ALL_NETWORKS = (NetworkKind.DSRC, NetworkKind.LTE, NetworkKind.WIFI)


class StrategyKind(Enum):
    GAME = "game"
    BASELINE_MCDM = "baseline_mcdm"


class MeasurementMode(Enum):
    #: Metrics realized through per-link Bernoulli/uniform sampling.
    SAMPLED = "sampled"
    #: Metrics taken from the ground-truth curves exactly (oracle-grade).
    DIRECT = "direct"


@dataclass(frozen=True)
class StrategyParams:
    """Knobs of the handoff decision: switch probabilities and scoring.

    n_exp is the target ceiling for DSRC-attached terminals, rho and sigma
    scale the overload/return and degradation switch probabilities, the
    f_*_ref values are the maximum acceptable delay / loss / jitter, and
    the w_* weights combine the three normalized utilities into one score.
    """

    n_exp: int
    rho: float
    sigma: float
    f_delay_ref: float = 0.1
    f_plr_ref: float = 0.05
    f_jit_ref: float = 0.1
    w_delay: float = 0.7
    w_plr: float = 0.2
    w_jit: float = 0.1


@dataclass(frozen=True)
class Bsm:
    """One periodic safety broadcast.

    gen_time is always an exact multiple of the cycle length (GPS-grade
    time sync is assumed). The payload stands in for position/speed data
    and is never read by any decision.
    """

    sender_id: int
    gen_time: float
    cycle_seq: int
    network: NetworkKind
    payload: bytes = b""


@dataclass(frozen=True)
class NoiseSpec:
    """Per-terminal perception noise on the DSRC sender count.

    Each affected cycle, every terminal independently adds an integer
    drawn uniformly from [-amplitude, +amplitude] to its perceived count.
    """

    amplitude: int
    frequency_hz: float


@dataclass(frozen=True)
class DisturbanceSpec:
    """An abrupt evaluation penalty on one network.

    While active, the network's score as seen by every terminal drops by
    delta_e. duration_cycles=None means the disturbance never ends.
    """

    network: NetworkKind
    delta_e: float
    start_cycle: int
    duration_cycles: int | None = None

    def active_at(self, cycle: int) -> bool:
        if cycle < self.start_cycle:
            return False
        if self.duration_cycles is None:
            return True
        return cycle < self.start_cycle + self.duration_cycles


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulation run."""

    total_terminals: int
    initial_assignment: dict[NetworkKind, int]
    num_cycles: int
    strategy: StrategyParams
    profiles: dict[NetworkKind, NetworkProfile]
    seed: int
    strategy_kind: StrategyKind = StrategyKind.GAME
    measurement_mode: MeasurementMode = MeasurementMode.SAMPLED
    cycle_length: float = 0.1
    noise: NoiseSpec | None = None
    disturbance: DisturbanceSpec | None = None


class ScenarioFormatError(ValueError):
    """Raised when a scenario document is structurally malformed."""


def validate_config(cfg: ScenarioConfig) -> list[str]:
    """Return every invariant violation of the config (empty list if valid).

    Violations are data, not failures: the function never raises for a
    well-typed config, and identical inputs yield identical lists.
    """
    v: list[str] = []
    s = cfg.strategy

    if cfg.total_terminals < 1:
        v.append(f"total_terminals must be >= 1, got {cfg.total_terminals}")
    assigned = sum(cfg.initial_assignment.get(net, 0) for net in ALL_NETWORKS)
    if assigned != cfg.total_terminals:
        v.append(f"assignment sum {assigned} != {cfg.total_terminals}")
    for net in ALL_NETWORKS:
        if cfg.initial_assignment.get(net, 0) < 0:
            v.append(f"initial assignment for {net.value} is negative")
    if cfg.cycle_length <= 0:
        v.append(f"cycle_length must be > 0, got {cfg.cycle_length}")
    if cfg.num_cycles < 1:
        v.append(f"num_cycles must be >= 1, got {cfg.num_cycles}")
    if not 0 <= cfg.seed <= MAX_SEED:
        v.append(f"seed must be a 64-bit unsigned integer, got {cfg.seed}")

    if s.n_exp < 1:
        v.append(f"n_exp must be >= 1, got {s.n_exp}")
    if s.rho < 0:
        v.append(f"rho must be >= 0, got {s.rho}")
    if s.rho >= 1:
        v.append("rho must be < 1")
    if not 0 <= s.sigma <= 1:
        v.append(f"sigma must be in [0, 1], got {s.sigma}")
    for name, val in (("f_delay_ref", s.f_delay_ref), ("f_plr_ref", s.f_plr_ref),
                      ("f_jit_ref", s.f_jit_ref)):
        if val <= 0:
            v.append(f"{name} must be > 0, got {val}")
    for name, val in (("w_delay", s.w_delay), ("w_plr", s.w_plr), ("w_jit", s.w_jit)):
        if val < 0:
            v.append(f"{name} must be >= 0, got {val}")
    if abs(s.w_delay + s.w_plr + s.w_jit - 1.0) > 1e-9:
        v.append(f"weights must sum to 1, got {s.w_delay + s.w_plr + s.w_jit}")

    for net in ALL_NETWORKS:
        if net not in cfg.profiles:
            v.append(f"profile for {net.value} is missing")
            continue
        p = cfg.profiles[net]
        tag = net.value
        if p.d0 <= 0:
            v.append(f"{tag}: d0 must be > 0, got {p.d0}")
        if p.g0 <= 0:
            v.append(f"{tag}: g0 must be > 0, got {p.g0}")
        if not 0 <= p.p0 < 1:
            v.append(f"{tag}: p0 must be in [0, 1), got {p.p0}")
        for name, val in (("a", p.a), ("b", p.b), ("h", p.h)):
            if val < 0:
                v.append(f"{tag}: {name} must be >= 0, got {val}")
        if p.cap < 1:
            v.append(f"{tag}: cap must be >= 1, got {p.cap}")
        if p.exponent < 1:
            v.append(f"{tag}: exponent must be >= 1, got {p.exponent}")

    if cfg.noise is not None:
        if cfg.noise.amplitude < 0:
            v.append(f"noise amplitude must be >= 0, got {cfg.noise.amplitude}")
        if cfg.noise.frequency_hz <= 0:
            v.append(f"noise frequency_hz must be > 0, got {cfg.noise.frequency_hz}")

    if cfg.disturbance is not None:
        d = cfg.disturbance
        if d.delta_e <= 0:
            v.append(f"disturbance delta_e must be > 0, got {d.delta_e}")
        if d.start_cycle < 0:
            v.append(f"disturbance start_cycle must be >= 0, got {d.start_cycle}")
        elif d.start_cycle >= cfg.num_cycles:
            v.append(f"disturbance start_cycle {d.start_cycle} is past the run "
                     f"({cfg.num_cycles} cycles)")
        if d.duration_cycles is not None and d.duration_cycles < 1:
            v.append(f"disturbance duration_cycles must be >= 1 or null, "
                     f"got {d.duration_cycles}")

    return v


# ---------------------------------------------------------------------------
# JSON schema
#
# The scenario document mirrors the dataclasses with snake_case keys.
# Unknown keys are rejected at every level so that typos fail loudly.
# ---------------------------------------------------------------------------

def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioFormatError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ScenarioFormatError(f"{where}: missing keys {sorted(missing)}")


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFormatError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _network_from_key(key: str, where: str) -> NetworkKind:
    try:
        return NetworkKind(key)
    except ValueError:
        raise ScenarioFormatError(f"{where}: unknown network {key!r}") from None


def _strategy_from_dict(obj: Any) -> StrategyParams:
    if not isinstance(obj, dict):
        raise ScenarioFormatError("strategy: expected an object")
    allowed = {"n_exp", "rho", "sigma", "f_delay_ref", "f_plr_ref", "f_jit_ref",
               "w_delay", "w_plr", "w_jit"}
    _check_keys(obj, allowed, {"n_exp", "rho", "sigma"}, "strategy")
    kwargs: dict[str, Any] = {"n_exp": _as_int(obj["n_exp"], "strategy.n_exp")}
    for key in allowed - {"n_exp"}:
        if key in obj:
            kwargs[key] = _as_number(obj[key], f"strategy.{key}")
    return StrategyParams(**kwargs)


def _profile_from_dict(kind: NetworkKind, obj: Any) -> NetworkProfile:
    where = f"profiles.{kind.value}"
    if not isinstance(obj, dict):
        raise ScenarioFormatError(f"{where}: expected an object")
    required = {"d0", "a", "p0", "b", "g0", "h", "cap"}
    _check_keys(obj, required | {"exponent"}, required, where)
    return NetworkProfile(
        kind=kind,
        d0=_as_number(obj["d0"], f"{where}.d0"),
        a=_as_number(obj["a"], f"{where}.a"),
        p0=_as_number(obj["p0"], f"{where}.p0"),
        b=_as_number(obj["b"], f"{where}.b"),
        g0=_as_number(obj["g0"], f"{where}.g0"),
        h=_as_number(obj["h"], f"{where}.h"),
        cap=_as_int(obj["cap"], f"{where}.cap"),
        exponent=_as_number(obj.get("exponent", 2), f"{where}.exponent"),
    )


def scenario_from_dict(data: Any) -> ScenarioConfig:
    """Build a ScenarioConfig from a parsed JSON document (strict keys)."""
    if not isinstance(data, dict):
        raise ScenarioFormatError("scenario: expected a JSON object")
    allowed = {"total_terminals", "initial_assignment", "cycle_length", "num_cycles",
               "strategy", "strategy_kind", "measurement_mode", "profiles", "noise",
               "disturbance", "seed"}
    required = {"total_terminals", "initial_assignment", "num_cycles", "strategy",
                "profiles", "seed"}
    _check_keys(data, allowed, required, "scenario")

    raw_assign = data["initial_assignment"]
    if not isinstance(raw_assign, dict):
        raise ScenarioFormatError("initial_assignment: expected an object")
    assignment = {net: 0 for net in ALL_NETWORKS}
    for key, count in raw_assign.items():
        net = _network_from_key(key, "initial_assignment")
        assignment[net] = _as_int(count, f"initial_assignment.{key}")

    raw_profiles = data["profiles"]
    if not isinstance(raw_profiles, dict):
        raise ScenarioFormatError("profiles: expected an object")
    profiles = {}
    for key, pdata in raw_profiles.items():
        net = _network_from_key(key, "profiles")
        profiles[net] = _profile_from_dict(net, pdata)

    try:
        strategy_kind = StrategyKind(data.get("strategy_kind", "game"))
    except ValueError:
        raise ScenarioFormatError(
            f"strategy_kind: expected one of {[k.value for k in StrategyKind]}, "
            f"got {data['strategy_kind']!r}") from None
    try:
        mode = MeasurementMode(data.get("measurement_mode", "sampled"))
    except ValueError:
        raise ScenarioFormatError(
            f"measurement_mode: expected one of {[m.value for m in MeasurementMode]}, "
            f"got {data['measurement_mode']!r}") from None

    noise = None
    if data.get("noise") is not None:
        nobj = data["noise"]
        if not isinstance(nobj, dict):
            raise ScenarioFormatError("noise: expected an object or null")
        _check_keys(nobj, {"amplitude", "frequency_hz"},
                    {"amplitude", "frequency_hz"}, "noise")
        noise = NoiseSpec(amplitude=_as_int(nobj["amplitude"], "noise.amplitude"),
                          frequency_hz=_as_number(nobj["frequency_hz"],
                                                  "noise.frequency_hz"))

    disturbance = None
    if data.get("disturbance") is not None:
        dobj = data["disturbance"]
        if not isinstance(dobj, dict):
            raise ScenarioFormatError("disturbance: expected an object or null")
        _check_keys(dobj, {"network", "delta_e", "start_cycle", "duration_cycles"},
                    {"network", "delta_e", "start_cycle"}, "disturbance")
        duration = dobj.get("duration_cycles")
        if duration is not None:
            duration = _as_int(duration, "disturbance.duration_cycles")
        disturbance = DisturbanceSpec(
            network=_network_from_key(dobj["network"], "disturbance.network"),
            delta_e=_as_number(dobj["delta_e"], "disturbance.delta_e"),
            start_cycle=_as_int(dobj["start_cycle"], "disturbance.start_cycle"),
            duration_cycles=duration,
        )

    return ScenarioConfig(
        total_terminals=_as_int(data["total_terminals"], "total_terminals"),
        initial_assignment=assignment,
        num_cycles=_as_int(data["num_cycles"], "num_cycles"),
        strategy=_strategy_from_dict(data["strategy"]),
        profiles=profiles,
        seed=_as_int(data["seed"], "seed"),
        strategy_kind=strategy_kind,
        measurement_mode=mode,
        cycle_length=_as_number(data.get("cycle_length", 0.1), "cycle_length"),
        noise=noise,
        disturbance=disturbance,
    )


def scenario_to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    """Inverse of scenario_from_dict (round-trips exactly)."""
    doc: dict[str, Any] = {
        "total_terminals": cfg.total_terminals,
        "initial_assignment": {net.value: cfg.initial_assignment.get(net, 0)
                               for net in ALL_NETWORKS},
        "cycle_length": cfg.cycle_length,
        "num_cycles": cfg.num_cycles,
        "strategy_kind": cfg.strategy_kind.value,
        "measurement_mode": cfg.measurement_mode.value,
        "seed": cfg.seed,
        "strategy": {
            "n_exp": cfg.strategy.n_exp,
            "rho": cfg.strategy.rho,
            "sigma": cfg.strategy.sigma,
            "f_delay_ref": cfg.strategy.f_delay_ref,
            "f_plr_ref": cfg.strategy.f_plr_ref,
            "f_jit_ref": cfg.strategy.f_jit_ref,
            "w_delay": cfg.strategy.w_delay,
            "w_plr": cfg.strategy.w_plr,
            "w_jit": cfg.strategy.w_jit,
        },
        "profiles": {
            net.value: {
                "d0": p.d0, "a": p.a, "p0": p.p0, "b": p.b,
                "g0": p.g0, "h": p.h, "cap": p.cap, "exponent": p.exponent,
            }
            for net, p in ((net, cfg.profiles[net]) for net in ALL_NETWORKS)
        },
    }
    if cfg.noise is not None:
        doc["noise"] = {"amplitude": cfg.noise.amplitude,
                        "frequency_hz": cfg.noise.frequency_hz}
    if cfg.disturbance is not None:
        doc["disturbance"] = {
            "network": cfg.disturbance.network.value,
            "delta_e": cfg.disturbance.delta_e,
            "start_cycle": cfg.disturbance.start_cycle,
            "duration_cycles": cfg.disturbance.duration_cycles,
        }
    return doc


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load and parse a scenario JSON file (does not validate semantics)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return scenario_from_dict(data)


def save_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(cfg), fh, indent=2)
        fh.write("\n")
