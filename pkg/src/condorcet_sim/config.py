"""Sectioned key-value config files (INI) mapped onto :class:`SimConfig`.

Example::

    [sim]
    n = 21
    r = 0.1
    p = 0.0
    honest = 20
    broadcast = false
    seed = 7

    [attack]
    kind = two_tx
    tau = 10
    clones = 1
    gap = 0.01

    [output]
    schemes = ranked-pairs, hamiltonian-weakest
"""

from __future__ import annotations

import configparser
import math
from dataclasses import replace
from typing import Optional

from .netsim import AttackConfig, ConfigError, SimConfig

SIM_KEYS = {
    "n": ("n", int),
    "r": ("r", float),
    "r_internal": ("r_internal", float),
    "p": ("reorder_p", float),
    "honest": ("honest_count", int),
    "honest_count": ("honest_count", int),
    "broadcast": ("broadcast", "bool"),
    "seed": ("seed", int),
    "orderings_used": ("orderings_used", int),
    "honest_offset": ("honest_offset", float),
    "opaque_ids": ("opaque_ids", "bool"),
    "key_pool": ("key_pool", int),
    "adversary_shares_keys": ("adversary_shares_keys", "bool"),
}
ATTACK_KEYS = {
    "tau": ("pause", float),
    "pause": ("pause", float),
    "clones": ("clones", int),
    "gap": ("gap", float),
    "start": ("start", float),
}


def _convert(section, key, kind):
    try:
        if kind == "bool":
            return section.getboolean(key)
        value = kind(section[key])
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {section[key]!r}") from exc
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"{key} must be finite")
    return value


def load(text: str, base: Optional[SimConfig] = None) -> tuple:
    """Parse config text; returns ``(SimConfig, output options dict)``."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    cfg = base or SimConfig()
    if parser.has_section("sim"):
        sec = parser["sim"]
        updates = {}
        for key in sec:
            if key not in SIM_KEYS:
                raise ConfigError(f"unknown [sim] key {key!r}")
            field_name, kind = SIM_KEYS[key]
            updates[field_name] = _convert(sec, key, kind)
        cfg = replace(cfg, **updates)
    if parser.has_section("attack"):
        sec = parser["attack"]
        kind = sec.get("kind", "two_tx").strip()
        if kind != "none":
            updates = {"kind": kind}
            for key in sec:
                if key == "kind":
                    continue
                if key not in ATTACK_KEYS:
                    raise ConfigError(f"unknown [attack] key {key!r}")
                field_name, conv = ATTACK_KEYS[key]
                updates[field_name] = _convert(sec, key, conv)
            cfg = replace(cfg, attack=AttackConfig(**updates))
        else:
            cfg = replace(cfg, attack=None)
    output = dict(parser["output"]) if parser.has_section("output") else {}
    return cfg, output


def load_file(path, base: Optional[SimConfig] = None) -> tuple:
    with open(path) as fh:
        return load(fh.read(), base)


def dump(cfg: SimConfig) -> str:
    lines = ["[sim]"]
    for key, (field_name, _) in SIM_KEYS.items():
        if key in ("honest_count",):
            continue
        value = getattr(cfg, field_name)
        if value is None:
            continue
        lines.append(f"{key} = {str(value).lower() if isinstance(value, bool) else value}")
    lines.append("")
    lines.append("[attack]")
    if cfg.attack is None:
        lines.append("kind = none")
    else:
        a = cfg.attack
        lines += [f"kind = {a.kind}", f"tau = {a.pause}", f"clones = {a.clones}", f"gap = {a.gap}", f"start = {a.start}"]
    return "\n".join(lines) + "\n"
