"""Parameter sweeps over the simulator, with CSV and figure emission."""

from __future__ import annotations

import io
import csv
import logging
import math
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .attack import reversal_adversary_count
from .metrics import CSV_COLUMNS, evaluate
from .netsim import AttackConfig, SimConfig, derive_seed, run

log = logging.getLogger(__name__)

CSV_HEADER = CSV_COLUMNS + ("setting",)
SUMMARY_HEADER = (
    "setting", "scheme", "axis", "value", "trials", "cycle_prob",
    "cycles_mean", "cycles_std", "txs_in_cycles_mean", "txs_in_cycles_std",
    "trapped_mean", "trapped_std", "success_any_rate", "success_all_rate",
    "accuracy_mean", "accuracy_std",
)
BASELINE_SCHEMES = ("alphabetical", "hamiltonian-arbitrary", "ranked-pairs")


def log_grid(lo: float, hi: float, per_decade: int = 20) -> tuple:
    decades = math.log10(hi) - math.log10(lo)
    count = int(round(decades * per_decade)) + 1
    return tuple(float(f"{v:.6g}") for v in np.logspace(math.log10(lo), math.log10(hi), count))


def linear_grid(lo: float, hi: float, step: float) -> tuple:
    count = int(round((hi - lo) / step)) + 1
    return tuple(round(lo + i * step, 10) for i in range(count))


@dataclass(frozen=True)
class Setting:
    label: str
    overrides: dict = field(default_factory=dict)
    reversal: bool = False


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    axis: str  # SimConfig field swept along the x axis
    values: tuple
    trials: int
    settings: tuple
    schemes: tuple = ()
    accuracy_scope: str = "all"
    plots: tuple = ("trapped_mean",)
    log_x: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials per point must be >= 1")
        if not self.values:
            raise ValueError("sweep values must be nonempty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if any(not math.isfinite(v) for v in self.values):
            raise ValueError("sweep values must be finite")


def _by_n(label, ns, **extra):
    return tuple(Setting(f"{label}n{n}" if label else f"n{n}", dict(n=n, **extra)) for n in ns)


def make_preset(name: str, trials: Optional[int] = None, per_decade: int = 20, ns: Sequence[int] = (21, 101)) -> ExperimentPreset:
    """Build one of the named presets; ``trials`` and ``per_decade`` override the defaults."""
    ns = tuple(ns)
    if name == "honest-env":
        return ExperimentPreset(
            name, "r", log_grid(0.01, 1000, per_decade), trials or 100,
            _by_n("", ns, honest_count=100),
            schemes=BASELINE_SCHEMES,
            plots=("cycle_prob", "txs_in_cycles_mean", "accuracy_mean"),
        )
    if name == "attack-trap":
        settings = []
        for tau in (10, 50):
            settings += _by_n(f"tau{tau}-", ns, honest_count=2 * tau, attack=AttackConfig(pause=tau))
        return ExperimentPreset(
            name, "r", log_grid(0.01, 1, per_decade), trials or 100, tuple(settings),
            plots=("trapped_mean",),
        )
    if name == "reorder":
        settings = []
        for kind, clones, label in (("two_tx", 1, "tx2"), ("two_tx", 2, "tx2+clone"), ("four_tx", 1, "tx4"), ("four_tx", 2, "tx4+clone")):
            settings += _by_n(f"{label}-", ns, r=0.01, honest_count=20, attack=AttackConfig(kind=kind, clones=clones, pause=10))
        return ExperimentPreset(
            name, "reorder_p", linear_grid(0.0, 0.5, 0.05), trials or 1000, tuple(settings),
            plots=("success_all_rate",), log_x=False,
        )
    if name == "non-injective":
        settings = tuple(Setting(f"n{n}", dict(n=n, honest_count=100), reversal=True) for n in ns)
        return ExperimentPreset(
            name, "r", log_grid(0.01, 100, per_decade), trials or 100, settings,
            plots=("txs_in_cycles_mean", "trapped_mean"),
        )
    if name == "mitigate-ranked":
        return ExperimentPreset(
            name, "r", log_grid(0.001, 1, per_decade), trials or 100,
            _by_n("", ns, honest_count=20, attack=AttackConfig(pause=10)),
            schemes=BASELINE_SCHEMES, accuracy_scope="cycles",
            plots=("accuracy_mean",),
        )
    if name == "mitigate-broadcast":
        settings = []
        for n in ns:
            settings += [
                Setting(f"honest-n{n}", dict(n=n, r=0.1, honest_count=20)),
                Setting(f"attack-n{n}", dict(n=n, r=0.1, honest_count=20, attack=AttackConfig(pause=10))),
                Setting(f"broadcast-n{n}", dict(n=n, r=0.1, honest_count=20, broadcast=True, attack=AttackConfig(pause=10))),
            ]
        return ExperimentPreset(
            name, "r_internal", log_grid(0.01, 1000, per_decade), trials or 100, tuple(settings),
            plots=("trapped_mean",),
        )
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")


PRESET_NAMES = ("honest-env", "attack-trap", "reorder", "non-injective", "mitigate-ranked", "mitigate-broadcast")


def trial_seed(base_seed: int, trial: int) -> int:
    # shared across grid points and settings so curves compare paired samples
    return derive_seed(base_seed, trial)


def run_point(preset: ExperimentPreset, setting: Setting, value: float, seed: int, base: Optional[SimConfig] = None) -> list:
    rows = []
    for trial in range(preset.trials):
        cfg = replace(base or SimConfig(), **setting.overrides, **{preset.axis: value}, seed=trial_seed(seed, trial))
        result = run(cfg)
        reversed_nodes = range(reversal_adversary_count(cfg.n)) if setting.reversal else ()
        rows += evaluate(result, preset.schemes, trial, preset.accuracy_scope, reversed_nodes, setting.label)
    return rows


def run_grid(preset: ExperimentPreset, seed: int, base: Optional[SimConfig] = None) -> list:
    rows = []
    for setting in preset.settings:
        for value in preset.values:
            log.info("%s %s %s=%g", preset.name, setting.label, preset.axis, value)
            rows += run_point(preset, setting, value, seed, base)
    return rows


def rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.row())
    return buf.getvalue()


def _stat(values):
    values = [v for v in values if not (isinstance(v, float) and math.isnan(v))]
    if not values:
        return float("nan"), float("nan")
    return statistics.fmean(values), statistics.pstdev(values)


def summarize(preset: ExperimentPreset, rows) -> list:
    """One dict per (setting, scheme, grid value) with means and standard deviations."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row.setting, row.scheme, getattr(row, _ROW_FIELD.get(preset.axis, preset.axis))), []).append(row)
    out = []
    for (setting, scheme, value), members in groups.items():
        cyc = _stat([m.cycles for m in members])
        txs = _stat([m.txs_in_cycles for m in members])
        trp = _stat([m.trapped for m in members])
        acc = _stat([m.accuracy for m in members])
        out.append(dict(
            setting=setting, scheme=scheme, axis=preset.axis, value=value, trials=len(members),
            cycle_prob=statistics.fmean(m.cycles > 0 for m in members),
            cycles_mean=cyc[0], cycles_std=cyc[1],
            txs_in_cycles_mean=txs[0], txs_in_cycles_std=txs[1],
            trapped_mean=trp[0], trapped_std=trp[1],
            success_any_rate=statistics.fmean(m.success_any for m in members),
            success_all_rate=statistics.fmean(m.success_all for m in members),
            accuracy_mean=acc[0], accuracy_std=acc[1],
        ))
    return out


# sweep axis -> TrialMetrics attribute holding its value
_ROW_FIELD = {"reorder_p": "p"}


def summary_csv(summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for rec in summary:
        w.writerow(["" if isinstance(v, float) and math.isnan(v) else (repr(v) if isinstance(v, float) else v) for v in (rec[k] for k in SUMMARY_HEADER)])
    return buf.getvalue()


def run_preset(preset: ExperimentPreset, seed: int, out_dir, plot: bool = True, base: Optional[SimConfig] = None) -> list:
    """Run a preset grid and write ``<name>.csv``, ``<name>_summary.csv`` and optionally ``<name>.svg``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = run_grid(preset, seed, base)
    summary = summarize(preset, rows)
    paths = [out / f"{preset.name}.csv", out / f"{preset.name}_summary.csv"]
    paths[0].write_text(rows_csv(rows))
    paths[1].write_text(summary_csv(summary))
    if plot:
        from .plotting import plot_summary

        paths.append(plot_summary(preset, summary, out / f"{preset.name}.svg"))
    return paths
