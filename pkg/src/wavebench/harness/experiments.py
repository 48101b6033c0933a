"""Experiment drivers: PSD/OOB measurement and parallel BLER sweeps.

Determinism contract: every trial seed derives from (master_seed, waveform
index, sweep index, trial index); batches are aggregated in trial-index
order and the stop rule is checked on batch boundaries, so results are
bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..channel import PaModel, apply_pa
from ..dsp import ComplexSignal, welch_psd
from ..errors import ConfigurationError
from ..link.qam import qam_map
from ..link.trial import LinkChannel, TrialResult, run_link_trial
from ..metrics import BlerAccumulator, BlerPoint, OobReport, measure_oob, wilson_interval
from ..seeds import derive_seed
from ..waveforms import api as wf
from ..waveforms.config import QamGrid, WaveformConfig
from .scenario import Scenario

CSV_COLUMNS = [
    "scenario",
    "waveform",
    "modulation",
    "sweep_var",
    "sweep_value",
    "blocks",
    "block_errors",
    "bler",
    "ci_low",
    "ci_high",
    "evm_db",
    "oob_suppression_db",
    "seed",
    "config_hash",
    "notes",
]

DEVIATION_NOTES = "fec=conv_r13_k7;fbmc_edge_evm_excluded"


@dataclass(frozen=True)
class SweepResult:
    scenario: str
    waveform: str
    modulation: str
    sweep_var: str
    sweep_value: float
    blocks: int | None
    block_errors: int | None
    bler: float | None
    ci_low: float | None
    ci_high: float | None
    evm_db: float | None
    oob_suppression_db: float | None
    seed: int
    config_hash: str
    notes: str

    def row(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return "" if v != v else f"{v:.10g}"
            return str(v)

        return [fmt(getattr(self, c)) for c in CSV_COLUMNS]


def _trial_batch(args) -> list[tuple[int, TrialResult]]:
    cfg, chan, snr_db, modulation, n_symbols, seeds = args
    out = []
    for idx, seed in seeds:
        out.append(
            (idx, run_link_trial(cfg, chan, snr_db, modulation, seed, n_symbols))
        )
    return out


class TrialRunner:
    """Runs trial batches, optionally across a process pool."""

    def __init__(self, workers: int = 1):
        if workers < 1:
            raise ConfigurationError("workers must be >= 1")
        self.workers = workers
        self._pool = (
            ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
        )

    def close(self):
        if self._pool:
            self._pool.shutdown()

    def run_batch(self, cfg, chan, snr_db, modulation, n_symbols,
                  indexed_seeds) -> list[tuple[int, TrialResult]]:
        if not self._pool:
            return _trial_batch((cfg, chan, snr_db, modulation, n_symbols, indexed_seeds))
        step = max(1, -(-len(indexed_seeds) // self.workers))
        chunks = [
            indexed_seeds[i : i + step] for i in range(0, len(indexed_seeds), step)
        ]
        args = [
            (cfg, chan, snr_db, modulation, n_symbols, chunk) for chunk in chunks
        ]
        results: list[tuple[int, TrialResult]] = []
        for part in self._pool.map(_trial_batch, args):
            results.extend(part)
        results.sort(key=lambda t: t[0])
        return results


def run_bler_point(
    scenario: Scenario,
    cfg: WaveformConfig,
    modulation: str,
    wf_index: int,
    sweep_index: int,
    runner: TrialRunner,
) -> BlerPoint:
    """One (waveform, modulation, sweep value) point under the stop rule."""
    sweep_value = scenario.sweep_values[sweep_index]
    chan = scenario.link_channel(sweep_value)
    snr_db = scenario.snr_db(sweep_value)
    acc = BlerAccumulator(
        min_block_errors=scenario.stop.min_block_errors,
        max_blocks=scenario.stop.max_blocks,
    )
    trial_idx = 0
    while not acc.done:
        batch = min(scenario.stop.batch, scenario.stop.max_blocks - acc.blocks)
        indexed_seeds = [
            (trial_idx + i,
             derive_seed(scenario.master_seed, wf_index, sweep_index, trial_idx + i))
            for i in range(batch)
        ]
        trial_idx += batch
        for _, res in runner.run_batch(cfg, chan, snr_db, modulation,
                                       scenario.n_symbols, indexed_seeds):
            acc.add(res.info_bits, res.bit_errors, res.blocks, res.block_errors,
                    res.measured_evm_db)
    return acc.result(sweep_value)


def run_bler_experiment(
    scenario: Scenario, out_dir: str | Path, workers: int = 1
) -> list[SweepResult]:
    """Full sweep; writes CSV rows as they complete (partial file stays valid)."""
    if scenario.sweep_variable not in ("snr_db", "cfo_fraction", "speed_kmh"):
        raise ConfigurationError(
            f"BLER experiment cannot sweep {scenario.sweep_variable!r}"
        )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{scenario.name}_bler.csv"
    runner = TrialRunner(workers)
    results: list[SweepResult] = []
    try:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            fh.flush()
            for wf_index, kind in enumerate(scenario.waveforms):
                cfg = scenario.waveform_config(kind)
                for modulation in scenario.modulations:
                    for sweep_index in range(len(scenario.sweep_values)):
                        point = run_bler_point(
                            scenario, cfg, modulation, wf_index, sweep_index, runner
                        )
                        ci = point.wilson_ci95
                        notes = DEVIATION_NOTES + (
                            ";censored" if point.censored else ""
                        )
                        res = SweepResult(
                            scenario=scenario.name,
                            waveform=kind,
                            modulation=modulation,
                            sweep_var=scenario.sweep_variable,
                            sweep_value=point.sweep_value,
                            blocks=point.blocks,
                            block_errors=point.block_errors,
                            bler=point.bler,
                            ci_low=ci[0],
                            ci_high=ci[1],
                            evm_db=point.evm_db,
                            oob_suppression_db=None,
                            seed=scenario.master_seed,
                            config_hash=scenario.config_hash(),
                            notes=notes,
                        )
                        results.append(res)
                        writer.writerow(res.row())
                        fh.flush()
    finally:
        runner.close()
    _write_metadata(scenario, out_dir, "bler")
    return results


def _psd_signal(scenario: Scenario, cfg: WaveformConfig, pa: PaModel,
                seed: int) -> ComplexSignal:
    rng = np.random.default_rng(seed)
    k = cfg.n_subcarriers
    frames = []
    for _ in range(scenario.psd_frames):
        bits = rng.integers(0, 2, k * scenario.n_symbols * 2, dtype=np.uint8)
        grid = QamGrid(
            symbols=qam_map(bits, "qpsk").reshape(k, scenario.n_symbols, order="F"),
            modulation_order="qpsk",
        )
        frames.append(wf.modulate(grid, cfg).samples)
    sig = ComplexSignal(np.concatenate(frames), cfg.sample_rate)
    return apply_pa(sig, pa)


def run_psd_experiment(
    scenario: Scenario, out_dir: str | Path, workers: int = 1
) -> list[SweepResult]:
    """PSD traces plus OOB summary rows, per waveform per PA condition."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if scenario.sweep_variable == "pa_output_dbm":
        conditions = [
            (f"pa{v:g}dbm",
             PaModel(kind="rapp", smoothness=scenario.pa.smoothness,
                     output_power_dbm=v,
                     saturation_power_dbm=scenario.pa.saturation_power_dbm),
             v)
            for v in scenario.sweep_values
        ]
    else:
        conditions = [("linear", PaModel(kind="ideal"), 0.0)]

    csv_path = out_dir / f"{scenario.name}_oob.csv"
    results: list[SweepResult] = []
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for wf_index, kind in enumerate(scenario.waveforms):
            cfg = scenario.waveform_config(kind)
            for cond_name, pa, sweep_value in conditions:
                seed = derive_seed(scenario.master_seed, wf_index, 0, 0)
                sig = _psd_signal(scenario, cfg, pa, seed)
                psd = welch_psd(sig, norm_band=cfg.band_edges_hz)
                report = measure_oob(psd, cfg.band_edges_hz, cfg.subcarrier_spacing)
                trace = out_dir / f"psd_{scenario.name}_{kind}_{cond_name}.txt"
                with open(trace, "w") as tf:
                    for f_hz, p_db in zip(psd.frequencies, psd.power_db):
                        tf.write(f"{f_hz:.6f} {p_db:.6f}\n")
                res = SweepResult(
                    scenario=scenario.name,
                    waveform=kind,
                    modulation="qpsk",
                    sweep_var=scenario.sweep_variable,
                    sweep_value=sweep_value,
                    blocks=None,
                    block_errors=None,
                    bler=None,
                    ci_low=None,
                    ci_high=None,
                    evm_db=None,
                    oob_suppression_db=report.suppression_db,
                    seed=scenario.master_seed,
                    config_hash=scenario.config_hash(),
                    notes=DEVIATION_NOTES,
                )
                results.append(res)
                writer.writerow(res.row())
                fh.flush()
    _write_metadata(scenario, out_dir, "psd")
    return results


def _write_metadata(scenario: Scenario, out_dir: Path, kind: str) -> None:
    meta = {
        "scenario": scenario.resolved_dict(),
        "config_hash": scenario.config_hash(),
        "software_version": __version__,
        "deviations": DEVIATION_NOTES.split(";"),
    }
    with open(out_dir / f"{scenario.name}_{kind}_meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
