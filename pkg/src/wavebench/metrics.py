"""Measurements: OOB emission, EVM, and BLER aggregation with stopping."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dsp import PSD_FLOOR_DB, PsdEstimate
from .errors import MeasurementError

WILSON_Z = 1.959963984540054  # two-sided 95%

DEFAULT_OOB_WINDOW = (10.0, 50.0)  # offsets past the band edge, in spacings


@dataclass(frozen=True)
class OobReport:
    inband_mean_db: float
    oob_mean_db: float
    window_spec: tuple[float, float]

    @property
    def suppression_db(self) -> float:
        return self.inband_mean_db - self.oob_mean_db


@dataclass(frozen=True)
class BlerPoint:
    sweep_value: float
    blocks: int
    block_errors: int
    bit_errors: int = 0
    info_bits: int = 0
    evm_db: float = float("nan")
    censored: bool = False

    @property
    def bler(self) -> float:
        return self.block_errors / self.blocks if self.blocks else float("nan")

    @property
    def wilson_ci95(self) -> tuple[float, float]:
        return wilson_interval(self.block_errors, self.blocks)


def wilson_interval(k: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if n <= 0:
        raise MeasurementError("Wilson interval needs at least one trial")
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def measure_oob(
    psd: PsdEstimate,
    band_edges: tuple[float, float],
    subcarrier_spacing: float,
    window: tuple[float, float] = DEFAULT_OOB_WINDOW,
) -> OobReport:
    """In-band mean vs mean over symmetric out-of-band windows.

    The OOB window spans ``[edge + window[0]*df, edge + window[1]*df]`` on
    both sides of the band; means are taken on linear power.
    """
    lo, hi = band_edges
    if hi <= lo:
        raise MeasurementError("band_edges must be an increasing pair")
    w_lo, w_hi = window
    if w_lo <= 0 or w_hi <= w_lo:
        raise MeasurementError("OOB window must lie strictly outside the band")
    df = subcarrier_spacing
    f = psd.frequencies
    span = (f >= hi + w_lo * df) & (f <= hi + w_hi * df)
    span |= (f <= lo - w_lo * df) & (f >= lo - w_hi * df)
    if not span.any():
        raise MeasurementError("OOB window lies outside the PSD span")
    inband = (f >= lo) & (f <= hi)
    if not inband.any():
        raise MeasurementError("no PSD bins inside the allocated band")
    floor = 10.0 ** (PSD_FLOOR_DB / 10.0)
    lin = 10.0 ** (psd.power_db / 10.0)
    inband_db = 10.0 * np.log10(max(float(np.mean(lin[inband])), floor))
    oob_db = 10.0 * np.log10(max(float(np.mean(lin[span])), floor))
    return OobReport(inband_mean_db=inband_db, oob_mean_db=oob_db, window_spec=window)


def measure_evm(tx: np.ndarray, rx: np.ndarray) -> float:
    """Error-vector power ratio in dB, clamped at the -200 dB floor."""
    tx = np.asarray(tx)
    rx = np.asarray(rx)
    if tx.shape != rx.shape:
        raise MeasurementError(f"shape mismatch {tx.shape} vs {rx.shape}")
    ref = float(np.sum(np.abs(tx) ** 2))
    if ref <= 0:
        raise MeasurementError("EVM reference grid has zero power")
    err = float(np.sum(np.abs(rx - tx) ** 2))
    return float(10.0 * np.log10(max(err / ref, 10.0 ** (PSD_FLOOR_DB / 10.0))))


@dataclass
class BlerAccumulator:
    """Order-independent accumulation of trial results for one sweep point."""

    min_block_errors: int = 100
    max_blocks: int = 100_000
    blocks: int = 0
    block_errors: int = 0
    bit_errors: int = 0
    info_bits: int = 0
    _evm_lin_sum: float = 0.0
    _evm_count: int = 0

    def add(self, info_bits: int, bit_errors: int, blocks: int, block_errors: int,
            evm_db: float) -> None:
        self.blocks += blocks
        self.block_errors += block_errors
        self.bit_errors += bit_errors
        self.info_bits += info_bits
        if np.isfinite(evm_db):
            self._evm_lin_sum += 10.0 ** (evm_db / 10.0)
            self._evm_count += 1

    @property
    def done(self) -> bool:
        return self.block_errors >= self.min_block_errors or self.blocks >= self.max_blocks

    def result(self, sweep_value: float) -> BlerPoint:
        if self.blocks == 0:
            raise MeasurementError("no trials accumulated")
        evm = (
            10.0 * np.log10(self._evm_lin_sum / self._evm_count)
            if self._evm_count
            else float("nan")
        )
        return BlerPoint(
            sweep_value=sweep_value,
            blocks=self.blocks,
            block_errors=self.block_errors,
            bit_errors=self.bit_errors,
            info_bits=self.info_bits,
            evm_db=float(evm),
            censored=self.block_errors < self.min_block_errors,
        )


def aggregate_bler(
    trials, sweep_value: float, min_block_errors: int = 100, max_blocks: int = 100_000
) -> BlerPoint:
    """Accumulate a trial stream until the stop rule fires."""
    acc = BlerAccumulator(min_block_errors=min_block_errors, max_blocks=max_blocks)
    for t in trials:
        acc.add(t.info_bits, t.bit_errors, t.blocks, t.block_errors, t.measured_evm_db)
        if acc.done:
            break
    return acc.result(sweep_value)
