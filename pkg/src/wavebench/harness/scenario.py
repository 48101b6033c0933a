"""Scenario files: TOML schema, validation, defaulting, resolved echo."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, replace
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..channel import PaModel
from ..errors import ValidationError
from ..link.trial import LinkChannel
from ..waveforms.config import WAVEFORM_KINDS, WaveformConfig

SWEEP_VARIABLES = ("snr_db", "cfo_fraction", "speed_kmh", "pa_output_dbm")


@dataclass(frozen=True)
class StopRule:
    min_block_errors: int = 100
    max_blocks: int = 100_000
    batch: int = 64


@dataclass(frozen=True)
class Scenario:
    name: str
    waveforms: tuple[str, ...]
    modulations: tuple[str, ...]
    fft_size: int
    cp_len: int
    rb_size: int
    rb_allocation: tuple[int, ...]
    subcarrier_spacing: float
    n_symbols: int
    channel_model: str
    carrier_hz: float
    pa: PaModel
    sweep_variable: str
    sweep_values: tuple[float, ...]
    fixed_snr_db: float
    fixed_cfo_fraction: float
    fixed_speed_kmh: float
    stop: StopRule
    master_seed: int
    psd_frames: int = 100

    def waveform_config(self, kind: str) -> WaveformConfig:
        return WaveformConfig(
            waveform_kind=kind,
            fft_size=self.fft_size,
            cp_len=self.cp_len,
            rb_size=self.rb_size,
            rb_allocation=self.rb_allocation,
            subcarrier_spacing=self.subcarrier_spacing,
        )

    def link_channel(self, sweep_value: float) -> LinkChannel:
        cfo = self.fixed_cfo_fraction
        speed = self.fixed_speed_kmh
        if self.sweep_variable == "cfo_fraction":
            cfo = sweep_value
        elif self.sweep_variable == "speed_kmh":
            speed = sweep_value
        return LinkChannel(
            model=self.channel_model,
            speed_kmh=speed,
            carrier_hz=self.carrier_hz,
            cfo_fraction=cfo,
            pa=self.pa,
        )

    def snr_db(self, sweep_value: float) -> float:
        return sweep_value if self.sweep_variable == "snr_db" else self.fixed_snr_db

    def resolved_dict(self) -> dict:
        d = asdict(self)
        d["pa"] = asdict(self.pa)
        d["stop"] = asdict(self.stop)
        return d

    def config_hash(self) -> str:
        payload = json.dumps(self.resolved_dict(), sort_keys=True, default=float)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


def _require(table: dict, key: str, path: str):
    if key not in table:
        raise ValidationError(f"missing required field {path}.{key}")
    return table[key]


def _build(raw: dict, name_fallback: str, desk_scale: bool) -> Scenario:
    if desk_scale:
        overrides = raw.get("desk_scale", {})
        for section, values in overrides.items():
            if isinstance(values, dict):
                raw.setdefault(section, {})
                raw[section].update(values)
            else:
                raw[section] = values

    wf_tab = raw.get("waveform", {})
    kinds = tuple(wf_tab.get("kinds", list(WAVEFORM_KINDS)))
    for k in kinds:
        if k not in WAVEFORM_KINDS:
            raise ValidationError(
                f"waveform.kinds contains unknown waveform {k!r}; valid kinds: "
                f"{', '.join(WAVEFORM_KINDS)}"
            )
    if not kinds:
        raise ValidationError("waveform.kinds must not be empty")

    mod_tab = raw.get("modulation", {})
    modulations = tuple(mod_tab.get("orders", ["qpsk"]))
    for m in modulations:
        if m not in ("qpsk", "qam16"):
            raise ValidationError(f"modulation.orders contains unknown order {m!r}")

    sweep = raw.get("sweep")
    if sweep is None:
        raise ValidationError("missing required table [sweep]")
    variable = _require(sweep, "variable", "sweep")
    if variable not in SWEEP_VARIABLES:
        raise ValidationError(
            f"sweep.variable must be one of {SWEEP_VARIABLES}, got {variable!r}"
        )
    values = sweep.get("values")
    if not values:
        raise ValidationError("missing or empty field sweep.values")
    values = tuple(float(v) for v in values)
    if not all(v == v and abs(v) != float("inf") for v in values):
        raise ValidationError("sweep.values must be finite")

    chan = raw.get("channel", {})
    model = chan.get("model", "awgn")
    if model not in ("awgn", "etu"):
        raise ValidationError(f"channel.model must be awgn or etu, got {model!r}")

    pa_tab = raw.get("pa", {})
    try:
        pa = PaModel(
            kind=pa_tab.get("kind", "ideal"),
            smoothness=float(pa_tab.get("smoothness", 3.0)),
            output_power_dbm=float(pa_tab.get("output_dbm", 20.0)),
            saturation_power_dbm=float(pa_tab.get("saturation_dbm", 30.0)),
        )
    except Exception as exc:
        raise ValidationError(f"invalid [pa] table: {exc}") from exc

    fixed = raw.get("fixed", {})
    stop_tab = raw.get("stop", {})
    stop = StopRule(
        min_block_errors=int(stop_tab.get("min_block_errors", 100)),
        max_blocks=int(stop_tab.get("max_blocks", 100_000)),
        batch=int(stop_tab.get("batch", 64)),
    )
    if stop.min_block_errors < 1 or stop.max_blocks < 1 or stop.batch < 1:
        raise ValidationError("stop rule fields must be positive")

    scenario = Scenario(
        name=str(raw.get("name", name_fallback)),
        waveforms=kinds,
        modulations=modulations,
        fft_size=int(wf_tab.get("fft_size", 1024)),
        cp_len=int(wf_tab.get("cp_len", 72)),
        rb_size=int(wf_tab.get("rb_size", 12)),
        rb_allocation=tuple(int(r) for r in wf_tab.get("rb_allocation", [0, 1, 2])),
        subcarrier_spacing=float(wf_tab.get("subcarrier_spacing_hz", 15e3)),
        n_symbols=int(wf_tab.get("n_symbols", 14)),
        channel_model=model,
        carrier_hz=float(chan.get("carrier_hz", 2e9)),
        pa=pa,
        sweep_variable=variable,
        sweep_values=values,
        fixed_snr_db=float(fixed.get("snr_db", 20.0)),
        fixed_cfo_fraction=float(fixed.get("cfo_fraction", 0.0)),
        fixed_speed_kmh=float(fixed.get("speed_kmh", 0.0)),
        stop=stop,
        master_seed=int(raw.get("master_seed", 1)),
        psd_frames=int(raw.get("psd_frames", 100)),
    )
    # Validate the waveform config eagerly so field errors surface here.
    try:
        for k in kinds:
            scenario.waveform_config(k)
    except Exception as exc:
        raise ValidationError(f"invalid [waveform] table: {exc}") from exc
    return scenario


def bundled_scenarios() -> list[str]:
    pkg = resources.files("wavebench.harness") / "scenarios"
    return sorted(p.name[: -len(".toml")] for p in pkg.iterdir() if p.name.endswith(".toml"))


def load_scenario(path_or_name: str | Path, desk_scale: bool = False,
                  master_seed: int | None = None) -> Scenario:
    """Load a scenario file or a bundled scenario by name."""
    path = Path(path_or_name)
    if path.exists():
        text = path.read_text()
        fallback = path.stem
    else:
        candidate = resources.files("wavebench.harness") / "scenarios" / f"{path_or_name}.toml"
        if not candidate.is_file():
            raise ValidationError(
                f"no scenario file {path_or_name!r}; bundled: {', '.join(bundled_scenarios())}"
            )
        text = candidate.read_text()
        fallback = str(path_or_name)
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"TOML parse error in {path_or_name}: {exc}") from exc
    scenario = _build(raw, fallback, desk_scale)
    if master_seed is not None:
        scenario = replace(scenario, master_seed=master_seed)
    return scenario
