"""Monte-Carlo interference maps over random offsets and channels.

Each draw picks a time offset uniformly from the direction's range,
fades a multipath channel, builds the effective channel matrix, and
reduces it to a (victim subcarrier x aggressor subcarrier) power map by
combining the column groups that land on the same aggressor subcarrier.
Draws are averaged; per-entry second moments ride along so callers can
judge convergence.

Reproducibility contract: one master seed fans out through a seed tree,
one child per draw, and accumulation happens in draw order even when a
thread pool computes draws concurrently.  Same seed, same map, bit for
bit, at any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from .channel import (
    draw_channel,
    effective_channel_ap_ue,
    effective_channel_enb_ap,
    exp_power_profile,
)
from .matrices import assemble_k_ap_ue, assemble_k_enb_ap
from .params import OfdmNumerology, laa_default, wifi_default
from .timing import resolve_ap_layout, resolve_ue_layout

__all__ = [
    "Direction",
    "CampaignConfig",
    "InterferenceMap",
    "run_campaign",
    "crop_guards",
    "dominant_count",
    "AP_TO_UE_TAU1_MAX",
]

# Default offset cap for the narrow-victim direction; the full range up
# to the aggressor's symbol duration stays available through tau_max.
AP_TO_UE_TAU1_MAX = 3.3e-6


class Direction(Enum):
    """Which system is the victim of which aggressor."""

    ENB_TO_AP = "enb-ap"
    AP_TO_UE = "ap-ue"


@dataclass(frozen=True)
class CampaignConfig:
    direction: Direction
    n_draws: int
    master_seed: int
    n_tap: int = 16
    decay: float = 0.7
    tau_min: float | None = None
    tau_max: float | None = None
    fresh_channel_per_draw: bool = True
    randomize_channel: bool = True
    aggregate: str = "sum"

    def __post_init__(self) -> None:
        if self.n_draws < 1:
            raise ValueError("n_draws must be positive")
        if self.aggregate not in ("sum", "max"):
            raise ValueError(f"unknown aggregate mode {self.aggregate!r}")

    def resolved_tau_range(
        self, laa: OfdmNumerology, wifi: OfdmNumerology
    ) -> tuple[float, float]:
        if self.direction is Direction.ENB_TO_AP:
            lo = -wifi.t_total if self.tau_min is None else self.tau_min
            hi = (
                laa.t_total - wifi.t_total
                if self.tau_max is None
                else self.tau_max
            )
        else:
            lo = 0.0 if self.tau_min is None else self.tau_min
            hi = AP_TO_UE_TAU1_MAX if self.tau_max is None else self.tau_max
        if not lo <= hi:
            raise ValueError(f"empty offset range [{lo}, {hi}]")
        return lo, hi

    def echo(self, laa: OfdmNumerology, wifi: OfdmNumerology) -> dict:
        lo, hi = self.resolved_tau_range(laa, wifi)
        return {
            "direction": self.direction.value,
            "n_draws": self.n_draws,
            "master_seed": self.master_seed,
            "n_tap": self.n_tap,
            "decay": self.decay,
            "tau_min": lo,
            "tau_max": hi,
            "fresh_channel_per_draw": self.fresh_channel_per_draw,
            "randomize_channel": self.randomize_channel,
            "aggregate": self.aggregate,
            "victim": (laa if self.direction is Direction.AP_TO_UE else wifi).label,
            "aggressor": (wifi if self.direction is Direction.AP_TO_UE else laa).label,
        }


@dataclass(frozen=True)
class InterferenceMap:
    """Mean per-draw power, subcarriers in ascending-frequency order."""

    values: np.ndarray
    variance: np.ndarray
    row_frequencies: np.ndarray
    col_frequencies: np.ndarray
    n_draws: int
    direction: Direction
    config: dict = field(default_factory=dict)

    @property
    def std_error(self) -> np.ndarray:
        return np.sqrt(self.variance / self.n_draws)


def _worker_count() -> int:
    raw = os.environ.get("XTALK_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"XTALK_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"XTALK_THREADS must be >= 1, got {n}")
    return n


def _draw_map(
    config: CampaignConfig,
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
    profile: np.ndarray,
    tau_range: tuple[float, float],
    index: int,
    seed: np.random.SeedSequence,
    shared_channel,
) -> np.ndarray:
    """One draw: offset, channel, effective matrix, group-combined power."""
    try:
        rng = np.random.default_rng(seed)
        tau = rng.uniform(*tau_range)
        if shared_channel is not None:
            chan = shared_channel
        else:
            chan = draw_channel(profile, rng, randomize=config.randomize_channel)
        if config.direction is Direction.AP_TO_UE:
            layout = resolve_ue_layout(laa, wifi, tau)
            k = assemble_k_ap_ue(layout, wifi, laa)
            eff = effective_channel_ap_ue(chan, k, laa, wifi)
        else:
            layout = resolve_ap_layout(laa, wifi, tau)
            k = assemble_k_enb_ap(layout, laa, wifi)
            eff = effective_channel_enb_ap(chan, k, laa, wifi)
        power = np.abs(eff.matrix) ** 2
        blocks = [power[:, lo:hi] for _, (lo, hi) in eff.block_map]
        if config.aggregate == "sum":
            return np.add.reduce(blocks)
        return np.maximum.reduce(blocks)
    except Exception as exc:
        raise RuntimeError(f"campaign draw {index} failed: {exc}") from exc


def _draw_results(
    config: CampaignConfig,
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
    profile: np.ndarray,
    tau_range: tuple[float, float],
    seeds: list[np.random.SeedSequence],
    shared_channel,
    workers: int,
) -> Iterator[np.ndarray]:
    def one(pair):
        index, seed = pair
        return _draw_map(
            config, laa, wifi, profile, tau_range, index, seed, shared_channel
        )

    if workers == 1:
        for pair in enumerate(seeds):
            yield one(pair)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, so the reduction downstream
        # stays in draw order regardless of completion order.
        yield from pool.map(one, enumerate(seeds))


def run_campaign(
    config: CampaignConfig,
    laa: OfdmNumerology | None = None,
    wifi: OfdmNumerology | None = None,
) -> InterferenceMap:
    laa = laa_default() if laa is None else laa
    wifi = wifi_default() if wifi is None else wifi
    profile = exp_power_profile(config.n_tap, config.decay)
    tau_range = config.resolved_tau_range(laa, wifi)

    root = np.random.SeedSequence(config.master_seed)
    channel_stream, draw_stream = root.spawn(2)
    seeds = draw_stream.spawn(config.n_draws)
    shared_channel = None
    if not config.fresh_channel_per_draw:
        shared_channel = draw_channel(
            profile,
            np.random.default_rng(channel_stream),
            randomize=config.randomize_channel,
        )

    victim = laa if config.direction is Direction.AP_TO_UE else wifi
    aggressor = wifi if config.direction is Direction.AP_TO_UE else laa
    acc = np.zeros((victim.n_fft, aggressor.n_fft))
    acc_sq = np.zeros_like(acc)
    for draw in _draw_results(
        config, laa, wifi, profile, tau_range, seeds, shared_channel, _worker_count()
    ):
        acc += draw
        acc_sq += draw * draw

    n = config.n_draws
    mean = acc / n
    var = (
        np.zeros_like(mean)
        if n == 1
        else np.maximum(acc_sq / n - mean * mean, 0.0) * (n / (n - 1))
    )

    def shift(a: np.ndarray) -> np.ndarray:
        return np.fft.fftshift(a, axes=(0, 1))

    return InterferenceMap(
        values=shift(mean),
        variance=shift(var),
        row_frequencies=np.fft.fftshift(victim.frequencies()),
        col_frequencies=np.fft.fftshift(aggressor.frequencies()),
        n_draws=n,
        direction=config.direction,
        config=config.echo(laa, wifi),
    )


def crop_guards(
    imap: InterferenceMap,
    laa_mask: np.ndarray | None = None,
    wifi_mask: np.ndarray | None = None,
) -> InterferenceMap:
    """Drop guard and DC subcarriers on both axes of the map.

    Masks are booleans over DFT-ordered subcarrier indices (the same
    convention as the numerology guard masks); defaults come from the
    stock numerologies.
    """
    laa_mask = laa_default().active_mask if laa_mask is None else np.asarray(laa_mask, bool)
    wifi_mask = wifi_default().active_mask if wifi_mask is None else np.asarray(wifi_mask, bool)
    if imap.direction is Direction.AP_TO_UE:
        row_mask, col_mask = laa_mask, wifi_mask
    else:
        row_mask, col_mask = wifi_mask, laa_mask
    if len(row_mask) != imap.values.shape[0]:
        raise ValueError(
            f"row mask length {len(row_mask)} != {imap.values.shape[0]} rows"
        )
    if len(col_mask) != imap.values.shape[1]:
        raise ValueError(
            f"column mask length {len(col_mask)} != {imap.values.shape[1]} columns"
        )
    if not row_mask.any() or not col_mask.any():
        raise ValueError("mask leaves no subcarrier; empty map forbidden")
    rows = np.fft.fftshift(row_mask)
    cols = np.fft.fftshift(col_mask)
    return InterferenceMap(
        values=imap.values[np.ix_(rows, cols)],
        variance=imap.variance[np.ix_(rows, cols)],
        row_frequencies=imap.row_frequencies[rows],
        col_frequencies=imap.col_frequencies[cols],
        n_draws=imap.n_draws,
        direction=imap.direction,
        config=imap.config,
    )


def dominant_count(
    imap: InterferenceMap, axis: str, threshold_db: float
) -> np.ndarray:
    """Entries per line within threshold_db of that line's peak.

    axis="victim": one count per victim subcarrier (row), counting
    aggressor subcarriers.  axis="aggressor": one count per aggressor
    subcarrier (column), counting victim subcarriers.
    """
    if threshold_db >= 0:
        raise ValueError("threshold_db must be negative")
    if imap.values.size == 0:
        raise ValueError("empty map")
    if axis == "victim":
        values = imap.values
    elif axis == "aggressor":
        values = imap.values.T
    else:
        raise ValueError(f"axis must be 'victim' or 'aggressor', got {axis!r}")
    peaks = values.max(axis=1, keepdims=True)
    floor = peaks * 10.0 ** (threshold_db / 10.0)
    counts = (values >= floor).sum(axis=1)
    # a line that is identically zero dominates nothing
    counts[peaks[:, 0] == 0.0] = 0
    return counts.astype(np.int64)
