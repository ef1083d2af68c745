"""Built-in invariant checks, runnable from the CLI.

Three checks cover the three layers that can silently rot: the
synchronous composition must diagonalize, segment layouts must
partition the victim window sample-exactly, and the matrix pipeline
must agree with a brute-force waveform simulation that shares no code
with it (times reconstructed by division, waveform evaluated point by
point, channel applied by np.convolve).

The module-level fault hooks exist so the checks themselves can be
tested: biasing a cut point must trip the partition check, and an
off-unitary DFT scale must slip past diagonality (which is scale
free) but trip the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import SymbolVector, tx_symbol_eval
from .channel import (
    MultipathChannel,
    draw_channel,
    effective_channel_ap_ue,
    effective_channel_enb_ap,
    exp_power_profile,
    homogeneous_effective_channel,
)
from .matrices import StackedSymbolVector, assemble_k_ap_ue, assemble_k_enb_ap
from .params import (
    OfdmNumerology,
    downscaled_pair,
    laa_default,
    laa_exact,
    wifi_default,
)
from .timing import ApLayout, UeLayout, resolve_ap_layout, resolve_ue_layout

__all__ = ["CheckResult", "run_checks"]

# Fault-injection hooks for testing the checks themselves.  Leave at the
# defaults in production use.
_cut_bias: int = 0  # shifts interior segment boundaries by this many samples
_dft_scale: float = 1.0  # scales the matrix pipeline's output


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_homogeneous(fast: bool) -> CheckResult:
    n_channels = 2 if fast else 5
    worst = 0.0
    rng = np.random.default_rng(1)
    for num in (laa_exact(), wifi_default()):
        profile = exp_power_profile(min(16, num.n_cp + 1), 0.7)
        channels = [draw_channel(np.array([1.0]), randomize=False)]
        channels += [draw_channel(profile, rng) for _ in range(n_channels)]
        for chan in channels:
            eff = homogeneous_effective_channel(chan, num)
            matrix = eff.matrix * _dft_scale
            off = matrix - np.diag(np.diag(matrix))
            ratio = np.linalg.norm(off) / np.linalg.norm(matrix)
            worst = max(worst, ratio)
    passed = worst < 1e-10
    return CheckResult(
        "homogeneous-diagonality",
        passed,
        f"max relative off-diagonal energy {worst:.3e} (limit 1e-10)",
    )


def _biased(ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    if _cut_bias == 0:
        return ranges
    last = len(ranges) - 1
    return [
        (
            lo + _cut_bias if i > 0 else lo,
            hi + _cut_bias if i < last else hi,
        )
        for i, (lo, hi) in enumerate(ranges)
    ]


def _partition_issues(
    segments, n_victim: int, period: float, total: float
) -> list[str]:
    """Tiling, duration-sum, and sample-time consistency for one side."""
    issues: list[str] = []
    ranges = _biased([seg.sample_range for seg in segments])
    durations = [seg.duration for seg in segments]

    cursor = 0
    for lo, hi in ranges:
        if lo != cursor or hi < lo:
            issues.append(f"ranges do not tile: got [{lo},{hi}) at cursor {cursor}")
            break
        cursor = hi
    else:
        if cursor != n_victim:
            issues.append(f"ranges cover [0,{cursor}) not [0,{n_victim})")

    if abs(sum(durations) - total) > 1e-12:
        issues.append(
            f"durations sum to {sum(durations):.15e}, expected {total:.15e}"
        )

    cum = 0.0
    for (lo, hi), dur in zip(ranges, durations):
        if hi > lo:
            times = np.arange(lo, hi) * period
            if times[0] < cum - 1e-12 or times[-1] >= cum + dur + 1e-12:
                issues.append(
                    f"samples [{lo},{hi}) fall outside their "
                    f"[{cum:.9e},{cum + dur:.9e}) window"
                )
        cum += dur
    return issues


def _layout_issues(
    layout: UeLayout | ApLayout,
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
) -> list[str]:
    if isinstance(layout, UeLayout):
        return _partition_issues(
            layout.cp_segments, laa.n_cp, laa.cp_sample_period, laa.t_cp
        ) + _partition_issues(
            layout.data_segments, laa.n_fft, laa.data_sample_period, laa.t_data
        )
    return _partition_issues(
        layout.segments, wifi.n_total, wifi.uniform_sample_period, wifi.t_total
    )


def _check_partition(fast: bool) -> CheckResult:
    laa = laa_default()
    wifi = wifi_default()
    n_grid = 400 if fast else 2000
    bad = 0
    first = ""
    tau1_grid = np.linspace(0.0, wifi.t_total, n_grid, endpoint=False)
    tau1_values = np.concatenate([tau1_grid, [3.3e-6]])
    for tau1 in tau1_values:
        layout = resolve_ue_layout(laa, wifi, float(tau1))
        issues = _layout_issues(layout, laa, wifi)
        expected_mp = 2 if tau1 > 3.3e-6 else 1
        if layout.m_prime != expected_mp:
            issues.append(
                f"m_prime {layout.m_prime}, threshold rule expects {expected_mp}"
            )
        if issues:
            bad += 1
            first = first or f"tau1={tau1:.12e}: {issues[0]}"
    tau_grid = np.linspace(
        -wifi.t_total, laa.t_total - wifi.t_total, n_grid, endpoint=False
    )
    tau_values = np.concatenate([tau_grid, [0.0]])
    for tau in tau_values:
        layout = resolve_ap_layout(laa, wifi, float(tau))
        issues = _layout_issues(layout, laa, wifi)
        if issues:
            bad += 1
            first = first or f"tau={tau:.12e}: {issues[0]}"
    n_total = len(tau1_values) + len(tau_values)
    return CheckResult(
        "timing-partition",
        bad == 0,
        f"{n_total - bad}/{n_total} offsets partition exactly"
        + (f"; first failure: {first}" if first else ""),
    )


def _interval_index(t: float, start: float, width: float) -> tuple[int, float]:
    """Which width-sized interval after start holds t, and where inside it."""
    idx = int(np.floor((t - start) / width))
    local = t - start - idx * width
    if local >= width:
        idx += 1
        local -= width
    if local < 0.0:
        idx -= 1
        local += width
    return idx, local


def _brute_receive_ue(
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
    tau1: float,
    syms: StackedSymbolVector,
    taps: np.ndarray,
) -> np.ndarray:
    """Waveform-level reference receiver for the narrow-spaced victim."""
    cp_times = -laa.t_cp + np.arange(laa.n_cp) * laa.cp_sample_period
    data_times = np.arange(laa.n_fft) * laa.data_sample_period
    window_times = np.concatenate([cp_times, data_times])
    x = np.empty(window_times.size, dtype=np.complex128)
    for i, t in enumerate(window_times):
        # aggressor symbol d covers [tau1 + (d-1) t_total, tau1 + d t_total)
        d_minus_1, local = _interval_index(float(t), tau1, wifi.t_total)
        sym = syms.get(d_minus_1 + 1)
        x[i] = tx_symbol_eval(wifi, sym, np.array([local]))[0]
    y = np.convolve(taps, x)[laa.n_cp : laa.n_cp + laa.n_fft]
    return np.fft.fft(y) / np.sqrt(laa.n_fft)


def _brute_receive_ap(
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
    tau: float,
    syms: StackedSymbolVector,
    taps: np.ndarray,
) -> np.ndarray:
    """Waveform-level reference receiver for the wide-spaced victim."""
    window_times = np.arange(wifi.n_total) * wifi.uniform_sample_period
    x = np.empty(window_times.size, dtype=np.complex128)
    for i, t in enumerate(window_times):
        # aggressor symbol o covers [o t_total - tau, (o+1) t_total - tau)
        offset, local = _interval_index(float(t), -tau, laa.t_total)
        sym = syms.get(offset)
        x[i] = tx_symbol_eval(laa, sym, np.array([local]))[0]
    y = np.convolve(taps, x)[wifi.n_cp : wifi.n_cp + wifi.n_fft]
    return np.fft.fft(y) / np.sqrt(wifi.n_fft)


def _random_stack(
    offsets: tuple[int, ...], n_fft: int, rng: np.random.Generator
) -> StackedSymbolVector:
    entries = tuple(
        (
            off,
            SymbolVector(
                symbol_index=off,
                messages=rng.standard_normal(n_fft) + 1j * rng.standard_normal(n_fft),
            ),
        )
        for off in offsets
    )
    return StackedSymbolVector(entries=entries)


def _check_oracle(fast: bool) -> CheckResult:
    narrow, wide = downscaled_pair()
    n_draws = 5 if fast else 20
    rng = np.random.default_rng(2)
    profile = exp_power_profile(3, 0.7)
    worst = 0.0
    for _ in range(n_draws):
        taps = draw_channel(profile, rng).taps

        tau1 = rng.uniform(0.0, wide.t_total)
        layout = resolve_ue_layout(narrow, wide, tau1)
        k = assemble_k_ap_ue(layout, wide, narrow)
        syms = _random_stack(
            tuple(off for off, _ in k.block_map), wide.n_fft, rng
        )
        eff = effective_channel_ap_ue(MultipathChannel(taps=taps), k, narrow, wide)
        got = eff.apply(syms) * _dft_scale
        want = _brute_receive_ue(narrow, wide, tau1, syms, taps)
        worst = max(worst, float(np.abs(got - want).max()))

        tau = rng.uniform(-wide.t_total, narrow.t_total - wide.t_total)
        layout2 = resolve_ap_layout(narrow, wide, tau)
        k2 = assemble_k_enb_ap(layout2, narrow, wide)
        syms2 = _random_stack(
            tuple(off for off, _ in k2.block_map), narrow.n_fft, rng
        )
        eff2 = effective_channel_enb_ap(MultipathChannel(taps=taps), k2, narrow, wide)
        got2 = eff2.apply(syms2) * _dft_scale
        want2 = _brute_receive_ap(narrow, wide, tau, syms2, taps)
        worst = max(worst, float(np.abs(got2 - want2).max()))
    passed = worst < 1e-8
    return CheckResult(
        "brute-force-oracle",
        passed,
        f"max |pipeline - waveform| {worst:.3e} over {n_draws} draws (limit 1e-8)",
    )


def run_checks(fast: bool = False) -> list[CheckResult]:
    return [
        _check_homogeneous(fast),
        _check_partition(fast),
        _check_oracle(fast),
    ]
