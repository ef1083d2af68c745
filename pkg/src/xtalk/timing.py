"""Overlap geometry between a victim observation window and aggressor symbols.

When the two systems are not slot-aligned, one received OFDM symbol's
worth of samples straddles several symbols of the other system.  This
module turns a scalar timing offset into an explicit layout: which
aggressor symbol is on air during each victim sample, for how long, and
at what time into that symbol the first such sample lands.

Two window shapes exist:

* the narrow-spaced receiver's full symbol window (CP part sampled on
  the CP clock, data part on the data clock), offset by ``tau1`` = time
  from the start of the victim's data part to the start of the next
  whole aggressor symbol, ``0 <= tau1 < aggressor t_total``;
* the wide-spaced receiver's single-symbol sensing window on its
  uniform clock, offset by ``tau`` = start of the aggressor symbol
  relative to the window, ``-t_total_win <= tau < aggressor t_total -
  t_total_win`` (negative tau means the window opens inside the
  previous aggressor symbol).

Sample ownership follows one rule everywhere: with N grid samples over
a window of length T partitioned into spans of cumulative duration D_i,
span i owns sample indices [c_{i-1}, c_i) with c_i = ceil(N * D_i / T).
Every sample's instant then provably lies inside its span, and the
spans tile [0, N) with no overlap.  Spans of zero duration are dropped;
a positive-duration span can still own no samples when it falls wholly
between two grid points (only sub-sample slivers do this) and is then
kept, sample-less, so durations always sum to the window length.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .params import OfdmNumerology

__all__ = [
    "Grid",
    "OverlapCase",
    "Segment",
    "UeLayout",
    "ApLayout",
    "resolve_ue_layout",
    "resolve_ap_layout",
    "cut_points",
    "describe_layout",
]

# Durations below this (seconds) are float dirt from subtracting
# microsecond-scale times (ulp ~ 1e-21), not physical slivers; snap to 0.
_DURATION_EPS = 1e-15


class Grid(enum.Enum):
    """Which victim sample clock a segment's indices count on."""

    CP_GRID = "cp"
    DATA_GRID = "data"
    UNIFORM_GRID = "uniform"


class OverlapCase(enum.Enum):
    ONE_SYMBOL = "one-symbol"
    TWO_SYMBOLS = "two-symbols"


@dataclass(frozen=True)
class Segment:
    """One run of victim samples that all hit the same aggressor symbol.

    ``sample_range`` is half-open in the grid's own sample indices
    (CP and data indices each restart at 0).  ``time_offset_into_aggressor``
    is the aggressor-local instant of the FIRST owned sample; sample i of
    the segment lands at ``time_offset + i * period``.  ``duration`` is the
    nominal time span, which exceeds what the samples cover and is kept so
    span durations sum exactly; a sub-sample sliver may own no samples
    (empty range) yet still carry its duration.
    """

    aggressor_symbol_offset: int
    time_offset_into_aggressor: float
    sample_range: tuple[int, int]
    grid: Grid
    duration: float

    @property
    def n_samples(self) -> int:
        return self.sample_range[1] - self.sample_range[0]


@dataclass(frozen=True)
class UeLayout:
    """Narrow-spaced victim symbol vs the aggressor symbol stream.

    Symbol offsets are relative to the aggressor symbol that straddles
    the junction between the victim's CP and data parts (offset 0); the
    first whole symbol inside the data part is offset +1.  ``m_prime``
    counts aggressor symbols that finish inside the victim CP before
    offset 0 starts; ``m_whole`` counts whole symbols inside the data
    part.
    """

    tau1: float
    m_prime: int
    m_whole: int
    cp_segments: tuple[Segment, ...]
    data_segments: tuple[Segment, ...]

    @property
    def segments(self) -> tuple[Segment, ...]:
        return self.cp_segments + self.data_segments

    def distinct_offsets(self) -> tuple[int, ...]:
        seen = sorted({s.aggressor_symbol_offset for s in self.segments})
        return tuple(seen)


@dataclass(frozen=True)
class ApLayout:
    """Wide-spaced sensing window vs one or two aggressor symbols.

    Offset 0 is the aggressor symbol the window nominally belongs to;
    -1 is its predecessor (entered when ``tau < 0``).
    """

    tau: float
    case: OverlapCase
    segments: tuple[Segment, ...] = field(default=())

    def distinct_offsets(self) -> tuple[int, ...]:
        return tuple(sorted({s.aggressor_symbol_offset for s in self.segments}))


def cut_points(n_samples: int, durations: list[float], total: float) -> list[int]:
    """Sample-index boundaries of consecutive spans under the ceil rule.

    Returns len(durations)+1 cut points starting at 0 and ending at
    n_samples.  The last cut is pinned to n_samples rather than
    recomputed, so a rounding-dirtied cumulative sum cannot shed or
    invent a sample.
    """
    cuts = [0]
    acc = 0.0
    for i, d in enumerate(durations):
        acc += d
        if i == len(durations) - 1:
            cuts.append(n_samples)
        else:
            c = math.ceil(n_samples * acc / total)
            cuts.append(min(max(c, cuts[-1]), n_samples))
    return cuts


def _spans_to_segments(
    spans: list[tuple[int, float]],
    n_samples: int,
    window_total: float,
    grid: Grid,
    grid_period: float,
    local_start_of_window: dict[int, float],
) -> tuple[Segment, ...]:
    """Quantize (symbol offset, duration) spans into Segments.

    ``local_start_of_window[d]`` is the aggressor-local time, within
    symbol d, at which the window opens (may be negative for symbols
    that begin after the window does; only the value at each segment's
    own first sample matters and that one is always in range).
    """
    durations = [dur for _, dur in spans]
    cuts = cut_points(n_samples, durations, window_total)
    segments = []
    elapsed = 0.0
    for (offset, dur), lo, hi in zip(spans, cuts[:-1], cuts[1:]):
        base = local_start_of_window[offset]
        first = base + lo * grid_period
        # lo * period >= elapsed-start of this span in window time, so
        # first >= base + span_start - ... ; clamp only float dirt.
        if first < 0.0:
            if first < -1e-12:
                raise AssertionError(
                    f"segment first-sample time {first} for offset {offset}"
                )
            first = 0.0
        segments.append(
            Segment(
                aggressor_symbol_offset=offset,
                time_offset_into_aggressor=first,
                sample_range=(lo, hi),
                grid=grid,
                duration=dur,
            )
        )
        elapsed += dur
    return tuple(segments)


def _snap(x: float) -> float:
    return 0.0 if abs(x) < _DURATION_EPS else x


def resolve_ue_layout(
    laa: OfdmNumerology, wifi: OfdmNumerology, tau1: float
) -> UeLayout:
    """Lay out one ``laa``-side symbol window against the ``wifi`` stream.

    ``tau1`` is the time from the start of the victim's data part to the
    start of aggressor symbol +1.  Requires ``0 <= tau1 < wifi.t_total``
    and a victim CP no longer than needed for the construction to stay in
    the two-neighbour regime it describes (any CP works; the segment
    lists simply grow).
    """
    t_w = wifi.t_total
    if not 0.0 <= tau1 < t_w:
        raise ValueError(f"tau1 must be in [0, {t_w}), got {tau1}")

    # CP part, built back to front: the junction-straddling symbol 0
    # covers the last min(t_cp, t_w - tau1) seconds of the CP, each
    # earlier symbol a full t_w, and the earliest a remainder.
    last = min(laa.t_cp, _snap(t_w - tau1))
    cp_spans: list[tuple[int, float]] = [(0, last)]
    remaining = _snap(laa.t_cp - last)
    offset = 0
    while remaining > 0.0:
        offset -= 1
        piece = min(t_w, remaining)
        cp_spans.insert(0, (offset, piece))
        remaining = _snap(remaining - piece)
    m_prime = len(cp_spans) - 1

    # Data part, front to back: partial tail of symbol 0 (tau1 seconds),
    # m_whole full symbols, then whatever of the next symbol remains.
    m_whole = max(0, math.floor((laa.t_data - tau1) / t_w))
    tau3 = _snap(laa.t_data - tau1 - m_whole * t_w)
    data_spans: list[tuple[int, float]] = []
    if _snap(tau1) > 0.0:
        data_spans.append((0, tau1))
    data_spans.extend((1 + q, t_w) for q in range(m_whole))
    if tau3 > 0.0:
        data_spans.append((1 + m_whole, tau3))

    # Aggressor symbol d starts at tau1 + (d-1)*t_w on the data-part
    # time axis; the CP window opens t_cp before that axis' zero.
    def start(d: int) -> float:
        return tau1 + (d - 1) * t_w

    cp_base = {d: -laa.t_cp - start(d) for d, _ in cp_spans}
    data_base = {d: -start(d) for d, _ in data_spans}

    cp_segments = _spans_to_segments(
        cp_spans, laa.n_cp, laa.t_cp, Grid.CP_GRID, laa.cp_sample_period, cp_base
    )
    data_segments = _spans_to_segments(
        data_spans,
        laa.n_fft,
        laa.t_data,
        Grid.DATA_GRID,
        laa.data_sample_period,
        data_base,
    )
    return UeLayout(
        tau1=tau1,
        m_prime=m_prime,
        m_whole=m_whole,
        cp_segments=cp_segments,
        data_segments=data_segments,
    )


def resolve_ap_layout(
    laa: OfdmNumerology, wifi: OfdmNumerology, tau: float
) -> ApLayout:
    """Lay out one ``wifi``-side sensing window against ``laa`` symbols.

    The window is one wifi symbol long, sampled on the uniform clock.
    ``tau`` is where aggressor symbol 0 starts relative to the window;
    admissible range [-wifi.t_total, laa.t_total - wifi.t_total).
    """
    t_win = wifi.t_total
    lo, hi = -t_win, laa.t_total - t_win
    if not lo <= tau < hi:
        raise ValueError(f"tau must be in [{lo}, {hi}), got {tau}")

    if tau >= 0.0:
        spans = [(0, t_win)]
        base = {0: tau}
        case = OverlapCase.ONE_SYMBOL
    else:
        head = min(t_win, _snap(-tau))
        spans = [(-1, head)]
        tail = _snap(t_win - head)
        if tail > 0.0:
            spans.append((0, tail))
        base = {-1: laa.t_total - head, 0: -head}
        case = OverlapCase.TWO_SYMBOLS

    segments = _spans_to_segments(
        spans, wifi.n_total, t_win, Grid.UNIFORM_GRID,
        wifi.uniform_sample_period, base,
    )
    return ApLayout(tau=tau, case=case, segments=segments)


def describe_layout(layout: UeLayout | ApLayout) -> str:
    """Human-readable one-segment-per-line dump (CLI inspect, goldens)."""

    def fmt(seg: Segment, part: str) -> str:
        lo, hi = seg.sample_range
        return (
            f"{part:<5} sym{seg.aggressor_symbol_offset:+d}  "
            f"n=[{lo},{hi})  dt={seg.duration * 1e6:.6f}us  "
            f"t0={seg.time_offset_into_aggressor * 1e6:.6f}us"
        )

    lines = []
    if isinstance(layout, UeLayout):
        lines.append(
            f"tau1={layout.tau1 * 1e6:.6f}us  m_prime={layout.m_prime}  "
            f"m_whole={layout.m_whole}"
        )
        lines.extend(fmt(s, "cp") for s in layout.cp_segments)
        lines.extend(fmt(s, "data") for s in layout.data_segments)
    else:
        lines.append(f"tau={layout.tau * 1e6:.6f}us  case={layout.case.value}")
        lines.extend(fmt(s, "win") for s in layout.segments)
    return "\n".join(lines)
