"""Sampling matrices: aggressor messages -> victim time samples.

A layout from :mod:`xtalk.timing` says which aggressor symbol each
victim sample hears.  Tabulating the basis function over one segment's
sample instants gives a dense block; stacking the blocks row-wise (by
victim sample) and grouping columns by distinct aggressor symbol gives
the sampling matrix K.  Multiplying K onto the stacked message vectors
reproduces every victim-side time sample of the aggressor waveform.

Column groups matter: the junction-straddling aggressor symbol shows up
both under the victim's CP and at the head of its data part, and both
row blocks must multiply the *same* messages, so they share one column
group.  Entries outside the blocks are exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import SymbolVector, b_eval
from .params import OfdmNumerology
from .timing import ApLayout, Grid, Segment, UeLayout

__all__ = [
    "SamplingMatrix",
    "StackedSymbolVector",
    "build_segment_block",
    "assemble_k_ap_ue",
    "assemble_k_enb_ap",
    "apply",
]


@dataclass(frozen=True)
class SamplingMatrix:
    """Dense K with its column-group directory.

    ``block_map`` lists (aggressor symbol offset, half-open column range)
    in ascending offset order; each distinct offset appears once.
    """

    data: np.ndarray
    block_map: tuple[tuple[int, tuple[int, int]], ...]

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def column_range(self, offset: int) -> tuple[int, int]:
        for off, rng in self.block_map:
            if off == offset:
                return rng
        raise KeyError(f"no column group for aggressor symbol offset {offset}")


@dataclass(frozen=True)
class StackedSymbolVector:
    """Aggressor symbols keyed by offset, offsets strictly increasing."""

    entries: tuple[tuple[int, SymbolVector], ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        offsets = [off for off, _ in entries]
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ValueError(f"offsets must be strictly increasing, got {offsets}")
        object.__setattr__(self, "entries", entries)

    def get(self, offset: int) -> SymbolVector:
        for off, sym in self.entries:
            if off == offset:
                return sym
        raise KeyError(f"missing symbol for aggressor offset {offset}")

    def offsets(self) -> tuple[int, ...]:
        return tuple(off for off, _ in self.entries)


def _segment_sample_times(seg: Segment, grid_period: float, span: float) -> np.ndarray:
    """Aggressor-local instants of the segment's samples, range-checked.

    The layout guarantees every instant lies in [0, span) in exact
    arithmetic; float rounding may land an instant a few ulp outside,
    which is nudged back.  Larger excursions mean a broken layout and
    raise instead of being papered over.
    """
    n = seg.n_samples
    times = seg.time_offset_into_aggressor + np.arange(n) * grid_period
    if n:
        tol = 1e-9 * span
        if times[0] < -tol or times[-1] >= span + tol:
            raise AssertionError(
                f"segment at offset {seg.aggressor_symbol_offset} samples "
                f"[{times[0]}, {times[-1]}] outside [0, {span})"
            )
        np.clip(times, 0.0, np.nextafter(span, 0.0), out=times)
    return times


def build_segment_block(
    seg: Segment, aggressor: OfdmNumerology, grid_period: float
) -> SamplingMatrix:
    """Basis table for one segment: (n_samples x aggressor n_fft)."""
    times = _segment_sample_times(seg, grid_period, aggressor.t_total)
    freqs = aggressor.frequencies()
    data = b_eval(
        times[:, None], freqs[None, :], aggressor.t_cp, aggressor.t_data
    )
    data = np.asarray(data, dtype=np.complex128).reshape(len(times), aggressor.n_fft)
    block_map = ((seg.aggressor_symbol_offset, (0, aggressor.n_fft)),)
    return SamplingMatrix(data=data, block_map=block_map)


def _assemble(
    placed: list[tuple[Segment, int, float]],
    n_rows: int,
    aggressor: OfdmNumerology,
) -> SamplingMatrix:
    """Stack segment blocks into a dense K.

    ``placed`` holds (segment, row base of its grid, grid period).
    Sample-less slivers are skipped; offsets only they reference get no
    column group.
    """
    live = [p for p in placed if p[0].n_samples > 0]
    offsets = sorted({seg.aggressor_symbol_offset for seg, _, _ in live})
    n = aggressor.n_fft
    col_of = {off: i * n for i, off in enumerate(offsets)}
    data = np.zeros((n_rows, n * len(offsets)), dtype=np.complex128)
    for seg, row_base, period in live:
        block = build_segment_block(seg, aggressor, period)
        lo, hi = seg.sample_range
        c0 = col_of[seg.aggressor_symbol_offset]
        data[row_base + lo : row_base + hi, c0 : c0 + n] = block.data
    block_map = tuple((off, (col_of[off], col_of[off] + n)) for off in offsets)
    return SamplingMatrix(data=data, block_map=block_map)


def assemble_k_ap_ue(
    layout: UeLayout, aggressor: OfdmNumerology, victim: OfdmNumerology
) -> SamplingMatrix:
    """K for the narrow-spaced victim's full window (CP rows then data rows)."""
    for seg in layout.cp_segments:
        if seg.grid is not Grid.CP_GRID:
            raise ValueError(f"CP-side segment on unexpected grid {seg.grid}")
    for seg in layout.data_segments:
        if seg.grid is not Grid.DATA_GRID:
            raise ValueError(f"data-side segment on unexpected grid {seg.grid}")
    placed = [
        (seg, 0, victim.cp_sample_period) for seg in layout.cp_segments
    ] + [
        (seg, victim.n_cp, victim.data_sample_period)
        for seg in layout.data_segments
    ]
    return _assemble(placed, victim.n_total, aggressor)


def assemble_k_enb_ap(
    layout: ApLayout, aggressor: OfdmNumerology, victim: OfdmNumerology
) -> SamplingMatrix:
    """K for the wide-spaced victim's sensing window (uniform clock)."""
    placed = [(seg, 0, victim.uniform_sample_period) for seg in layout.segments]
    return _assemble(placed, victim.n_total, aggressor)


def blockwise_apply(
    data: np.ndarray,
    block_map: tuple[tuple[int, tuple[int, int]], ...],
    syms: StackedSymbolVector,
) -> np.ndarray:
    """Multiply a column-grouped matrix onto stacked messages.

    Every row block referencing symbol p reads the same messages, so an
    inconsistent double-feed of a shared symbol is impossible by
    construction.
    """
    out = np.zeros(data.shape[0], dtype=np.complex128)
    for offset, (lo, hi) in block_map:
        sym = syms.get(offset)
        if len(sym.messages) != hi - lo:
            raise ValueError(
                f"symbol at offset {offset} has {len(sym.messages)} messages, "
                f"column group expects {hi - lo}"
            )
        out += data[:, lo:hi] @ sym.messages
    return out


def apply(k: SamplingMatrix, syms: StackedSymbolVector) -> np.ndarray:
    """Victim time samples of the aggressor waveform: K times stacked messages."""
    return blockwise_apply(k.data, k.block_map, syms)
