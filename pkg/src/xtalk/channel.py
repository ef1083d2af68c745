"""Multipath channels and effective frequency-domain channel matrices.

The time-domain channel is a tap vector applied by linear convolution to
the victim-rate sample stream.  Because the victim keeps only its
n_fft-sample data part after CP removal, the convolution against the
full (CP + data) window is a banded matrix; the effective channel is
that band followed by the victim's unitary DFT:

    H_eff = F (Htime K)

The campaign-facing builders never materialize Htime or F.  The band
collapses to a short sum of row-shifted slices of K and the DFT runs as
an FFT; the dense reference path exists so tests can pin the two
against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import SamplingMatrix, StackedSymbolVector, assemble_k_ap_ue, blockwise_apply
from .params import OfdmNumerology
from .timing import Grid, Segment, UeLayout

__all__ = [
    "MultipathChannel",
    "exp_power_profile",
    "draw_channel",
    "build_time_channel",
    "dft_matrix",
    "EffectiveChannel",
    "effective_channel_ap_ue",
    "effective_channel_enb_ap",
    "effective_channel_dense",
    "homogeneous_effective_channel",
]


@dataclass(frozen=True)
class MultipathChannel:
    """Causal FIR channel; taps[0] multiplies the current sample."""

    taps: np.ndarray

    def __post_init__(self) -> None:
        taps = np.asarray(self.taps, dtype=np.complex128)
        if taps.ndim != 1 or taps.size < 1:
            raise ValueError("taps must be a non-empty 1-D vector")
        if not np.all(np.isfinite(taps.view(np.float64))):
            raise ValueError("taps must be finite")
        object.__setattr__(self, "taps", taps)

    @property
    def n_taps(self) -> int:
        return self.taps.size


def exp_power_profile(n_tap: int, decay: float) -> np.ndarray:
    """Geometric per-tap powers decay**(k-1), normalized to sum to 1."""
    if n_tap < 1:
        raise ValueError("n_tap must be >= 1")
    if not 0.0 < decay <= 1.0:
        raise ValueError("decay must be in (0, 1]")
    if decay == 1.0:
        return np.full(n_tap, 1.0 / n_tap)
    powers = decay ** np.arange(n_tap)
    return powers * (1.0 - decay) / (1.0 - decay**n_tap)


def draw_channel(
    profile: np.ndarray,
    rng: np.random.Generator | int | None = None,
    randomize: bool = True,
) -> MultipathChannel:
    """Rayleigh-fade the profile, or freeze taps at sqrt(profile).

    Each random tap is circularly symmetric complex Gaussian with
    variance equal to its profile entry.  randomize=False is the
    deterministic override used by sanity checks (profile [1] gives the
    identity channel).
    """
    profile = np.asarray(profile, dtype=np.float64)
    amps = np.sqrt(profile)
    if not randomize:
        return MultipathChannel(taps=amps.astype(np.complex128))
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    z = gen.standard_normal((2, profile.size))
    return MultipathChannel(taps=(z[0] + 1j * z[1]) / np.sqrt(2.0) * amps)


def build_time_channel(
    channel: MultipathChannel, victim: OfdmNumerology
) -> np.ndarray:
    """Dense banded convolution matrix (n_fft x n_total), CP rows dropped.

    Row r of the product against the window sample stream s equals
    convolve(taps, s)[n_cp + r]: the victim's data-part samples after
    the channel.  Needs every tap to land inside the window, hence
    n_taps <= n_cp + 1.
    """
    taps = channel.taps
    n_fft, n_cp = victim.n_fft, victim.n_cp
    if taps.size > n_cp + 1:
        raise ValueError(
            f"{taps.size} taps exceed the {n_cp + 1} the CP can absorb"
        )
    h = np.zeros((n_fft, victim.n_total), dtype=np.complex128)
    rows = np.arange(n_fft)
    for p in range(1, taps.size + 1):
        h[rows, n_cp + rows - p + 1] = taps[p - 1]
    return h


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix of order n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


@dataclass(frozen=True)
class EffectiveChannel:
    """Frequency-domain channel with the sampling matrix's column groups.

    Rows are victim subcarriers in DFT order; columns inherit the
    sampling matrix's grouping by aggressor symbol offset.
    """

    matrix: np.ndarray
    victim: OfdmNumerology
    aggressor: OfdmNumerology
    block_map: tuple[tuple[int, tuple[int, int]], ...]

    def __post_init__(self) -> None:
        if self.matrix.shape[0] != self.victim.n_fft:
            raise ValueError(
                f"matrix has {self.matrix.shape[0]} rows, victim has "
                f"{self.victim.n_fft} subcarriers"
            )

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def apply(self, syms: StackedSymbolVector) -> np.ndarray:
        """Victim subcarrier observations for the stacked aggressor symbols."""
        return blockwise_apply(self.matrix, self.block_map, syms)


def _banded_effective(
    channel: MultipathChannel, k: SamplingMatrix, victim: OfdmNumerology
) -> np.ndarray:
    """F (Htime K) without forming either matrix."""
    taps = channel.taps
    n_fft, n_cp = victim.n_fft, victim.n_cp
    if k.rows != victim.n_total:
        raise ValueError(
            f"K has {k.rows} rows, victim window holds {victim.n_total} samples"
        )
    if taps.size > n_cp + 1:
        raise ValueError(
            f"{taps.size} taps exceed the {n_cp + 1} the CP can absorb"
        )
    hk = np.zeros((n_fft, k.cols), dtype=np.complex128)
    for p in range(1, taps.size + 1):
        lo = n_cp - p + 1
        hk += taps[p - 1] * k.data[lo : lo + n_fft, :]
    return np.fft.fft(hk, axis=0) / np.sqrt(n_fft)


def effective_channel_ap_ue(
    channel: MultipathChannel,
    k: SamplingMatrix,
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
) -> EffectiveChannel:
    """Effective channel onto the narrow-spaced victim's subcarriers."""
    return EffectiveChannel(
        matrix=_banded_effective(channel, k, laa),
        victim=laa,
        aggressor=wifi,
        block_map=k.block_map,
    )


def effective_channel_enb_ap(
    channel: MultipathChannel,
    k: SamplingMatrix,
    laa: OfdmNumerology,
    wifi: OfdmNumerology,
) -> EffectiveChannel:
    """Effective channel onto the wide-spaced victim's subcarriers."""
    return EffectiveChannel(
        matrix=_banded_effective(channel, k, wifi),
        victim=wifi,
        aggressor=laa,
        block_map=k.block_map,
    )


def effective_channel_dense(
    channel: MultipathChannel,
    k: SamplingMatrix,
    victim: OfdmNumerology,
    aggressor: OfdmNumerology,
) -> EffectiveChannel:
    """Literal F @ Htime @ K; the slow cross-check for the banded path."""
    f = dft_matrix(victim.n_fft)
    h = build_time_channel(channel, victim)
    return EffectiveChannel(
        matrix=f @ (h @ k.data),
        victim=victim,
        aggressor=aggressor,
        block_map=k.block_map,
    )


def _synchronous_layout(num: OfdmNumerology) -> UeLayout:
    """Degenerate aligned layout: one aggressor symbol fills the window."""
    cp = Segment(
        aggressor_symbol_offset=0,
        time_offset_into_aggressor=0.0,
        sample_range=(0, num.n_cp),
        grid=Grid.CP_GRID,
        duration=num.t_cp,
    )
    data = Segment(
        aggressor_symbol_offset=0,
        time_offset_into_aggressor=num.t_cp,
        sample_range=(0, num.n_fft),
        grid=Grid.DATA_GRID,
        duration=num.t_data,
    )
    return UeLayout(
        tau1=0.0,
        m_prime=0,
        m_whole=0,
        cp_segments=(cp,),
        data_segments=(data,),
    )


def homogeneous_effective_channel(
    channel: MultipathChannel, num: OfdmNumerology
) -> EffectiveChannel:
    """Same-system, symbol-aligned effective channel.

    Scaled so the identity channel gives the identity matrix; the
    diagonal is then the n_fft-point DFT of the zero-padded taps.
    Exactly diagonal only when the numerology's CP clock equals its data
    clock, so use the exact presets when asserting diagonality.
    """
    k = assemble_k_ap_ue(_synchronous_layout(num), num, num)
    data = _banded_effective(channel, k, num) / np.sqrt(num.n_fft)
    return EffectiveChannel(
        matrix=data, victim=num, aggressor=num, block_map=k.block_map
    )
