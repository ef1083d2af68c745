"""Continuous-time waveform of one OFDM symbol.

The whole package rests on a single scalar function: the value of an
OFDM subcarrier, cyclic prefix included, at an arbitrary instant of the
symbol.  A symbol of CP length ``t1`` and useful length ``t2`` carries
subcarrier ``f`` as

    exp(j 2 pi f (t + t2 - t1))   for 0 <= t < t1      (prefix: a copy
                                                        of the tail)
    exp(j 2 pi f (t - t1))        for t1 <= t < t1+t2  (useful part)

so the prefix literally replays the last ``t1`` seconds of the useful
part, and the waveform is continuous at the junction exactly when
``f * t2`` is an integer.  A transmitted symbol is a message-weighted
sum of these over all subcarriers.

Receivers with a different numerology sample this waveform on their own
clocks; those samples are what the matrix builders in
:mod:`xtalk.matrices` tabulate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import OfdmNumerology

__all__ = ["b_eval", "tx_symbol_eval", "SymbolVector"]


def b_eval(t, f, t1: float, t2: float):
    """Subcarrier value at time ``t`` into the symbol (CP start = 0).

    ``t`` and ``f`` may be scalars or broadcastable arrays; the result
    always has unit modulus.  ``t`` outside [0, t1 + t2) is a domain
    error: a caller holding such a time is sampling the wrong symbol,
    which is a layout bug and must not be silently wrapped.
    """
    if t1 < 0 or t2 <= 0:
        raise ValueError(f"need t1 >= 0 and t2 > 0, got t1={t1} t2={t2}")
    t = np.asarray(t)
    if np.any(t < 0) or np.any(t >= t1 + t2):
        bad = t[(t < 0) | (t >= t1 + t2)]
        raise ValueError(
            f"time {np.ravel(bad)[0]} outside symbol span [0, {t1 + t2})"
        )
    f = np.asarray(f)
    shift = np.where(t < t1, t2 - t1, -t1)
    out = np.exp(2j * np.pi * f * (t + shift))
    if out.ndim == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class SymbolVector:
    """Messages of one OFDM symbol: a complex weight per subcarrier."""

    symbol_index: int
    messages: np.ndarray

    def __post_init__(self) -> None:
        msgs = np.asarray(self.messages, dtype=np.complex128)
        if msgs.ndim != 1:
            raise ValueError("messages must be a 1-D complex vector")
        if not np.all(np.isfinite(msgs.view(np.float64))):
            raise ValueError("messages must be finite")
        object.__setattr__(self, "messages", msgs)


def tx_symbol_eval(num: OfdmNumerology, sym: SymbolVector, t):
    """Transmitted waveform of ``sym`` at time(s) ``t`` into the symbol.

    Sums b_eval over every subcarrier of ``num`` weighted by the symbol's
    messages.  This is the brute-force reference the sampling matrices
    are checked against; nothing downstream calls it in a hot path.
    """
    if len(sym.messages) != num.n_fft:
        raise ValueError(
            f"message length {len(sym.messages)} != n_fft {num.n_fft}"
        )
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    freqs = num.frequencies()
    table = b_eval(t_arr[:, None], freqs[None, :], num.t_cp, num.t_data)
    out = table @ sym.messages
    if np.ndim(t) == 0:
        return complex(out[0])
    return out
