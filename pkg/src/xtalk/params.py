"""OFDM numerology definitions.

A numerology bundles the air-interface constants of one OFDM system:
subcarrier spacing, useful-symbol and cyclic-prefix durations, and the
matching FFT/CP sample counts.  Two built-in presets describe a 20 MHz
LTE-style downlink (15 kHz spacing) and an 802.11a-style Wi-Fi link
(312.5 kHz spacing); everything else in the package is generic over a
pair of these objects.

Durations are seconds, frequencies Hz.  The LTE preset carries the
conventionally rounded durations (66.7 us / 4.7 us), for which
``subcarrier_spacing * t_data`` is 1.0005 rather than 1 and the CP and
data parts tick on slightly different sample clocks.  ``laa_exact``
gives the unrounded variant (2048 and 144 samples of a common
30.72 MHz clock) for checks that require the cyclic-prefix identity to
hold to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

__all__ = [
    "OfdmNumerology",
    "laa_default",
    "laa_exact",
    "wifi_default",
    "downscaled_pair",
    "centered_mask",
    "subcarrier_frequency",
    "validate",
    "numerology_from_text",
    "numerology_to_text",
]


def centered_mask(n_fft: int, n_active: int, include_dc: bool = False) -> np.ndarray:
    """Boolean activity mask for ``n_active`` subcarriers centered on DC.

    With ``include_dc`` false (the usual convention for both systems
    modelled here) the active set is +-1..+-n_active/2 and ``n_active``
    must be even; with it true, DC plus +-1..+-(n_active-1)/2.
    Indices are in DFT bin order (mask[k] answers for bin k).
    """
    if not 0 < n_active <= n_fft:
        raise ValueError(f"n_active must be in [1, {n_fft}], got {n_active}")
    mask = np.zeros(n_fft, dtype=bool)
    if include_dc:
        if n_active % 2 == 0:
            raise ValueError("include_dc requires an odd n_active")
        half = (n_active - 1) // 2
        mask[0] = True
    else:
        if n_active % 2 != 0:
            raise ValueError("n_active must be even when DC is excluded")
        half = n_active // 2
    for k in range(1, half + 1):
        mask[k] = True
        mask[(-k) % n_fft] = True
    return mask


@dataclass(frozen=True)
class OfdmNumerology:
    """Immutable description of one OFDM system's symbol structure."""

    label: str
    subcarrier_spacing: float
    t_data: float
    t_cp: float
    t_total: float
    n_fft: int
    n_cp: int
    guard_mask: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.guard_mask is not None:
            mask = np.asarray(self.guard_mask, dtype=bool)
            object.__setattr__(self, "guard_mask", mask)

    @property
    def n_total(self) -> int:
        return self.n_cp + self.n_fft

    @property
    def cp_sample_period(self) -> float:
        return self.t_cp / self.n_cp

    @property
    def data_sample_period(self) -> float:
        return self.t_data / self.n_fft

    @property
    def uniform_sample_period(self) -> float:
        """Period of the single clock spanning CP plus data."""
        return self.t_total / self.n_total

    @property
    def active_mask(self) -> np.ndarray:
        """guard_mask, or an all-active mask when none was given."""
        if self.guard_mask is not None:
            return self.guard_mask
        return np.ones(self.n_fft, dtype=bool)

    def frequencies(self) -> np.ndarray:
        """All n_fft subcarrier frequencies in DFT bin order."""
        return np.array(
            [subcarrier_frequency(self, k) for k in range(self.n_fft)]
        )


def subcarrier_frequency(num: OfdmNumerology, k: int) -> float:
    """Frequency of DFT bin k, with the upper half folded to negatives."""
    if not 0 <= k < num.n_fft:
        raise ValueError(f"bin index {k} outside [0, {num.n_fft})")
    if k < num.n_fft / 2:
        return k * num.subcarrier_spacing
    return (k - num.n_fft) * num.subcarrier_spacing


def validate(num: OfdmNumerology, spacing_tol: float = 1e-3) -> list[str]:
    """Return a list of violated consistency conditions (empty if sound).

    ``spacing_tol`` bounds the allowed relative deviation of
    subcarrier_spacing * t_data from 1; the rounded LTE preset sits at
    5e-4 and passes the default.
    """
    problems: list[str] = []
    if num.n_fft < 1:
        problems.append("n_fft >= 1")
    if num.n_cp < 0:
        problems.append("n_cp >= 0")
    for name in ("subcarrier_spacing", "t_data", "t_cp", "t_total"):
        if not getattr(num, name) > 0:
            problems.append(f"{name} > 0")
    if num.t_data > 0 and num.t_cp > 0:
        if abs(num.t_total - (num.t_cp + num.t_data)) > 1e-12 * num.t_total:
            problems.append("t_total != t_cp + t_data")
    if num.subcarrier_spacing > 0 and num.t_data > 0:
        product = num.subcarrier_spacing * num.t_data
        if abs(product - 1.0) > spacing_tol:
            problems.append("subcarrier_spacing * t_data != 1")
    if num.guard_mask is not None:
        if len(num.guard_mask) != num.n_fft:
            problems.append("guard_mask length == n_fft")
        elif not num.guard_mask.any():
            problems.append("guard_mask has at least one active subcarrier")
    return problems


def laa_default() -> OfdmNumerology:
    """LTE-style 20 MHz numerology with the conventional rounded durations."""
    return OfdmNumerology(
        label="laa",
        subcarrier_spacing=15e3,
        t_data=66.7e-6,
        t_cp=4.7e-6,
        t_total=71.4e-6,
        n_fft=2048,
        n_cp=144,
        guard_mask=centered_mask(2048, 1200),
    )


def laa_exact() -> OfdmNumerology:
    """LTE-style numerology with exact 30.72 MHz-clock durations.

    t_data = 2048/30.72 MHz (= 1/15 kHz exactly) and t_cp = 144/30.72 MHz,
    so the CP and data parts share one sample clock and
    subcarrier_spacing * t_data == 1 to machine precision.
    """
    clock = 30.72e6
    t_data = 2048 / clock
    t_cp = 144 / clock
    return OfdmNumerology(
        label="laa-exact",
        subcarrier_spacing=15e3,
        t_data=t_data,
        t_cp=t_cp,
        t_total=t_data + t_cp,
        n_fft=2048,
        n_cp=144,
        guard_mask=centered_mask(2048, 1200),
    )


def wifi_default() -> OfdmNumerology:
    """802.11a-style numerology; its nominal durations are already exact."""
    return OfdmNumerology(
        label="wifi",
        subcarrier_spacing=312.5e3,
        t_data=3.2e-6,
        t_cp=0.8e-6,
        t_total=4.0e-6,
        n_fft=64,
        n_cp=16,
        guard_mask=centered_mask(64, 52),
    )


def downscaled_pair() -> tuple[OfdmNumerology, OfdmNumerology]:
    """Small exact numerology pair for fast self-checks and property tests.

    Keeps the qualitative shape of the full-size pair (narrow-spaced victim
    with a CP shorter than the wide-spaced system's symbol, several whole
    aggressor symbols per victim symbol) at a fraction of the matrix sizes.
    Both members use a single sample clock, so exactness-sensitive checks
    apply to them as well.  N_tap must stay <= 3 against the small system.
    """
    narrow_spacing = 120e3
    narrow = OfdmNumerology(
        label="narrow-mini",
        subcarrier_spacing=narrow_spacing,
        t_data=1.0 / narrow_spacing,
        t_cp=8.0 / (narrow_spacing * 64),
        t_total=1.0 / narrow_spacing + 8.0 / (narrow_spacing * 64),
        n_fft=64,
        n_cp=8,
        guard_mask=centered_mask(64, 52),
    )
    wide_spacing = 960e3
    wide = OfdmNumerology(
        label="wide-mini",
        subcarrier_spacing=wide_spacing,
        t_data=1.0 / wide_spacing,
        t_cp=2.0 / (wide_spacing * 8),
        t_total=1.0 / wide_spacing + 2.0 / (wide_spacing * 8),
        n_fft=8,
        n_cp=2,
        guard_mask=None,
    )
    return narrow, wide


_TEXT_FLOAT_KEYS = ("subcarrier_spacing", "t_data", "t_cp", "t_total")
_TEXT_INT_KEYS = ("n_fft", "n_cp", "active_subcarriers")


def numerology_from_text(text: str) -> OfdmNumerology:
    """Parse a numerology from flat ``key = value`` lines.

    Blank lines and ``#`` comments are ignored.  Values are SI units.
    ``active_subcarriers`` is optional and builds a centered, DC-excluded
    guard mask; when absent every bin is active.  Unknown keys are an
    error (named in the message) so typos do not silently vanish.
    """
    fields: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "label":
            fields[key] = value
        elif key in _TEXT_FLOAT_KEYS:
            fields[key] = float(value)
        elif key in _TEXT_INT_KEYS:
            fields[key] = int(value)
        else:
            raise ValueError(f"unknown numerology key {key!r} (line {lineno})")
    required = ("label", *_TEXT_FLOAT_KEYS, "n_fft", "n_cp")
    missing = [k for k in required if k not in fields]
    if missing:
        raise ValueError(f"missing numerology keys: {', '.join(missing)}")
    active = fields.pop("active_subcarriers", None)
    num = OfdmNumerology(**fields)  # type: ignore[arg-type]
    if active is not None:
        num = replace(num, guard_mask=centered_mask(num.n_fft, int(active)))
    return num


def numerology_to_text(num: OfdmNumerology) -> str:
    """Inverse of numerology_from_text (guard mask as a count when centered)."""
    lines = [f"label = {num.label}"]
    for key in _TEXT_FLOAT_KEYS:
        lines.append(f"{key} = {getattr(num, key):.17g}")
    for key in ("n_fft", "n_cp"):
        lines.append(f"{key} = {getattr(num, key)}")
    if num.guard_mask is not None:
        count = int(num.guard_mask.sum())
        if np.array_equal(num.guard_mask, centered_mask(num.n_fft, count)):
            lines.append(f"active_subcarriers = {count}")
        else:
            raise ValueError("only centered DC-excluded guard masks serialize to text")
    return "\n".join(lines) + "\n"
