"""Serialization: matrices, interference maps, SVG heatmaps, manifests.

Every writer is deterministic: fixed field order, fixed float formatting
(%.17g, which round-trips IEEE doubles), no timestamps.  Re-running a
campaign with the same seed must reproduce every artifact byte for
byte.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .montecarlo import InterferenceMap

__all__ = [
    "format_complex",
    "matrix_to_csv",
    "matrix_from_csv",
    "matrix_to_binary",
    "matrix_from_binary",
    "map_to_csv",
    "map_values_from_csv",
    "map_to_json",
    "render_heatmap_svg",
    "write_heatmap_svg",
    "file_sha256",
    "config_sha256",
    "write_manifest",
]

_BIN_HEADER = struct.Struct("<QQ")


def _matrix_data(obj) -> np.ndarray:
    data = getattr(obj, "matrix", None)
    if data is None:
        data = getattr(obj, "data", obj)
    data = np.asarray(data)
    if data.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {data.shape}")
    return data


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def matrix_to_csv(obj, path: str | Path) -> None:
    """One matrix row per line, cells like 1.5+0.25j."""
    data = _matrix_data(obj).astype(np.complex128)
    lines = [
        ",".join(format_complex(z) for z in row) for row in data
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def matrix_from_csv(path: str | Path) -> np.ndarray:
    rows = [
        [complex(cell) for cell in line.split(",")]
        for line in Path(path).read_text().splitlines()
        if line
    ]
    return np.array(rows, dtype=np.complex128)


def matrix_to_binary(obj, path: str | Path) -> None:
    """Header: rows, cols as little-endian u64; then row-major c16 data."""
    data = _matrix_data(obj).astype(np.complex128)
    with open(path, "wb") as fh:
        fh.write(_BIN_HEADER.pack(*data.shape))
        fh.write(np.ascontiguousarray(data).astype("<c16").tobytes())


def matrix_from_binary(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    rows, cols = _BIN_HEADER.unpack_from(raw)
    data = np.frombuffer(raw, dtype="<c16", offset=_BIN_HEADER.size)
    if data.size != rows * cols:
        raise ValueError(
            f"payload holds {data.size} values, header promises {rows * cols}"
        )
    return data.reshape(rows, cols).astype(np.complex128)


def map_to_csv(imap: InterferenceMap, path: str | Path) -> None:
    """Victim rows x aggressor cols, linear power, %.17g cells."""
    lines = [
        ",".join(f"{v:.17g}" for v in row) for row in imap.values
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def map_values_from_csv(path: str | Path) -> np.ndarray:
    rows = [
        [float(cell) for cell in line.split(",")]
        for line in Path(path).read_text().splitlines()
        if line
    ]
    return np.array(rows, dtype=np.float64)


def map_to_json(imap: InterferenceMap, path: str | Path) -> None:
    doc = {
        "direction": imap.direction.value,
        "n_draws": imap.n_draws,
        "config": imap.config,
        "row_frequencies_hz": [float(f) for f in imap.row_frequencies],
        "col_frequencies_hz": [float(f) for f in imap.col_frequencies],
        "values": [[float(v) for v in row] for row in imap.values],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


# heatmap color ramp, dark-to-bright over normalized dB
_RAMP = (
    (0.00, (13, 8, 135)),
    (0.25, (126, 3, 168)),
    (0.50, (204, 71, 120)),
    (0.75, (248, 149, 64)),
    (1.00, (240, 249, 33)),
)


def _ramp_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_RAMP, _RAMP[1:]):
        if t <= t1:
            w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            rgb = tuple(round(a + w * (b - a)) for a, b in zip(c0, c1))
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*_RAMP[-1][1])


def render_heatmap_svg(
    imap: InterferenceMap, title: str = "", db_floor: float = -50.0
) -> str:
    """Hand-rolled SVG heatmap, dB color scale relative to the map peak."""
    if db_floor >= 0:
        raise ValueError("db_floor must be negative")
    values = imap.values
    n_rows, n_cols = values.shape
    peak = values.max()
    if peak <= 0:
        level = np.zeros_like(values)
    else:
        with np.errstate(divide="ignore"):
            db = 10.0 * np.log10(values / peak)
        level = np.clip(1.0 - db / db_floor, 0.0, 1.0)

    plot_w, plot_h = 800.0, 500.0
    ml, mt, mr, mb = 110.0, 50.0, 110.0, 70.0
    width, height = ml + plot_w + mr, mt + plot_h + mb
    sx, sy = plot_w / n_cols, plot_h / n_rows

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:g} {height:g}" '
        f'font-family="sans-serif" font-size="14">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        f'<g transform="translate({ml:g},{mt:g}) scale({sx:.8g},{sy:.8g})">',
    ]
    # row 0 holds the lowest frequency; draw it at the bottom
    for r in range(n_rows):
        y = n_rows - 1 - r
        row = level[r]
        c = 0
        while c < n_cols:
            color = _ramp_color(row[c])
            run = 1
            while c + run < n_cols and _ramp_color(row[c + run]) == color:
                run += 1
            parts.append(
                f'<rect x="{c}" y="{y}" width="{run}" height="1" fill="{color}"/>'
            )
            c += run
    parts.append("</g>")

    # frame
    parts.append(
        f'<rect x="{ml:g}" y="{mt:g}" width="{plot_w:g}" height="{plot_h:g}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    if title:
        parts.append(
            f'<text x="{ml + plot_w / 2:g}" y="{mt - 16:g}" text-anchor="middle" '
            f'font-size="18">{title}</text>'
        )

    def mhz(f: float) -> str:
        return f"{f / 1e6:.3g}"

    n_ticks = 5
    col_f = imap.col_frequencies
    row_f = imap.row_frequencies
    for i in range(n_ticks):
        frac = i / (n_ticks - 1)
        ci = round(frac * (n_cols - 1))
        x = ml + (ci + 0.5) * sx
        parts.append(
            f'<line x1="{x:.6g}" y1="{mt + plot_h:g}" x2="{x:.6g}" '
            f'y2="{mt + plot_h + 6:g}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.6g}" y="{mt + plot_h + 24:g}" text-anchor="middle">'
            f"{mhz(col_f[ci])}</text>"
        )
        ri = round(frac * (n_rows - 1))
        y = mt + plot_h - (ri + 0.5) * sy
        parts.append(
            f'<line x1="{ml - 6:g}" y1="{y:.6g}" x2="{ml:g}" y2="{y:.6g}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{ml - 10:g}" y="{y + 5:.6g}" text-anchor="end">'
            f"{mhz(row_f[ri])}</text>"
        )
    parts.append(
        f'<text x="{ml + plot_w / 2:g}" y="{height - 16:g}" text-anchor="middle">'
        "aggressor subcarrier frequency (MHz)</text>"
    )
    parts.append(
        f'<text transform="translate({24:g},{mt + plot_h / 2:g}) rotate(-90)" '
        f'text-anchor="middle">victim subcarrier frequency (MHz)</text>'
    )

    # color bar
    bar_x, bar_w, bar_n = ml + plot_w + 30.0, 18.0, 64
    seg_h = plot_h / bar_n
    for i in range(bar_n):
        t = 1.0 - i / (bar_n - 1)
        parts.append(
            f'<rect x="{bar_x:g}" y="{mt + i * seg_h:.6g}" width="{bar_w:g}" '
            f'height="{seg_h + 0.5:.6g}" fill="{_ramp_color(t)}"/>'
        )
    parts.append(
        f'<rect x="{bar_x:g}" y="{mt:g}" width="{bar_w:g}" height="{plot_h:g}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    for frac, label in ((0.0, "0 dB"), (0.5, f"{db_floor / 2:g} dB"), (1.0, f"{db_floor:g} dB")):
        y = mt + frac * plot_h
        parts.append(
            f'<text x="{bar_x + bar_w + 6:g}" y="{y + 5:.6g}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_heatmap_svg(
    imap: InterferenceMap,
    path: str | Path,
    title: str = "",
    db_floor: float = -50.0,
) -> None:
    Path(path).write_text(render_heatmap_svg(imap, title=title, db_floor=db_floor))


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_sha256(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_manifest(
    path: str | Path,
    scenario_name: str,
    config: dict,
    files: dict[str, str],
    library_version: str,
) -> None:
    """Run record: seed, config and its hash, artifact hashes."""
    doc = {
        "scenario": scenario_name,
        "master_seed": config.get("master_seed"),
        "config": config,
        "config_sha256": config_sha256(config),
        "library_version": library_version,
        "files": files,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
