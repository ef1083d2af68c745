"""Command-line front end: run campaigns, verify invariants, inspect layouts.

Scenario files are flat key=value text with [section] headers — the same
dialect as the numerology config files, parseable from any language's
stdlib.  Unknown keys are hard errors so a typo can never silently fall
back to a default.

Exit codes: 0 success, 1 check or runtime failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .exports import (
    file_sha256,
    map_to_csv,
    map_to_json,
    write_heatmap_svg,
    write_manifest,
)
from .matrices import assemble_k_ap_ue, assemble_k_enb_ap
from .montecarlo import (
    CampaignConfig,
    Direction,
    crop_guards,
    run_campaign,
)
from .params import (
    OfdmNumerology,
    laa_default,
    laa_exact,
    numerology_from_text,
    wifi_default,
)
from .timing import describe_layout, resolve_ap_layout, resolve_ue_layout
from .verify import run_checks

__all__ = ["main", "Scenario", "parse_scenario_text", "builtin_scenario"]


@dataclass(frozen=True)
class Scenario:
    name: str
    laa: OfdmNumerology
    wifi: OfdmNumerology
    config: CampaignConfig
    export_csv: bool = True
    export_json: bool = True
    export_svg: bool = True


_BUILTINS = {
    "fig4a": dict(direction=Direction.ENB_TO_AP, n_draws=500, master_seed=1234),
    "fig4b": dict(direction=Direction.AP_TO_UE, n_draws=500, master_seed=1234),
}


def builtin_scenario(name: str) -> Scenario:
    try:
        kwargs = _BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; built-ins: {', '.join(sorted(_BUILTINS))}"
        ) from None
    return Scenario(
        name=name,
        laa=laa_default(),
        wifi=wifi_default(),
        config=CampaignConfig(**kwargs),
    )


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"key {key!r} expects a boolean, got {value!r}")


def _parse_sections(text: str) -> dict[str, dict[str, str]]:
    sections: dict[str, dict[str, str]] = {"": {}}
    current = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        sections[current][key.strip()] = value.strip()
    return sections


def _numerology_from_section(
    which: str, section: dict[str, str], base_dir: Path
) -> OfdmNumerology:
    presets = (
        {"default": laa_default, "exact": laa_exact}
        if which == "laa"
        else {"default": wifi_default}
    )
    extra = set(section) - {"preset", "file"}
    if extra:
        raise ValueError(f"unknown config key {sorted(extra)[0]!r} in [{which}]")
    if "preset" in section and "file" in section:
        raise ValueError(f"[{which}] sets both preset and file")
    if "file" in section:
        return numerology_from_text((base_dir / section["file"]).read_text())
    preset = section.get("preset", "default")
    if preset not in presets:
        raise ValueError(
            f"unknown {which} preset {preset!r}; choose from {sorted(presets)}"
        )
    return presets[preset]()


_CAMPAIGN_KEYS = {
    "direction",
    "draws",
    "seed",
    "n_tap",
    "decay",
    "tau_min",
    "tau_max",
    "aggregate",
    "fresh_channel_per_draw",
    "randomize_channel",
}


def parse_scenario_text(text: str, base_dir: Path | None = None) -> Scenario:
    base_dir = Path(".") if base_dir is None else base_dir
    sections = _parse_sections(text)
    known_sections = {"", "campaign", "laa", "wifi", "output"}
    for sec in sections:
        if sec not in known_sections:
            raise ValueError(f"unknown config section [{sec}]")

    top = sections.get("", {})
    extra = set(top) - {"name"}
    if extra:
        raise ValueError(f"unknown config key {sorted(extra)[0]!r}")
    name = top.get("name", "scenario")

    camp = sections.get("campaign", {})
    extra = set(camp) - _CAMPAIGN_KEYS
    if extra:
        raise ValueError(f"unknown config key {sorted(extra)[0]!r} in [campaign]")
    if "direction" not in camp:
        raise ValueError("[campaign] must set direction (enb-ap or ap-ue)")
    try:
        direction = Direction(camp["direction"])
    except ValueError:
        raise ValueError(
            f"direction must be 'enb-ap' or 'ap-ue', got {camp['direction']!r}"
        ) from None
    config = CampaignConfig(
        direction=direction,
        n_draws=int(camp.get("draws", "500")),
        master_seed=int(camp.get("seed", "1234")),
        n_tap=int(camp.get("n_tap", "16")),
        decay=float(camp.get("decay", "0.7")),
        tau_min=float(camp["tau_min"]) if "tau_min" in camp else None,
        tau_max=float(camp["tau_max"]) if "tau_max" in camp else None,
        fresh_channel_per_draw=_parse_bool(
            "fresh_channel_per_draw", camp.get("fresh_channel_per_draw", "true")
        ),
        randomize_channel=_parse_bool(
            "randomize_channel", camp.get("randomize_channel", "true")
        ),
        aggregate=camp.get("aggregate", "sum"),
    )

    laa = _numerology_from_section("laa", sections.get("laa", {}), base_dir)
    wifi = _numerology_from_section("wifi", sections.get("wifi", {}), base_dir)

    out = sections.get("output", {})
    extra = set(out) - {"csv", "json", "svg"}
    if extra:
        raise ValueError(f"unknown config key {sorted(extra)[0]!r} in [output]")
    return Scenario(
        name=name,
        laa=laa,
        wifi=wifi,
        config=config,
        export_csv=_parse_bool("csv", out.get("csv", "true")),
        export_json=_parse_bool("json", out.get("json", "true")),
        export_svg=_parse_bool("svg", out.get("svg", "true")),
    )


def _load_scenario(ref: str) -> Scenario:
    if ref in _BUILTINS:
        return builtin_scenario(ref)
    path = Path(ref)
    if not path.exists():
        raise ValueError(
            f"scenario {ref!r} is neither a built-in "
            f"({', '.join(sorted(_BUILTINS))}) nor an existing file"
        )
    return parse_scenario_text(path.read_text(), base_dir=path.parent)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    config = scenario.config
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.draws is not None:
        if args.draws < 1:
            raise ValueError("n_draws must be positive")
        config = replace(config, n_draws=args.draws)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    imap = run_campaign(config, scenario.laa, scenario.wifi)
    cropped = crop_guards(
        imap, scenario.laa.active_mask, scenario.wifi.active_mask
    )

    files: dict[str, str] = {}
    if scenario.export_csv:
        name = f"{scenario.name}.csv"
        map_to_csv(cropped, out_dir / name)
        files[name] = file_sha256(out_dir / name)
    if scenario.export_json:
        name = f"{scenario.name}.json"
        map_to_json(cropped, out_dir / name)
        files[name] = file_sha256(out_dir / name)
    if scenario.export_svg:
        name = f"{scenario.name}.svg"
        title = f"{scenario.name}: mean interference power (dB rel. peak)"
        write_heatmap_svg(cropped, out_dir / name, title=title)
        files[name] = file_sha256(out_dir / name)
    write_manifest(
        out_dir / "manifest.json",
        scenario.name,
        cropped.config,
        files,
        __version__,
    )
    print(f"wrote {', '.join(sorted(files))} and manifest.json to {out_dir}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_checks(fast=args.fast)
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
    return 0 if all(r.passed for r in results) else 1


def cmd_inspect(args: argparse.Namespace) -> int:
    laa = laa_default()
    wifi = wifi_default()
    direction = Direction(args.direction)
    if direction is Direction.AP_TO_UE:
        layout = resolve_ue_layout(laa, wifi, args.tau)
        k = assemble_k_ap_ue(layout, wifi, laa)
        print(f"direction: {direction.value}  tau1 = {args.tau * 1e6:.6f} us")
        print(
            f"M' = {layout.m_prime} CP-straddling symbols, "
            f"M = {layout.m_whole} whole aggressor symbols in the data part"
        )
    else:
        layout = resolve_ap_layout(laa, wifi, args.tau)
        k = assemble_k_enb_ap(layout, laa, wifi)
        print(f"direction: {direction.value}  tau = {args.tau * 1e6:.6f} us")
        print(f"case: {layout.case.name}")
    print(describe_layout(layout))
    print(
        f"K: {k.rows} rows x {k.cols} cols in {len(k.block_map)} column groups "
        f"(offsets {[off for off, _ in k.block_map]})"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xtalk",
        description="Cross-numerology OFDM interference analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a campaign and export its artifacts")
    run_p.add_argument(
        "--scenario",
        default="fig4a",
        help="built-in scenario name or path to a scenario file",
    )
    run_p.add_argument("--out", default=".", help="output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override master seed")
    run_p.add_argument("--draws", type=int, default=None, help="override draw count")
    run_p.set_defaults(func=cmd_run)

    verify_p = sub.add_parser("verify", help="run the built-in invariant checks")
    verify_p.add_argument(
        "--fast", action="store_true", help="smaller grids and fewer draws"
    )
    verify_p.set_defaults(func=cmd_verify)

    inspect_p = sub.add_parser("inspect", help="print the layout for one offset")
    # stock argparse treats "-2e-6" as an option; widen its negative-number
    # matcher so scientific notation passes through as a value
    inspect_p._negative_number_matcher = re.compile(
        r"^-\d+$|^-\d*\.\d+$|^-\d+(\.\d*)?[eE][-+]?\d+$"
    )
    inspect_p.add_argument(
        "--tau", type=float, required=True, help="timing offset in seconds"
    )
    inspect_p.add_argument(
        "--direction", choices=[d.value for d in Direction], required=True
    )
    inspect_p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
