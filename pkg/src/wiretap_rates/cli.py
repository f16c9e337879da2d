"""Command-line interface: point evaluations, sweeps, audits, DM search.

Scenario configs are JSON with a ``kind`` selecting the model and blocks of
dataclass fields; unknown keys anywhere are rejected.  Exit codes: 0 on
success, 1 on configuration problems, 2 when a numerical audit fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, fields, replace
from importlib.resources import files
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .audit import (
    DEFAULT_DRAWS,
    DEFAULT_SEED,
    format_report,
    rows_to_csv,
    run_audit,
)
from .core import DomainError
from .discrete import DMChannel, sup_inf_rate
from .gaussian import (
    GeneralGaussianParams,
    OrthogonalGaussianParams,
    rate_noncolluding,
    rate_orthogonal,
    rate_perfectcolluding,
    strip_jamming,
)
from .optimize import OptimizationResult, SearchConfig, optimize_general

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "load_config",
    "sweep_values",
    "general_sweep_table",
    "orthogonal_sweep_table",
    "dm_sweep_table",
    "write_csv",
    "render_svg",
    "main",
]

_KINDS = ("orthogonal-gaussian", "general-gaussian", "dm")

_BLOCKS_BY_KIND = {
    "orthogonal-gaussian": {"orthogonal", "sweep", "output"},
    "general-gaussian": {"general", "orthogonal", "sweep", "optimizer", "output"},
    "dm": {"dm", "sweep", "output"},
}

_GENERAL_COLUMNS = ("R_nc", "R_pc", "R_og", "R_njg", "R_g")
_ORTHOGONAL_COLUMNS = ("R_nc", "R_pc", "R_og")


class ConfigError(ValueError):
    """A scenario file is malformed or inconsistent."""


@dataclass(frozen=True)
class SweepSettings:
    parameter: str = "P_l"
    start: float = 0.0
    stop: float = 20.0
    step: float = 0.2

    def __post_init__(self) -> None:
        if self.step <= 0.0:
            raise ConfigError(f"sweep step must be positive, got {self.step!r}")
        if self.stop < self.start:
            raise ConfigError("sweep stop must be >= start")


@dataclass(frozen=True)
class DMSettings:
    channel_file: str
    grid_resolution: float
    max_evaluations: int = 2_000_000


@dataclass(frozen=True)
class OutputSettings:
    csv: str | None = None
    svg: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    orthogonal: OrthogonalGaussianParams | None = None
    general: GeneralGaussianParams | None = None
    dm: DMSettings | None = None
    dm_channel: DMChannel | None = None
    sweep: SweepSettings | None = None
    optimizer: SearchConfig = SearchConfig()
    output: OutputSettings = OutputSettings()


def _require_number(block: str, key: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{block}.{key} must be a number, got {value!r}")
    return float(value)


def _build_dataclass(cls, raw: object, block: str):
    """Instantiate a config dataclass from a JSON object, strictly.

    Every key must name a field; fields without defaults must be present.
    """
    if not isinstance(raw, dict):
        raise ConfigError(f"block '{block}' must be an object")
    spec_fields = {f.name: f for f in fields(cls)}
    unknown = set(raw) - set(spec_fields)
    if unknown:
        raise ConfigError(
            f"unknown key '{sorted(unknown)[0]}' in block '{block}'"
        )
    kwargs = {}
    for name, f in spec_fields.items():
        if name in raw:
            v = raw[name]
            if f.type in ("float", "int"):
                v = _require_number(block, name, v)
                if f.type == "int":
                    if v != int(v):
                        raise ConfigError(f"{block}.{name} must be an integer")
                    v = int(v)
            kwargs[name] = v
        elif f.default is dataclasses.MISSING and \
                f.default_factory is dataclasses.MISSING:
            raise ConfigError(f"block '{block}' is missing required key '{name}'")
    try:
        return cls(**kwargs)
    except (DomainError, TypeError) as exc:
        raise ConfigError(f"block '{block}': {exc}") from None


def _resolve_config_text(spec: str) -> tuple[str, object]:
    """Return the config text and the directory to resolve files against.

    ``spec`` is tried as a filesystem path first, then as the name of a
    bundled config (with or without the .json suffix).
    """
    p = Path(spec)
    if p.is_file():
        return p.read_text(), p.parent
    root = files("wiretap_rates") / "configs"
    for name in (spec, spec + ".json"):
        cand = root / name
        if cand.is_file():
            return cand.read_text(), root
    raise ConfigError(
        f"config '{spec}' is neither a file nor a bundled config name"
    )


def _load_channel(dm: DMSettings, base: object) -> DMChannel:
    p = Path(dm.channel_file)
    if p.is_file():
        text = p.read_text()
    else:
        cand = base / dm.channel_file  # type: ignore[operator]
        if not cand.is_file():
            raise ConfigError(f"channel file '{dm.channel_file}' not found")
        text = cand.read_text()
    try:
        return DMChannel.from_text(text)
    except DomainError as exc:
        raise ConfigError(f"channel file '{dm.channel_file}': {exc}") from None


def load_config(spec: str) -> ScenarioConfig:
    """Load and validate a scenario, from a path or a bundled name."""
    text, base = _resolve_config_text(spec)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config '{spec}' is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    kind = raw.get("kind")
    if kind not in _KINDS:
        raise ConfigError(f"kind must be one of {_KINDS}, got {kind!r}")
    allowed = _BLOCKS_BY_KIND[kind] | {"kind"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(
            f"key '{sorted(unknown)[0]}' is not allowed for kind '{kind}'"
        )

    orthogonal = general = dm = channel = None
    if kind in ("orthogonal-gaussian", "general-gaussian"):
        if "orthogonal" not in raw:
            raise ConfigError(f"kind '{kind}' requires an 'orthogonal' block")
        orthogonal = _build_dataclass(
            OrthogonalGaussianParams, raw["orthogonal"], "orthogonal"
        )
    if kind == "general-gaussian":
        if "general" not in raw:
            raise ConfigError("kind 'general-gaussian' requires a 'general' block")
        general = _build_dataclass(GeneralGaussianParams, raw["general"], "general")
    if kind == "dm":
        if "dm" not in raw:
            raise ConfigError("kind 'dm' requires a 'dm' block")
        dm = _build_dataclass(DMSettings, raw["dm"], "dm")
        if not isinstance(dm.channel_file, str):
            raise ConfigError("dm.channel_file must be a string")
        channel = _load_channel(dm, base)

    sweep = None
    if "sweep" in raw:
        sweep = _build_dataclass(SweepSettings, raw["sweep"], "sweep")
        if not isinstance(sweep.parameter, str):
            raise ConfigError("sweep.parameter must be a string")
        targets = [b for b in (orthogonal, general, dm) if b is not None]
        if not any(hasattr(b, sweep.parameter) for b in targets):
            raise ConfigError(
                f"sweep.parameter '{sweep.parameter}' is not a model field"
            )

    optimizer = SearchConfig()
    if "optimizer" in raw:
        optimizer = _build_dataclass(SearchConfig, raw["optimizer"], "optimizer")

    output = OutputSettings()
    if "output" in raw:
        output = _build_dataclass(OutputSettings, raw["output"], "output")
        for key in ("csv", "svg"):
            v = getattr(output, key)
            if v is not None and not isinstance(v, str):
                raise ConfigError(f"output.{key} must be a string path")

    return ScenarioConfig(
        kind=kind,
        orthogonal=orthogonal,
        general=general,
        dm=dm,
        dm_channel=channel,
        sweep=sweep,
        optimizer=optimizer,
        output=output,
    )


# ---------------------------------------------------------------------------
# Evaluation helpers


def sweep_values(sweep: SweepSettings) -> list[float]:
    """start, start+step, ... through stop; the count tolerates float drift."""
    n = int(math.floor((sweep.stop - sweep.start) / sweep.step + 1e-6)) + 1
    return [sweep.start + i * sweep.step for i in range(n)]


def _with_param(block, name: str, value: float):
    if block is not None and hasattr(block, name):
        return replace(block, **{name: value})
    return block


def general_point(
    og: OrthogonalGaussianParams,
    gen: GeneralGaussianParams,
    cfg: SearchConfig,
) -> tuple[dict[str, float], OptimizationResult, OptimizationResult]:
    """All five rates at one parameter point (worst-case correlations)."""
    res_njg = optimize_general(strip_jamming(gen), cfg)
    res_g = optimize_general(gen, cfg)
    row = {
        "R_nc": rate_noncolluding(og),
        "R_pc": rate_perfectcolluding(og),
        "R_og": rate_orthogonal(og).secure_rate,
        "R_njg": res_njg.rate.secure_rate,
        "R_g": res_g.rate.secure_rate,
    }
    return row, res_njg, res_g


def general_sweep_table(
    cfg: ScenarioConfig,
) -> tuple[list[float], dict[str, list[float]]]:
    assert cfg.sweep is not None and cfg.orthogonal is not None
    assert cfg.general is not None
    xs = sweep_values(cfg.sweep)
    table: dict[str, list[float]] = {c: [] for c in _GENERAL_COLUMNS}
    for x in xs:
        og = _with_param(cfg.orthogonal, cfg.sweep.parameter, x)
        gen = _with_param(cfg.general, cfg.sweep.parameter, x)
        row, _, _ = general_point(og, gen, cfg.optimizer)
        for c in _GENERAL_COLUMNS:
            table[c].append(row[c])
    return xs, table


def orthogonal_sweep_table(
    cfg: ScenarioConfig,
) -> tuple[list[float], dict[str, list[float]]]:
    assert cfg.sweep is not None and cfg.orthogonal is not None
    xs = sweep_values(cfg.sweep)
    table: dict[str, list[float]] = {c: [] for c in _ORTHOGONAL_COLUMNS}
    for x in xs:
        og = _with_param(cfg.orthogonal, cfg.sweep.parameter, x)
        table["R_nc"].append(rate_noncolluding(og))
        table["R_pc"].append(rate_perfectcolluding(og))
        table["R_og"].append(rate_orthogonal(og).secure_rate)
    return xs, table


def dm_sweep_table(
    cfg: ScenarioConfig,
) -> tuple[list[float], dict[str, list[float]]]:
    """Sup-inf rate per swept value of a search setting, e.g. grid_resolution."""
    assert cfg.sweep is not None and cfg.dm is not None
    assert cfg.dm_channel is not None
    xs = sweep_values(cfg.sweep)
    rates: list[float] = []
    for x in xs:
        dm = _with_param(cfg.dm, cfg.sweep.parameter, x)
        res = sup_inf_rate(cfg.dm_channel, dm.grid_resolution,
                           dm.max_evaluations)
        rates.append(res.rate)
    return xs, {"R_dm": rates}


def write_csv(path: str, param: str, xs: Sequence[float],
              table: dict[str, list[float]]) -> None:
    """Six-decimal CSV; first column named after the swept parameter."""
    cols = list(table)
    lines = [",".join([param] + cols)]
    for i, x in enumerate(xs):
        lines.append(",".join(
            ["%.6f" % x] + ["%.6f" % table[c][i] for c in cols]
        ))
    Path(path).write_text("\n".join(lines) + "\n")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def render_svg(param: str, xs: Sequence[float],
               table: dict[str, list[float]], title: str) -> str:
    """Minimal self-contained line chart, one polyline per column."""
    width, height = 640.0, 420.0
    ml, mr, mt, mb = 62.0, 20.0, 34.0, 48.0
    pw, ph = width - ml - mr, height - mt - mb
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
    if x_hi <= x_lo:
        x_lo, x_hi = x_lo - 0.5, x_lo + 0.5
    y_hi = max((max(v) for v in table.values() if v), default=1.0)
    y_hi = y_hi * 1.05 if y_hi > 0.0 else 1.0

    def px(x: float) -> float:
        return ml + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y: float) -> float:
        return mt + (1.0 - y / y_hi) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(title)}</text>',
    ]
    axis = 'stroke="#333" stroke-width="1"'
    parts.append(f'<line x1="{ml}" y1="{mt + ph:.1f}" x2="{ml + pw:.1f}" '
                 f'y2="{mt + ph:.1f}" {axis}/>')
    parts.append(f'<line x1="{ml}" y1="{mt:.1f}" x2="{ml}" '
                 f'y2="{mt + ph:.1f}" {axis}/>')
    for i in range(6):
        xv = x_lo + (x_hi - x_lo) * i / 5.0
        yv = y_hi * i / 5.0
        parts.append(
            f'<line x1="{px(xv):.1f}" y1="{mt + ph:.1f}" x2="{px(xv):.1f}" '
            f'y2="{mt + ph + 4:.1f}" {axis}/>'
            f'<text x="{px(xv):.1f}" y="{mt + ph + 18:.1f}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f'{xv:.3g}</text>'
        )
        parts.append(
            f'<line x1="{ml - 4:.1f}" y1="{py(yv):.1f}" x2="{ml:.1f}" '
            f'y2="{py(yv):.1f}" {axis}/>'
            f'<text x="{ml - 8:.1f}" y="{py(yv) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.3g}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2:.1f}" y="{height - 10:.1f}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">'
        f'{escape(param)}</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {mt + ph / 2:.1f})">rate (bits/use)</text>'
    )
    for k, (name, ys) in enumerate(table.items()):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        ly = mt + 14 + 16 * k
        parts.append(
            f'<rect x="{ml + pw - 86:.1f}" y="{ly - 9:.1f}" width="10" '
            f'height="10" fill="{color}"/>'
            f'<text x="{ml + pw - 72:.1f}" y="{ly:.1f}" '
            f'font-family="sans-serif" font-size="12">{escape(name)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_point(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if cfg.kind == "orthogonal-gaussian":
        assert cfg.orthogonal is not None
        b = rate_orthogonal(cfg.orthogonal)
        print(f"kind: {cfg.kind}")
        print(f"R_nc  = {rate_noncolluding(cfg.orthogonal):.6f}")
        print(f"R_pc  = {rate_perfectcolluding(cfg.orthogonal):.6f}")
        print(f"R_og  = {b.secure_rate:.6f}  (main {b.main_rate:.6f}, "
              f"joint leak {b.leak_joint:.6f}, single leaks "
              f"{b.leak_single_1:.6f} / {b.leak_single_2:.6f})")
        return 0
    if cfg.kind == "general-gaussian":
        assert cfg.orthogonal is not None and cfg.general is not None
        row, res_njg, res_g = general_point(
            cfg.orthogonal, cfg.general, cfg.optimizer
        )
        print(f"kind: {cfg.kind}")
        for c in _GENERAL_COLUMNS:
            print(f"{c:5s} = {row[c]:.6f}")
        for label, res in (("R_njg", res_njg), ("R_g", res_g)):
            r = res.rho_star
            print(f"{label} worst-case rho = ({r.rho_1:+.4f}, {r.rho_2:+.4f}, "
                  f"{r.rho_12:+.4f})  evaluations={res.evaluations}"
                  + ("  [boundary]" if res.on_boundary else ""))
        return 0
    return _run_dm_config(cfg)


def _run_dm_config(cfg: ScenarioConfig) -> int:
    assert cfg.dm is not None and cfg.dm_channel is not None
    res = sup_inf_rate(
        cfg.dm_channel, cfg.dm.grid_resolution, cfg.dm.max_evaluations
    )
    print("kind: dm")
    print(f"sup-inf rate        = {res.rate:.6f}")
    print(f"refined inner check = {res.refined_rate:.6f}")
    print(f"evaluations         = {res.evaluations}")
    print("r_star (x_l | x_1e, x_2e):")
    for i1 in range(res.r_star.r.shape[1]):
        for i2 in range(res.r_star.r.shape[2]):
            col = ", ".join(f"{v:.4f}" for v in res.r_star.r[:, i1, i2])
            print(f"  context ({i1},{i2}): [{col}]")
    q = ", ".join(f"{v:.4f}" for v in res.q_star.q.ravel())
    print(f"q_star (x_1e, x_2e): [{q}]")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if cfg.sweep is None:
        if cfg.kind == "dm":
            raise ConfigError("kind 'dm' needs an explicit 'sweep' block")
        cfg = replace(cfg, sweep=SweepSettings())
    if cfg.kind == "general-gaussian":
        xs, table = general_sweep_table(cfg)
    elif cfg.kind == "orthogonal-gaussian":
        xs, table = orthogonal_sweep_table(cfg)
    else:
        xs, table = dm_sweep_table(cfg)
    param = cfg.sweep.parameter
    csv_path = args.out or cfg.output.csv
    svg_path = args.svg or cfg.output.svg
    if csv_path:
        write_csv(csv_path, param, xs, table)
        print(f"wrote {csv_path} ({len(xs)} rows)")
    if svg_path:
        Path(svg_path).write_text(
            render_svg(param, xs, table, f"secrecy rates vs {param}")
        )
        print(f"wrote {svg_path}")
    if not csv_path and not svg_path:
        print(",".join([param] + list(table)))
        for i, x in enumerate(xs):
            print(",".join(["%.6f" % x] + ["%.6f" % table[c][i] for c in table]))
    return 0


def _cmd_audit(args: argparse.Namespace) -> int:
    models = ("orthogonal", "general")
    if args.config:
        kind = load_config(args.config).kind
        if kind == "orthogonal-gaussian":
            models = ("orthogonal",)
        elif kind == "general-gaussian":
            models = ("general",)
        else:
            raise ConfigError("the audit covers the Gaussian closed forms; "
                              "kind 'dm' has none")
    report = run_audit(args.seed, args.draws, args.rho2_both, models)
    if args.out:
        Path(args.out).write_text(rows_to_csv(report))
        print(f"wrote {args.out} ({len(report.rows)} rows)")
    print(format_report(report, verbose=args.verbose))
    return 0 if report.passed else 2


def _cmd_dm(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if cfg.kind != "dm":
        raise ConfigError(f"the dm subcommand needs kind 'dm', got '{cfg.kind}'")
    return _run_dm_config(cfg)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wiretap-rates",
        description="Secrecy rates for wiretap channels with constrained "
                    "colluding eavesdroppers.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate one parameter point")
    p.add_argument("--config", required=True,
                   help="path to a scenario JSON, or a bundled config name")
    p.set_defaults(fn=_cmd_point)

    s = sub.add_parser("sweep", help="sweep a parameter, write CSV/SVG")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="override the output.csv path")
    s.add_argument("--svg", help="override the output.svg path")
    s.set_defaults(fn=_cmd_sweep)

    a = sub.add_parser("audit", help="closed forms vs covariance cross-check")
    a.add_argument("--config",
                   help="scenario whose kind selects the model family; "
                        "both families without it")
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.add_argument("--draws", type=int, default=DEFAULT_DRAWS)
    a.add_argument("--out", help="write the per-draw rows as CSV")
    a.add_argument("--rho2-both", action="store_true", dest="rho2_both",
                   help="audit the variant reusing rho_2 in both single-"
                        "eavesdropper terms")
    a.add_argument("--verbose", action="store_true")
    a.set_defaults(fn=_cmd_audit)

    d = sub.add_parser("dm", help="discrete sup-inf rate from a channel file")
    d.add_argument("--config", required=True)
    d.set_defaults(fn=_cmd_dm)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
