"""Command-line front end.

Subcommands ``bistability``, ``probe``, ``nms``, ``features`` and ``check``
share one JSON config schema; flags override values read from ``--config``.

Exit codes: 0 success, 1 check failure, 2 config error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from hybrid_eom import analysis, checks, nms, probe, steady_state
from hybrid_eom.errors import (
    DegeneratePoles,
    ImaginaryPrediction,
    NotBistable,
    NumericalError,
    ParameterError,
)
from hybrid_eom.model import BareParams, SystemParams, effective_params, red_sideband, validate
from hybrid_eom.presets import FIG5A_QUOTED_POSITIONS, FIG5_EXPECTED_PEAKS, PRESETS

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_SCANS = {
    "probe": (-1.0, 1.0, 4001),
    "features": (-1.0, 1.0, 4001),
    "nms": (0.05, 2.0, 4001),
    "bistability": (0.0, 10.0, 2001),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scan:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 3:
            raise ConfigError(f"points must be an integer >= 3, got {self.points}")
        if not self.x_min < self.x_max:
            raise ConfigError(f"x_min must be below x_max ({self.x_min} >= {self.x_max})")

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, int(self.points))


@dataclass(frozen=True)
class Output:
    csv_path: Optional[str] = None
    json_path: Optional[str] = "-"
    precision: int = 12

    def __post_init__(self):
        if not 6 <= self.precision <= 17:
            raise ConfigError(f"precision must lie in [6, 17], got {self.precision}")


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=SystemParams)
    scan: Optional[Scan] = None
    tolerances: dict = field(
        default_factory=lambda: {"omit": analysis.OMIT_TOL, "omia_rel": analysis.OMIA_RTOL, "zero": analysis.ZERO_TOL}
    )
    kind: str = "probe"
    expected_peaks: Optional[int] = None
    quoted_positions: Optional[tuple] = None
    output: Output = field(default_factory=Output)
    workers: int = 1

    def scan_for(self, command: str) -> Scan:
        return self.scan if self.scan is not None else Scan(*DEFAULT_SCANS[command])

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "scan": dataclasses.asdict(self.scan) if self.scan else None,
            "tolerances": dict(self.tolerances),
            "kind": self.kind,
            "expected_peaks": self.expected_peaks,
            "quoted_positions": list(self.quoted_positions) if self.quoted_positions else None,
            "output": dataclasses.asdict(self.output),
            "workers": self.workers,
        }


def _resolve_params(doc: dict) -> SystemParams:
    preset = doc.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        p = PRESETS[preset]
    else:
        p = SystemParams()
    try:
        p = p.replace(**{k: float(v) for k, v in (doc.get("params") or {}).items()})
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    if doc.get("bare") is not None:
        bare = BareParams(**doc["bare"])
        if doc.get("derive", True):
            dc, da, G_em = effective_params(bare)
            p = p.replace(delta_c=dc, delta_a=da, G_em=G_em, g_om=bare.g_om, E_m=bare.E_m, kappa_c=bare.kappa_c)
    if doc.get("red_sideband"):
        p = red_sideband(p)
    return validate(p)


def config_from_dict(doc: dict) -> RunConfig:
    """Build a :class:`RunConfig` from a config document (raises ConfigError)."""
    try:
        params = _resolve_params(doc)
        scan = doc.get("scan")
        scan = Scan(float(scan["x_min"]), float(scan["x_max"]), scan["points"]) if scan else None
        tol = dict(RunConfig().tolerances)
        tol.update(doc.get("tolerances") or {})
        out = Output(**(doc.get("output") or {}))
        qp = doc.get("quoted_positions")
        cfg = RunConfig(
            params=params,
            scan=scan,
            tolerances=tol,
            kind=doc.get("kind", "probe"),
            expected_peaks=doc.get("expected_peaks"),
            quoted_positions=tuple(qp) if qp else None,
            output=out,
            workers=int(doc.get("workers", 1)),
        )
    except ConfigError:
        raise
    except (ParameterError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from None
    if cfg.kind not in ("probe", "nms"):
        raise ConfigError(f"kind must be 'probe' or 'nms', got {cfg.kind!r}")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    return cfg


def _fmt(v, precision: int) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return format(float(v), f".{precision}g")


def _csv(header: Sequence[str], rows, precision: int) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v, precision) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(cfg: RunConfig, csv_text: Optional[str], payload: dict) -> None:
    if csv_text is not None:
        _write(cfg.output.csv_path, csv_text)
    payload = {"config": cfg.to_dict(), **payload}
    _write(cfg.output.json_path, json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def run_bistability(cfg: RunConfig) -> int:
    p = cfg.params
    grid = cfg.scan_for("bistability").grid()
    if grid[0] < 0:
        raise ConfigError("pump grid must be non-negative")
    branch = steady_state.sweep_pump(p, grid)
    rows = []
    for E, roots in zip(branch.pump, branch.roots):
        ns = [r[0] for r in roots] + [None] * (3 - len(roots))
        st = [r[1] for r in roots] + [None] * (3 - len(roots))
        rows.append([E, *ns, *st])
    header = ["e_p", "n_root_1", "n_root_2", "n_root_3", "stable_1", "stable_2", "stable_3"]
    payload = {
        "turning_points": [
            {"e_p": t.E_p, "n_double": t.n_double, "n_other": t.n_other, "direction": t.direction}
            for t in branch.turning_points
        ]
    }
    try:
        ratio, e_up, e_down = steady_state.switching_metrics(branch)
        payload["switching"] = {"bistable": True, "ratio": ratio, "e_up": e_up, "e_down": e_down}
    except NotBistable as exc:
        payload["switching"] = {"bistable": False, "error": "NotBistable", "detail": str(exc)}
    _emit(cfg, _csv(header, rows, cfg.output.precision), payload)
    return EXIT_OK


def _is_red_sideband(p: SystemParams) -> bool:
    return p.delta_a_eff == p.delta_c == p.omega_q == p.omega_b


def _probe_payload(p: SystemParams) -> dict:
    payload: dict = {}
    try:
        payload["omit_minima_prediction"] = list(probe.omit_minima_prediction(p))
    except ImaginaryPrediction as exc:
        payload["omit_minima_prediction"] = {"error": "ImaginaryPrediction", "detail": str(exc)}
    payload["omia_peak_prediction"] = list(probe.omia_peak_prediction(p))
    if _is_red_sideband(p):
        try:
            pr = probe.hybrid_poles(p)
            payload["poles"] = list(pr.poles)
            payload["residues_numeric"] = list(pr.residues_numeric)
            payload["residues_printed"] = list(pr.residues_printed)
            payload["max_printed_deviation"] = pr.max_printed_deviation
        except DegeneratePoles as exc:
            payload["poles"] = {"error": "DegeneratePoles", "detail": str(exc)}
    else:
        payload["poles"] = None
    return payload


def _probe_series(cfg: RunConfig):
    return probe.probe_spectrum(cfg.params, cfg.scan_for("probe").grid(), cfg.workers)


def run_probe(cfg: RunConfig) -> int:
    series = _probe_series(cfg)
    rows = [(x, e.real, e.imag, abs(e - 1)) for x, e in zip(series.x, series.y)]
    payload = _probe_payload(cfg.params)
    payload["skipped"] = list(series.skipped)
    _emit(cfg, _csv(["x", "re_eps_t", "im_eps_t", "abs_t_pr"], rows, cfg.output.precision), payload)
    return EXIT_OK


def _nms(cfg: RunConfig) -> nms.NmsSpectrum:
    return nms.nms_spectrum(cfg.params, cfg.scan_for("nms").grid(), cfg.workers)


def run_nms(cfg: RunConfig) -> int:
    spec = _nms(cfg)
    rows = list(zip(spec.omega, spec.s_x))
    payload = {"peaks": analysis.nms_report(spec, cfg.expected_peaks, cfg.quoted_positions)}
    _emit(cfg, _csv(["omega", "s_x"], rows, cfg.output.precision), payload)
    return EXIT_OK


def run_features(cfg: RunConfig) -> int:
    if cfg.kind == "nms":
        spec = _nms(cfg)
        payload = {"kind": "nms", "report": analysis.nms_report(spec, cfg.expected_peaks, cfg.quoted_positions)}
    else:
        series = _probe_series(cfg)
        rep = analysis.extract_probe_features(series)
        tol = cfg.tolerances
        rep = analysis.compare_predictions(rep, cfg.params, tol["omit"], tol["omia_rel"], tol["zero"])
        payload = {"kind": "probe", "report": rep.to_dict(), "skipped": list(series.skipped)}
    _emit(cfg, None, payload)
    return EXIT_OK


def run_check(cfg: Optional[RunConfig] = None, stream=None) -> int:
    stream = stream or sys.stdout
    extra = cfg.params if cfg is not None and _is_red_sideband(cfg.params) else None
    results = checks.run_all(extra)
    width = max(len(r.name) for r in results)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        stream.write(f"{mark}  {r.name:<{width}}  {r.metric:.3e}  {r.detail}\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        stream.write(f"failed suites: {', '.join(failed)}\n")
        return EXIT_CHECK
    return EXIT_OK


COMMANDS = {
    "bistability": run_bistability,
    "probe": run_probe,
    "nms": run_nms,
    "features": run_features,
}


def _parse_assignment(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), float(v)


SUBCOMMAND_HELP = {
    "bistability": "photon-number roots over a pump sweep, turning points and switching ratio",
    "probe": "probe absorption/dispersion spectrum with poles, residues and predictions",
    "nms": "mechanical displacement spectrum and peak report",
    "features": "extract spectral features and compare them with the closed-form predictions",
    "check": "run every internal oracle suite and print a pass/fail table",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybrid-eom",
        description="Hybrid electro-optomechanical simulator. Exit codes: 0 ok, 1 check failure, 2 config error, 3 numeric failure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in SUBCOMMAND_HELP.items():
        sp = sub.add_parser(name, help=text, description=text)
        sp.add_argument("--config", help="JSON config document; flags override its values")
        sp.add_argument("--preset", choices=sorted(PRESETS), help="start from a named parameter set")
        sp.add_argument(
            "--param", action="append", type=_parse_assignment, default=[], metavar="KEY=VALUE",
            help="override one SystemParams field (repeatable)",
        )
        sp.add_argument("--red-sideband", action="store_true", default=None, help="pin all detunings to 1")
        sp.add_argument("--out-csv", help="CSV destination (default: none)")
        sp.add_argument("--out-json", help="JSON destination, '-' for stdout (default)")
        sp.add_argument("--points", type=int, help="grid points (>= 3)")
        sp.add_argument("--x-min", type=float, help="grid start (pump amplitude for bistability)")
        sp.add_argument("--x-max", type=float, help="grid end")
        sp.add_argument("--precision", type=int, help="significant digits in CSV, 6..17 (default 12)")
        sp.add_argument("--workers", type=int, help="threads used for grid evaluation (default 1)")
        if name == "features":
            sp.add_argument("--kind", choices=("probe", "nms"), help="spectrum to analyse (default probe)")
            sp.add_argument("--tol-omit", type=float, help="absolute tolerance for transparency minima")
            sp.add_argument("--tol-omia-rel", type=float, help="relative tolerance for absorption peaks")
        if name in ("features", "nms"):
            sp.add_argument("--expected-peaks", type=int, help="expected displacement-spectrum peak count")
    return parser


def _merge(doc: dict, args: argparse.Namespace, command: str) -> dict:
    doc = json.loads(json.dumps(doc))
    if args.preset:
        doc["preset"] = args.preset
    if args.param:
        doc.setdefault("params", {}).update(dict(args.param))
    if args.red_sideband:
        doc["red_sideband"] = True
    if any(v is not None for v in (args.points, args.x_min, args.x_max)):
        base = doc.get("scan") or dict(zip(("x_min", "x_max", "points"), DEFAULT_SCANS.get(command, DEFAULT_SCANS["probe"])))
        for key in ("points", "x_min", "x_max"):
            if getattr(args, key) is not None:
                base[key] = getattr(args, key)
        doc["scan"] = base
    out = doc.setdefault("output", {})
    for key, attr in (("csv_path", "out_csv"), ("json_path", "out_json"), ("precision", "precision")):
        if getattr(args, attr) is not None:
            out[key] = getattr(args, attr)
    if args.workers is not None:
        doc["workers"] = args.workers
    if getattr(args, "kind", None):
        doc["kind"] = args.kind
    if getattr(args, "expected_peaks", None) is not None:
        doc["expected_peaks"] = args.expected_peaks
    tol = doc.setdefault("tolerances", {})
    if getattr(args, "tol_omit", None) is not None:
        tol["omit"] = args.tol_omit
    if getattr(args, "tol_omia_rel", None) is not None:
        tol["omia_rel"] = args.tol_omia_rel
    preset = doc.get("preset", "")
    if command in ("nms", "features") and preset.startswith("fig5") and doc.get("expected_peaks") is None:
        doc["expected_peaks"] = FIG5_EXPECTED_PEAKS[preset[-1]]
        if preset == "fig5a":
            doc.setdefault("quoted_positions", list(FIG5A_QUOTED_POSITIONS))
        if command == "features":
            doc.setdefault("kind", "nms")
    return doc


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
            if not isinstance(doc, dict):
                raise ConfigError("config must be a JSON object")
        explicit = bool(args.config or args.preset or args.param)
        doc = _merge(doc, args, args.command)
        cfg = config_from_dict(doc)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "check":
            return run_check(cfg if explicit else None)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
