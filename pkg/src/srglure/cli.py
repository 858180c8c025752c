"""``srg analyze|nyquist|plot|validate <config.json>``.

Exit codes: 0 success (analyze: certified), 1 input or runtime error,
2 inconclusive certificate (analyze), 3 oracle violation (validate).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .lti import (
    NyquistError,
    TransferFunction,
    TransferFunctionError,
    extended_srg,
    is_stable,
    nyquist_criterion,
    nyquist_curve,
    srg_lti_stable,
)
from .nonlinearity import (
    GraphMode,
    NonlinearityError,
    PiecewiseLinearNl,
    SectorSpec,
    nl_region,
    pwl_region,
    sector_representative,
    user_region,
)
from .oracle import closed_loop_gain, empirical_gain, srg_cloud
from .region import RegionError, contains_points, polygon_region, region_summary
from .stability import LureProblem, Mode, StabilityError, analyze_lure
from .svg import PALETTE, Canvas, extent_for

SCHEMA_ID = "srg-analyzer/1"
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_VIOLATION = 0, 1, 2, 3

_coeffs = {"type": "array", "items": {"type": "number"}, "minItems": 1}
CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["plant", "nonlinearity"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "plant": {
            "type": "object",
            "additionalProperties": False,
            "required": ["num", "den"],
            "properties": {"num": _coeffs, "den": _coeffs},
        },
        "nonlinearity": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["type", "k1", "k2"],
                    "properties": {
                        "type": {"const": "sector"},
                        "k1": {"type": "number"},
                        "k2": {"type": "number"},
                        "incremental": {"type": "boolean"},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["type", "points", "left_slope", "right_slope"],
                    "properties": {
                        "type": {"const": "pwl"},
                        "points": {
                            "type": "array",
                            "minItems": 1,
                            "items": {"type": "array", "items": {"type": "number"},
                                      "minItems": 2, "maxItems": 2},
                        },
                        "left_slope": {"type": "number"},
                        "right_slope": {"type": "number"},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["type", "loops"],
                    "properties": {
                        "type": {"const": "region"},
                        "loops": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "type": "array",
                                "minItems": 3,
                                "items": {"type": "array", "items": {"type": "number"},
                                          "minItems": 2, "maxItems": 2},
                            },
                        },
                        "contains_infinity": {"type": "boolean"},
                        "incremental": {"type": "boolean"},
                    },
                },
            ]
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["incremental", "non-incremental"]},
                "kappa": {"oneOf": [{"const": "auto"}, {"type": "number"}]},
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
                "real_only_extension": {"type": "boolean"},
            },
        },
        "oracle": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "enabled": {"type": "boolean"},
                "seed": {"type": "integer", "minimum": 0},
                "n_trials": {"type": "integer", "minimum": 1},
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "horizon": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

ANALYSIS_DEFAULTS = {"mode": "incremental", "kappa": "auto", "tolerance": 1e-3,
                     "real_only_extension": False}
ORACLE_DEFAULTS = {"enabled": False, "seed": 0, "n_trials": 200, "dt": 0.01, "horizon": 20.0}


class ConfigError(ValueError):
    pass


def load_config(path):
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for e in errors:
            where = "/".join(str(p) for p in e.absolute_path) or "<root>"
            lines.append(f"{where}: {e.message}")
        raise ConfigError("config rejected:\n  " + "\n  ".join(lines))
    return cfg


class Problem:
    """Config resolved into library objects."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.analysis = {**ANALYSIS_DEFAULTS, **cfg.get("analysis", {})}
        self.oracle = {**ORACLE_DEFAULTS, **cfg.get("oracle", {})}
        self.tol = float(self.analysis["tolerance"])
        self.mode = Mode(self.analysis["mode"])
        incremental = self.mode is Mode.INCREMENTAL
        self.plant = TransferFunction(cfg["plant"]["num"], cfg["plant"]["den"])
        nl = cfg["nonlinearity"]
        self.sim_nl = None
        if nl["type"] == "sector":
            spec = SectorSpec(nl["k1"], nl["k2"], nl.get("incremental", incremental))
            self.sim_nl = sector_representative(spec)
            self.nl = nl_region(spec, self.tol, self.sim_nl)
        elif nl["type"] == "pwl":
            self.sim_nl = PiecewiseLinearNl(nl["points"], nl["left_slope"], nl["right_slope"])
            self.nl = pwl_region(self.sim_nl, incremental, self.tol)
        else:
            reg = polygon_region(nl["loops"], nl.get("contains_infinity", False), self.tol)
            self.nl = user_region(reg, nl.get("incremental", incremental))
        self.problem = LureProblem(self.plant, self.nl, self.mode)
        self._ext = None

    @property
    def ext(self):
        if self._ext is None:
            self._ext = extended_srg(self.plant, self.tol, self.analysis["real_only_extension"])
        return self._ext

    def analyze(self):
        return analyze_lure(self.problem, kappa=self.analysis["kappa"], tol=self.tol,
                            real_only=self.analysis["real_only_extension"], ext=self.ext)


def _clean(obj, digits=12):
    """Round floats to fixed significant digits; non-finite values become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return float(f"{x:.{digits}g}")
    if isinstance(obj, dict):
        return {str(k): _clean(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, digits) for v in obj]
    return str(obj)


def dumps(doc):
    return json.dumps(_clean(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600 files; use the usual umask-derived mode instead
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def build_report(prob: Problem, verdict):
    k = verdict.kappa
    loop = prob.plant if not k else TransferFunction(np.asarray(prob.plant.num) * k, prob.plant.den)
    try:
        nyq = nyquist_criterion(loop, tol=prob.tol).to_dict()
    except NyquistError as exc:
        nyq = {"error": str(exc)}
    nyq["loop_gain"] = k if k else 1.0
    regions = {name: region_summary(reg) for name, reg in sorted(verdict.regions.items())}
    return {
        "schema": SCHEMA_ID,
        "tool_version": __version__,
        "input": prob.cfg,
        "verdict": verdict.to_dict(),
        "nyquist": nyq,
        "regions": regions,
    }


def cmd_analyze(args):
    prob = Problem(load_config(args.config))
    verdict = prob.analyze()
    _emit(dumps(build_report(prob, verdict)), args.out)
    return EXIT_OK if verdict.certified else EXIT_INCONCLUSIVE


def cmd_nyquist(args):
    prob = Problem(load_config(args.config))
    curve = nyquist_curve(prob.plant, prob.tol)
    verdict = nyquist_criterion(prob.plant, curve, prob.tol)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["omega", "re", "im"])
    for om, g in zip(curve.omega, curve.values):
        w.writerow([f"{om:.12g}", f"{g.real:.12g}", f"{g.imag:.12g}"])
    out = args.out or f"{Path(args.config).stem}_nyquist.csv"
    write_atomic(out, buf.getvalue())
    doc = {"schema": SCHEMA_ID, "tool_version": __version__, "nyquist": verdict.to_dict(),
           "curve_csv": str(out), "n_samples": len(curve)}
    sys.stdout.write(dumps(doc))
    return EXIT_OK


PLOT_KINDS = ("nyquist", "srg", "extended-srg", "separation")


def render_plot(prob: Problem, what):
    ext = prob.ext
    curve = ext.curve.closed if ext.curve is not None else None
    if what == "nyquist":
        c = Canvas(extent_for(curve))
        c.axes()
        c.curve(curve)
    elif what == "srg":
        reg = srg_lti_stable(prob.plant, prob.tol) if is_stable(prob.plant) else ext.hull
        c = Canvas(extent_for(curve, reg))
        c.region(reg, PALETTE[0], "SRG" if is_stable(prob.plant) else "hull of the Nyquist curve")
        c.axes()
        c.curve(curve)
    elif what == "extended-srg":
        c = Canvas(extent_for(curve, ext.combined))
        c.region(ext.combined, PALETTE[0], "extended SRG")
        c.axes()
        c.curve(curve)
    else:
        verdict = prob.analyze()
        inv, neg = verdict.regions.get("inverse"), verdict.regions["negated_nonlinearity"]
        c = Canvas(extent_for(neg, inv, minimum=1.0))
        if inv is not None:
            c.region(inv, PALETTE[0], "inverse extended SRG")
        c.region(neg, PALETTE[1], "negated nonlinearity")
        c.axes()
        c.text(f"r = {verdict.separation:.3g}")
    c.marker(complex(-1, 0), "-1")
    return c.render()


def cmd_plot(args):
    if args.what not in PLOT_KINDS:
        raise ConfigError(f"--what must be one of {', '.join(PLOT_KINDS)}")
    prob = Problem(load_config(args.config))
    out = args.out or f"{Path(args.config).stem}_{args.what}.svg"
    write_atomic(out, render_plot(prob, args.what))
    return EXIT_OK


def run_validation(prob: Problem, verdict=None):
    """Oracle checks of the analysis; returns (report dict, violation flag)."""
    o = prob.oracle
    seed, n_trials = int(o["seed"]), int(o["n_trials"])
    checks = []
    violated = False
    nl_mode = "SRG" if prob.nl.mode is GraphMode.SRG else "SG0"
    if prob.sim_nl is not None:
        cloud = srg_cloud(prob.sim_nl, n_trials, seed, nl_mode)
        bad = int(np.sum(~contains_points(prob.nl.region, cloud.points())))
        checks.append({"check": "nonlinearity cloud in region", "samples": len(cloud),
                       "violations": bad})
        violated |= bad > 0
    if is_stable(prob.plant):
        srg = srg_lti_stable(prob.plant, prob.tol)
        cloud = srg_cloud(prob.plant, n_trials, seed, "SRG")
        bad = int(np.sum(~contains_points(srg, cloud.points())))
        checks.append({"check": "plant cloud in SRG", "samples": len(cloud), "violations": bad})
        violated |= bad > 0
        g = empirical_gain(prob.plant, "incremental", n_trials, seed)
        checks.append({"check": "plant empirical gain", "value": g.value})
    verdict = verdict or prob.analyze()
    gain = None
    if verdict.certified and prob.plant.strictly_proper and prob.sim_nl is not None:
        cl = closed_loop_gain(prob.plant, prob.sim_nl, n_trials, seed, float(o["dt"]),
                              float(o["horizon"]), mode=prob.mode.value)
        ok = cl.diverged == 0 and cl.value <= verdict.gain_bound * (1 + 1e-9)
        gain = cl.value
        checks.append({"check": "closed-loop gain within bound", "value": cl.value,
                       "bound": verdict.gain_bound, "diverged": cl.diverged, "ok": ok})
        violated |= not ok
    elif not verdict.certified:
        checks.append({"check": "closed-loop gain", "skipped": "no certificate to validate"})
    else:
        checks.append({"check": "closed-loop gain",
                       "skipped": "needs a strictly proper plant and a simulatable nonlinearity"})
    return {"checks": checks, "empirical_gain": gain, "violation": violated}, violated


def cmd_validate(args):
    prob = Problem(load_config(args.config))
    if not prob.oracle["enabled"]:
        raise ConfigError("validate needs oracle.enabled = true")
    verdict = prob.analyze()
    report, violated = run_validation(prob, verdict)
    doc = build_report(prob, verdict)
    doc["oracle_results"] = report
    _emit(dumps(doc), args.out)
    return EXIT_VIOLATION if violated else EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "nyquist": cmd_nyquist, "plot": cmd_plot,
            "validate": cmd_validate}


def build_parser():
    p = argparse.ArgumentParser(prog="srg", description="SRG-based Lur'e loop analysis")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("config", help="problem description (JSON)")
    p.add_argument("--out", help="output path (report, CSV or SVG)")
    p.add_argument("--what", default="extended-srg", help=f"plot kind: {', '.join(PLOT_KINDS)}")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OSError, TransferFunctionError, NonlinearityError, StabilityError,
            RegionError, NyquistError, ValueError) as exc:
        sys.stderr.write(f"srg: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
