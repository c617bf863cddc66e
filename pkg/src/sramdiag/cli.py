"""Command-line front end.

    sramdiag analyze --n 512 --c 100 --t 10 --total-faults 256
    sramdiag simulate --config run.json
    sramdiag campaign --config campaign.json --seed 7 --mode nwrtm
    sramdiag parse "b(w0);u(r0,w1)"

Exit codes: 0 success, 1 semantic or runtime error, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import analysis
from .campaign import run_campaign, sample_faults
from .config import SCHEMA_VERSION, CampaignSpec, fault_to_dict, load
from .controller import Mode, run_diagnosis
from .errors import ConfigParseError, DiagnosisError, DomainError, MarchParseError
from .march import format_march, parse_march
from .memory_model import MemoryGeometry

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


def _json(doc):
    return json.dumps(doc, indent=2) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _number(text):
    """int when the text is integral, so exact ns totals print without a '.0'."""
    try:
        return int(text)
    except ValueError:
        return float(text)


def _flatten(doc, prefix=""):
    for key, value in doc.items():
        if isinstance(value, dict):
            yield from _flatten(value, f"{prefix}{key}.")
        else:
            yield f"{prefix}{key}", value


def analyze_report(n, c, t, k=None, total_faults=None, m1_coverage=0.75,
                   faults_per_iteration=2, mux2_cells=1):
    if k is None:
        if total_faults is None:
            raise DomainError("give --k or --total-faults")
        k = analysis.estimate_k(total_faults, m1_coverage, faults_per_iteration)
    cost = analysis.cost_report(analysis.CostInputs(n, c, t, k))
    area = analysis.area_report([MemoryGeometry(n, c)], analysis.AreaCostTable(mux2_cells=mux2_cells))
    doc = {"schema_version": SCHEMA_VERSION, "total_faults": total_faults}
    doc.update(cost.to_dict())
    doc["r_no_drf_floor"] = math.floor(cost.r_no_drf)
    doc["r_with_drf_floor"] = math.floor(cost.r_with_drf)
    doc["area"] = area.to_dict()
    return doc


def cmd_analyze(args, parser):
    try:
        doc = analyze_report(args.n, args.c, args.t, args.k, args.total_faults,
                             args.m1_coverage, args.faults_per_iteration, args.mux2_cells)
    except DiagnosisError as exc:
        parser.error(str(exc))
    if args.format == "csv":
        return _csv(["field", "value"], _flatten(doc))
    return _json(doc)


def _load(args):
    cfg = load(args.config)
    overrides = {}
    if args.mode:
        overrides["mode"] = Mode(args.mode)
    if getattr(args, "seed", None) is not None and cfg.campaign is not None:
        overrides["campaign"] = replace(cfg.campaign, seed=args.seed)
    cfg = replace(cfg, **overrides)
    return cfg, cfg.resolve_algorithm(), args.format or cfg.output


_RECORD_FIELDS = ("memory_id", "element_index", "global_step", "op_index", "local_address",
                  "bit_index", "background_id", "expected_bit", "observed_bit")


def cmd_simulate(args, parser):
    cfg, alg, fmt = _load(args)
    faults = cfg.faults
    if not faults and cfg.campaign is not None:
        child = np.random.SeedSequence(cfg.campaign.seed).spawn(1)[0]
        faults = sample_faults(cfg.cluster, cfg.campaign.defect_rate, cfg.campaign.kinds,
                               np.random.default_rng(child))
    result = run_diagnosis(cfg.cluster, alg, faults, cfg.mode,
                           retention_threshold_ns=cfg.retention_threshold_ns, pause_ns=cfg.pause_ns)
    if fmt == "csv":
        return _csv(_RECORD_FIELDS, ([getattr(r, f) for f in _RECORD_FIELDS] for r in result.records))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": alg.name,
        "notation": format_march(alg),
        "mode": cfg.mode.value,
        "n_max": cfg.cluster.n_max,
        "c_max": cfg.cluster.c_max,
        "clock_ns": cfg.cluster.clock_ns,
        "faults": [fault_to_dict(f) for f in faults],
    }
    doc.update(result.to_dict())
    doc["records"] = [{f: rec[f] for f in _RECORD_FIELDS} for rec in doc["records"]]
    return _json(doc)


def cmd_campaign(args, parser):
    cfg, alg, fmt = _load(args)
    if cfg.campaign is None:
        if args.seed is None:
            raise DiagnosisError("configuration has no 'campaign' section")
        spec = CampaignSpec(defect_rate=0.01, kinds=("SA0", "SA1", "TF_UP", "TF_DOWN"), seed=args.seed)
    else:
        spec = cfg.campaign
    summary = run_campaign(cfg.cluster, alg, spec, cfg.mode,
                           retention_threshold_ns=cfg.retention_threshold_ns,
                           pause_ns=cfg.pause_ns, workers=args.workers)
    if fmt == "csv":
        rows = [[kind, v["injected"], v["detected"], v["detection_rate"]]
                for kind, v in summary.per_kind.items()]
        rows.append(["ALL", summary.injected, summary.detected, summary.detection_rate])
        return _csv(["kind", "injected", "detected", "detection_rate"], rows)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": alg.name,
        "mode": cfg.mode.value,
        "seed": spec.seed,
        "defect_rate": spec.defect_rate,
        "kinds": [k.value for k in spec.kinds],
        "trials": spec.trials,
        "injected": summary.injected,
        "detected": summary.detected,
        "detection_rate": summary.detection_rate,
        "per_kind": summary.per_kind,
        "cycles_total": summary.cycles_total,
        "simulated_ns_total": summary.simulated_ns_total,
        "pause_ns_total": summary.pause_ns_total,
        "faults": [dict(fault_to_dict(o.fault), trial=o.trial, detected=o.detected)
                   for o in summary.outcomes],
    }
    return _json(doc)


def cmd_parse(args, parser):
    return format_march(parse_march(args.notation)) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(prog="sramdiag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closed-form diagnosis time and area report")
    p.add_argument("--n", type=int, required=True, help="words in the largest memory")
    p.add_argument("--c", type=int, required=True, help="IO bits of the widest memory")
    p.add_argument("--t", type=_number, required=True, help="clock period in ns")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="baseline M1 iteration count")
    group.add_argument("--total-faults", type=int, help="estimate k from an expected fault count")
    p.add_argument("--m1-coverage", type=float, default=0.75)
    p.add_argument("--faults-per-iteration", type=_number, default=2)
    p.add_argument("--mux2-cells", type=_number, default=1, help="6T-cell equivalent of a 2:1 mux")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_analyze)

    for name, func, help_ in (("simulate", cmd_simulate, "run one diagnosis from a config file"),
                              ("campaign", cmd_campaign, "run a seeded random fault campaign")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config_path", nargs="?", help="same as --config")
        p.add_argument("--config", dest="config_opt", metavar="PATH")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--mode", choices=[m.value for m in Mode], type=str.lower)
        p.add_argument("--seed", type=int)
        if name == "campaign":
            p.add_argument("--workers", type=int, default=None, help="processes for trial fan-out")
        p.set_defaults(func=func)

    p = sub.add_parser("parse", help="check and canonicalize March notation")
    p.add_argument("notation")
    p.set_defaults(func=cmd_parse)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("simulate", "campaign"):
            args.config = args.config_opt or args.config_path
            if not args.config:
                parser.error(f"{args.command} needs a configuration file (--config PATH)")
            if args.seed is not None and not 0 <= args.seed < 2**64:
                parser.error("--seed must be an unsigned 64-bit integer")
        out = args.func(args, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (MarchParseError, ConfigParseError) as exc:
        print(f"sramdiag: parse error: {exc}", file=stderr)
        return EXIT_USAGE
    except (DiagnosisError, OSError) as exc:
        print(f"sramdiag: error: {exc}", file=stderr)
        return EXIT_ERROR
    stdout.write(out)
    return EXIT_OK


def run():
    sys.exit(main())
