"""Command-line front end: evaluate traces, run the demo, generate traces.

Exit codes: 0 success, 1 parse/validation problem with the inputs, 2
evaluation failure at run time.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bundled
from .errors import EvimonError, ParseError, TraceTooShort, ValidationError
from .forward import sliding_effectiveness
from .generate import SCENARIOS, generate_trace, manifest_lines
from .modelfile import parse_model
from .report import summary_dict, write_report_csv, write_summary_json
from .trace import read_trace, write_trace


def _resolve_model(spec: str):
    """A model argument is a path or the name of a bundled model."""
    if spec in bundled.MODELS:
        return parse_model(bundled.model_path(spec))
    return parse_model(spec)


def _cmd_eval(args) -> int:
    model = _resolve_model(args.model)
    trace = read_trace(args.trace)
    if args.rule:
        from .iohmm import EvIohmm

        model = EvIohmm(
            model.frame,
            model.transitions,
            model.emissions,
            prior=model.prior,
            rule=args.rule,
            input_variables=model.input_variables,
            output_variables=model.output_variables,
            name=model.name,
        )
    report = sliding_effectiveness(trace, model, args.window, args.stride)
    if args.out:
        write_report_csv(report, args.out)
    if args.summary:
        write_summary_json(report, args.summary)
    summary = summary_dict(report)
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_demo(_args) -> int:
    from .demo import run_walkthrough

    run_walkthrough()
    return 0


def _cmd_gen_trace(args) -> int:
    model = _resolve_model(args.model)
    records, zones = generate_trace(model, args.scenario, args.length, args.seed)
    write_trace(args.out, records, model.input_variables, model.output_variables)
    manifest = {
        "model": model.name,
        "scenario": args.scenario,
        "seed": args.seed,
        "records": len(records),
        "zones": manifest_lines(zones),
    }
    manifest_path = f"{args.out}.manifest.json"
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(records)} records to {args.out}")
    print("zones: " + " ".join(manifest["zones"]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evimon",
        description="Run-time effectiveness monitoring with belief-function models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a trace against a model")
    p_eval.add_argument("--model", required=True, help="model file or bundled name")
    p_eval.add_argument("--trace", required=True, help="trace CSV")
    p_eval.add_argument("--window", type=int, default=10, help="window length")
    p_eval.add_argument("--stride", type=int, default=1, help="window stride")
    p_eval.add_argument(
        "--rule",
        choices=("dempster", "yager", "dubois_prade"),
        help="override the model's normalization rule",
    )
    p_eval.add_argument("--out", help="report CSV path")
    p_eval.add_argument("--summary", help="JSON summary path")
    p_eval.set_defaults(func=_cmd_eval)

    p_demo = sub.add_parser(
        "demo", help="print and verify the two-state worked example"
    )
    p_demo.set_defaults(func=_cmd_demo)

    p_gen = sub.add_parser("gen-trace", help="generate a synthetic trace")
    p_gen.add_argument("--model", required=True, help="model file or bundled name")
    p_gen.add_argument("--scenario", choices=SCENARIOS, default="comfort")
    p_gen.add_argument("--length", type=int, default=60)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="trace CSV path")
    p_gen.set_defaults(func=_cmd_gen_trace)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, TraceTooShort, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EvimonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
