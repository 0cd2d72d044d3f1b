"""Command-line interface.

Exit codes: 0 on success, 1 when the input is unusable (bad flags, bad
corpus, bad markup), 2 when the tool itself fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from .corpus import CorpusError, load_corpus
from .evaluate import RunConfig, evaluate
from .markup import NoTableError, ParseError, normalize_markup
from .report import emit_report
from .fixtures import generate_corpus, write_corpus
from .xycut import PixelPage, XYCutConfig, xycut

_SECTIONS = {
    "eval-td": ("detection", "calibration"),
    "eval-tsr": ("tsr",),
    "eval-te": ("detection", "calibration", "tsr", "te"),
    "calibration": ("calibration",),
}


class _Parser(argparse.ArgumentParser):
    # Flag misuse is an input problem, so it exits 1 rather than argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tabeval", description="Table extraction evaluation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("corpus", help="JSON Lines corpus file")
    shared.add_argument("--out", default="report", help="report directory (default: report)")
    shared.add_argument("--config", help="JSON file with run parameters; flags win")
    shared.add_argument("--mode", choices=("bbox", "content"), default=None,
                        help="matching similarity (default: bbox)")
    shared.add_argument("--theta-j", type=float, default=None, metavar="T",
                        help="match quality threshold (default: 0.5)")
    shared.add_argument("--theta-c", type=float, default=None, metavar="T",
                        help="confidence cutoff for the positive set (default: keep all)")
    shared.add_argument("--density", type=float, choices=(0.0, 0.5), default=None,
                        help="expected-metric density support bound (default: 0.5)")
    shared.add_argument("--bins", type=int, default=None,
                        help="reliability bins for calibration (default: 10)")
    shared.add_argument("--weighting", choices=("topology", "content", "teds"),
                        default=None, help="headline extraction weighting (default: topology)")
    shared.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    for name, blurb in (
        ("eval-td", "detection metrics: P/R/F1, WAvgF1, AP, expected, calibration"),
        ("eval-tsr", "structure recognition metrics over matched tables"),
        ("eval-te", "full extraction report: detection, structure, calibration"),
        ("calibration", "confidence calibration only"),
    ):
        p = sub.add_parser(name, parents=[shared], help=blurb)
        p.set_defaults(func=_cmd_eval, sections=_SECTIONS[name])

    p = sub.add_parser("normalize", help="rewrite table markup to canonical form")
    p.add_argument("--infile", default="-", help="markup file (default: stdin)")
    p.add_argument("--out", default="-", help="output file (default: stdout)")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("xycut", help="segment a page image into blocks")
    p.add_argument("image", help="page image file")
    p.add_argument("--min-area", type=int, default=None, help="stop splitting below this area")
    p.add_argument("--gap-threshold", type=int, default=None, help="minimum cut band width")
    p.add_argument("--binarize", type=float, default=None,
                   help="ink luminance threshold in [0, 1]")
    p.add_argument("--out", default="-", help="output CSV (default: stdout)")
    p.set_defaults(func=_cmd_xycut)

    p = sub.add_parser("gen-fixture", help="generate a reproducible synthetic corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--pages", type=int, default=4)
    p.add_argument("--severity", type=float, default=0.5,
                   help="how damaged predictions are, 0 to 1 (default: 0.5)")
    p.add_argument("--out", default="-", help="output JSONL (default: stdout)")
    p.set_defaults(func=_cmd_gen_fixture)

    return parser


def _run_config(args) -> RunConfig:
    file_cfg = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            file_cfg = json.load(handle)
        if not isinstance(file_cfg, dict):
            raise ValueError("config file must hold a JSON object")
        allowed = {"mode", "theta_j", "theta_c", "density", "bins", "weighting"}
        unknown = set(file_cfg) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")

    def pick(name, default):
        flag = getattr(args, name)
        if flag is not None:
            return flag
        return file_cfg.get(name, default)

    return RunConfig(
        mode=pick("mode", "bbox"),
        theta_j=pick("theta_j", 0.5),
        theta_c=pick("theta_c", None),
        density=pick("density", 0.5),
        bins=pick("bins", 10),
        weighting=pick("weighting", "topology"),
    )


def _cmd_eval(args) -> int:
    cfg = _run_config(args)
    corpus = load_corpus(args.corpus)
    report = evaluate(corpus, cfg)
    emit_report(report, args.out, sections=args.sections, figures=not args.no_figures)
    for warning in report.warnings:
        print(f"[warn] {warning}", file=sys.stderr)
    print(f"report written to {args.out}")
    return 0


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _cmd_normalize(args) -> int:
    _write_output(args.out, normalize_markup(_read_input(args.infile)) + "\n")
    return 0


def _cmd_xycut(args) -> int:
    defaults = XYCutConfig()
    threshold = defaults.binarization_threshold if args.binarize is None else args.binarize
    cfg = XYCutConfig(
        min_area=defaults.min_area if args.min_area is None else args.min_area,
        gap_threshold=defaults.gap_threshold if args.gap_threshold is None else args.gap_threshold,
        binarization_threshold=threshold,
    )
    page = PixelPage.from_image(args.image, cfg.binarization_threshold)
    boxes = xycut(page, cfg)
    lines = ["x0,y0,x1,y1"]
    lines.extend(f"{b.x0:g},{b.y0:g},{b.x1:g},{b.y1:g}" for b in boxes)
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_gen_fixture(args) -> int:
    pages = generate_corpus(args.seed, n_pages=args.pages, severity=args.severity)
    if args.out == "-":
        for page in pages:
            print(json.dumps(page, sort_keys=True))
    else:
        write_corpus(pages, args.out)
        print(f"wrote {len(pages)} pages to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    except (CorpusError, NoTableError, ParseError, OSError,
            json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
