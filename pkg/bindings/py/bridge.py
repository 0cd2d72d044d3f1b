"""One-shot JSON bridge: one request on stdin, one response on stdout.

Spawned per call by the Node wrapper. Holds no state and computes nothing
itself; every op marshals arguments into the installed tabeval package and
marshals the result back. Exceptions come back as {type, message} with the
message passed through untouched.
"""

import json
import sys

import tabeval


def _grid(markup):
    return tabeval.parse_table_markup(markup)


def _table_entry(rec):
    return {
        "bbox": [rec.bbox.x0, rec.bbox.y0, rec.bbox.x1, rec.bbox.y1]
        if rec.bbox is not None else None,
        "markup": rec.markup,
        "confidence": rec.confidence,
    }


def op_version(args):
    return tabeval.__version__


def op_score_pair(args):
    gt, pred = args["gt_markup"], args["pred_markup"]
    gt_grid, pred_grid = _grid(gt), _grid(pred)
    return {
        "teds": tabeval.teds(tabeval.table_tree(pred), tabeval.table_tree(gt)),
        "grits_topology": tabeval.grits_topology(pred_grid, gt_grid),
        "grits_content": tabeval.grits_content(pred_grid, gt_grid),
    }


def op_evaluate_corpus(args):
    cfg = tabeval.RunConfig(**(args.get("config") or {}))
    report = tabeval.evaluate(tabeval.load_corpus(args["path"]), cfg)
    return report.summary_dict()


def op_load_corpus(args):
    return [
        {
            "page_id": rec.page_id,
            "width": rec.width,
            "height": rec.height,
            "ground_truth": [_table_entry(t) for t in rec.ground_truth],
            "predictions": [_table_entry(t) for t in rec.predictions],
            "tokens": [
                {"bbox": [t.bbox.x0, t.bbox.y0, t.bbox.x1, t.bbox.y1],
                 "text": t.text}
                for t in rec.tokens
            ],
            "warnings": list(rec.warnings),
        }
        for rec in tabeval.load_corpus(args["path"])
    ]


def op_teds(args):
    return tabeval.teds(tabeval.table_tree(args["a"]), tabeval.table_tree(args["b"]))


def op_grits_topology(args):
    return tabeval.grits_topology(_grid(args["a"]), _grid(args["b"]))


def op_grits_content(args):
    return tabeval.grits_content(_grid(args["a"]), _grid(args["b"]))


def op_content_jaccard(args):
    return tabeval.content_jaccard(_grid(args["a"]), _grid(args["b"]))


def op_expected_indicator(args):
    return tabeval.expected_indicator(args["j"], tabeval.ThresholdDensity(args["s"]))


def op_d_ece(args):
    pairs = [(float(c), bool(t)) for c, t in args["predictions"]]
    score, bins = tabeval.d_ece(pairs, args.get("bins", 10))
    return {
        "score": score,
        "bins": [
            {"lo": b.lo, "hi": b.hi, "count": b.count,
             "mean_confidence": b.mean_confidence, "precision": b.precision}
            for b in bins
        ],
    }


def op_average_precision(args):
    points = [
        tabeval.PRPoint(p["theta_c"], p["precision"], p["recall"])
        for p in args["points"]
    ]
    return tabeval.average_precision(points)


OPS = {
    "version": op_version,
    "score_pair": op_score_pair,
    "evaluate_corpus": op_evaluate_corpus,
    "load_corpus": op_load_corpus,
    "teds": op_teds,
    "grits_topology": op_grits_topology,
    "grits_content": op_grits_content,
    "content_jaccard": op_content_jaccard,
    "expected_indicator": op_expected_indicator,
    "d_ece": op_d_ece,
    "average_precision": op_average_precision,
}


def _fail(exc):
    return {"ok": False,
            "error": {"type": type(exc).__name__, "message": str(exc)}}


def main():
    try:
        request = json.load(sys.stdin)
        name = request["op"]
        handler = OPS.get(name)
        if handler is None:
            raise ValueError(f"unknown op: {name!r}")
        response = {"ok": True, "value": handler(request.get("args") or {})}
    except Exception as exc:
        response = _fail(exc)
    json.dump(response, sys.stdout)


if __name__ == "__main__":
    main()
