"""Command-line front end.

Thin client over the service's request/response pipeline: builds a
PaveRequest, executes it in-process (default) or against a running
service (``--server URL``), writes the canonical JSON paving, renders
the optional SVG projection, and prints a run report.

Exit codes: 0 ok, 1 paving truncated by --max-boxes, 2 input/IO error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Tuple

from .box import Box
from .output import (
    boundary_boxes_from_doc,
    dumps_document,
    format_float,
    parse_float,
    svg_string,
)
from .problems import ProblemError, load_problem
from .service.app import problem_to_model, run_pave_request
from .service.models import PaveRequest, parse_eps

EXIT_OK = 0
EXIT_TRUNCATED = 1
EXIT_INPUT = 2


class _CliParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 2 with usage, per contract
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _CliParser(
        prog="pavebox",
        description="Pave the solution set of a nonlinear system with guaranteed boxes.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="NAME", help="built-in problem (delay2)")
    src.add_argument("--problem", metavar="FILE", help="problem description file")
    p.add_argument(
        "--eps",
        required=True,
        help="paving accuracy: float or 2^-k (e.g. 0.0625 or 2^-4)",
    )
    p.add_argument(
        "--contractor",
        choices=["hc4", "centered"],
        default="centered",
        help="contractor used at every paver node (default: centered)",
    )
    p.add_argument(
        "--out", metavar="JSON", default="paving.json", help="output paving JSON path"
    )
    p.add_argument("--svg", metavar="SVG", help="optional SVG projection path")
    p.add_argument(
        "--project",
        nargs=2,
        metavar=("VAR", "VAR"),
        help="projection variables for the SVG (overrides the problem file)",
    )
    p.add_argument("--max-boxes", type=int, default=10**6, help="safety cap")
    p.add_argument(
        "--threads",
        type=int,
        default=0,
        help="parallel workers; 0 = reference single-threaded mode",
    )
    p.add_argument(
        "--server",
        metavar="URL",
        help="delegate the computation to a running pavebox service",
    )
    p.add_argument(
        "--frame",
        nargs=4,
        type=float,
        metavar=("XLO", "XHI", "YLO", "YHI"),
        help="SVG frame (defaults: delay2 uses [0,2.5]x[2,4], else the domains)",
    )
    return p


def _pave_remote(server: str, request: PaveRequest) -> dict:
    import httpx

    resp = httpx.post(
        server.rstrip("/") + "/pave",
        json=request.model_dump(mode="json"),
        timeout=None,
    )
    if resp.status_code != 200:
        raise ValueError(f"server error {resp.status_code}: {resp.text}")
    return resp.json()


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        eps = parse_eps(args.eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    problem_model = None
    if args.problem is not None:
        try:
            spec = load_problem(args.problem)
        except ProblemError as exc:
            print(f"error: {args.problem}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        except OSError as exc:
            print(f"error: cannot read {args.problem}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        problem_model = problem_to_model(spec)

    try:
        request = PaveRequest(
            builtin=args.builtin,
            problem=problem_model,
            eps=args.eps,
            contractor=args.contractor,
            max_boxes=args.max_boxes,
            threads=args.threads,
            project=tuple(args.project) if args.project else None,
        )
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    duration_ms: Optional[int] = None
    try:
        if args.server:
            doc = _pave_remote(args.server, request)
            duration_ms = doc.get("result", {}).get("duration_ms")
            doc["result"]["duration_ms"] = None  # canonical file form
            spec = None
        else:
            spec, paving, doc = run_pave_request(request)
            duration_ms = int(paving.duration_s * 1000)
    except (ValueError, ProblemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_document(doc))
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    svg_path = None
    if args.svg:
        try:
            svg_path = _write_svg(args, doc)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT

    _print_report(args, doc, duration_ms, svg_path)
    truncated = doc["result"]["truncated"]
    return EXIT_TRUNCATED if truncated else EXIT_OK


def _projection_dims(args, doc) -> Tuple[int, int]:
    names = [v["name"] for v in doc["problem"]["vars"]]
    if args.project:
        a, b = args.project
        if a not in names or b not in names:
            raise ValueError(f"projection variables {a!r}, {b!r} must be declared")
        return names.index(a), names.index(b)
    if args.builtin == "delay2":
        return names.index("p1"), names.index("p2")
    if args.problem is not None:
        spec = load_problem(args.problem)
        if spec.projection is not None:
            return spec.projection_dims()
    if len(names) < 2:
        raise ValueError("SVG projection needs at least two variables")
    return 0, 1


def _write_svg(args, doc) -> str:
    di, dj = _projection_dims(args, doc)
    boxes = boundary_boxes_from_doc(doc)
    projected = []
    seen = set()
    for b in boxes:
        key = (b[di].lo, b[di].hi, b[dj].lo, b[dj].hi)
        if key in seen:
            continue
        seen.add(key)
        projected.append(Box([b[di], b[dj]]))
    if args.frame:
        frame = ((args.frame[0], args.frame[1]), (args.frame[2], args.frame[3]))
    elif args.builtin == "delay2":
        frame = ((0.0, 2.5), (2.0, 4.0))  # the reference plotting frame
    else:
        vars_ = doc["problem"]["vars"]
        frame = (
            (parse_float(vars_[di]["lo"]), parse_float(vars_[di]["hi"])),
            (parse_float(vars_[dj]["lo"]), parse_float(vars_[dj]["hi"])),
        )
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(svg_string(projected, frame))
    return args.svg


def _print_report(args, doc, duration_ms: Optional[int], svg_path: Optional[str]) -> None:
    problem_name = args.builtin if args.builtin else args.problem
    counts = doc["result"]["counts"]
    cfg = doc["config"]
    print(f"problem:    {problem_name}")
    print(
        f"config:     eps={cfg['eps']} contractor={cfg['contractor']} "
        f"max_boxes={cfg['max_boxes']} threads={cfg['threads']}"
    )
    print(
        f"counts:     boundary={counts['boundary']} discarded={counts['discarded']} "
        f"bisections={counts['bisections']}"
    )
    if duration_ms is not None:
        print(f"duration:   {duration_ms} ms")
    print(f"truncated:  {'yes' if doc['result']['truncated'] else 'no'}")
    print(f"json:       {args.out}")
    if svg_path:
        print(f"svg:        {svg_path}")


if __name__ == "__main__":
    sys.exit(main())
