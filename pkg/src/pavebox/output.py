"""Paving serialization: canonical JSON documents and SVG projections.

Endpoints are serialized as decimal strings with 17 significant digits,
which round-trip binary doubles exactly, so rigor survives the file
format.  The document layout is fixed and the writer is deterministic;
`duration_ms` is always null in files (wall-clock time varies between
runs and would break byte-identical output for identical pavings - it
is reported on stdout and by the service instead).
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Sequence, Tuple

from .box import Box
from .paver import Paving
from .problems import ProblemSpec


def format_float(x: float) -> str:
    return format(x, ".17g")


def parse_float(s: str) -> float:
    return float(s)


def paving_document(
    problem: ProblemSpec,
    paving: Paving,
    contractor: str,
    max_boxes: int,
    threads: int = 0,
) -> Dict:
    """The canonical JSON document for a paving run."""
    return {
        "problem": {
            "vars": [
                {"name": name, "lo": format_float(lo), "hi": format_float(hi)}
                for name, (lo, hi) in zip(problem.names, problem.domains)
            ],
            "constraints": list(problem.constraint_texts),
        },
        "config": {
            "eps": format_float(paving.eps),
            "contractor": contractor,
            "max_boxes": max_boxes,
            "threads": threads,
        },
        "result": {
            "boundary": [
                [[format_float(iv.lo), format_float(iv.hi)] for iv in box.ivs]
                for box in paving.boundary
            ],
            "counts": dict(paving.counts),
            "duration_ms": None,
            "truncated": paving.truncated,
        },
    }


def dumps_document(doc: Dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_json(path: str, doc: Dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_document(doc))


def load_json(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def boundary_boxes_from_doc(doc: Dict) -> List[Box]:
    return [
        Box.from_bounds([(parse_float(lo), parse_float(hi)) for lo, hi in entry])
        for entry in doc["result"]["boundary"]
    ]


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

_VIEW = 1000.0


def svg_string(
    boxes2d: Sequence[Box],
    frame: Tuple[Tuple[float, float], Tuple[float, float]],
    fill: str = "#2f6fb4",
) -> str:
    """SVG 1.1 document: one stroke-free rect per box in a 1000x1000 viewBox.

    The frame ((xlo, xhi), (ylo, yhi)) maps affinely onto the viewBox with
    the y axis flipped so increasing y points up.
    """
    (xlo, xhi), (ylo, yhi) = frame
    if not (xlo < xhi and ylo < yhi):
        raise ValueError("frame must have positive extent")
    sx = _VIEW / (xhi - xlo)
    sy = _VIEW / (yhi - ylo)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {_VIEW:g} {_VIEW:g}">',
        f"<!-- frame: x in [{format_float(xlo)}, {format_float(xhi)}], "
        f"y in [{format_float(ylo)}, {format_float(yhi)}] -->",
    ]
    for box in boxes2d:
        bx, by = box[0], box[1]
        x = (bx.lo - xlo) * sx
        w = (bx.hi - bx.lo) * sx
        y = _VIEW - (by.hi - ylo) * sy
        h = (by.hi - by.lo) * sy
        lines.append(
            f'<rect x="{x:.6g}" y="{y:.6g}" width="{w:.6g}" height="{h:.6g}" '
            f'fill="{fill}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(
    path: str,
    boxes2d: Sequence[Box],
    frame: Tuple[Tuple[float, float], Tuple[float, float]],
    fill: str = "#2f6fb4",
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg_string(boxes2d, frame, fill=fill))
