"""Problem container and the line-oriented problem file format.

Format (UTF-8 text, `#` starts a comment)::

    var <name> in [<lo>, <hi>]     # one per variable, order = index
    constraint <expression> = 0    # one per constraint
    project <name> <name>          # optional plot projection

The built-in ``delay2`` problem is the imaginary-axis crossing set of
the characteristic function of x'' + 2 x'(t - p1) + x(t - p2) = 0: with
s = j*omega the real and imaginary parts give two equations in
(p1, p2, omega).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .box import Box
from .expr import Function, ParseError, parse_expression


class ProblemError(ValueError):
    """Problem file error with 1-based line/column position."""

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class ProblemSpec:
    """Variables with domains, equality constraints, optional projection."""

    names: List[str]
    domains: List[Tuple[float, float]]
    constraint_texts: List[str]
    projection: Optional[Tuple[str, str]] = None
    _function: Optional[Function] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.names:
            raise ValueError("at least one variable required")
        if len(self.names) != len(self.domains):
            raise ValueError("one domain per variable required")
        if not self.constraint_texts:
            raise ValueError("at least one constraint required")
        for name, (lo, hi) in zip(self.names, self.domains):
            if not lo <= hi:
                raise ValueError(f"empty domain for variable {name!r}")
        if self.projection is not None:
            for name in self.projection:
                if name not in self.names:
                    raise ValueError(f"projection variable {name!r} undeclared")

    @property
    def function(self) -> Function:
        if self._function is None:
            self._function = Function.parse(self.names, self.constraint_texts)
        return self._function

    def initial_box(self) -> Box:
        return Box.from_bounds(self.domains)

    def projection_dims(self) -> Tuple[int, int]:
        if self.projection is None:
            return (0, 1)
        return (self.names.index(self.projection[0]), self.names.index(self.projection[1]))


_VAR_RE = re.compile(
    r"^var\s+(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s+in\s*"
    r"\[\s*(?P<lo>[^,\]]+?)\s*,\s*(?P<hi>[^,\]]+?)\s*\]\s*$"
)
_CONSTRAINT_RE = re.compile(r"^constraint\s+(?P<expr>.+?)\s*=\s*0\s*$")
_PROJECT_RE = re.compile(
    r"^project\s+(?P<a>[A-Za-z_][A-Za-z_0-9]*)\s+(?P<b>[A-Za-z_][A-Za-z_0-9]*)\s*$"
)


def parse_problem(text: str) -> ProblemSpec:
    """Parse the problem DSL; raises ProblemError with line/column."""
    names: List[str] = []
    domains: List[Tuple[float, float]] = []
    constraints: List[str] = []
    constraint_lines: List[int] = []
    projection: Optional[Tuple[str, str]] = None
    proj_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("var"):
            m = _VAR_RE.match(line)
            if not m:
                raise ProblemError("malformed var line (use: var x in [lo, hi])", lineno)
            name = m.group("name")
            if name in names:
                raise ProblemError(f"duplicate variable {name!r}", lineno)
            try:
                lo = float(m.group("lo"))
                hi = float(m.group("hi"))
            except ValueError:
                raise ProblemError("domain bounds must be numbers", lineno) from None
            if not lo <= hi:
                raise ProblemError(f"empty domain [{lo}, {hi}]", lineno)
            names.append(name)
            domains.append((lo, hi))
        elif line.startswith("constraint"):
            m = _CONSTRAINT_RE.match(line)
            if not m:
                raise ProblemError(
                    "malformed constraint line (use: constraint <expr> = 0)", lineno
                )
            constraints.append(m.group("expr"))
            constraint_lines.append(lineno)
        elif line.startswith("project"):
            m = _PROJECT_RE.match(line)
            if not m:
                raise ProblemError("malformed project line (use: project x y)", lineno)
            projection = (m.group("a"), m.group("b"))
            proj_line = lineno
        else:
            raise ProblemError(f"unknown directive {line.split()[0]!r}", lineno)
    if not names:
        raise ProblemError("no variables declared", max(1, text.count("\n") + 1))
    if not constraints:
        raise ProblemError("no constraints declared", max(1, text.count("\n") + 1))
    # parse expressions now so errors carry the file position
    for expr_text, lineno in zip(constraints, constraint_lines):
        try:
            parse_expression(expr_text, names)
        except ParseError as exc:
            raise ProblemError(exc.message, lineno, exc.pos + 1) from None
    if projection is not None:
        for name in projection:
            if name not in names:
                raise ProblemError(f"projection variable {name!r} undeclared", proj_line)
    return ProblemSpec(names, domains, constraints, projection)


def load_problem(path: str) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read())


def builtin_delay2() -> ProblemSpec:
    """Imaginary-axis crossing set for the two-delay second-order system."""
    return ProblemSpec(
        names=["p1", "p2", "w"],
        domains=[(0.0, 2.5), (1.0, 4.0), (0.0, 10.0)],
        constraint_texts=[
            "-w^2 + 2*w*sin(w*p1) + cos(w*p2)",
            "2*w*cos(w*p1) - sin(w*p2)",
        ],
        projection=("p1", "p2"),
    )


BUILTINS: Dict[str, object] = {"delay2": builtin_delay2}


def get_builtin(name: str) -> ProblemSpec:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown builtin {name!r} (available: {', '.join(sorted(BUILTINS))})"
        ) from None
    return factory()  # type: ignore[operator]
