"""Expression DAGs for f: R^n -> R^p.

Provides a text parser, real and natural-extension interval evaluation,
symbolic differentiation, and interval/real Jacobians.  For the hot paths
(contractors, paver) expressions are compiled once into flat instruction
programs evaluated over parallel endpoint arrays; the compiled form also
implements the forward-backward (HC4) sweep.

Grammar (binary ops left-associative)::

    sum    := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INTEGER)*        # integer exponent k >= 0
    atom   := NUMBER | NAME '(' sum ')' | NAME | '(' sum ')'

Functions: sin, cos, exp, sqr.  Unknown names are rejected.
"""

from __future__ import annotations

import math
import re
from math import inf
from typing import Dict, List, Optional, Sequence, Tuple

from . import backward as bwd
from .box import Box, IntervalMatrix
from .interval import (
    EMPTY,
    Interval,
    add_lh,
    cos_lh,
    div_lh,
    div_extended_lh,
    exp_lh,
    mul_lh,
    pow_lh,
    sin_lh,
    sqr_lh,
    sub_lh,
)

# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------

UNARY_FUNCS = ("neg", "sqr", "exp", "sin", "cos", "pow")
BINARY_FUNCS = ("add", "sub", "mul", "div")


class Expr:
    __slots__ = ()

    def __add__(self, other: "Expr") -> "Expr":
        return Binary("add", self, _to_expr(other))

    def __sub__(self, other: "Expr") -> "Expr":
        return Binary("sub", self, _to_expr(other))

    def __mul__(self, other: "Expr") -> "Expr":
        return Binary("mul", self, _to_expr(other))

    def __truediv__(self, other: "Expr") -> "Expr":
        return Binary("div", self, _to_expr(other))

    def __neg__(self) -> "Expr":
        return Unary("neg", self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {to_str(self)}>"


class Var(Expr):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        self.value = float(value)


class Unary(Expr):
    __slots__ = ("op", "child", "k")

    def __init__(self, op: str, child: Expr, k: int = 0):
        if op not in UNARY_FUNCS:
            raise ValueError(f"unknown unary op {op!r}")
        self.op = op
        self.child = child
        self.k = k  # exponent, pow only


class Binary(Expr):
    __slots__ = ("op", "left", "right")

    def __init__(self, op: str, left: Expr, right: Expr):
        if op not in BINARY_FUNCS:
            raise ValueError(f"unknown binary op {op!r}")
        self.op = op
        self.left = left
        self.right = right


def _to_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return Const(float(v))
    raise TypeError(f"cannot use {v!r} as expression")


def same_structure(a: Expr, b: Expr) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return a.index == b.index
    if isinstance(a, Const):
        return a.value == b.value
    if isinstance(a, Unary):
        return a.op == b.op and a.k == b.k and same_structure(a.child, b.child)
    return (
        a.op == b.op
        and same_structure(a.left, b.left)
        and same_structure(a.right, b.right)
    )


def max_var_index(e: Expr) -> int:
    """Largest variable index used, -1 if constant (iterative DAG walk)."""
    best = -1
    stack = [e]
    seen = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Var):
            best = max(best, node.index)
        elif isinstance(node, Unary):
            stack.append(node.child)
        elif isinstance(node, Binary):
            stack.append(node.left)
            stack.append(node.right)
    return best


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax or name error; carries the 0-based character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNC_NAMES = {"sin", "cos", "exp", "sqr"}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.var_index = {name: i for i, name in enumerate(variables)}

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> Expr:
        e = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)
        return e

    def sum(self) -> Expr:
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                e = Binary("add" if val == "+" else "sub", e, rhs)
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.unary()
                e = Binary("mul" if val == "*" else "div", e, rhs)
            else:
                return e

    def unary(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "^":
                self.advance()
                nkind, nval, npos = self.peek()
                if nkind != "num":
                    raise ParseError("integer exponent expected after '^'", npos)
                fval = float(nval)
                if fval != int(fval) or int(fval) < 0:
                    raise ParseError(
                        "exponent must be a non-negative integer", npos
                    )
                self.advance()
                k = int(fval)
                e = Unary("pow", e, k) if k != 2 else Unary("sqr", e)
            else:
                return e

    def atom(self) -> Expr:
        kind, val, pos = self.advance()
        if kind == "num":
            return Const(float(val))
        if kind == "op" and val == "(":
            e = self.sum()
            self.expect_op(")")
            return e
        if kind == "name":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in _FUNC_NAMES:
                    raise ParseError(f"unknown function {val!r}", pos)
                self.advance()
                arg = self.sum()
                self.expect_op(")")
                return Unary(val, arg)
            if val in self.var_index:
                return Var(self.var_index[val])
            raise ParseError(f"unknown variable {val!r}", pos)
        raise ParseError("expression expected", pos)


def parse_expression(text: str, variables: Sequence[str]) -> Expr:
    """Parse text into an expression over the named variables."""
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# pretty printer (round-trips through parse_expression)
# ---------------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def to_str(e: Expr, names: Optional[Sequence[str]] = None) -> str:
    def name(i: int) -> str:
        return names[i] if names is not None else f"x{i + 1}"

    def fmt(node: Expr, parent_prec: int, right_side: bool) -> str:
        if isinstance(node, Var):
            return name(node.index)
        if isinstance(node, Const):
            v = node.value
            if v == int(v) and abs(v) < 1e15:
                s = str(int(v))
            else:
                s = repr(v)
            if v < 0:
                return f"({s})"
            return s
        if isinstance(node, Unary):
            if node.op == "neg":
                inner = fmt(node.child, _PREC["neg"], False)
                s = f"-{inner}"
                return f"({s})" if parent_prec > _PREC["neg"] or (
                    parent_prec == _PREC["neg"] and right_side
                ) else s
            if node.op == "pow":
                base = fmt(node.child, _PREC["pow"] + 1, False)
                return f"{base}^{node.k}"
            inner = fmt(node.child, 0, False)
            return f"{node.op}({inner})"
        assert isinstance(node, Binary)
        prec = _PREC[node.op]
        ls = fmt(node.left, prec, False)
        rs = fmt(node.right, prec + 1, True)  # left-assoc: right child binds tighter
        sym = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[node.op]
        s = f"{ls}{sym}{rs}"
        if prec < parent_prec:
            return f"({s})"
        return s

    return fmt(e, 0, False)


# ---------------------------------------------------------------------------
# symbolic differentiation
# ---------------------------------------------------------------------------


def _is_const(e: Expr, v: float) -> bool:
    return isinstance(e, Const) and e.value == v


def _sadd(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Binary("add", a, b)


def _ssub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return Unary("neg", b)
    return Binary("sub", a, b)


def _smul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Binary("mul", a, b)


def differentiate(e: Expr, var: int, _memo: Optional[Dict[int, Expr]] = None) -> Expr:
    """Symbolic partial derivative d(e)/d(x_var).

    Derivatives of shared subexpressions are shared in the output DAG.
    Only the trivial identities (0*u, 1*u, u+0 and friends) are applied.
    """
    if _memo is None:
        _memo = {}
    key = id(e)
    if key in _memo:
        return _memo[key]
    d: Expr
    if isinstance(e, Var):
        d = Const(1.0 if e.index == var else 0.0)
    elif isinstance(e, Const):
        d = Const(0.0)
    elif isinstance(e, Binary):
        du = differentiate(e.left, var, _memo)
        dv = differentiate(e.right, var, _memo)
        if e.op == "add":
            d = _sadd(du, dv)
        elif e.op == "sub":
            d = _ssub(du, dv)
        elif e.op == "mul":
            d = _sadd(_smul(du, e.right), _smul(e.left, dv))
        else:  # div: (u'v - uv')/v^2
            num = _ssub(_smul(du, e.right), _smul(e.left, dv))
            if _is_const(num, 0.0):
                d = Const(0.0)
            else:
                d = Binary("div", num, Unary("sqr", e.right))
    else:
        assert isinstance(e, Unary)
        du = differentiate(e.child, var, _memo)
        u = e.child
        if e.op == "neg":
            d = Const(0.0) if _is_const(du, 0.0) else _negd(du)
        elif e.op == "sqr":
            d = _smul(_smul(Const(2.0), u), du)
        elif e.op == "exp":
            d = _smul(e, du)  # reuse the exp node itself
        elif e.op == "sin":
            d = _smul(Unary("cos", u), du)
        elif e.op == "cos":
            d = _smul(Unary("neg", Unary("sin", u)), du)
        else:  # pow, k >= 0
            if e.k == 0:
                d = Const(0.0)
            elif e.k == 1:
                d = du
            else:
                if e.k == 2:
                    inner: Expr = u
                elif e.k == 3:
                    inner = Unary("sqr", u)
                else:
                    inner = Unary("pow", u, e.k - 1)
                d = _smul(_smul(Const(float(e.k)), inner), du)
    _memo[key] = d
    return d


def _negd(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Unary) and e.op == "neg":
        return e.child
    return Unary("neg", e)


# ---------------------------------------------------------------------------
# compiled programs
# ---------------------------------------------------------------------------

OP_VAR = 0
OP_CONST = 1
OP_NEG = 2
OP_SQR = 3
OP_EXP = 4
OP_SIN = 5
OP_COS = 6
OP_POW = 7
OP_ADD = 8
OP_SUB = 9
OP_MUL = 10
OP_DIV = 11

_UNARY_CODE = {"neg": OP_NEG, "sqr": OP_SQR, "exp": OP_EXP, "sin": OP_SIN, "cos": OP_COS}
_BINARY_CODE = {"add": OP_ADD, "sub": OP_SUB, "mul": OP_MUL, "div": OP_DIV}


class Program:
    """Topologically ordered instruction list for one scalar expression.

    Shared subexpressions (by object identity), repeated variables and
    repeated constants map to a single slot, so the HC4 backward sweep
    naturally intersects the contributions of every occurrence.
    """

    __slots__ = ("ops", "arg1", "arg2", "auxf", "n_vars", "var_slot", "size")

    def __init__(self, expr: Expr, n_vars: int):
        self.n_vars = n_vars
        ops: List[int] = []
        arg1: List[int] = []
        arg2: List[int] = []
        auxf: List[float] = []
        slot_of: Dict[int, int] = {}  # id(node) -> slot
        var_slot: Dict[int, int] = {}  # var index -> slot
        const_slot: Dict[float, int] = {}

        def emit(op: int, a: int, b: int, aux: float) -> int:
            ops.append(op)
            arg1.append(a)
            arg2.append(b)
            auxf.append(aux)
            return len(ops) - 1

        def visit(node: Expr) -> int:
            key = id(node)
            s = slot_of.get(key)
            if s is not None:
                return s
            if isinstance(node, Var):
                if node.index >= n_vars:
                    raise ValueError(
                        f"variable index {node.index} out of range (n={n_vars})"
                    )
                s = var_slot.get(node.index)
                if s is None:
                    s = emit(OP_VAR, node.index, -1, 0.0)
                    var_slot[node.index] = s
            elif isinstance(node, Const):
                s = const_slot.get(node.value)
                if s is None:
                    s = emit(OP_CONST, -1, -1, node.value)
                    const_slot[node.value] = s
            elif isinstance(node, Unary):
                c = visit(node.child)
                if node.op == "pow":
                    s = emit(OP_POW, c, -1, float(node.k))
                else:
                    s = emit(_UNARY_CODE[node.op], c, -1, 0.0)
            else:
                assert isinstance(node, Binary)
                a = visit(node.left)
                b = visit(node.right)
                s = emit(_BINARY_CODE[node.op], a, b, 0.0)
            slot_of[key] = s
            return s

        # iterative DAG walk to avoid recursion limits on deep expressions
        self._compile_iterative(expr, visit)
        self.ops = ops
        self.arg1 = arg1
        self.arg2 = arg2
        self.auxf = auxf
        self.var_slot = var_slot
        self.size = len(ops)

    @staticmethod
    def _compile_iterative(root: Expr, visit) -> None:
        # emulate post-order: push (node, expanded?) pairs
        stack: List[Tuple[Expr, bool]] = [(root, False)]
        done = set()
        while stack:
            node, expanded = stack.pop()
            if id(node) in done:
                continue
            if expanded or isinstance(node, (Var, Const)):
                visit(node)
                done.add(id(node))
            else:
                stack.append((node, True))
                if isinstance(node, Unary):
                    stack.append((node.child, False))
                else:
                    stack.append((node.right, False))
                    stack.append((node.left, False))

    # -- real evaluation ----------------------------------------------------

    def eval_real(self, x: Sequence[float]) -> float:
        """Point evaluation; NaN on division by zero or domain violation."""
        vals = [0.0] * self.size
        ops, arg1, arg2, auxf = self.ops, self.arg1, self.arg2, self.auxf
        try:
            for i in range(self.size):
                op = ops[i]
                if op == OP_VAR:
                    vals[i] = x[arg1[i]]
                elif op == OP_CONST:
                    vals[i] = auxf[i]
                elif op == OP_ADD:
                    vals[i] = vals[arg1[i]] + vals[arg2[i]]
                elif op == OP_SUB:
                    vals[i] = vals[arg1[i]] - vals[arg2[i]]
                elif op == OP_MUL:
                    vals[i] = vals[arg1[i]] * vals[arg2[i]]
                elif op == OP_DIV:
                    vals[i] = vals[arg1[i]] / vals[arg2[i]]
                elif op == OP_NEG:
                    vals[i] = -vals[arg1[i]]
                elif op == OP_SQR:
                    v = vals[arg1[i]]
                    vals[i] = v * v
                elif op == OP_EXP:
                    vals[i] = math.exp(vals[arg1[i]])
                elif op == OP_SIN:
                    vals[i] = math.sin(vals[arg1[i]])
                elif op == OP_COS:
                    vals[i] = math.cos(vals[arg1[i]])
                else:  # OP_POW
                    vals[i] = vals[arg1[i]] ** int(auxf[i])
        except (ZeroDivisionError, OverflowError, ValueError):
            return math.nan
        return vals[-1]

    # -- interval evaluation --------------------------------------------

    def forward_interval(
        self, xlo: Sequence[float], xhi: Sequence[float]
    ) -> Tuple[List[float], List[float]]:
        lo = [0.0] * self.size
        hi = [0.0] * self.size
        ops, arg1, arg2, auxf = self.ops, self.arg1, self.arg2, self.auxf
        for i in range(self.size):
            op = ops[i]
            if op == OP_VAR:
                j = arg1[i]
                lo[i] = xlo[j]
                hi[i] = xhi[j]
            elif op == OP_CONST:
                lo[i] = hi[i] = auxf[i]
            else:
                a = arg1[i]
                if op == OP_ADD:
                    b = arg2[i]
                    lo[i], hi[i] = add_lh(lo[a], hi[a], lo[b], hi[b])
                elif op == OP_SUB:
                    b = arg2[i]
                    lo[i], hi[i] = sub_lh(lo[a], hi[a], lo[b], hi[b])
                elif op == OP_MUL:
                    b = arg2[i]
                    lo[i], hi[i] = mul_lh(lo[a], hi[a], lo[b], hi[b])
                elif op == OP_DIV:
                    b = arg2[i]
                    if lo[b] > 0.0 or hi[b] < 0.0:
                        lo[i], hi[i] = div_lh(lo[a], hi[a], lo[b], hi[b])
                    else:
                        p1, p2 = div_extended_lh(lo[a], hi[a], lo[b], hi[b])
                        if p1 is None:
                            lo[i], hi[i] = inf, -inf  # empty: no divisor
                        elif p2 is None:
                            lo[i], hi[i] = p1
                        else:
                            lo[i], hi[i] = p1[0], p2[1]
                elif op == OP_NEG:
                    lo[i], hi[i] = -hi[a], -lo[a]
                elif op == OP_SQR:
                    lo[i], hi[i] = sqr_lh(lo[a], hi[a])
                elif op == OP_EXP:
                    lo[i], hi[i] = exp_lh(lo[a], hi[a])
                elif op == OP_SIN:
                    lo[i], hi[i] = sin_lh(lo[a], hi[a])
                elif op == OP_COS:
                    lo[i], hi[i] = cos_lh(lo[a], hi[a])
                else:  # OP_POW
                    lo[i], hi[i] = pow_lh(lo[a], hi[a], int(auxf[i]))
                if lo[i] > hi[i]:  # division by [0,0]: no value anywhere
                    lo[-1], hi[-1] = inf, -inf
                    return lo, hi
        return lo, hi

    def eval_interval(self, box: Box) -> Interval:
        if box.is_empty:
            return EMPTY
        xlo = [iv.lo for iv in box.ivs]
        xhi = [iv.hi for iv in box.ivs]
        lo, hi = self.forward_interval(xlo, xhi)
        if lo[-1] > hi[-1]:
            return EMPTY
        return Interval.from_pair((lo[-1], hi[-1]))

    # -- HC4 revise -------------------------------------------------------

    def hc4_revise(
        self,
        xlo: List[float],
        xhi: List[float],
        root_lo: float = 0.0,
        root_hi: float = 0.0,
    ) -> bool:
        """Forward-backward sweep for constraint expr in [root_lo, root_hi].

        Contracts xlo/xhi in place; returns False when the constraint is
        infeasible on the box (the box content is then meaningless).
        """
        lo, hi = self.forward_interval(xlo, xhi)
        r = self.size - 1
        if lo[r] > hi[r]:
            return False
        # intersect root with the constraint range
        nl = lo[r] if lo[r] >= root_lo else root_lo
        nh = hi[r] if hi[r] <= root_hi else root_hi
        if nl > nh:
            return False
        lo[r], hi[r] = nl, nh
        ops, arg1, arg2, auxf = self.ops, self.arg1, self.arg2, self.auxf
        for i in range(r, -1, -1):
            op = ops[i]
            if op == OP_VAR:
                continue
            if op == OP_CONST:
                if lo[i] > auxf[i] or hi[i] < auxf[i]:
                    return False
                continue
            a = arg1[i]
            y = (lo[i], hi[i])
            if op <= OP_POW:  # unary
                pa = (lo[a], hi[a])
                if op == OP_NEG:
                    na = bwd.bwd_neg_lh(y, pa)
                elif op == OP_SQR:
                    na = bwd.bwd_sqr_lh(y, pa)
                elif op == OP_EXP:
                    na = bwd.bwd_exp_lh(y, pa)
                elif op == OP_SIN:
                    na = bwd.bwd_sin_lh(y, pa)
                elif op == OP_COS:
                    na = bwd.bwd_cos_lh(y, pa)
                else:
                    na = bwd.bwd_pow_lh(y, pa, int(auxf[i]))
                if na[0] > na[1]:
                    return False
                lo[a], hi[a] = na
            else:
                b = arg2[i]
                pa = (lo[a], hi[a])
                pb = (lo[b], hi[b])
                if op == OP_ADD:
                    na, nb = bwd.bwd_add_lh(y, pa, pb)
                elif op == OP_SUB:
                    na, nb = bwd.bwd_sub_lh(y, pa, pb)
                elif op == OP_MUL:
                    na, nb = bwd.bwd_mul_lh(y, pa, pb)
                else:
                    na, nb = bwd.bwd_div_lh(y, pa, pb)
                if na[0] > na[1] or nb[0] > nb[1]:
                    return False
                lo[a], hi[a] = na
                lo[b], hi[b] = nb
        for j, s in self.var_slot.items():
            xlo[j] = lo[s]
            xhi[j] = hi[s]
        return True


# ---------------------------------------------------------------------------
# Function: f = (f_1 ... f_p) over named variables
# ---------------------------------------------------------------------------


class Function:
    """Vector function R^n -> R^p given by component expressions."""

    def __init__(self, names: Sequence[str], components: Sequence[Expr]):
        self.names = list(names)
        self.n = len(self.names)
        self.components = list(components)
        self.p = len(self.components)
        for c in self.components:
            if max_var_index(c) >= self.n:
                raise ValueError("component references an undeclared variable")
        self._programs: Optional[List[Program]] = None
        self._jac_exprs: Optional[List[List[Expr]]] = None
        self._jac_programs: Optional[List[List[Program]]] = None
        self._hess_programs: Optional[List[List[List[Program]]]] = None

    @classmethod
    def parse(cls, names: Sequence[str], texts: Sequence[str]) -> "Function":
        return cls(names, [parse_expression(t, names) for t in texts])

    # -- cached compilation -------------------------------------------------

    @property
    def programs(self) -> List[Program]:
        if self._programs is None:
            self._programs = [Program(c, self.n) for c in self.components]
        return self._programs

    @property
    def jacobian_exprs(self) -> List[List[Expr]]:
        if self._jac_exprs is None:
            self._jac_exprs = [
                [differentiate(c, j) for j in range(self.n)] for c in self.components
            ]
        return self._jac_exprs

    @property
    def jacobian_programs(self) -> List[List[Program]]:
        if self._jac_programs is None:
            self._jac_programs = [
                [Program(d, self.n) for d in row] for row in self.jacobian_exprs
            ]
        return self._jac_programs

    @property
    def hessian_programs(self) -> List[List[List[Program]]]:
        """hessian_programs[i][j][k] evaluates d2 f_i / (dx_j dx_k)."""
        if self._hess_programs is None:
            self._hess_programs = [
                [
                    [Program(differentiate(d, k), self.n) for k in range(self.n)]
                    for d in row
                ]
                for row in self.jacobian_exprs
            ]
        return self._hess_programs

    # -- evaluation -----------------------------------------------------------

    def eval_real(self, x: Sequence[float]) -> List[float]:
        return [prog.eval_real(x) for prog in self.programs]

    def eval_interval(self, box: Box) -> List[Interval]:
        return [prog.eval_interval(box) for prog in self.programs]

    def jacobian_real(self, x: Sequence[float]) -> List[List[float]]:
        return [[prog.eval_real(x) for prog in row] for row in self.jacobian_programs]

    def jacobian_interval(self, box: Box) -> IntervalMatrix:
        return IntervalMatrix(
            [[prog.eval_interval(box) for prog in row] for row in self.jacobian_programs]
        )

    def linear_combination(self, q: Sequence[Sequence[float]]) -> "Function":
        """Structural Q . f: each output component is sum_j q[i][j]*f_j."""
        comps: List[Expr] = []
        for row in q:
            if len(row) != self.p:
                raise ValueError("coefficient row length mismatch")
            acc: Expr = Const(0.0)
            for coef, comp in zip(row, self.components):
                acc = _sadd(acc, _smul(Const(float(coef)), comp))
            comps.append(acc)
        return Function(self.names, comps)

    def __repr__(self) -> str:
        return f"Function(n={self.n}, p={self.p})"
