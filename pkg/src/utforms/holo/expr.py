"""A small language of analytic functions of one complex variable ``z``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | base ('^' int)?
    base   := number | 'z' | func '(' expr ')' | '(' expr ')'
    func   := 'exp' | 'log' | 'sqrt'

Numbers take an optional ``i`` suffix (``2.5i``); a bare ``i`` is the
imaginary unit. ``log`` and ``sqrt`` use principal branches, and their
arguments must be affine in ``z`` so that the branch cut is a ray.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import DivisionByZeroConstant, ParseError, SingularityHit

FUNCS = ("exp", "log", "sqrt")


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    offset: int = field(default=0, compare=False)


Node = Union[Num, Var, Neg, BinOp, Pow, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<name>[A-Za-z_]+)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(source):
            m = _TOKEN.match(source, pos)
            if m is None:
                raise ParseError(f"unexpected character {source[pos]!r}", self._byte(pos))
            kind = m.lastgroup
            if kind != "ws":
                self.tokens.append((kind, m.group(), self._byte(pos)))
            pos = m.end()
        self.tokens.append(("end", "", self._byte(len(source))))
        self.i = 0

    def _byte(self, char_pos: int) -> int:
        return len(self.source[:char_pos].encode("utf-8"))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        kind, val, off = self.take()
        if val != text:
            raise ParseError(f"expected {text!r}, found {val or 'end of input'!r}", off)

    def parse(self) -> Node:
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", off)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, off = self.take()
            node = BinOp(op, node, self.term(), off)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, off = self.take()
            node = BinOp(op, node, self.factor(), off)
        return node

    def factor(self) -> Node:
        _, val, _ = self.peek()
        if val in ("-", "+"):
            self.take()
            arg = self.factor()
            return Neg(arg) if val == "-" else arg
        node = self.base()
        if self.peek()[1] == "^":
            self.take()
            kind, val, off = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a non-negative integer literal", off)
            node = Pow(node, int(val))
        return node

    def base(self) -> Node:
        kind, val, off = self.take()
        if kind == "num":
            if val.endswith("i"):
                return Num(complex(0.0, float(val[:-1])))
            return Num(complex(float(val)))
        if kind == "name":
            if val == "z":
                return Var()
            if val == "i":
                return Num(1j)
            if val in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg, off)
            raise ParseError(f"unknown name {val!r}", off)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", off)


def pretty(node: Node) -> str:
    """Canonical source text; ``parse(pretty(t)).ast == t`` for parsed trees."""
    if isinstance(node, Num):
        v = node.value
        if v.imag == 0:
            return repr(v.real)
        if v.real == 0:
            return repr(v.imag) + "i"
        return f"({v.real!r} + {v.imag!r}i)"
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return f"(-{pretty(node.arg)})"
    if isinstance(node, BinOp):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    if isinstance(node, Pow):
        base = pretty(node.base)
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    raise TypeError(node)


def evaluate(node: Node, z):
    """Evaluate the tree at ``z`` (scalar or array), principal branches throughout."""
    if isinstance(node, Num):
        return node.value + 0 * z
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return -evaluate(node.arg, z)
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, z), evaluate(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        return evaluate(node.base, z) ** node.exponent
    if isinstance(node, Call):
        return getattr(np, node.func)(evaluate(node.arg, z))
    raise TypeError(node)


# -- truncated power series ---------------------------------------------------


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: a.size]


def _series_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    q = np.zeros_like(a)
    for k in range(a.size):
        q[k] = (a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1][:k])) / b[0]
    return q


def _series_exp(a: np.ndarray) -> np.ndarray:
    e = np.zeros_like(a)
    e[0] = np.exp(a[0])
    for k in range(1, a.size):
        j = np.arange(1, k + 1)
        e[k] = np.dot(j * a[1 : k + 1], e[k - 1 :: -1][:k]) / k
    return e


def _series_log(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[0] = np.log(a[0])
    for k in range(1, a.size):
        j = np.arange(1, k)
        out[k] = (a[k] - np.dot(j * out[1:k], a[k - 1 : 0 : -1]) / k) / a[0]
    return out


def _series_sqrt(a: np.ndarray) -> np.ndarray:
    s = np.zeros_like(a)
    s[0] = np.sqrt(a[0])
    for k in range(1, a.size):
        s[k] = (a[k] - np.dot(s[1:k], s[k - 1 : 0 : -1])) / (2 * s[0])
    return s


def taylor(node: Node, center: complex, degree: int) -> np.ndarray:
    """Coefficients ``c_k = h^(k)(center) / k!`` for ``k = 0 .. degree``."""
    size = degree + 1

    def go(nd: Node) -> np.ndarray:
        if isinstance(nd, Num):
            out = np.zeros(size, dtype=np.complex128)
            out[0] = nd.value
            return out
        if isinstance(nd, Var):
            out = np.zeros(size, dtype=np.complex128)
            out[0] = center
            if size > 1:
                out[1] = 1.0
            return out
        if isinstance(nd, Neg):
            return -go(nd.arg)
        if isinstance(nd, BinOp):
            a, b = go(nd.left), go(nd.right)
            if nd.op == "+":
                return a + b
            if nd.op == "-":
                return a - b
            if nd.op == "*":
                return _series_mul(a, b)
            return _series_div(a, b)
        if isinstance(nd, Pow):
            b = go(nd.base)
            out = np.zeros(size, dtype=np.complex128)
            out[0] = 1.0
            for _ in range(nd.exponent):
                out = _series_mul(out, b)
            return out
        if isinstance(nd, Call):
            a = go(nd.arg)
            return {"exp": _series_exp, "log": _series_log, "sqrt": _series_sqrt}[nd.func](a)
        raise TypeError(nd)

    return go(node)


# -- singularity analysis -----------------------------------------------------


def as_polynomial(node: Node) -> np.ndarray | None:
    """Ascending coefficients if ``node`` is a polynomial in ``z``, else ``None``.

    Constant subexpressions (including calls with constant arguments) count as
    degree-0 polynomials.
    """
    if isinstance(node, Num):
        return np.array([node.value], dtype=np.complex128)
    if isinstance(node, Var):
        return np.array([0.0, 1.0], dtype=np.complex128)
    if isinstance(node, Neg):
        p = as_polynomial(node.arg)
        return None if p is None else -p
    if isinstance(node, Pow):
        p = as_polynomial(node.base)
        return None if p is None else P.polypow(p, node.exponent)
    if isinstance(node, BinOp):
        a, b = as_polynomial(node.left), as_polynomial(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return P.polyadd(a, b)
        if node.op == "-":
            return P.polysub(a, b)
        if node.op == "*":
            return P.polymul(a, b)
        b = P.polytrim(b)
        if b.size == 1 and b[0] != 0:
            return a / b[0]
        return None
    if isinstance(node, Call):
        a = as_polynomial(node.arg)
        if a is not None and P.polytrim(a).size == 1:
            return np.array([evaluate(node, 0.0)], dtype=np.complex128)
        return None
    raise TypeError(node)


def _roots(p: np.ndarray) -> list[complex]:
    p = P.polytrim(p)
    if p.size <= 1:
        return []
    # companion-matrix eigenvalues
    return [complex(r) for r in P.polyroots(p)]


def _zeros(node: Node, offset: int) -> list[complex]:
    """Zeros of ``node`` as a function of ``z``; raises if they cannot be located."""
    p = as_polynomial(node)
    if p is not None:
        trimmed = P.polytrim(p)
        if trimmed.size == 1 and trimmed[0] == 0:
            raise DivisionByZeroConstant("division by a denominator that is identically zero", offset)
        return _roots(p)
    if isinstance(node, Neg):
        return _zeros(node.arg, offset)
    if isinstance(node, Pow):
        return _zeros(node.base, offset) if node.exponent > 0 else []
    if isinstance(node, BinOp) and node.op == "*":
        return _zeros(node.left, offset) + _zeros(node.right, offset)
    if isinstance(node, BinOp) and node.op == "/":
        return _zeros(node.left, offset)
    if isinstance(node, Call):
        if node.func == "exp":
            return []
        if node.func == "sqrt":
            return _zeros(node.arg, offset)
        if node.func == "log":
            return _zeros(BinOp("-", node.arg, Num(1.0)), offset)
    raise ParseError("cannot locate the zeros of this denominator", offset)


@dataclass(frozen=True)
class BranchCut:
    """The ray ``{point + t * direction : t >= 0}`` (``|direction| = 1``)."""

    point: complex
    direction: complex

    def distance(self, z: complex) -> float:
        t = max(0.0, ((z - self.point) * np.conj(self.direction)).real)
        return abs(z - (self.point + t * self.direction))


def _walk(node: Node):
    yield node
    for child in ("arg", "left", "right", "base"):
        sub = getattr(node, child, None)
        if sub is not None:
            yield from _walk(sub)


def _analyse(node: Node) -> tuple[tuple[complex, ...], tuple[BranchCut, ...]]:
    poles: list[complex] = []
    cuts: list[BranchCut] = []
    for nd in _walk(node):
        if isinstance(nd, BinOp) and nd.op == "/":
            poles.extend(_zeros(nd.right, nd.offset))
        elif isinstance(nd, Call) and nd.func in ("log", "sqrt"):
            p = as_polynomial(nd.arg)
            if p is None or P.polytrim(p).size > 2:
                raise ParseError(f"argument of {nd.func} must be affine in z", nd.offset)
            p = P.polytrim(p)
            if p.size == 1:
                if nd.func == "log" and p[0] == 0:
                    raise DivisionByZeroConstant("log of zero", nd.offset)
                continue
            b, a = p[0], p[1]
            # a z + b lies on (-inf, 0]  <=>  z = -b/a - t/a, t >= 0
            cuts.append(BranchCut(complex(-b / a), complex(-np.conj(a) / abs(a))))
    return tuple(poles), tuple(cuts)


@dataclass(frozen=True)
class HoloFunction:
    """A parsed function together with where it fails to be holomorphic."""

    source: str
    ast: Node
    poles: tuple[complex, ...]
    cuts: tuple[BranchCut, ...]

    def __call__(self, z):
        with np.errstate(all="ignore"):
            return evaluate(self.ast, z)

    def taylor(self, center: complex, degree: int) -> np.ndarray:
        if self.is_singular_at(center):
            raise SingularityHit(f"{self.source!r} is singular at {center}")
        return taylor(self.ast, complex(center), degree)

    @property
    def polynomial(self) -> np.ndarray | None:
        return as_polynomial(self.ast)

    @property
    def is_entire(self) -> bool:
        return not self.poles and not self.cuts

    def singularity_distance(self, z: complex) -> float:
        d = [abs(z - p) for p in self.poles] + [c.distance(z) for c in self.cuts]
        return min(d) if d else float("inf")

    def is_singular_at(self, z: complex, tol: float | None = None) -> bool:
        if tol is None:
            tol = 1e-12 * max(1.0, abs(z))
        return self.singularity_distance(z) <= tol

    def pretty(self) -> str:
        return pretty(self.ast)


def parse(source: str) -> HoloFunction:
    """Parse ``source`` and locate its poles and branch cuts.

    Raises:
        ParseError: on syntax errors (with byte offset), or when a denominator's
            zeros or a branch cut cannot be determined.
        DivisionByZeroConstant: when a denominator is identically zero.
    """
    ast = _Parser(source).parse()
    poles, cuts = _analyse(ast)
    return HoloFunction(source, ast, poles, cuts)
