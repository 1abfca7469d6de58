"""Expression parsing, canonical printing, and the ``.psn`` structure format.

Expression grammar (``*`` is mandatory, ``^`` binds tighter than ``*`` and
``/``, a leading sign applies to the whole product that follows it)::

    expr    := term (('+' | '-') term)*
    term    := ('+' | '-')? product
    product := power (('*' | '/') power)*
    power   := atom ('^' INTEGER)?
    atom    := INTEGER | NAME | '(' expr ')'

Division is only accepted when the divisor is a nonzero constant, so
``3/2*x1`` is fine and ``x1/x2`` is rejected.

Structure files::

    vars: x1 x2 x3 x4
    pair: s = x1*x4 - x2*x3 ; t = 1
    pair: s = x2 ; t = x3
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

from .poly import Poly, canonical_key

if TYPE_CHECKING:
    from .bracket import PoissonStructure


class ParseError(ValueError):
    """A rejected expression or structure file, with a 1-based position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def default_names(nvars: int) -> list:
    return [f"x{i}" for i in range(1, nvars + 1)]


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), col0 + pos))
        pos = m.end()
    tokens.append(_Token("end", "", col0 + len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str], line: int, col0: int):
        self.tokens = _tokenize(text, line, col0)
        self.index = {name: i for i, name in enumerate(names, start=1)}
        self.nvars = len(names)
        self.line = line
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.line, tok.col)

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.pos += 1
            return True
        return False

    def parse(self) -> Poly:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        result = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return result

    def expr(self) -> Poly:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Poly:
        if self.accept("-"):
            return -self.product()
        self.accept("+")
        return self.product()

    def product(self) -> Poly:
        result = self.power()
        while True:
            if self.accept("*"):
                result = result * self.power()
            elif self.tok.kind == "op" and self.tok.text == "/":
                slash = self.advance()
                divisor = self.power()
                if not divisor.is_constant():
                    raise self.error("division is only allowed by a nonzero constant", slash)
                value = divisor.constant_value()
                if not value:
                    raise self.error("division by zero", slash)
                result = result.scale(1 / value)
            else:
                return result

    def power(self) -> Poly:
        base = self.atom()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "int":
                raise self.error("malformed exponent: expected a non-negative integer")
            self.advance()
            return base ** int(tok.text)
        return base

    def atom(self) -> Poly:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Poly.constant(int(tok.text), self.nvars)
        if tok.kind == "name":
            self.advance()
            if tok.text not in self.index:
                raise self.error(f"unknown identifier {tok.text!r}", tok)
            return Poly.var(self.index[tok.text], self.nvars)
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                raise self.error("expected ')'")
            return inner
        if tok.kind == "end":
            raise self.error("unexpected end of expression")
        raise self.error(f"unexpected {tok.text!r}")


def _check_names(names: Sequence[str]) -> None:
    seen = set()
    for name in names:
        if not _IDENT.match(name):
            raise ValueError(f"invalid variable name {name!r}")
        if name in seen:
            raise ValueError(f"duplicate variable name {name!r}")
        seen.add(name)


def parse_expr(text: str, names: Sequence[str] | int, *, line: int = 1, column: int = 1) -> Poly:
    """Parse ``text`` into a fully expanded :class:`Poly`.

    ``names`` is either the list of variable names or a variable count, in
    which case the names are ``x1 .. xn``.  ``line`` and ``column`` offset the
    positions reported in :class:`ParseError`.
    """
    if isinstance(names, int):
        names = default_names(names)
    _check_names(names)
    return _Parser(text, names, line, column).parse()


def parse_list(text: str, names: Sequence[str] | int) -> list:
    """Parse a comma-separated list of expressions."""
    out = []
    col = 1
    for piece in text.split(","):
        stripped = piece.strip()
        if not stripped:
            raise ParseError("empty expression in list", 1, col)
        out.append(parse_expr(stripped, names, column=col + piece.index(stripped)))
        col += len(piece) + 1
    return out


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text.strip()!r}") from None


def parse_rationals(text: str) -> list:
    return [parse_rational(piece) for piece in text.split(",")]


# -- printing ---------------------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(m, names) -> str:
    factors = []
    for name, e in zip(names, m):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def print_canonical(f: Poly, names: Sequence[str] | None = None) -> str:
    """Deterministic text form: terms in descending canonical order."""
    if names is None:
        names = default_names(f.nvars)
    if not f:
        return "0"
    pieces = []
    for i, (m, c) in enumerate(f.sorted_terms(canonical_key)):
        mono = _format_monomial(m, names)
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if i == 0:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(pieces)


# -- structure files --------------------------------------------------------

_VARS = re.compile(r"\s*vars\s*:(?P<rest>.*)\Z")
_PAIR = re.compile(r"\s*pair\s*:\s*s\s*=(?P<s>[^;]*);\s*t\s*=(?P<t>.*)\Z")


@dataclass(frozen=True)
class StructureSpec:
    """Raw contents of a structure file, before validation."""

    names: tuple
    pairs: tuple
    lines: tuple = ()
    vars_line: int = 1


def parse_structure_text(text: str) -> StructureSpec:
    names = None
    pairs = []
    lines = []
    vars_line = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip("\r").rstrip()
        if not line.strip():
            continue
        if names is None:
            m = _VARS.match(line)
            if m is None:
                raise ParseError("expected 'vars: <name> <name> ...'", lineno, 1)
            names = m.group("rest").split()
            try:
                _check_names(names)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, 1) from None
            if len(names) < 3:
                raise ParseError(f"need at least 3 variables, got {len(names)}", lineno, 1)
            vars_line = lineno
            continue
        m = _PAIR.match(line)
        if m is None:
            raise ParseError("expected 'pair: s = <expr> ; t = <expr>'", lineno, 1)
        s = parse_expr(m.group("s"), names, line=lineno, column=m.start("s") + 1)
        t = parse_expr(m.group("t"), names, line=lineno, column=m.start("t") + 1)
        pairs.append((s, t))
        lines.append(lineno)
    if names is None:
        raise ParseError("missing 'vars:' line", 1, 1)
    return StructureSpec(tuple(names), tuple(pairs), tuple(lines), vars_line)


def load_structure_text(text: str):
    from .bracket import StructureError, build_structure

    spec = parse_structure_text(text)
    try:
        return build_structure(spec.pairs, names=spec.names)
    except StructureError as exc:
        if exc.pair_index is not None:
            line = spec.lines[exc.pair_index - 1]
        else:
            line = spec.lines[-1] if spec.lines else spec.vars_line
        raise ParseError(str(exc), line, 1) from None


def load_structure_file(path) -> "PoissonStructure":
    """Read and validate a ``.psn`` file (UTF-8, LF or CRLF)."""
    text = Path(path).read_text(encoding="utf-8")
    return load_structure_text(text)


def format_structure(structure) -> str:
    """Render a structure back to ``.psn`` text with LF line endings."""
    names = structure.names
    lines = ["vars: " + " ".join(names)]
    for s, t in structure.pairs:
        lines.append(f"pair: s = {print_canonical(s, names)} ; t = {print_canonical(t, names)}")
    return "\n".join(lines) + "\n"


BUNDLED = ("qmat", "symm", "detprod", "sharedpencil")


def bundled_text(name: str) -> str:
    """Text of a structure file shipped with the package (``qmat``, ``symm``, ...)."""
    from importlib.resources import files

    stem = name[:-4] if name.endswith(".psn") else name
    if stem not in BUNDLED:
        raise FileNotFoundError(f"no bundled structure named {name!r}")
    return files("pspec").joinpath("data", f"{stem}.psn").read_text(encoding="utf-8")


def load_bundled(name: str):
    return load_structure_text(bundled_text(name))
