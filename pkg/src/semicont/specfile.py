"""Line-oriented function spec files.

::

    # Heaviside step with H(0) = 1
    domain -1 1
    breakpoints -1 0 1
    piece 0 coeffs 0
    piece 1 coeffs 1
    values 0 1 1
    modify finite (1/2,3) (3/4,0)      # or: modify dense rationals 1

Numerals are integers or ``p/q`` fractions.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core_numeric import ArgumentError, format_rational, parse_rational
from .function_model import (
    MAX_DEGREE,
    CountableModification,
    DenseTag,
    FunctionModel,
    PieceExpr,
    PiecewiseFunction,
)

_NUM = r"[+-]?\d+(?:/\d+)?"
_PAIR = re.compile(rf"\s*\(\s*({_NUM})\s*,\s*({_NUM})\s*\)")
_TOKEN = re.compile(r"\S+")


class SpecError(ValueError):
    """Parse or validation failure with a 1-based position."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _number(tok: str, line: int, col: int) -> Fraction:
    try:
        return parse_rational(tok)
    except ArgumentError as exc:
        raise SpecError(line, col, str(exc)) from None


def _numbers(tokens, line):
    return [_number(t, line, c) for t, c in tokens]


def parse_spec(text: str) -> FunctionModel:
    seen: dict = {}
    pieces: dict = {}
    modification = None
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        word, col = toks[0]
        args = toks[1:]
        if word in ("domain", "breakpoints", "values", "modify") and word in seen:
            raise SpecError(lineno, col, f"duplicate '{word}' directive")
        if word == "domain":
            if len(args) != 2:
                raise SpecError(lineno, col, "domain takes exactly two numbers")
            seen[word] = (lineno, _numbers(args, lineno))
        elif word in ("breakpoints", "values"):
            if not args:
                raise SpecError(lineno, col, f"{word} needs at least one number")
            seen[word] = (lineno, _numbers(args, lineno))
        elif word == "piece":
            if len(args) < 3 or args[1][0] != "coeffs":
                raise SpecError(lineno, col, "expected 'piece <i> coeffs <c0> ...'")
            idx_tok, idx_col = args[0]
            if not idx_tok.isdigit():
                raise SpecError(lineno, idx_col, f"piece index must be a non-negative integer, got {idx_tok!r}")
            idx = int(idx_tok)
            if idx in pieces:
                raise SpecError(lineno, idx_col, f"duplicate piece {idx}")
            coeffs = _numbers(args[2:], lineno)
            if len(coeffs) - 1 > MAX_DEGREE:
                raise SpecError(lineno, args[2][1], f"piece degree exceeds {MAX_DEGREE}")
            pieces[idx] = (lineno, coeffs)
        elif word == "modify":
            seen[word] = (lineno, None)
            modification = _parse_modify(body, args, lineno, col)
        else:
            raise SpecError(lineno, col, f"unknown directive {word!r}")

    end = last_line + 1
    for req in ("domain", "breakpoints", "values"):
        if req not in seen:
            raise SpecError(end, 1, f"missing '{req}' directive")
    if not pieces:
        raise SpecError(end, 1, "missing 'piece' directives")

    dline, (lo, hi) = seen["domain"]
    if lo >= hi:
        raise SpecError(dline, 1, "domain must satisfy lo < hi")
    bline, bps = seen["breakpoints"]
    if len(bps) < 2:
        raise SpecError(bline, 1, "need at least two breakpoints")
    if any(a >= b for a, b in zip(bps, bps[1:])):
        raise SpecError(bline, 1, "breakpoints must be strictly increasing")
    if bps[0] != lo or bps[-1] != hi:
        raise SpecError(bline, 1, "first and last breakpoints must equal the domain ends")
    if len(pieces) != len(bps) - 1:
        line = max(l for l, _ in pieces.values())
        raise SpecError(line, 1, "piece count mismatch")
    for idx, (line, _) in pieces.items():
        if idx >= len(bps) - 1:
            raise SpecError(line, 1, f"piece index {idx} out of range")
    vline, vals = seen["values"]
    if len(vals) != len(bps):
        raise SpecError(vline, 1, "value count must equal breakpoint count")
    if modification is not None and not modification.is_dense:
        mline = seen["modify"][0]
        for x, _ in modification.points:
            if not lo <= x <= hi:
                raise SpecError(mline, 1, f"modification point {format_rational(x)} outside the domain")
    base = PiecewiseFunction(tuple(bps), tuple(PieceExpr(tuple(pieces[i][1])) for i in range(len(bps) - 1)),
                             tuple(vals))
    return FunctionModel(base, modification)


def _parse_modify(body: str, args, lineno: int, col: int) -> CountableModification:
    if not args:
        raise SpecError(lineno, col, "expected 'modify finite ...' or 'modify dense ...'")
    kind, kcol = args[0]
    if kind == "dense":
        if len(args) != 3:
            raise SpecError(lineno, kcol, "expected 'modify dense rationals|dyadics <v>'")
        tag_tok, tcol = args[1]
        try:
            tag = DenseTag(tag_tok)
        except ValueError:
            raise SpecError(lineno, tcol, f"unknown dense set {tag_tok!r}") from None
        return CountableModification.dense(tag, _number(args[2][0], lineno, args[2][1]))
    if kind != "finite":
        raise SpecError(lineno, kcol, f"unknown modification kind {kind!r}")
    pos = kcol - 1 + len("finite")
    pairs = []
    while body[pos:].strip():
        m = _PAIR.match(body, pos)
        if m is None:
            offset = len(body[pos:]) - len(body[pos:].lstrip())
            raise SpecError(lineno, pos + offset + 1, "expected '(<x>,<v>)'")
        x = _number(m.group(1), lineno, m.start(1) + 1)
        v = _number(m.group(2), lineno, m.start(2) + 1)
        pairs.append((x, v, m.start() + 1))
        pos = m.end()
    if not pairs:
        raise SpecError(lineno, kcol, "finite modification needs at least one point")
    pairs.sort(key=lambda p: p[0])
    for a, b in zip(pairs, pairs[1:]):
        if a[0] == b[0]:
            raise SpecError(lineno, b[2], f"duplicate modification point {format_rational(a[0])}")
    return CountableModification.finite((x, v) for x, v, _ in pairs)


def print_spec(f: FunctionModel) -> str:
    q = format_rational
    lines = [
        f"domain {q(f.domain_lo)} {q(f.domain_hi)}",
        "breakpoints " + " ".join(q(x) for x in f.breakpoints),
    ]
    for i, piece in enumerate(f.pieces):
        lines.append(f"piece {i} coeffs " + " ".join(q(c) for c in piece.coefficients))
    lines.append("values " + " ".join(q(v) for v in f.base.point_values))
    mod = f.modification
    if mod is not None:
        if mod.is_dense:
            lines.append(f"modify dense {mod.tag.value} {q(mod.value)}")
        else:
            lines.append("modify finite " + " ".join(f"({q(x)},{q(v)})" for x, v in mod.points))
    return "\n".join(lines) + "\n"
