"""Plain-text set and function files.

Set file:
    p n
    <vector>          one member per line

Function file:
    p n
    <x> <f(x)>        exactly p^n lines, each x once

A vector is written coordinate 0 first: n digits run together when p <= 10
("100" is e1 in F_2^3), otherwise n comma-separated integers. Blank lines
and text after '#' are ignored. Saved files list vectors in canonical index
order.
"""

import logging
from pathlib import Path

import numpy as np

from src.errors import BudgetExceededError, FileFormatError
from src.fpn.group import GroupCtx
from src.fpn.sets import FpSet
from src.lintest.tables import FnTable

logger = logging.getLogger(__name__)


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _is_number(part: str) -> bool:
    # str.isdigit also accepts non-ASCII digits such as superscripts
    return part.isascii() and part.isdigit()


def _parse_header(lines) -> GroupCtx:
    try:
        number, line = next(lines)
    except StopIteration:
        raise FileFormatError("missing header 'p n'") from None
    parts = line.split()
    if len(parts) != 2 or not all(_is_number(part) for part in parts):
        raise FileFormatError(f"expected header 'p n', got {line!r}", number)
    try:
        return GroupCtx(int(parts[0]), int(parts[1]))
    except (ValueError, BudgetExceededError) as e:
        raise FileFormatError(str(e), number) from e


def parse_vector(ctx: GroupCtx, token: str, line: int | None = None) -> int:
    """Canonical index of a vector token."""
    if ctx.p <= 10 and "," not in token:
        parts = list(token)
    else:
        parts = token.split(",")
    if len(parts) != ctx.n:
        raise FileFormatError(f"expected {ctx.n} coordinates, got {token!r}", line)
    if not all(_is_number(part.strip()) for part in parts):
        raise FileFormatError(f"non-numeric coordinate in {token!r}", line)
    coords = [int(part) for part in parts]
    for c in coords:
        if not 0 <= c < ctx.p:
            raise FileFormatError(f"digit {c} out of range for p={ctx.p}", line)
    return sum(c * ctx.p**k for k, c in enumerate(coords))


def format_vector(ctx: GroupCtx, index: int) -> str:
    coords = ctx.digits[index]
    if ctx.p <= 10:
        return "".join(str(int(c)) for c in coords)
    return ",".join(str(int(c)) for c in coords)


def parse_set(text: str) -> FpSet:
    lines = _lines(text)
    ctx = _parse_header(lines)
    indices = []
    for number, line in lines:
        tokens = line.split()
        if len(tokens) != 1:
            raise FileFormatError(f"expected one vector per line, got {line!r}", number)
        indices.append(parse_vector(ctx, tokens[0], number))
    return FpSet.from_indices(ctx, indices)


def format_set(A: FpSet) -> str:
    ctx = A.ctx
    body = [format_vector(ctx, int(i)) for i in A.indices()]
    return "\n".join([f"{ctx.p} {ctx.n}", *body]) + "\n"


def parse_fn(text: str) -> FnTable:
    lines = _lines(text)
    ctx = _parse_header(lines)
    table = np.full(ctx.order, -1, dtype=np.int64)
    for number, line in lines:
        tokens = line.split()
        if len(tokens) != 2:
            raise FileFormatError(f"expected 'x f(x)', got {line!r}", number)
        x = parse_vector(ctx, tokens[0], number)
        if table[x] >= 0:
            raise FileFormatError(f"duplicate entry for {tokens[0]}", number)
        table[x] = parse_vector(ctx, tokens[1], number)
    missing = int(np.count_nonzero(table < 0))
    if missing:
        raise FileFormatError(f"missing entries: {missing} of {ctx.order} points have no value")
    return FnTable(ctx, table)


def format_fn(f: FnTable) -> str:
    ctx = f.ctx
    body = [f"{format_vector(ctx, x)} {format_vector(ctx, int(f.table[x]))}" for x in range(ctx.order)]
    return "\n".join([f"{ctx.p} {ctx.n}", *body]) + "\n"


def load_set(path: str | Path) -> FpSet:
    A = parse_set(Path(path).read_text())
    logger.debug(f"loaded {A.size} elements of {A.ctx} from {path}")
    return A


def save_set(path: str | Path, A: FpSet) -> None:
    Path(path).write_text(format_set(A))


def load_fn(path: str | Path) -> FnTable:
    return parse_fn(Path(path).read_text())


def save_fn(path: str | Path, f: FnTable) -> None:
    Path(path).write_text(format_fn(f))
