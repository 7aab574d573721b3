"""Shared utility functions for rainbow Mantel experiments."""

import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Union

from rich.console import Console
from rich.logging import RichHandler

from rainbow_mantel.config import Config
from rainbow_mantel.graph_core import GraphTriple, SimpleGraph, members
from rainbow_mantel.models import GraphFormatError, ValidationError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def setup_logging(verbose: bool = False) -> None:
    """Route package logs through a single rich handler on stderr.

    Args:
        verbose: Log at DEBUG instead of WARNING
    """
    root = logging.getLogger("rainbow_mantel")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)
    root.propagate = False


def parse_int_list(text: str, name: str = "value") -> list[int]:
    """Parse a comma-separated list of non-negative integers.

    Args:
        text: String such as "256,1024" (empty string gives an empty list)
        name: Option name used in error messages

    Returns:
        List of integers

    Raises:
        ValidationError: If an entry is not a non-negative integer
    """
    if not text.strip():
        return []
    values = []
    for part in text.split(","):
        try:
            value = int(part.strip())
        except ValueError:
            raise ValidationError(
                f"Invalid {name}: {text!r}. Use a comma-separated list like '4,5'"
            )
        if value < 0:
            raise ValidationError(f"{name} entries must be non-negative: {value}")
        values.append(value)
    return values


# === GRAPH-TRIPLE TEXT FORMAT ===
#
#   n <int>
#   <c> <u> <v>      c in {1,2,3}, 0 <= u < v < n
#   # comment


def _parse_int(token: str, line_number: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(line_number, f"{what} is not an integer: {token!r}")


def parse_triple(text: str) -> GraphTriple:
    """Parse the graph-triple text format.

    Args:
        text: File contents

    Returns:
        The parsed triple; duplicate edge lines are idempotent

    Raises:
        GraphFormatError: On the first malformed line, with its 1-based number
    """
    n = -1
    rows: list[list[int]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n < 0:
            if len(tokens) != 2 or tokens[0] != "n":
                raise GraphFormatError(line_number, "expected header 'n <int>'")
            n = _parse_int(tokens[1], line_number, "vertex count")
            if not 0 <= n <= Config.MAX_VERTICES:
                raise GraphFormatError(
                    line_number, f"vertex count {n} outside 0..{Config.MAX_VERTICES}"
                )
            rows = [[0] * n for _ in range(3)]
            continue
        if len(tokens) != 3:
            raise GraphFormatError(line_number, "expected '<colour> <u> <v>'")
        c, u, v = (_parse_int(t, line_number, "field") for t in tokens)
        if c not in (1, 2, 3):
            raise GraphFormatError(line_number, f"colour must be 1, 2 or 3, got {c}")
        if not 0 <= u < v < n:
            raise GraphFormatError(line_number, f"need 0 <= u < v < {n}, got {u} {v}")
        rows[c - 1][u] |= 1 << v
        rows[c - 1][v] |= 1 << u
    if n < 0:
        raise GraphFormatError(1, "missing header 'n <int>'")
    g1, g2, g3 = (SimpleGraph(n, tuple(r)) for r in rows)
    return GraphTriple(n, g1, g2, g3)


def edge_lines(t: GraphTriple) -> Iterable[str]:
    """Edge lines of ``t`` in canonical (colour, u, v) order."""
    for c, g in enumerate(t.graphs, start=1):
        for u in range(g.n):
            for v in members(g.rows[u] >> (u + 1)):
                yield f"{c} {u} {u + 1 + v}"


def serialize_triple(t: GraphTriple) -> str:
    """Canonical text form: header, then edge lines sorted by (colour, u, v)."""
    return "\n".join([f"n {t.n}", *edge_lines(t)]) + "\n"


def read_triple(path: PathLike) -> GraphTriple:
    """Read a graph-triple file.

    Raises:
        ValidationError: If the file cannot be read
        GraphFormatError: If the contents are malformed
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ValidationError(f"Cannot read {path}: {e}")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = raw.count(b"\n", 0, e.start) + 1
        raise GraphFormatError(line_number, f"not valid UTF-8: {e.reason}")
    return parse_triple(text)


def write_triple(t: GraphTriple, path: PathLike) -> None:
    Path(path).write_text(serialize_triple(t), encoding="utf-8")
    logger.info("wrote n=%d triple to %s", t.n, path)
