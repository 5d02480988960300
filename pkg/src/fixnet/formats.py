"""
Text formats for signed digraphs, Boolean networks and gadget layouts.

SID files::

    sid <n>
    <j> <i> <+|-|0>      # one arc per line

BN files::

    bn <n>
    fn <i> <j1> ... <jd> <hex truth table>

Layout sidecars hold one ``role <name> <id>`` line per named vertex.
Comments start with ``#``; blank lines are ignored.
"""

import logging
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Tuple

from .digraph import Arc, Sign, SignedDigraph
from .errors import ArgumentError, FormatError, StructureError
from .network import BooleanNetwork, LocalFunction

logger = logging.getLogger(__name__)


def _content_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _header(lines: Iterator[Tuple[int, List[str]]], keyword: str) -> int:
    try:
        number, parts = next(lines)
    except StopIteration as e:
        raise FormatError(f"empty input, expected '{keyword} <n>'") from e
    if len(parts) != 2 or parts[0] != keyword:
        raise FormatError(f"expected '{keyword} <n>'", number)
    return _int(parts[1], number, minimum=0)


def _int(token: str, line: int, minimum: int = 1) -> int:
    try:
        value = int(token)
    except ValueError as e:
        raise FormatError(f"expected an integer, got {token!r}", line) from e
    if value < minimum:
        raise FormatError(f"integer {value} below {minimum}", line)
    return value


def parse_sid(text: str) -> SignedDigraph:
    lines = _content_lines(text)
    n = _header(lines, "sid")
    arcs: Dict[Arc, Sign] = {}
    for number, parts in lines:
        if len(parts) != 3:
            raise FormatError("arc lines read '<j> <i> <sign>'", number)
        j, i = _int(parts[0], number), _int(parts[1], number)
        if j > n or i > n:
            raise FormatError(f"arc ({j},{i}) outside 1..{n}", number)
        if (j, i) in arcs:
            raise FormatError(f"duplicate arc ({j},{i})", number)
        try:
            arcs[(j, i)] = Sign.from_symbol(parts[2])
        except ArgumentError as e:
            raise FormatError(str(e), number) from e
    return SignedDigraph(n, arcs)


def format_sid(digraph: SignedDigraph) -> str:
    """Render a SID in the arc-list text format."""
    lines = [f"sid {digraph.n}"]
    lines.extend(f"{j} {i} {s.symbol}" for (j, i), s in digraph.arcs.items())
    return "\n".join(lines) + "\n"


def parse_bn(text: str) -> BooleanNetwork:
    """Parse a network in the truth-table text format."""
    lines = _content_lines(text)
    n = _header(lines, "bn")
    functions: Dict[int, LocalFunction] = {}
    for number, parts in lines:
        if len(parts) < 3 or parts[0] != "fn":
            raise FormatError("function lines read 'fn <i> <j1> ... <jd> <hex>'", number)
        i = _int(parts[1], number)
        if i > n:
            raise FormatError(f"vertex {i} outside 1..{n}", number)
        if i in functions:
            raise FormatError(f"vertex {i} defined twice", number)
        inputs = tuple(_int(tok, number) for tok in parts[2:-1])
        try:
            table = int(parts[-1], 16)
        except ValueError as e:
            raise FormatError(f"bad hex truth table {parts[-1]!r}", number) from e
        try:
            functions[i] = LocalFunction(inputs, table)
        except StructureError as e:
            raise FormatError(str(e), number) from e
    try:
        return BooleanNetwork.from_mapping(n, functions)
    except StructureError as e:
        raise FormatError(str(e)) from e


def format_bn(network: BooleanNetwork) -> str:
    lines = [f"bn {network.n}"]
    for i, fn in enumerate(network.functions, start=1):
        width = max(1, (1 << fn.arity) // 4)
        cols = " ".join(str(j) for j in fn.inputs)
        sep = " " if cols else ""
        lines.append(f"fn {i}{sep}{cols} {fn.table:0{width}x}")
    return "\n".join(lines) + "\n"


def parse_layout(text: str) -> Dict[str, int]:
    roles: Dict[str, int] = {}
    for number, parts in _content_lines(text):
        if len(parts) != 3 or parts[0] != "role":
            raise FormatError("layout lines read 'role <name> <id>'", number)
        if parts[1] in roles:
            raise FormatError(f"role {parts[1]} listed twice", number)
        roles[parts[1]] = _int(parts[2], number)
    return roles


def format_layout(roles: Mapping[str, int]) -> str:
    ordered = sorted(roles.items(), key=lambda item: item[1])
    return "".join(f"role {name} {vertex}\n" for name, vertex in ordered)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
