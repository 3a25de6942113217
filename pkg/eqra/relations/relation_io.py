"""Reading and writing relation files.

Three encodings are accepted, auto-detected:

- pair list: first line ``n``, then one ``a b`` pair per line (0-based);
- matrix: first line ``n``, then ``n`` rows of ``n`` 0/1 digits
  (spaces between digits allowed except when ``n == 2``, where a spaced
  row would read as a pair);
- JSON: ``{"n": int, "pairs": [[a, b], ...]}``.

Blank lines and ``#`` comments are ignored. Named relation sets
(structures) use JSON ``{"n": int, "relations": {"E0": [[a, b], ...]}}``.
"""

import json
import sys
from typing import Dict, List, Tuple

from eqra.exceptions import RelationException, RelationFormatException
from eqra.relations.relcore import BinRel, check_base_size, from_pairs


def _data_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((number, stripped))
    return lines


def _parse_int(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise RelationFormatException(f"Expected an integer, got {token!r}", line, column) from None


def _is_matrix(n: int, rows: List[Tuple[int, str]]) -> bool:
    if len(rows) != n:
        return False
    for _, row in rows:
        if n == 2 and " " in row:
            return False
        digits = row.replace(" ", "").replace("\t", "")
        if len(digits) != n or set(digits) - {"0", "1"}:
            return False
    return True


def parse_relation_text(text: str) -> BinRel:
    """Parse a relation from text in any accepted encoding.

    Args:
        text: File contents.

    Returns:
        The relation.

    Raises:
        RelationFormatException: With the offending line and column.
    """
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise RelationFormatException(f"Invalid JSON: {e.msg}", e.lineno, e.colno) from None
        return relation_from_json(data)

    lines = _data_lines(text)
    if not lines:
        raise RelationFormatException("Empty relation file", 1, 1)
    first_line, header = lines[0]
    n = _parse_int(header, first_line, 1)
    try:
        check_base_size(n)
    except RelationException as e:
        raise RelationFormatException(str(e), first_line, 1) from None

    rows = lines[1:]
    if _is_matrix(n, rows):
        pairs = []
        for a, (_, row) in enumerate(rows):
            digits = row.replace(" ", "").replace("\t", "")
            pairs.extend((a, b) for b, digit in enumerate(digits) if digit == "1")
        return from_pairs(n, pairs)

    pairs = []
    for number, row in rows:
        tokens = row.split()
        if len(tokens) != 2:
            raise RelationFormatException(
                f"Expected a pair 'a b' or a matrix row, got {row!r}", number, 1
            )
        a = _parse_int(tokens[0], number, 1)
        b = _parse_int(tokens[1], number, row.index(tokens[1], len(tokens[0])) + 1)
        if not (0 <= a < n and 0 <= b < n):
            raise RelationFormatException(f"Pair ({a}, {b}) outside base set of size {n}", number, 1)
        pairs.append((a, b))
    return from_pairs(n, pairs)


def relation_from_json(data: Dict) -> BinRel:
    """Build a relation from its JSON form ``{"n": int, "pairs": [[a, b], ...]}``."""
    try:
        n = int(data["n"])
        pairs = [(int(a), int(b)) for a, b in data["pairs"]]
    except (KeyError, TypeError, ValueError) as e:
        raise RelationFormatException(f"Malformed relation JSON: {e}", 1, 1) from None
    try:
        return from_pairs(n, pairs)
    except RelationException as e:
        raise RelationFormatException(str(e), 1, 1) from None


def relation_to_json(r: BinRel) -> Dict:
    """JSON form of a relation."""
    return {"n": r.n, "pairs": [list(p) for p in r.pairs()]}


def relation_to_text(r: BinRel) -> str:
    """Pair-list text form of a relation."""
    lines = [str(r.n)] + [f"{a} {b}" for a, b in r.pairs()]
    return "\n".join(lines) + "\n"


def read_text(path: str) -> str:
    """Read a file, or standard input when path is ``-``.

    Raises:
        RelationFormatException: The bytes are not UTF-8 (the position of the
            first bad byte is reported) or the file cannot be read.
    """
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, "rb") as fh:
            return fh.read().decode("utf-8")
    except UnicodeDecodeError as e:
        head = e.object[: e.start]
        line = head.count(b"\n") + 1
        column = e.start - (head.rfind(b"\n") + 1) + 1
        raise RelationFormatException(f"{path}: not UTF-8 text", line, column) from None
    except OSError as e:
        raise RelationFormatException(f"{path}: cannot read ({e.strerror or e})") from None


def load_relation(path: str) -> BinRel:
    """Load a relation file (``-`` for standard input)."""
    return parse_relation_text(read_text(path))


def parse_structure_text(text: str) -> Tuple[int, Dict[str, BinRel]]:
    """Parse a named relation set.

    Returns:
        Base size and a mapping from symbol to relation.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RelationFormatException(f"Invalid JSON: {e.msg}", e.lineno, e.colno) from None
    try:
        n = int(data["n"])
        relations = {
            str(name): relation_from_json({"n": n, "pairs": pairs})
            for name, pairs in data["relations"].items()
        }
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise RelationFormatException(f"Malformed structure JSON: {e}", 1, 1) from None
    return n, relations


def load_structure(path: str) -> Tuple[int, Dict[str, BinRel]]:
    """Load a structure file (``-`` for standard input)."""
    return parse_structure_text(read_text(path))
