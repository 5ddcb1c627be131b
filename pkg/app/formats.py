"""Plain-text lattice and matrix files.

Lattice file::

    lattice v1
    rank 2
    gram
    0 1
    1 0
    vec f 1 0

Matrix file::

    matrix v1
    rank 2
    rows
    1 0
    0 1

Blank lines and lines starting with ``#`` are ignored. Errors carry the 1-based line
number of the offending line.
"""
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from app.errors import ParseError
from app.lattice_core import IntMatrix, Lattice, LatticeVector, new_lattice

LATTICE_HEADER = "lattice v1"
MATRIX_HEADER = "matrix v1"


@dataclass(frozen=True)
class LatticeFile:
    version: str
    rank: int
    gram: IntMatrix
    vectors: Tuple[Tuple[str, LatticeVector], ...] = ()

    def lattice(self, label: Optional[str] = None) -> Lattice:
        return new_lattice(self.gram, label=label)

    def named(self) -> Dict[str, LatticeVector]:
        return dict(self.vectors)


def lattice_file(L: Lattice, vectors: Optional[Dict[str, Sequence[int]]] = None) -> LatticeFile:
    items = tuple((name, tuple(v)) for name, v in (vectors or {}).items())
    return LatticeFile(version="v1", rank=L.rank, gram=L.gram, vectors=items)


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _integers(tokens: Sequence[str], line: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line=line)


class _Reader:
    def __init__(self, text: str):
        self.lines = list(_content_lines(text))
        self.pos = 0

    def last_line(self) -> Optional[int]:
        return self.lines[-1][0] if self.lines else None

    def next(self, expecting: str) -> Tuple[int, str]:
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of input, expected {expecting}", line=self.last_line())
        item = self.lines[self.pos]
        self.pos += 1
        return item

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def expect(self, keyword: str) -> None:
        number, line = self.next(repr(keyword))
        if line != keyword:
            raise ParseError(f"expected {keyword!r}, got {line!r}", line=number)

    def rank(self) -> int:
        number, line = self.next("'rank N'")
        parts = line.split()
        if len(parts) != 2 or parts[0] != "rank":
            raise ParseError(f"expected 'rank N', got {line!r}", line=number)
        (rank,) = _integers(parts[1:], number)
        if rank < 1:
            raise ParseError(f"rank must be positive, got {rank}", line=number)
        return rank

    def rows(self, rank: int) -> IntMatrix:
        rows = []
        for _ in range(rank):
            number, line = self.next(f"{rank} matrix rows")
            row = _integers(line.split(), number)
            if len(row) != rank:
                raise ParseError(f"row has {len(row)} entries, expected {rank}", line=number)
            rows.append(tuple(row))
        return tuple(rows)


def read_lattice_file(text: str) -> LatticeFile:
    reader = _Reader(text)
    reader.expect(LATTICE_HEADER)
    rank = reader.rank()
    reader.expect("gram")
    gram = reader.rows(rank)

    vectors: Dict[str, LatticeVector] = {}
    while not reader.done():
        number, line = reader.next("'vec <name> <entries>'")
        parts = line.split()
        if parts[0] != "vec" or len(parts) < 2:
            raise ParseError(f"expected 'vec <name> <entries>', got {line!r}", line=number)
        name = parts[1]
        if name in vectors:
            raise ParseError(f"vector {name!r} defined twice", line=number)
        entries = _integers(parts[2:], number)
        if len(entries) != rank:
            raise ParseError(f"vector {name!r} has {len(entries)} entries, expected {rank}", line=number)
        vectors[name] = tuple(entries)

    parsed = LatticeFile(version="v1", rank=rank, gram=gram, vectors=tuple(vectors.items()))
    # symmetry is checked here so that NotSymmetric surfaces at parse time
    parsed.lattice()
    return parsed


def parse_lattice_file(text: str) -> Tuple[Lattice, Dict[str, LatticeVector]]:
    parsed = read_lattice_file(text)
    return parsed.lattice(), parsed.named()


def serialize_lattice_file(lf: LatticeFile, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines += [LATTICE_HEADER, f"rank {lf.rank}", "gram"]
    lines += [" ".join(str(v) for v in row) for row in lf.gram]
    lines += [f"vec {name} " + " ".join(str(v) for v in vec) for name, vec in lf.vectors]
    return "\n".join(lines) + "\n"


def read_matrix_file(text: str) -> IntMatrix:
    reader = _Reader(text)
    reader.expect(MATRIX_HEADER)
    rank = reader.rank()
    reader.expect("rows")
    rows = reader.rows(rank)
    if not reader.done():
        number, line = reader.next("end of input")
        raise ParseError(f"unexpected content after {rank} rows: {line!r}", line=number)
    return rows


def serialize_matrix(M: Sequence[Sequence[int]]) -> str:
    lines = [MATRIX_HEADER, f"rank {len(M)}", "rows"]
    lines += [" ".join(str(v) for v in row) for row in M]
    return "\n".join(lines) + "\n"
