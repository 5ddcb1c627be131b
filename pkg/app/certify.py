"""The complete-vanishing-lattice criterion. Diagram vertices are 0-based."""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.errors import LatticeError, NotARoot
from app.lattice_core import Lattice, LatticeVector, gram_image, inner, is_root, span
from app.monodromy import (
    Connectivity,
    OrbitBudget,
    canonical_roots,
    chain_connectivity,
    orbit_closure,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntersectionDiagram:
    vertex_count: int
    edges: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, j, m in self.edges:
            if i == j:
                raise LatticeError(f"Loop at vertex {i}")
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise LatticeError(f"Edge ({i}, {j}) outside {self.vertex_count} vertices")
            if m < 1:
                raise LatticeError(f"Edge ({i}, {j}) has multiplicity {m}")
            pair = (min(i, j), max(i, j))
            if pair in seen:
                raise LatticeError(f"Duplicate edge {pair}")
            seen.add(pair)

    def multiplicity(self, i: int, j: int) -> int:
        for a, b, m in self.edges:
            if {a, b} == {i, j}:
                return m
        return 0

    def degrees(self) -> List[int]:
        out = [0] * self.vertex_count
        for i, j, _ in self.edges:
            out[i] += 1
            out[j] += 1
        return out


def diagram_paper() -> IntersectionDiagram:
    """Six vertices; the doubled strokes of the figure are multiplicity 2."""
    return IntersectionDiagram(
        vertex_count=6,
        edges=(
            (0, 1, 1),
            (1, 2, 2),
            (1, 3, 1),
            (1, 4, 2),
            (2, 3, 1),
            (2, 4, 2),
            (3, 4, 1),
            (4, 5, 1),
        ),
    )


def matches_diagram(L: Lattice, vectors: Sequence[Sequence[int]], d: IntersectionDiagram) -> bool:
    if len(vectors) != d.vertex_count:
        return False
    if not all(is_root(L, v) for v in vectors):
        return False
    for i in range(d.vertex_count):
        for j in range(i + 1, d.vertex_count):
            if abs(inner(L, vectors[i], vectors[j])) != d.multiplicity(i, j):
                return False
    return True


def find_witness(
    L: Lattice,
    delta_set: Iterable[Sequence[int]],
    d: IntersectionDiagram,
) -> Optional[Tuple[LatticeVector, ...]]:
    """First ordered assignment of distinct roots (modulo sign) matching ``d``.

    Candidates are the canonical representatives in lexicographic order, so the
    answer does not depend on the order of ``delta_set``.
    """
    reps = canonical_roots(delta_set)
    for r in reps:
        if not is_root(L, r):
            raise NotARoot(f"{r} does not have square -2")
    k = d.vertex_count
    n = len(reps)
    if n < k:
        return None

    images = [gram_image(L, r) for r in reps]
    rows: Dict[int, Tuple[int, ...]] = {}

    def row(i: int) -> Tuple[int, ...]:
        if i not in rows:
            rows[i] = tuple(abs(sum(a * b for a, b in zip(images[i], r))) for r in reps)
        return rows[i]

    need = [[d.multiplicity(i, j) for j in range(k)] for i in range(k)]
    # candidates for vertex j come from the row of its first earlier neighbour
    anchor = [next((i for i in range(j) if need[i][j]), None) for j in range(k)]

    assignment: List[int] = []

    def consistent(j: int, c: int) -> bool:
        if c in assignment:
            return False
        return all(row(assignment[i])[c] == need[i][j] for i in range(j))

    def extend(j: int) -> bool:
        if j == k:
            return True
        a = anchor[j]
        if a is None:
            candidates = range(n)
        else:
            target = need[a][j]
            anchor_row = row(assignment[a])
            candidates = [c for c in range(n) if anchor_row[c] == target]
        for c in candidates:
            if consistent(j, c):
                assignment.append(c)
                if extend(j + 1):
                    return True
                assignment.pop()
        return False

    if extend(0):
        return tuple(reps[i] for i in assignment)
    return None


@dataclass(frozen=True)
class VanishingCertificate:
    generates: bool
    spanned_rank: int
    elementary_divisors: Tuple[int, ...]
    single_orbit: Connectivity
    single_orbit_source: Optional[str]
    witness: Optional[Tuple[LatticeVector, ...]]
    exhausted: bool
    budget: OrbitBudget

    @property
    def complete(self) -> bool:
        return (
            self.generates
            and self.single_orbit is Connectivity.CONNECTED
            and self.witness is not None
        )


def certify_cvl(
    L: Lattice,
    delta_seeds: Iterable[Sequence[int]],
    height_bound: int,
    max_size: int,
    diagram: Optional[IntersectionDiagram] = None,
) -> VanishingCertificate:
    diagram = diagram or diagram_paper()
    seeds = [tuple(s) for s in delta_seeds]
    orbit = orbit_closure(L, seeds, seeds, height_bound, max_size)
    found = list(orbit.representatives)

    spanned = span(found, L.rank)
    generates = spanned.rank == L.rank and all(e == 1 for e in spanned.elementary_divisors)

    single_orbit = chain_connectivity(L, found)
    source = "closure" if single_orbit is Connectivity.CONNECTED else None
    if source is None and chain_connectivity(L, seeds) is Connectivity.CONNECTED:
        # every element of the orbit is a translate of a seed
        single_orbit, source = Connectivity.CONNECTED, "seeds"

    witness = find_witness(L, found, diagram)
    if witness is not None and not matches_diagram(L, witness, diagram):
        raise RuntimeError("Witness search returned a tuple that does not match the diagram")

    certificate = VanishingCertificate(
        generates=generates,
        spanned_rank=spanned.rank,
        elementary_divisors=spanned.elementary_divisors,
        single_orbit=single_orbit,
        single_orbit_source=source,
        witness=witness,
        exhausted=orbit.exhausted,
        budget=orbit.budget,
    )
    logger.info(
        f"Certificate for {L.label or 'lattice'}: generates={generates}, "
        f"single_orbit={single_orbit.value}, witness={'yes' if witness else 'no'}, "
        f"exhausted={orbit.exhausted}"
    )
    return certificate
