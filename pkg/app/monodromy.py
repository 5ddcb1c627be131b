import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from app.errors import NotARoot
from app.lattice_core import Lattice, LatticeVector, gram_image, inner, is_root

logger = logging.getLogger(__name__)


class Connectivity(str, Enum):
    CONNECTED = "connected"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class OrbitBudget:
    height_bound: int
    max_size: int
    frontier_peak: int
    size: int


@dataclass(frozen=True)
class OrbitResult:
    """Roots found by :func:`orbit_closure`.

    ``representatives`` lists one root per sign class in discovery order; ``vectors``
    contains both signs.
    """
    representatives: Tuple[LatticeVector, ...]
    exhausted: bool
    budget: OrbitBudget
    vectors: FrozenSet[LatticeVector] = field(init=False)

    def __post_init__(self):
        both = set(self.representatives)
        both.update(negate(v) for v in self.representatives)
        object.__setattr__(self, "vectors", frozenset(both))


def negate(x: Sequence[int]) -> LatticeVector:
    return tuple(-v for v in x)


def canonical(x: Sequence[int]) -> LatticeVector:
    """Representative of {x, -x} whose first nonzero coordinate is positive."""
    for v in x:
        if v > 0:
            return tuple(x)
        if v < 0:
            return negate(x)
    return tuple(x)


def canonical_roots(vectors: Iterable[Sequence[int]]) -> List[LatticeVector]:
    return sorted({canonical(v) for v in vectors})


def reflect(L: Lattice, delta: Sequence[int], x: Sequence[int]) -> LatticeVector:
    if not is_root(L, delta):
        raise NotARoot(f"{tuple(delta)} does not have square -2")
    c = inner(L, x, delta)
    return tuple(xi + c * di for xi, di in zip(x, delta))


def reflection_matrix(L: Lattice, delta: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """Matrix of x -> x + inner(x, delta) delta acting on coordinate columns."""
    if not is_root(L, delta):
        raise NotARoot(f"{tuple(delta)} does not have square -2")
    g = gram_image(L, delta)
    n = L.rank
    return tuple(
        tuple((1 if i == j else 0) + delta[i] * g[j] for j in range(n))
        for i in range(n)
    )


def orbit_closure(
    L: Lattice,
    generators: Iterable[Sequence[int]],
    seeds: Iterable[Sequence[int]],
    height_bound: int,
    max_size: int,
) -> OrbitResult:
    """Breadth-first closure of ``seeds`` under reflections.

    The reflecting set is the generators together with every root discovered so
    far. Discovered vectors whose largest absolute coordinate exceeds
    ``height_bound`` are discarded; seeds are always kept. Sizes count roots
    modulo sign. The result is exhausted when the frontier empties before
    ``max_size`` representatives are collected; in that case it is the least set
    containing the seeds and closed under in-bound reflections, hence independent
    of processing order.
    """
    generators = [tuple(g) for g in generators]
    seeds = [tuple(s) for s in seeds]
    for r in generators + seeds:
        if not is_root(L, r):
            raise NotARoot(f"{r} does not have square -2")

    reflectors: List[LatticeVector] = []
    reflector_keys = set()
    found: Dict[LatticeVector, None] = {}
    frontier: deque = deque()
    frontier_peak = 0

    def add_reflector(v: LatticeVector) -> None:
        key = canonical(v)
        if key not in reflector_keys:
            reflector_keys.add(key)
            reflectors.append(key)

    def within(v: LatticeVector) -> bool:
        return max(abs(c) for c in v) <= height_bound

    def discover(v: LatticeVector, seed: bool = False) -> bool:
        key = canonical(v)
        if key in found or not (seed or within(key)):
            return True
        if len(found) >= max_size:
            return False
        found[key] = None
        add_reflector(key)
        frontier.append(key)
        return True

    for g in generators:
        add_reflector(g)

    exhausted = True
    for s in seeds:
        if not within(s):
            logger.warning(f"Seed {s} exceeds height {height_bound}; kept in the closure")
        if not discover(s, seed=True):
            exhausted = False
            break

    while exhausted and frontier:
        frontier_peak = max(frontier_peak, len(frontier))
        r = frontier.popleft()
        gr = gram_image(L, r)
        # reflectors grows during the scan; only entries present now are paired here,
        # later ones pair with r when they are themselves popped
        for s in list(reflectors):
            c = sum(a * b for a, b in zip(gr, s))
            if c == 0:
                continue
            # s_s(r) = r + <r,s> s
            if not discover(tuple(a + c * b for a, b in zip(r, s))):
                exhausted = False
                break
            # s_r(s) = s + <r,s> r, an orbit element only when s was discovered
            if s in found and not discover(tuple(b + c * a for a, b in zip(r, s))):
                exhausted = False
                break

    budget = OrbitBudget(
        height_bound=height_bound,
        max_size=max_size,
        frontier_peak=frontier_peak,
        size=len(found),
    )
    if exhausted:
        logger.info(f"Orbit closure exhausted with {2 * len(found)} roots (height {height_bound})")
    else:
        logger.warning(
            f"Orbit closure stopped at {len(found)} roots modulo sign "
            f"(max_size {max_size}, height {height_bound})"
        )
    return OrbitResult(representatives=tuple(found), exhausted=exhausted, budget=budget)


def chain_connectivity(L: Lattice, delta_set: Iterable[Sequence[int]]) -> Connectivity:
    """Connected when the roots, taken modulo sign, form one component of the graph
    with edges |inner| = 1.

    Adjacent roots are conjugate (s_d s_d'(d) = d'), so a connected set lies in a
    single orbit of the group its reflections generate. Disconnection proves
    nothing, hence the result is never a negative verdict.
    """
    roots = canonical_roots(delta_set)
    for r in roots:
        if not is_root(L, r):
            raise NotARoot(f"{r} does not have square -2")
    if not roots:
        return Connectivity.INCONCLUSIVE

    images = [gram_image(L, r) for r in roots]
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(len(roots)):
            if j in seen:
                continue
            if abs(sum(a * b for a, b in zip(images[i], roots[j]))) == 1:
                seen.add(j)
                queue.append(j)

    if len(seen) == len(roots):
        return Connectivity.CONNECTED
    return Connectivity.INCONCLUSIVE
