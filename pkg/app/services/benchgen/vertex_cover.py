"""
Vertex cover of random cubic graphs as a CNF + cardinality formula.

Variable v+1 is True iff vertex v is in the cover. Each edge (u, v) becomes
the CNF clause (u+1 or v+1) and a single CARD_LE over all variables bounds
the cover size by k = ceil(1.1 * Opt).
"""

from math import ceil
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from app.core.config import settings
from app.core.exceptions import GeneratorException
from app.core.logging import get_logger
from app.models.formula import Clause, ClauseKind
from app.schemas.benchmark import GeneratedInstance, GeneratorFamily, GenSpec
from app.services.benchgen.base import BenchmarkGenerator

logger = get_logger(__name__)

Edge = Tuple[int, int]


class RejectedPairing(Exception):
    """Stub pairing produced a self-loop or a repeated edge."""


def pair_stubs(n_vertices: int, rng: np.random.Generator) -> List[Edge]:
    """One configuration-model draw: three stubs per vertex, randomly paired."""
    stubs = rng.permutation(np.repeat(np.arange(n_vertices), 3)).reshape(-1, 2)
    if np.any(stubs[:, 0] == stubs[:, 1]):
        raise RejectedPairing("self-loop")
    edges = sorted({(int(min(u, v)), int(max(u, v))) for u, v in stubs})
    if len(edges) != len(stubs):
        raise RejectedPairing("multi-edge")
    return edges


def random_cubic_graph(
    n_vertices: int, rng: np.random.Generator, retry_cap: int = None
) -> List[Edge]:
    """
    Simple 3-regular graph by the configuration model with rejection.

    Raises:
        GeneratorException: no simple pairing within the retry cap.
    """
    cap = retry_cap or settings.GRAPH_RETRY_CAP
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(cap),
            retry=retry_if_exception_type(RejectedPairing),
            reraise=True,
        ):
            with attempt:
                edges = pair_stubs(n_vertices, rng)
    except RejectedPairing as e:
        raise GeneratorException(
            f"No simple cubic graph after {cap} pairings",
            family=GeneratorFamily.VERTEX_COVER.value,
            details={"n_vertices": n_vertices, "last_rejection": str(e)},
        )
    logger.debug(
        "Cubic graph sampled",
        n_vertices=n_vertices,
        attempts=attempt.retry_state.attempt_number,
    )
    return edges


def minimum_vertex_cover(n_vertices: int, edges: Sequence[Edge]) -> List[int]:
    """
    Exact minimum vertex cover by branch and bound.

    Branches on a maximum-degree vertex v: either v is in the cover or all its
    neighbours are. A degree-1 vertex always hands the cover to its
    neighbour. Bound: remaining edges / max degree.
    """
    adjacency: Dict[int, Set[int]] = {v: set() for v in range(n_vertices)}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    best: List[int] = list(range(n_vertices))

    def remove(graph: Dict[int, Set[int]], taken: Set[int]) -> Dict[int, Set[int]]:
        reduced = {}
        for v, neighbours in graph.items():
            if v in taken:
                continue
            kept = neighbours - taken
            if kept:
                reduced[v] = kept
        return reduced

    def search(graph: Dict[int, Set[int]], chosen: List[int]) -> None:
        nonlocal best
        if not graph:
            if len(chosen) < len(best):
                best = sorted(chosen)
            return

        edge_count = sum(len(nb) for nb in graph.values()) // 2
        top = max(graph, key=lambda v: (len(graph[v]), -v))
        degree = len(graph[top])
        if len(chosen) + ceil(edge_count / degree) >= len(best):
            return

        leaf = next((v for v in sorted(graph) if len(graph[v]) == 1), None)
        if leaf is not None:
            (neighbour,) = graph[leaf]
            search(remove(graph, {neighbour}), chosen + [neighbour])
            return

        search(remove(graph, {top}), chosen + [top])
        neighbours = graph[top]
        search(remove(graph, set(neighbours)), chosen + sorted(neighbours))

    search(remove(adjacency, set()), [])
    return best


def cover_threshold(opt: int) -> int:
    """ceil(1.1 * opt) in integer arithmetic."""
    return -(-11 * opt // 10)


class VertexCoverGenerator(BenchmarkGenerator):
    """Cubic-graph vertex cover instances, satisfiable by construction."""

    @property
    def family(self) -> GeneratorFamily:
        return GeneratorFamily.VERTEX_COVER

    def generate(self, spec: GenSpec) -> GeneratedInstance:
        n = spec.params.n_vertices
        rng = self.rng(spec)
        edges = random_cubic_graph(n, rng)
        cover = minimum_vertex_cover(n, edges)
        opt = len(cover)
        k = cover_threshold(opt)

        clauses = [Clause.of(ClauseKind.CNF, [u + 1, v + 1]) for u, v in edges]
        clauses.append(
            Clause.of(ClauseKind.CARD_LE, list(range(1, n + 1)), threshold=k)
        )
        in_cover = set(cover)
        certificate = [-(v + 1) if v in in_cover else v + 1 for v in range(n)]

        logger.info("Vertex cover instance generated", n=n, opt=opt, k=k)
        return self.instance(
            spec,
            n=n,
            clauses=clauses,
            comments=[
                f"vertex cover of a random cubic graph: n={n} opt={opt} k={k}"
            ],
            certificate=certificate,
            details={
                "opt": opt,
                "k": k,
                "edges": [[u + 1, v + 1] for u, v in edges],
            },
        )
