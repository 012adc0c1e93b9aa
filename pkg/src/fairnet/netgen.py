"""Scale-free network generation, centralities, and edge-list files.

Two growth models are provided. The preferential-attachment model starts from
a small fully connected core and attaches each new node to ``m`` distinct
existing nodes with probability proportional to degree. The edge-anchored
model starts from a triangle and attaches each new node to both endpoints of
``m/2`` uniformly chosen existing edges, which plants a triangle per chosen
edge and yields a markedly higher clustering coefficient at the same mean
degree. Both models add ``m`` edges per new node, so the asymptotic mean
degree is ``2 m`` either way.

Networks are immutable once built: adjacency is stored as a flat sorted
neighbor array plus offsets, with the unique edges kept separately in
canonical ``u < v`` order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

MODEL_BA = "ba"
MODEL_DMS = "dms"
MODELS = (MODEL_BA, MODEL_DMS)

# Redraw budget per edge slot while sampling endpoint-disjoint edges.
_MAX_REDRAWS = 200


class EdgeListFormatError(ValueError):
    """Malformed edge-list input; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class ConvergenceError(RuntimeError):
    """Power iteration ran out of iterations; carries the last residual."""

    def __init__(self, iterations: int, residual: float) -> None:
        super().__init__(
            f"power iteration did not converge in {iterations} iterations "
            f"(last residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class GenParams:
    """Parameters for network growth.

    ``m`` is the number of edges each new node brings. ``m0`` is the size of
    the fully connected starting core for the preferential-attachment model
    (default ``m + 1``); the edge-anchored model always starts from a
    triangle. ``seed`` feeds a dedicated generator, so equal parameters give
    equal networks.
    """

    model: str
    n: int
    m: int
    m0: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown network model {self.model!r}; expected one of {MODELS}")
        if self.n < 1:
            raise ValueError(f"network size must be positive, got {self.n}")


class Network:
    """Immutable undirected graph with array-backed adjacency.

    ``adj_flat``/``adj_ptr`` hold sorted per-node neighbor lists; ``arc_src``/
    ``arc_dst`` list every edge in both directions (grouped by source), which
    is the layout the simulation loop consumes.
    """

    __slots__ = (
        "node_count",
        "edge_count",
        "degrees",
        "adj_flat",
        "adj_ptr",
        "edges_u",
        "edges_v",
        "arc_src",
        "arc_dst",
    )

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]]) -> None:
        if node_count < 1:
            raise ValueError(f"node count must be positive, got {node_count}")
        seen: set[tuple[int, int]] = set()
        for a, b in edges:
            a = int(a)
            b = int(b)
            if not (0 <= a < node_count and 0 <= b < node_count):
                raise ValueError(f"edge ({a}, {b}) out of range for {node_count} nodes")
            if a == b:
                raise ValueError(f"self-loop at node {a}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise ValueError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)

        ordered = sorted(seen)
        u = np.fromiter((e[0] for e in ordered), dtype=np.int64, count=len(ordered))
        v = np.fromiter((e[1] for e in ordered), dtype=np.int64, count=len(ordered))
        src = np.concatenate([u, v]) if len(ordered) else np.empty(0, dtype=np.int64)
        dst = np.concatenate([v, u]) if len(ordered) else np.empty(0, dtype=np.int64)
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        degrees = np.bincount(src, minlength=node_count)

        self.node_count = node_count
        self.edge_count = len(ordered)
        self.degrees = degrees
        self.adj_flat = dst
        self.adj_ptr = np.concatenate([[0], np.cumsum(degrees)]).astype(np.int64)
        self.edges_u = u
        self.edges_v = v
        self.arc_src = src
        self.arc_dst = dst
        for name in ("degrees", "adj_flat", "adj_ptr", "edges_u", "edges_v", "arc_src", "arc_dst"):
            getattr(self, name).setflags(write=False)

    def neighbors(self, node: int) -> np.ndarray:
        """Sorted neighbor indices of ``node`` (read-only view)."""
        return self.adj_flat[self.adj_ptr[node]: self.adj_ptr[node + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.node_count)]

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.edge_count / self.node_count

    def degree(self, node: int) -> int:
        return int(self.degrees[node])

    def is_connected(self) -> bool:
        if self.node_count == 1:
            return True
        visited = np.zeros(self.node_count, dtype=bool)
        stack = [0]
        visited[0] = True
        flat, ptr = self.adj_flat, self.adj_ptr
        while stack:
            node = stack.pop()
            for nb in flat[ptr[node]: ptr[node + 1]]:
                if not visited[nb]:
                    visited[nb] = True
                    stack.append(int(nb))
        return bool(visited.all())

    def edge_pairs(self) -> list[tuple[int, int]]:
        """Unique edges as (u, v) with u < v, lexicographically sorted."""
        return list(zip(self.edges_u.tolist(), self.edges_v.tolist()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.edge_count == other.edge_count
            and np.array_equal(self.edges_u, other.edges_u)
            and np.array_equal(self.edges_v, other.edges_v)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Network(nodes={self.node_count}, edges={self.edge_count})"

    def __getstate__(self) -> dict:
        return {"node_count": self.node_count, "edges_u": self.edges_u, "edges_v": self.edges_v}

    def __setstate__(self, state: dict) -> None:
        rebuilt = Network(
            state["node_count"],
            zip(state["edges_u"].tolist(), state["edges_v"].tolist()),
        )
        for name in self.__slots__:
            setattr(self, name, getattr(rebuilt, name))


def generate_ba(params: GenParams) -> Network:
    """Grow a preferential-attachment network.

    The core is a complete graph on ``m0`` nodes; each later node attaches to
    ``m`` distinct existing nodes, drawn degree-proportionally (repeated draws
    from a degree-weighted urn, rejecting duplicates). ``n == m0`` returns the
    bare core.
    """
    if params.model != MODEL_BA:
        raise ValueError(f"generate_ba got model {params.model!r}")
    m = params.m
    m0 = params.m0 if params.m0 is not None else m + 1
    n = params.n
    if m < 1:
        raise ValueError(f"attachment count m must be >= 1, got {m}")
    if m0 < m:
        raise ValueError(f"core size m0={m0} must be at least m={m}")
    if n < m0:
        raise ValueError(f"network size n={n} smaller than core m0={m0}")
    if n > m0 and m0 < 2:
        raise ValueError("growth from a single-node core is undefined (no attachment weight)")

    rng = np.random.default_rng(params.seed)
    edges: list[tuple[int, int]] = [(i, j) for i in range(m0) for j in range(i + 1, m0)]
    # Urn with every node repeated by its degree; uniform draws from it are
    # degree-proportional draws.
    urn: list[int] = [i for i in range(m0) for _ in range(m0 - 1)]
    for new in range(m0, n):
        targets: list[int] = []
        while len(targets) < m:
            candidate = urn[int(rng.integers(0, len(urn)))]
            if candidate not in targets:
                targets.append(candidate)
        for t in targets:
            edges.append((t, new))
        urn.extend(targets)
        urn.extend([new] * m)
    return Network(n, edges)


def generate_dms(params: GenParams) -> Network:
    """Grow an edge-anchored network with a triangle core.

    Each new node picks ``m/2`` distinct existing edges with pairwise-disjoint
    endpoints (bounded redraws) and links to both endpoints of each, closing a
    triangle per pick. When the graph is still too small to supply disjoint
    picks, the node links to all distinct endpoints it can reach. ``m`` must
    be even and at least 2; ``n == 3`` returns the bare triangle.
    """
    if params.model != MODEL_DMS:
        raise ValueError(f"generate_dms got model {params.model!r}")
    m = params.m
    n = params.n
    if m < 2:
        raise ValueError(f"edge-anchored growth needs m >= 2, got {m}")
    if m % 2:
        raise ValueError(f"edge-anchored growth adds links in endpoint pairs; m={m} must be even")
    if n < 3:
        raise ValueError(f"network size n={n} smaller than the triangle core")

    rng = np.random.default_rng(params.seed)
    edges: list[tuple[int, int]] = [(0, 1), (0, 2), (1, 2)]
    pairs = m // 2
    for new in range(3, n):
        chosen: list[int] = []
        endpoints: list[int] = []
        for _ in range(pairs):
            placed = False
            for _attempt in range(_MAX_REDRAWS):
                idx = int(rng.integers(0, len(edges)))
                if idx in chosen:
                    continue
                a, b = edges[idx]
                if a in endpoints or b in endpoints:
                    continue
                chosen.append(idx)
                endpoints.extend((a, b))
                placed = True
                break
            if not placed:
                # Too few nodes for disjoint picks: take any remaining edge and
                # keep whichever endpoints are new.
                remaining = [i for i in range(len(edges)) if i not in chosen]
                if not remaining:
                    break
                idx = remaining[int(rng.integers(0, len(remaining)))]
                chosen.append(idx)
                for node in edges[idx]:
                    if node not in endpoints:
                        endpoints.append(node)
        for t in endpoints:
            edges.append((t, new) if t < new else (new, t))
    return Network(n, edges)


def generate(params: GenParams) -> Network:
    """Dispatch on ``params.model``."""
    if params.model == MODEL_BA:
        return generate_ba(params)
    return generate_dms(params)


@dataclass(frozen=True)
class CentralityRanking:
    """Per-node centrality values plus the ascending order.

    ``order[k]`` is the node with the k-th smallest value; exact value ties
    fall back to node-index order (stable sort), so the most influential nodes
    sit at the tail.
    """

    values: np.ndarray
    order: np.ndarray
    eigenvalue: float | None = None

    def top(self, count: int) -> np.ndarray:
        """The ``count`` most influential nodes (tail of the ascending order)."""
        if count <= 0:
            return self.order[:0]
        return self.order[-count:]


def degree_centrality(net: Network) -> CentralityRanking:
    """Degree divided by ``n - 1``."""
    if net.node_count < 2:
        raise ValueError("degree centrality needs at least two nodes")
    values = net.degrees / (net.node_count - 1)
    values.setflags(write=False)
    order = np.argsort(values, kind="stable")
    order.setflags(write=False)
    return CentralityRanking(values=values, order=order)


def eigenvector_centrality(
    net: Network, tol: float = 1e-10, max_iter: int = 100_000
) -> CentralityRanking:
    """Principal-eigenvector centrality by power iteration.

    Starts from the uniform positive vector and normalizes to unit Euclidean
    length each step; convergence is successive iterates differing by less
    than ``tol`` in max-norm. Iteration runs on A + I, which leaves the
    leading eigenvector unchanged but keeps bipartite-degenerate spectra (for
    example stars) from oscillating. After convergence the loop continues, if
    needed, until the Rayleigh residual ``max|Ax - lambda x|`` is below
    ``10 * tol``.
    """
    if net.node_count < 2:
        raise ValueError("eigenvector centrality needs at least two nodes")
    if not net.is_connected():
        raise ValueError("eigenvector centrality needs a connected network")
    n = net.node_count
    src, dst = net.arc_src, net.arc_dst

    x = np.full(n, 1.0 / math.sqrt(n))
    diff = math.inf
    for _ in range(max_iter):
        ax = np.bincount(src, weights=x[dst], minlength=n)
        y = ax + x
        y /= np.linalg.norm(y)
        diff = float(np.max(np.abs(y - x)))
        x = y
        if diff < tol:
            ax = np.bincount(src, weights=x[dst], minlength=n)
            eigenvalue = float(x @ ax)
            residual = float(np.max(np.abs(ax - eigenvalue * x)))
            if residual < 10.0 * tol:
                values = x
                values.setflags(write=False)
                order = np.argsort(values, kind="stable")
                order.setflags(write=False)
                return CentralityRanking(values=values, order=order, eigenvalue=eigenvalue)
    raise ConvergenceError(max_iter, diff)


@dataclass(frozen=True)
class NetworkStats:
    mean_degree: float
    global_clustering: float
    degree_histogram: dict[int, int] = field(repr=False)
    fitted_exponent: float = math.nan


def _closed_triple_rate(net: Network) -> float:
    # 3 * triangles equals the sum over edges of shared-neighbor counts.
    neighbor_sets = [set(net.neighbors(i).tolist()) for i in range(net.node_count)]
    closed = 0
    for a, b in zip(net.edges_u.tolist(), net.edges_v.tolist()):
        closed += len(neighbor_sets[a] & neighbor_sets[b])
    degrees = net.degrees.astype(np.int64)
    triples = int((degrees * (degrees - 1) // 2).sum())
    if triples == 0:
        return 0.0
    return closed / triples


def fit_power_law_exponent(degrees: np.ndarray, min_degree: int = 4) -> float:
    """Discrete maximum-likelihood exponent of the degree tail.

    Uses the standard continuous approximation for discrete data,
    ``1 + n / sum(log(k / (min_degree - 0.5)))`` over degrees >= min_degree;
    NaN when the tail is empty or degenerate.
    """
    tail = degrees[degrees >= min_degree].astype(np.float64)
    if tail.size == 0:
        return math.nan
    log_sum = float(np.log(tail / (min_degree - 0.5)).sum())
    if log_sum <= 0.0:
        return math.nan
    return 1.0 + tail.size / log_sum


def network_stats(net: Network, fit_min_degree: int = 4) -> NetworkStats:
    """Mean degree, transitivity, degree histogram, and fitted tail exponent."""
    counts = np.bincount(net.degrees)
    histogram = {deg: int(cnt) for deg, cnt in enumerate(counts) if cnt}
    return NetworkStats(
        mean_degree=net.mean_degree,
        global_clustering=_closed_triple_rate(net),
        degree_histogram=histogram,
        fitted_exponent=fit_power_law_exponent(net.degrees, fit_min_degree),
    )


def save_edgelist(net: Network, sink: str | Path | IO[str], comments: Sequence[str] = ()) -> None:
    """Write the canonical edge list: optional '#' comments, then "u v" lines.

    Each undirected edge appears once with ``u < v``, zero-based, in
    lexicographic order, so equal networks serialize to equal bytes.
    """
    lines: list[str] = [f"# {text}" if text else "#" for text in comments]
    lines.extend(f"{a} {b}" for a, b in zip(net.edges_u.tolist(), net.edges_v.tolist()))
    payload = "\n".join(lines) + "\n"
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(payload, encoding="ascii")
    else:
        sink.write(payload)


def load_edgelist(source: str | Path | IO[str]) -> Network:
    """Parse an edge list written by :func:`save_edgelist`.

    Lines starting with '#' and blank lines are ignored. Node indices are
    zero-based; the node count is the largest index plus one. Malformed
    lines, negative indices, self-loops, and repeated edges (in either
    orientation) raise :class:`EdgeListFormatError` with the line number.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="ascii")
    else:
        text = source.read()

    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    max_node = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(lineno, f"expected two node indices, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(lineno, f"non-integer node index in {line!r}") from None
        if a < 0 or b < 0:
            raise EdgeListFormatError(lineno, f"negative node index in {line!r}")
        if a == b:
            raise EdgeListFormatError(lineno, f"self-loop at node {a}")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise EdgeListFormatError(lineno, f"duplicate edge ({a}, {b})")
        seen.add(key)
        edges.append(key)
        max_node = max(max_node, a, b)
    if not edges:
        raise EdgeListFormatError(0, "no edges found")
    return Network(max_node + 1, edges)


def parse_gen_params(
    model: str, n: int, m: int, m0: int | None = None, seed: int = 0
) -> GenParams:
    """Validated GenParams from loosely typed (CLI/config) inputs."""
    return GenParams(model=str(model).lower(), n=int(n), m=int(m),
                     m0=None if m0 is None else int(m0), seed=int(seed))
