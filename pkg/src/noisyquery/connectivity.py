"""Hard connectivity instances and the naive noisy solver.

The instance generator draws a uniform spanning tree, picks a uniformly
random well-balanced edge (both sides at least n/21 vertices; trees
without one are redrawn), then flips a fair coin to either keep the
tree (connected) or drop that edge (disconnected with two large
components). Against this distribution the answer is information-dense:
the naive reconstruct-everything solver needs on the order of
n^2 log n queries, which is also optimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .streams import as_generator
from .trees import Edge, LabeledTree, as_balance_threshold, balanced_edges, sample_ust
from .unionfind import UnionFind
from .walks import WalkPolicy, _check_delta, check_bit

HARD_BALANCE = Fraction(1, 21)
DEFAULT_REJECTION_CAP = 10_000


class RejectionCapExceeded(RuntimeError):
    """No sampled tree had a balanced edge within the restart budget."""


@dataclass(frozen=True)
class HardInstance:
    """Connectivity input: a tree, or a tree minus one balanced edge."""

    n: int
    graph: frozenset[Edge]
    label: int
    removed_edge: Edge | None
    base_tree: LabeledTree

    @property
    def connected(self) -> bool:
        return self.label == 1


@dataclass(frozen=True)
class STInstance:
    """Hard instance plus i.i.d. uniform terminals (s == t allowed)."""

    instance: HardInstance
    s: int
    t: int


def sample_hard_instance(
    n: int,
    rng,
    *,
    beta=HARD_BALANCE,
    rejection_cap: int = DEFAULT_REJECTION_CAP,
) -> HardInstance:
    """Draw one labeled connectivity instance.

    The label is the ground truth: 1 iff the emitted graph is the full
    tree. Raises :class:`RejectionCapExceeded` when ``rejection_cap``
    consecutive trees have no balanced edge (a sign that n is too small
    for the chosen threshold).
    """
    frac = as_balance_threshold(beta)
    gen = as_generator(rng)
    tree = None
    candidates: tuple[Edge, ...] = ()
    for _ in range(rejection_cap):
        tree = sample_ust(n, gen)
        candidates = balanced_edges(tree, frac).balanced_edges
        if candidates:
            break
    else:
        raise RejectionCapExceeded(
            f"no {frac}-balanced edge found in {rejection_cap} sampled trees on {n} vertices"
        )
    chosen = candidates[int(gen.integers(0, len(candidates)))]
    label = int(gen.integers(0, 2))
    if label == 1:
        return HardInstance(n, frozenset(tree.edges), 1, None, tree)
    graph = frozenset(e for e in tree.edges if e != chosen)
    return HardInstance(n, graph, 0, chosen, tree)


def sample_st_instance(
    n: int,
    rng,
    *,
    beta=HARD_BALANCE,
    rejection_cap: int = DEFAULT_REJECTION_CAP,
) -> STInstance:
    """Hard instance together with two independent uniform vertices."""
    gen = as_generator(rng)
    instance = sample_hard_instance(n, gen, beta=beta, rejection_cap=rejection_cap)
    s = int(gen.integers(0, n))
    t = int(gen.integers(0, n))
    return STInstance(instance, s, t)


def components_of(n: int, edges: Iterable[Edge]) -> UnionFind:
    uf = UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    return uf


def is_connected_graph(n: int, edges: Iterable[Edge]) -> bool:
    return components_of(n, edges).component_count == 1


def _reconstruct(oracle, delta: float) -> UnionFind:
    """Estimate every potential edge, then union the declared ones.

    Per-pair error budget is delta / C(n,2), so by the union bound the
    whole reconstruction is exact with probability >= 1 - delta, and any
    connectivity predicate computed from it inherits that guarantee.
    """
    _check_delta(delta, "delta")
    n = oracle.n
    uf = UnionFind(n)
    if n == 1:
        return uf
    pairs = n * (n - 1) // 2
    per_edge = delta / pairs
    policy = WalkPolicy.for_error_bounds(oracle.noise, per_edge, per_edge)
    for u in range(n):
        for v in range(u + 1, n):
            if check_bit(oracle, (u, v), per_edge, policy=policy).decided_bit:
                uf.union(u, v)
    return uf


def naive_connectivity(oracle, delta: float) -> bool:
    """Decide connectivity by reconstructing the whole graph.

    Error probability at most ``delta``; cost about
    C(n,2) * log(C(n,2)/delta) / D_KL queries.
    """
    return _reconstruct(oracle, delta).component_count == 1


def naive_st_connectivity(oracle, s: int, t: int, delta: float) -> bool:
    """Decide whether s and t are connected, by full reconstruction."""
    n = oracle.n
    for name, v in (("s", s), ("t", t)):
        if not 0 <= v < n:
            raise ValueError(f"terminal {name}={v} out of range [0, {n})")
    return _reconstruct(oracle, delta).connected(s, t)


def hard_instance_to_text(instance: HardInstance) -> str:
    """Header "n=.. label=.. removed=u,v|none" then 1-indexed edge lines."""
    if instance.removed_edge is None:
        removed = "none"
    else:
        u, v = instance.removed_edge
        removed = f"{u + 1},{v + 1}"
    lines = [f"n={instance.n} label={instance.label} removed={removed}"]
    for u, v in sorted(instance.graph):
        lines.append(f"{u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def hard_instance_from_text(text: str) -> HardInstance:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty hard-instance serialization")
    header = dict(part.split("=", 1) for part in lines[0].split())
    try:
        n = int(header["n"])
        label = int(header["label"])
        removed_text = header["removed"]
    except KeyError as missing:
        raise ValueError(f"hard-instance header missing field {missing}") from None
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label}")
    edges = []
    for line in lines[1:]:
        u, v = (int(part) - 1 for part in line.split())
        edges.append((u, v) if u < v else (v, u))
    if removed_text == "none":
        if label != 1:
            raise ValueError("disconnected instance must name its removed edge")
        removed = None
        base = LabeledTree(n, tuple(edges))
    else:
        u, v = (int(part) - 1 for part in removed_text.split(","))
        removed = (u, v) if u < v else (v, u)
        if label != 0:
            raise ValueError("connected instance cannot have a removed edge")
        base = LabeledTree(n, tuple(edges) + (removed,))
    base.validate()
    return HardInstance(n, frozenset(edges), label, removed, base)
