"""Graph model for vertex connectivity games.

A domain is a simple undirected graph whose vertices are partitioned into
primary, backbone, and standard vertices. Each standard vertex is owned by one
agent (agent ``i`` owns ``standard[i]``, which is also bit ``i`` in coalition
encodings). A coalition wins when the vertices it owns, together with all
primary and backbone vertices, connect every pair of primary vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import InvalidDomainError

PRIMARY = "primary"
BACKBONE = "backbone"
STANDARD = "standard"


@dataclass(frozen=True)
class Coalition:
    """Subset of agents encoded as a bitmask (bit ``i`` set = agent ``i`` in)."""

    mask: int
    n_agents: int

    def __post_init__(self):
        if self.n_agents < 0:
            raise ValueError("n_agents must be nonnegative")
        if not 0 <= self.mask < (1 << self.n_agents):
            raise ValueError(f"mask {self.mask:#x} out of range for {self.n_agents} agents")

    @classmethod
    def from_members(cls, members: Iterable[int], n_agents: int) -> "Coalition":
        mask = 0
        for i in members:
            if not 0 <= i < n_agents:
                raise ValueError(f"agent index {i} out of range 0..{n_agents - 1}")
            mask |= 1 << i
        return cls(mask, n_agents)

    @classmethod
    def empty(cls, n_agents: int) -> "Coalition":
        return cls(0, n_agents)

    @classmethod
    def grand(cls, n_agents: int) -> "Coalition":
        return cls((1 << n_agents) - 1, n_agents)

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def add(self, agent: int) -> "Coalition":
        if not 0 <= agent < self.n_agents:
            raise ValueError(f"agent index {agent} out of range")
        return Coalition(self.mask | (1 << agent), self.n_agents)

    def remove(self, agent: int) -> "Coalition":
        return Coalition(self.mask & ~(1 << agent), self.n_agents)

    def union(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask | other.mask, self.n_agents)

    def __contains__(self, agent: int) -> bool:
        return 0 <= agent < self.n_agents and bool(self.mask >> agent & 1)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class ConnectivityDomain:
    """A network with its primary / backbone / standard vertex partition.

    ``standard`` doubles as the agent map: agent ``i`` owns ``standard[i]``.
    Instances are immutable; all evaluation functions are pure, so a shared
    domain may be used concurrently without synchronization.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    primary: tuple[int, ...]
    backbone: tuple[int, ...]
    standard: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "primary", tuple(int(v) for v in self.primary))
        object.__setattr__(self, "backbone", tuple(int(v) for v in self.backbone))
        object.__setattr__(self, "standard", tuple(int(v) for v in self.standard))

    @property
    def n_agents(self) -> int:
        return len(self.standard)

    def vertex_of(self, agent: int) -> int:
        return self.standard[agent]

    def agent_of(self, vertex: int) -> int | None:
        """Agent owning ``vertex``, or None when it is not a standard vertex."""
        try:
            return self.standard.index(vertex)
        except ValueError:
            return None

    def kind_of(self, vertex: int) -> str:
        if vertex in self.primary:
            return PRIMARY
        if vertex in self.backbone:
            return BACKBONE
        return STANDARD

    @cached_property
    def _validation(self) -> ValidationReport:
        return validate(self)

    def ensure_valid(self) -> None:
        report = self._validation
        if not report.ok:
            raise InvalidDomainError(report.violations)

    # The cached graph views below assume a validated domain.

    @cached_property
    def _adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(ns) for ns in nbrs)

    @cached_property
    def _adjacency_masks(self) -> tuple[int, ...]:
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def _primary_mask(self) -> int:
        mask = 0
        for v in self.primary:
            mask |= 1 << v
        return mask

    @cached_property
    def _base_usable_mask(self) -> int:
        mask = self._primary_mask
        for v in self.backbone:
            mask |= 1 << v
        return mask


@dataclass(frozen=True)
class DomainClassification:
    """Degeneracy flags, tree-ness, and the primary-merged form of a domain.

    ``merged`` is None when no two primary vertices are reachable from each
    other through primary/backbone vertices only (nothing to contract).
    """

    degenerate_all_win: bool
    degenerate_all_lose: bool
    is_tree: bool
    merged: ConnectivityDomain | None

    @property
    def degenerate(self) -> bool:
        return self.degenerate_all_win or self.degenerate_all_lose


def validate(domain: ConnectivityDomain) -> ValidationReport:
    """Check the partition, edge list, and agent map; violations are data."""
    violations: list[str] = []
    n_vertices = domain.vertex_count
    if n_vertices < 0:
        return ValidationReport(("negative vertex count",))

    label_count = [0] * n_vertices
    for name, vertices in ((PRIMARY, domain.primary), (BACKBONE, domain.backbone),
                           (STANDARD, domain.standard)):
        for v in vertices:
            if not 0 <= v < n_vertices:
                violations.append(f"{name} label references unknown vertex {v}")
            else:
                label_count[v] += 1
    for v, count in enumerate(label_count):
        if count == 0:
            violations.append(f"vertex {v} has no kind label (non-partition labels)")
        elif count > 1:
            violations.append(f"vertex {v} labeled more than once (non-partition labels)")
    if len(set(domain.standard)) != len(domain.standard):
        violations.append("agent map is not a bijection: repeated standard vertex")

    seen: set[tuple[int, int]] = set()
    for u, v in domain.edges:
        if u == v:
            violations.append(f"edge ({u}, {v}) is a self-loop")
            continue
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            violations.append(f"edge ({u}, {v}) references an unknown vertex")
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            violations.append(f"duplicate edge ({key[0]}, {key[1]})")
        seen.add(key)

    return ValidationReport(tuple(violations))


def _as_mask(coalition, n_agents: int) -> int:
    if isinstance(coalition, Coalition):
        if coalition.n_agents != n_agents:
            raise ValueError("coalition sized for a different agent set")
        return coalition.mask
    mask = int(coalition)
    if not 0 <= mask < (1 << n_agents):
        raise ValueError(f"coalition mask {mask:#x} out of range for {n_agents} agents")
    return mask


def _value_of_mask(domain: ConnectivityDomain, mask: int) -> int:
    """Characteristic function on a raw bitmask; assumes a validated domain."""
    pm = domain._primary_mask
    if pm & (pm - 1) == 0:
        return 1  # zero or one primary vertex: vacuously connected
    usable = domain._base_usable_mask
    standard = domain.standard
    m = mask
    while m:
        low = m & -m
        usable |= 1 << standard[low.bit_length() - 1]
        m ^= low
    adj = domain._adjacency_masks
    reached = pm & -pm  # start from the lowest primary vertex
    frontier = reached
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & usable & ~reached
        reached |= frontier
    return 1 if pm & ~reached == 0 else 0


def coalition_value(domain: ConnectivityDomain, coalition) -> int:
    """Value of a coalition: 1 iff its vertices plus the always-usable ones
    connect every pair of primary vertices.

    One traversal from an arbitrary primary vertex suffices on an undirected
    graph. ``coalition`` may be a :class:`Coalition` or a raw bitmask.
    """
    domain.ensure_valid()
    return _value_of_mask(domain, _as_mask(coalition, domain.n_agents))


def is_critical(domain: ConnectivityDomain, agent: int, coalition) -> bool:
    """True iff the coalition wins but loses once ``agent`` is removed."""
    domain.ensure_valid()
    mask = _as_mask(coalition, domain.n_agents)
    bit = 1 << agent
    if not 0 <= agent < domain.n_agents or not mask & bit:
        raise ValueError(f"agent {agent} is not a member of the coalition")
    return _value_of_mask(domain, mask) == 1 and _value_of_mask(domain, mask ^ bit) == 0


def _is_connected(domain: ConnectivityDomain) -> bool:
    if domain.vertex_count == 0:
        return True
    seen = [False] * domain.vertex_count
    stack = [0]
    seen[0] = True
    adj = domain._adjacency
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return all(seen)


def _merge_primaries(domain: ConnectivityDomain) -> ConnectivityDomain | None:
    """Contract groups of primary vertices that reach each other through
    primary/backbone vertices only. Returns None when nothing contracts.

    Standard vertices (and hence agent indices) are untouched, so every
    coalition keeps its value on the merged domain.
    """
    parent = list(range(domain.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    always = set(domain.primary) | set(domain.backbone)
    for u, v in domain.edges:
        if u in always and v in always:
            parent[find(u)] = find(v)

    rep: dict[int, int] = {}
    group_rep: dict[int, int] = {}
    dropped: set[int] = set()
    for p in sorted(domain.primary):
        root = find(p)
        if root in group_rep:
            rep[p] = group_rep[root]
            dropped.add(p)
        else:
            group_rep[root] = p
            rep[p] = p
    if not dropped:
        return None

    kept = [v for v in range(domain.vertex_count) if v not in dropped]
    new_id = {v: i for i, v in enumerate(kept)}

    def map_vertex(v: int) -> int:
        return new_id[rep.get(v, v)]

    new_edges = set()
    for u, v in domain.edges:
        a, b = map_vertex(u), map_vertex(v)
        if a != b:
            new_edges.add((min(a, b), max(a, b)))

    return ConnectivityDomain(
        vertex_count=len(kept),
        edges=tuple(sorted(new_edges)),
        primary=tuple(new_id[p] for p in domain.primary if p not in dropped),
        backbone=tuple(new_id[b] for b in domain.backbone),
        standard=tuple(new_id[s] for s in domain.standard),
    )


def classify(domain: ConnectivityDomain) -> DomainClassification:
    """Degeneracy flags, tree detection, and the primary-merged domain."""
    domain.ensure_valid()
    n = domain.n_agents
    grand = (1 << n) - 1
    all_win = _value_of_mask(domain, 0) == 1
    all_lose = _value_of_mask(domain, grand) == 0
    is_tree = (len(domain.edges) == domain.vertex_count - 1) and _is_connected(domain)
    return DomainClassification(
        degenerate_all_win=all_win,
        degenerate_all_lose=all_lose,
        is_tree=is_tree,
        merged=_merge_primaries(domain),
    )


def domain_to_dict(domain: ConnectivityDomain) -> dict:
    return {
        "vertices": domain.vertex_count,
        "edges": [[u, v] for u, v in domain.edges],
        "primary": list(domain.primary),
        "backbone": list(domain.backbone),
        "standard": list(domain.standard),
    }


def domain_from_dict(data: dict) -> ConnectivityDomain:
    """Build a domain from the JSON schema; unknown top-level keys are ignored.

    Agent ``i`` is the i-th entry of ``standard`` — that ordering is the bit
    position used in every coalition encoding.
    """
    if not isinstance(data, dict):
        raise ValueError("domain document must be a JSON object")
    try:
        vertices = int(data["vertices"])
        edges = tuple((int(u), int(v)) for u, v in data["edges"])
        primary = tuple(int(v) for v in data["primary"])
        backbone = tuple(int(v) for v in data["backbone"])
        standard = tuple(int(v) for v in data["standard"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed domain document: {exc}") from exc
    return ConnectivityDomain(vertices, edges, primary, backbone, standard)
