"""Closed-form solvers for acyclic domains.

On a tree, a winning coalition must contain every standard vertex lying on
the unique path between any two primary vertices (the essential vertices),
and containing all of them is also sufficient. Essential vertices are found
by pruning non-primary leaves until none remain, which leaves exactly the
minimal subtree spanning the primaries. Power indices and core questions then
collapse to counting: m essential agents share the reward 1/m under the
Shapley value, each has Banzhaf index 2^(1-m), the veto set is the essential
set, and an imputation is in the eps-core iff its essential payment reaches
1 - eps.

The solvers accept forests, and more generally any domain whose quotient is a
forest once every connected region of always-usable vertices (primaries plus
backbones) is contracted to a single vertex: such regions are internally
connected for every coalition, so contracting them preserves each coalition's
value while removing the only cycles that do not matter. Acyclicity of that
quotient is what the closed forms need; primary connectivity is enforced by
the non-degeneracy precondition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .domain import ConnectivityDomain, classify
from .errors import DegenerateDomainError, NotTreeError
from .powerindex import BANZHAF, SHAPLEY, TREE_CLOSED_FORM, IndexVector
from .stability import IMPUTATION_TOL, CoreDescription, _as_payoffs


@dataclass(frozen=True)
class EssentialSet:
    """Agents whose vertices lie on a path between two primary vertices."""

    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, agent: int) -> bool:
        return agent in set(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class TreeCoreResult:
    core: CoreDescription
    canonical_imputation: tuple[Fraction, ...]


def _is_forest(domain: ConnectivityDomain) -> bool:
    parent = list(range(domain.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in domain.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def _collapse_usable(domain: ConnectivityDomain) -> ConnectivityDomain:
    """Quotient domain with each connected always-usable region contracted to
    one vertex (primary if the region holds a primary, backbone otherwise).

    Standard vertices map to themselves, so agent indices and every
    coalition's value are preserved.
    """
    parent = list(range(domain.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    usable = set(domain.primary) | set(domain.backbone)
    for u, v in domain.edges:
        if u in usable and v in usable:
            parent[find(u)] = find(v)

    new_id: dict[int, int] = {}
    kinds: list[str] = []  # parallel to new ids: "p", "b", or "s"
    primary_roots = {find(p) for p in domain.primary}

    def map_vertex(v: int) -> int:
        key = find(v) if v in usable else v
        if key not in new_id:
            new_id[key] = len(kinds)
            if v in usable:
                kinds.append("p" if key in primary_roots else "b")
            else:
                kinds.append("s")
        return new_id[key]

    standard = tuple(map_vertex(v) for v in domain.standard)
    for v in range(domain.vertex_count):
        map_vertex(v)
    edges = set()
    for u, v in domain.edges:
        a, b = map_vertex(u), map_vertex(v)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return ConnectivityDomain(
        vertex_count=len(kinds),
        edges=tuple(sorted(edges)),
        primary=tuple(i for i, k in enumerate(kinds) if k == "p"),
        backbone=tuple(i for i, k in enumerate(kinds) if k == "b"),
        standard=standard,
    )


def _tree_form(domain: ConnectivityDomain) -> ConnectivityDomain:
    """The quotient domain the closed forms run on; rejects cycles and degeneracy."""
    domain.ensure_valid()
    quotient = _collapse_usable(domain)
    if not _is_forest(quotient):
        raise NotTreeError(
            "domain has a cycle through standard vertices; use the general solvers")
    classification = classify(domain)
    if classification.degenerate_all_win:
        raise DegenerateDomainError("every coalition wins; tree solvers need a "
                                    "non-degenerate domain")
    if classification.degenerate_all_lose:
        raise DegenerateDomainError("even the grand coalition loses; tree solvers "
                                    "need a non-degenerate domain")
    return quotient


def essential_vertices(domain: ConnectivityDomain) -> EssentialSet:
    """Agents on the minimal subtree spanning the primary vertices.

    Iteratively prunes non-primary vertices of degree <= 1; what survives is
    the subtree spanning the primaries, whose standard vertices are exactly
    the agents present in every winning coalition.
    """
    tree = _tree_form(domain)
    degree = [0] * tree.vertex_count
    for u, v in tree.edges:
        degree[u] += 1
        degree[v] += 1
    primary = set(tree.primary)
    alive = [True] * tree.vertex_count
    queue = [v for v in range(tree.vertex_count)
             if degree[v] <= 1 and v not in primary]
    adjacency = tree._adjacency
    while queue:
        v = queue.pop()
        if not alive[v] or degree[v] > 1 or v in primary:
            continue
        alive[v] = False
        for u in adjacency[v]:
            if alive[u]:
                degree[u] -= 1
                if degree[u] <= 1 and u not in primary:
                    queue.append(u)
    members = tuple(agent for agent, vertex in enumerate(tree.standard) if alive[vertex])
    return EssentialSet(members)


def tree_shapley(domain: ConnectivityDomain) -> IndexVector:
    """Shapley values on a tree: 1/m for each of the m essential agents, else 0."""
    essential = essential_vertices(domain)
    share = Fraction(1, essential.size)
    members = set(essential.members)
    values = tuple(share if i in members else Fraction(0)
                   for i in range(domain.n_agents))
    return IndexVector(SHAPLEY, values, TREE_CLOSED_FORM)


def tree_banzhaf(domain: ConnectivityDomain) -> IndexVector:
    """Banzhaf indices on a tree: 2^(1-m) for essential agents, else 0."""
    essential = essential_vertices(domain)
    share = Fraction(1, 1 << (essential.size - 1))
    members = set(essential.members)
    values = tuple(share if i in members else Fraction(0)
                   for i in range(domain.n_agents))
    return IndexVector(BANZHAF, values, TREE_CLOSED_FORM)


def tree_core(domain: ConnectivityDomain) -> TreeCoreResult:
    """Core of a tree domain: never empty, veto set = essential set, and the
    equal split over essential agents as a canonical core imputation."""
    essential = essential_vertices(domain)
    share = Fraction(1, essential.size)
    members = set(essential.members)
    canonical = tuple(share if i in members else Fraction(0)
                      for i in range(domain.n_agents))
    return TreeCoreResult(
        core=CoreDescription(veto_agents=essential.members, is_empty=False),
        canonical_imputation=canonical,
    )


def tree_ecm(domain: ConnectivityDomain, payoffs, epsilon) -> bool:
    """Epsilon-core membership on a tree: payment to essential agents must
    reach 1 - epsilon (non-strict, matching the general solver's tolerance)."""
    essential = essential_vertices(domain)
    p = _as_payoffs(payoffs, domain.n_agents)
    total = sum(p, Fraction(0))
    if abs(total - 1) > IMPUTATION_TOL:
        raise ValueError(f"not an imputation: payoffs sum to {float(total)}, expected 1")
    if any(x < -IMPUTATION_TOL for x in p):
        raise ValueError("negative payoff entries rejected")
    essential_payment = sum((p[i] for i in essential.members), Fraction(0))
    return essential_payment >= 1 - Fraction(epsilon) - IMPUTATION_TOL
