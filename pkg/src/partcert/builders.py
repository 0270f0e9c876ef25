"""Graph assembly from a partition system.

Both builders start from the union of cliques on pool blocks and apply
per-block edge surgery whose deleted edges always touch an exclusive
vertex of their block, so each deletion lives in exactly one pool block
and cannot disturb any other block's induced structure.

The ARS build cliques every pool block, then deletes one edge in each
of two distinctive P0 blocks (their four endpoints chosen pairwise
pool-uncovered, hence independent afterwards), all edges at one vertex
of a P1 block, two edges sharing an end in a P2 block, a matching in a
P3 block, and a triangle in a P4 block.

The EPS build cliques every pool block except P0's, deletes around an
exclusive pair in each of P1..P4, then joins each chosen endpoint to
every pool-uncovered vertex in the low-index Q blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .constraints import (
    C4,
    K1,
    K2,
    P3_COMPLEMENT,
    S2,
    S3,
    at_most_one_nonedge,
    clique_plus_pendant,
    join_clique,
    satisfies_constraint,
    union_clique,
)
from .errors import BudgetExhausted, InvalidParameters, NotDistinctive
from .graphs import Graph, classify_set, induced
from .partitions import PartitionSystem, _exclusive_elements
from .rng import sub_rng

__all__ = ["BuildLog", "build_ars_graph", "build_eps_graph"]


@dataclass(frozen=True)
class BuildLog:
    kind: str  # "ars" | "eps"
    seed: int
    system: PartitionSystem
    retry_count: int
    special_blocks: dict  # family name -> block index within the family
    endpoints: dict  # family name -> tuple of chosen special vertices
    deleted_edges: tuple
    added_edges: tuple
    notes: tuple = ()

    def to_json(self, indent=None) -> str:
        doc = {
            "kind": self.kind,
            "seed": self.seed,
            "retry_count": self.retry_count,
            "special_blocks": self.special_blocks,
            "endpoints": {k: list(v) for k, v in self.endpoints.items()},
            "deleted_edges": [list(e) for e in self.deleted_edges],
            "added_edges": [list(e) for e in self.added_edges],
            "notes": list(self.notes),
            "system": json.loads(self.system.to_json()),
        }
        return json.dumps(doc, sort_keys=True, indent=indent)

    @staticmethod
    def from_json(text: str) -> "BuildLog":
        doc = json.loads(text)
        return BuildLog(
            kind=doc["kind"],
            seed=doc["seed"],
            system=PartitionSystem.from_json(json.dumps(doc["system"])),
            retry_count=doc["retry_count"],
            special_blocks={k: int(v) for k, v in doc["special_blocks"].items()},
            endpoints={k: tuple(v) for k, v in doc["endpoints"].items()},
            deleted_edges=tuple(tuple(e) for e in doc["deleted_edges"]),
            added_edges=tuple(tuple(e) for e in doc["added_edges"]),
            notes=tuple(doc.get("notes", ())),
        )


def _pool_data(system: PartitionSystem):
    pool = system.pool_blocks()
    sets = [b for _, _, b in pool]
    exclusive = [_exclusive_elements(sets, i) for i in range(len(sets))]
    covered = set()
    for b in sets:
        for pair in combinations(sorted(b), 2):
            covered.add(frozenset(pair))
    return pool, sets, exclusive, covered


def _family_offset(system: PartitionSystem, family: int) -> int:
    return len(system.r.blocks) + family * system.l


def _distinctive_blocks(system, exclusive, family):
    offset = _family_offset(system, family)
    out = []
    for j in range(system.l):
        if len(exclusive[offset + j]) >= 2:
            out.append(j)
    return out


def _clique_base(system: PartitionSystem, skip_family=None):
    adj = [0] * system.x_size
    for name, _, block in system.pool_blocks():
        if skip_family is not None and name == skip_family:
            continue
        for u, v in combinations(sorted(block), 2):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def _delete(adj, u, v):
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)


def _add(adj, u, v):
    adj[u] |= 1 << v
    adj[v] |= 1 << u


def _shuffled(rng, items):
    items = list(items)
    order = rng.permutation(len(items))
    return [items[int(i)] for i in order]


def _check_deleted_containment(system, deleted):
    sets = system.pool_block_sets()
    for u, v in deleted:
        holders = [b for b in sets if u in b and v in b]
        assert len(holders) == 1, f"deleted edge {(u, v)} must lie in exactly one pool block"


def _assert_block_class(g, block, constraint, label):
    sub, _ = induced(g, block)
    assert satisfies_constraint(sub, constraint), f"{label} block misses its class"


def build_ars_graph(system: PartitionSystem, seed: int):
    """Returns (graph, build log); raises NotDistinctive or
    BudgetExhausted when the system cannot support the surgery."""
    m = system.block_size
    if m < 3:
        raise InvalidParameters("ARS surgery needs pool blocks of size >= 3")
    pool, sets, exclusive, covered = _pool_data(system)
    rng = sub_rng(seed, 0)

    d0 = _distinctive_blocks(system, exclusive, 0)
    if len(d0) < 2:
        raise NotDistinctive("P0 needs two distinctive blocks")
    offset0 = _family_offset(system, 0)

    def block_edges(family_block, tier):
        """Candidate deletable edges: anchor exclusive; tier 1 wants the
        partner exclusive too."""
        idx = offset0 + family_block
        block = sorted(sets[idx])
        excl = sorted(exclusive[idx])
        out = []
        for a in excl:
            for b in block:
                if b == a:
                    continue
                if (b in excl) != (tier == 1):
                    continue
                e = tuple(sorted((a, b)))
                if e not in out:
                    out.append(e)
        return out

    quad = None
    tries = 0
    for tier in (1, 2):
        pairs = []
        for j1, j2 in combinations(d0, 2):
            for e1 in block_edges(j1, 1) + (block_edges(j1, 2) if tier == 2 else []):
                for e2 in block_edges(j2, 1) + (block_edges(j2, 2) if tier == 2 else []):
                    pairs.append((j1, e1, j2, e2))
        for j1, e1, j2, e2 in _shuffled(rng, pairs):
            tries += 1
            cross = [frozenset((x, y)) for x in e1 for y in e2]
            if all(pair not in covered for pair in cross):
                quad = (j1, e1, j2, e2)
                break
        if quad is not None:
            break
    if quad is None:
        raise BudgetExhausted(
            f"no independent endpoint quadruple among {tries} candidates",
            failed_property="ars3-independence",
        )
    j1, e1, j2, e2 = quad
    deleted = [e1, e2]
    used_anchors = set(e1) | set(e2)

    special_blocks = {"P0": j1, "P0b": j2}
    endpoints = {"P0": e1, "P0b": e2}
    matching_size = min(2, m // 2)
    notes = []
    if matching_size < 2:
        notes.append("P3 matching reduced to one edge (block size 3)")

    for fam in (1, 2, 3, 4):
        di = _distinctive_blocks(system, exclusive, fam)
        if not di:
            raise NotDistinctive(f"P{fam} needs a distinctive block")
        offset = _family_offset(system, fam)
        chosen = None
        for j in _shuffled(rng, di):
            idx = offset + j
            block = sorted(sets[idx])
            excl = [x for x in sorted(exclusive[idx]) if x not in used_anchors]
            need = 2 if fam == 4 or (fam == 3 and matching_size == 2) else 1
            if len(excl) < need:
                continue
            if fam == 1:
                x = excl[0]
                edges = [tuple(sorted((x, y))) for y in block if y != x]
                anchors = (x,)
            elif fam == 2:
                x = excl[0]
                others = [y for y in block if y != x][:2]
                edges = [tuple(sorted((x, y))) for y in others]
                anchors = (x,)
            elif fam == 3:
                if matching_size == 2:
                    x1, x2 = excl[0], excl[1]
                    partners = [y for y in block if y not in (x1, x2)][:2]
                    if len(partners) < 2:
                        continue
                    edges = [tuple(sorted((x1, partners[0]))), tuple(sorted((x2, partners[1])))]
                    anchors = (x1, x2)
                else:
                    x = excl[0]
                    y = next(y for y in block if y != x)
                    edges = [tuple(sorted((x, y)))]
                    anchors = (x,)
            else:  # triangle
                x, y = excl[0], excl[1]
                z = next(w for w in block if w not in (x, y))
                edges = [
                    tuple(sorted((x, y))),
                    tuple(sorted((y, z))),
                    tuple(sorted((z, x))),
                ]
                anchors = (x, y)
            chosen = (j, edges, anchors)
            break
        if chosen is None:
            raise NotDistinctive(f"P{fam} has no distinctive block clear of earlier anchors")
        j, edges, anchors = chosen
        special_blocks[f"P{fam}"] = j
        endpoints[f"P{fam}"] = anchors
        deleted.extend(edges)
        used_anchors.update(anchors)

    adj = _clique_base(system)
    for u, v in deleted:
        _delete(adj, u, v)
    g = Graph(system.x_size, tuple(adj))

    log = BuildLog(
        kind="ars",
        seed=seed,
        system=system,
        retry_count=tries,
        special_blocks=special_blocks,
        endpoints=endpoints,
        deleted_edges=tuple(deleted),
        added_edges=(),
        notes=tuple(notes),
    )
    _assert_ars_postconditions(g, log)
    return g, log


def _assert_ars_postconditions(g: Graph, log: BuildLog):
    system = log.system
    _check_deleted_containment(system, log.deleted_edges)
    quad = sorted(set(log.endpoints["P0"]) | set(log.endpoints["P0b"]))
    assert classify_set(g, quad).is_stable, "deleted-edge endpoints must be independent"
    modified = {
        ("P0", log.special_blocks["P0"]),
        ("P0", log.special_blocks["P0b"]),
        ("P1", log.special_blocks["P1"]),
        ("P2", log.special_blocks["P2"]),
        ("P3", log.special_blocks["P3"]),
        ("P4", log.special_blocks["P4"]),
    }
    for name, i, block in system.pool_blocks():
        if (name, i) in modified:
            continue
        assert classify_set(g, block).is_clique, f"untouched block {name}[{i}] must stay a clique"
    for key in ("P0", "P0b"):
        i = log.special_blocks[key]
        block = system.p[0].blocks[i]
        assert classify_set(g, block).nonedge_count == 1
    checks = {
        "P1": union_clique(K1),
        "P2": join_clique(P3_COMPLEMENT),
        "P3": join_clique(C4),
        "P4": join_clique(S3),
    }
    for fam in (1, 2, 3, 4):
        block = system.p[fam].blocks[log.special_blocks[f"P{fam}"]]
        _assert_block_class(g, block, checks[f"P{fam}"], f"P{fam}")


def build_eps_graph(system: PartitionSystem, seed: int):
    """Returns (graph, build log); P0 blocks get no internal edges, the
    chosen endpoints gain edges into the low-index Q blocks."""
    m = system.block_size
    if m < 3:
        raise InvalidParameters("EPS surgery needs pool blocks of size >= 3")
    pool, sets, exclusive, covered = _pool_data(system)
    rng = sub_rng(seed, 1)
    k_half = system.k // 2
    small_q = set()
    for j in range(1, k_half + 1):
        small_q |= set(system.q.blocks[_q_block_index(system, j)])

    special_blocks = {}
    endpoints = {}
    used = set()
    notes = []
    for fam in (1, 2, 3, 4):
        di = _distinctive_blocks(system, exclusive, fam)
        if not di:
            raise NotDistinctive(f"P{fam} needs a distinctive block")
        offset = _family_offset(system, fam)
        candidates = []
        for j in di:
            idx = offset + j
            excl = sorted(exclusive[idx])
            for u, v in combinations(excl, 2):
                if u in used or v in used:
                    continue
                badness = (u in small_q) + (v in small_q)
                candidates.append((badness, j, u, v))
        if not candidates:
            raise NotDistinctive(f"P{fam} has no exclusive pair clear of earlier choices")
        shuffled = _shuffled(rng, candidates)
        shuffled.sort(key=lambda c: c[0])  # stable: keeps rng order within tiers
        badness, j, u, v = shuffled[0]
        if badness:
            notes.append(f"P{fam} endpoints intersect the low Q blocks")
        special_blocks[f"P{fam}"] = j
        endpoints[f"P{fam}"] = (u, v)
        used.update((u, v))

    adj = _clique_base(system, skip_family="P0")
    deleted = []

    def block_of(fam):
        return sorted(system.p[fam].blocks[special_blocks[f"P{fam}"]])

    u1, v1 = endpoints["P1"]
    deleted.append(tuple(sorted((u1, v1))))
    u2, v2 = endpoints["P2"]
    for w in block_of(2):
        for z in (u2, v2):
            if w != z:
                e = tuple(sorted((z, w)))
                if e not in deleted:
                    deleted.append(e)
    u3, v3 = endpoints["P3"]
    for w in block_of(3):
        for z in (u3, v3):
            if w != z and {w, z} != {u3, v3}:
                e = tuple(sorted((z, w)))
                if e not in deleted:
                    deleted.append(e)
    u4, v4 = endpoints["P4"]
    for w in block_of(4):
        if w != u4 and w != v4:
            deleted.append(tuple(sorted((u4, w))))
    for u, v in deleted:
        _delete(adj, u, v)

    z_prime = sorted(used)
    added = []
    for z in z_prime:
        for x in sorted(small_q):
            if x != z and frozenset((x, z)) not in covered:
                e = tuple(sorted((z, x)))
                if e not in added:
                    added.append(e)
    for u, v in added:
        _add(adj, u, v)

    g = Graph(system.x_size, tuple(adj))
    log = BuildLog(
        kind="eps",
        seed=seed,
        system=system,
        retry_count=0,
        special_blocks=special_blocks,
        endpoints=endpoints,
        deleted_edges=tuple(deleted),
        added_edges=tuple(added),
        notes=tuple(notes),
    )
    _assert_eps_postconditions(g, log, small_q)
    return g, log


def _q_block_index(system: PartitionSystem, j: int) -> int:
    """Index of Q_j inside the canonically sorted Q blocks."""
    member = system.l + (j - 1) * (system.l - system.k)
    for i, b in enumerate(system.q.blocks):
        if member in b:
            return i
    raise InvalidParameters(f"Q block {j} not found")


def _assert_eps_postconditions(g: Graph, log: BuildLog, small_q):
    system = log.system
    _check_deleted_containment(system, log.deleted_edges)
    z_prime = {v for pair in log.endpoints.values() for v in pair}
    covered = set()
    for b in system.pool_block_sets():
        for pair in combinations(sorted(b), 2):
            covered.add(frozenset(pair))
    for u, v in log.added_edges:
        assert (u in z_prime and v in small_q) or (v in z_prime and u in small_q), (
            "added edges join a chosen endpoint to a low Q block"
        )
        assert frozenset((u, v)) not in covered, "added edges must be uncovered"
    checks = {
        "P1": at_most_one_nonedge(),
        "P2": union_clique(S2),
        "P3": union_clique(K2),
        "P4": clique_plus_pendant(),
    }
    for fam in (1, 2, 3, 4):
        block = system.p[fam].blocks[log.special_blocks[f"P{fam}"]]
        _assert_block_class(g, block, checks[f"P{fam}"], f"P{fam}")
    for name, i, block in system.pool_blocks():
        if name == "P0":
            continue
        if name in ("P1", "P2", "P3", "P4") and i == log.special_blocks[name]:
            continue
        assert classify_set(g, block).is_clique, f"untouched block {name}[{i}] must stay a clique"
