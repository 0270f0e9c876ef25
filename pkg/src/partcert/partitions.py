"""Set-partition machinery: transversal families, coverage, exclusivity,
and the seeded partition-system sampler with its property checkers.

A partition system over a ground set X of size (l-k)k + l consists of
  Q:  k+1 blocks, |Q0| = l and |Qj| = l-k            (property Q)
  R:  l-k blocks partitioning X - Q0, transversal to Q (property R)
  P0..P4: five partitions of X into l blocks of size k(l-k)/l + 1,
      each transversal to Q                           (properties P1, P2)
and the pool is R together with all Pi blocks.  The sampler guarantees
Q, R, P1, P2 by construction and retries until the requested
distinctiveness (P3) and pairwise-intersection (P5) thresholds hold;
P6 and the tame-partition classifier (the single-candidate side of P4)
are separate budgeted checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .certificates import REFUTED, UNKNOWN, VERIFIED, Certificate
from .errors import BudgetExhausted, InvalidCandidate, InvalidParameters, NotTame
from .rng import sub_rng

__all__ = [
    "SetPartition",
    "PartitionSystem",
    "Thresholds",
    "are_transversal",
    "coverage",
    "Coverage",
    "exclusivity",
    "Exclusivity",
    "sample_partition_system",
    "check_p5",
    "check_p6",
    "classify_tame_partition",
    "TameClass",
    "check_p7_set",
    "p4_probe",
]

FAMILY_NAMES = ("R", "P0", "P1", "P2", "P3", "P4")


@dataclass(frozen=True)
class SetPartition:
    ground: frozenset
    blocks: tuple  # disjoint nonempty frozensets, union within ground

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise InvalidParameters("partition blocks must be nonempty")
            if b & seen:
                raise InvalidParameters("partition blocks must be disjoint")
            if not b <= self.ground:
                raise InvalidParameters("block outside the ground set")
            seen |= b
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))

    def covers_ground(self) -> bool:
        return frozenset().union(*self.blocks) == self.ground if self.blocks else not self.ground


def _canonical_blocks(blocks):
    return tuple(sorted((frozenset(b) for b in blocks), key=lambda b: min(b)))


def are_transversal(a: SetPartition, b: SetPartition) -> bool:
    """Every block of a meets every block of b in at most one element."""
    if a.ground != b.ground:
        raise InvalidParameters("transversality needs a common ground set")
    return all(len(x & y) <= 1 for x in a.blocks for y in b.blocks)


@dataclass(frozen=True)
class Coverage:
    covered: bool
    uncovered_pair_count: int
    tame: bool


def coverage(family, s) -> Coverage:
    """Coverage of a set by a family of blocks.

    covered: some block contains s; tame: at most one 2-subset of s is
    uncovered (wild otherwise)."""
    s = frozenset(s)
    blocks = [frozenset(b) for b in family]
    covered = any(s <= b for b in blocks)
    uncovered = 0
    for pair in combinations(sorted(s), 2):
        ps = frozenset(pair)
        if not any(ps <= b for b in blocks):
            uncovered += 1
    return Coverage(covered=covered, uncovered_pair_count=uncovered, tame=uncovered <= 1)


@dataclass(frozen=True)
class Exclusivity:
    exclusive_elements: frozenset
    distinctive: bool


def _exclusive_elements(blocks, index) -> frozenset:
    p = blocks[index]
    out = set()
    for x in p:
        ok = True
        for j, other in enumerate(blocks):
            if j == index or x not in other:
                continue
            if len(p & other) != 1:
                ok = False
                break
        if ok:
            out.add(x)
    return frozenset(out)


def exclusivity(family, p) -> Exclusivity:
    """Elements of p shared with other family blocks only through
    singleton intersections; distinctive when there are at least two."""
    blocks = [frozenset(b) for b in family]
    p = frozenset(p)
    try:
        index = blocks.index(p)
    except ValueError:
        raise InvalidParameters("p must belong to the family") from None
    exclusive = _exclusive_elements(blocks, index)
    return Exclusivity(exclusive, len(exclusive) >= 2)


@dataclass(frozen=True)
class Thresholds:
    """Sampler gates; the defaults are the design values, desk-scale runs
    typically need to relax them and the system records what was used."""

    p3_min_distinctive: int = 2
    p5_tau: object = "sqrt_k"  # "sqrt_k" (exact rule), a number, or None to skip

    def to_json_dict(self):
        return {"p3_min_distinctive": self.p3_min_distinctive, "p5_tau": self.p5_tau}


@dataclass(frozen=True)
class PartitionSystem:
    l: int
    k: int
    x_size: int
    q: SetPartition  # blocks[0] is Q0
    r: SetPartition
    p: tuple  # five SetPartitions
    seed: int
    thresholds: Thresholds
    attempt: int = 0

    @property
    def block_size(self) -> int:
        return self.k * (self.l - self.k) // self.l + 1

    def families(self):
        """(name, blocks) for R and P0..P4, pool order."""
        yield "R", self.r.blocks
        for i, part in enumerate(self.p):
            yield f"P{i}", part.blocks

    def pool_blocks(self):
        """All pool blocks with (family, index) identities."""
        out = []
        for name, blocks in self.families():
            out.extend((name, i, b) for i, b in enumerate(blocks))
        return out

    def pool_block_sets(self):
        return [b for _, _, b in self.pool_blocks()]

    def q_index(self, x) -> int:
        if x < self.l:
            return 0
        return 1 + (x - self.l) // (self.l - self.k)

    def to_json(self, indent=None) -> str:
        doc = {
            "l": self.l,
            "k": self.k,
            "X": self.x_size,
            "Q": [sorted(b) for b in self.q.blocks],
            "R": [sorted(b) for b in self.r.blocks],
            "P": [[sorted(b) for b in part.blocks] for part in self.p],
            "seed": self.seed,
            "thresholds": self.thresholds.to_json_dict(),
            "attempt": self.attempt,
        }
        return json.dumps(doc, sort_keys=True, indent=indent)

    @staticmethod
    def from_json(text: str) -> "PartitionSystem":
        doc = json.loads(text)
        ground = frozenset(range(doc["X"]))
        q = SetPartition(ground, _canonical_blocks(doc["Q"]))
        r = SetPartition(ground - frozenset(doc["Q"][0]), _canonical_blocks(doc["R"]))
        ps = tuple(SetPartition(ground, _canonical_blocks(blocks)) for blocks in doc["P"])
        thr = doc.get("thresholds", {})
        return PartitionSystem(
            l=doc["l"],
            k=doc["k"],
            x_size=doc["X"],
            q=q,
            r=r,
            p=ps,
            seed=doc["seed"],
            thresholds=Thresholds(
                p3_min_distinctive=thr.get("p3_min_distinctive", 2),
                p5_tau=thr.get("p5_tau", "sqrt_k"),
            ),
            attempt=doc.get("attempt", 0),
        )


def _distinctive_count(system: PartitionSystem, family_index: int) -> int:
    pool = system.pool_block_sets()
    fam_offset = len(system.r.blocks) + family_index * system.l
    count = 0
    for i in range(system.l):
        if len(_exclusive_elements(pool, fam_offset + i)) >= 2:
            count += 1
    return count


def _p5_violation(system: PartitionSystem, tau):
    """First cross-family block pair with too large an intersection."""
    fams = list(system.families())
    for (n1, b1), (n2, b2) in combinations(fams, 2):
        for i, x in enumerate(b1):
            for j, y in enumerate(b2):
                inter = x & y
                if tau == "sqrt_k":
                    bad = len(inter) ** 2 > system.k
                else:
                    bad = len(inter) > tau
                if bad:
                    return {"families": [n1, n2], "blocks": [i, j], "intersection": sorted(inter)}
    return None


def sample_partition_system(
    l: int, k: int, seed: int, max_retries: int = 64, thresholds: Thresholds | None = None
) -> PartitionSystem:
    """Las-Vegas sampler: Q and R are the fixed grid layout, each Pi is a
    uniformly random block permutation accepted only when transversal to
    Q, and whole draws are retried until the P3/P5 gates in `thresholds`
    hold (sub-seeded per attempt, so results are reproducible)."""
    if not (l > k >= 1):
        raise InvalidParameters("need l > k >= 1")
    if ((l - k) * k) % l != 0:
        raise InvalidParameters(f"l = {l} must divide (l-k)k = {(l - k) * k}")
    thresholds = thresholds or Thresholds()
    n_x = (l - k) * k + l
    m = k * (l - k) // l + 1
    ground = frozenset(range(n_x))
    q_blocks = [frozenset(range(l))]
    for j in range(1, k + 1):
        start = l + (j - 1) * (l - k)
        q_blocks.append(frozenset(range(start, start + l - k)))
    q = SetPartition(ground, _canonical_blocks(q_blocks))
    r_blocks = [
        frozenset(l + (j - 1) * (l - k) + c for j in range(1, k + 1)) for c in range(l - k)
    ]
    r = SetPartition(ground - q_blocks[0], _canonical_blocks(r_blocks))

    qid = [0] * n_x
    for x in range(l, n_x):
        qid[x] = 1 + (x - l) // (l - k)

    last_failure = "draw"
    for attempt in range(max_retries):
        rng = sub_rng(seed, attempt)
        ps = []
        ok = True
        for _ in range(5):
            part = _draw_transversal_partition(rng, n_x, l, m, qid, k)
            if part is None:
                ok = False
                last_failure = "P1P2-shape"
                break
            ps.append(SetPartition(ground, part))
        if not ok:
            continue
        system = PartitionSystem(
            l=l, k=k, x_size=n_x, q=q, r=r, p=tuple(ps), seed=seed,
            thresholds=thresholds, attempt=attempt,
        )
        if thresholds.p3_min_distinctive > 0:
            counts = [_distinctive_count(system, i) for i in range(5)]
            if min(counts) < thresholds.p3_min_distinctive:
                last_failure = "P3"
                continue
        if thresholds.p5_tau is not None:
            if _p5_violation(system, thresholds.p5_tau) is not None:
                last_failure = "P5"
                continue
        return system
    raise BudgetExhausted(
        f"no admissible system within {max_retries} attempts (last failure: {last_failure})",
        failed_property=last_failure,
    )


def _draw_transversal_partition(rng, n_x, l, m, qid, k, inner_cap=20000):
    """One uniform permutation chopped into l blocks of size m, rejected
    until every block meets each Q-block at most once."""
    for _ in range(inner_cap):
        perm = rng.permutation(n_x)
        blocks = []
        good = True
        for b in range(l):
            chunk = perm[b * m : (b + 1) * m]
            seen = 0
            for x in chunk:
                bit = 1 << qid[int(x)]
                if seen & bit:
                    good = False
                    break
                seen |= bit
            if not good:
                break
            blocks.append(frozenset(int(x) for x in chunk))
        if good:
            return _canonical_blocks(blocks)
    return None


def check_p5(system: PartitionSystem, tau=None) -> Certificate:
    """Cross-family pairwise block intersections bounded by tau
    (default: the exact square-root-of-k rule)."""
    rule = "sqrt_k" if tau is None else tau
    witness = _p5_violation(system, rule)
    params = {"tau": rule}
    if witness is None:
        return Certificate("P5", VERIFIED, parameters=params)
    return Certificate("P5", REFUTED, witness=witness, parameters=params)


def _ceil_frac_times(frac, value: int) -> int:
    """Smallest integer >= frac * value, exactly."""
    f = Fraction(str(frac)) * value
    return max(1, math.ceil(f))


def _ceil_frac_times_sqrt(frac, value: int) -> int:
    """Smallest integer >= frac * sqrt(value), exactly (no floats)."""
    f = Fraction(str(frac))
    t = 0
    while (t * f.denominator) ** 2 < f.numerator**2 * value:
        t += 1
    return max(1, t)


def check_p6(system: PartitionSystem, a_frac="1/10", b_frac="1/10", budget=100000) -> Certificate:
    """No sub-collections of two distinct pool families, of sizes at
    least ceil(a_frac*l) and ceil(b_frac*sqrt(k)), may have disjoint
    unions.  Both orientations of every unordered family pair are
    checked.  Exact within the node budget."""
    t_l = _ceil_frac_times(a_frac, system.l)
    t_k = _ceil_frac_times_sqrt(b_frac, system.k)
    params = {"a_frac": str(a_frac), "b_frac": str(b_frac), "t_l": t_l, "t_sqrt_k": t_k, "budget": budget}
    fams = list(system.families())
    nodes = 0

    def biclique(first_blocks, second_blocks, need_first, need_second):
        """Indices (A, B) with |A| >= need_first, |B| >= need_second and
        every first-block disjoint from every second-block, or None."""
        nonlocal nodes
        nf = len(first_blocks)
        disjoint_masks = []
        for x in first_blocks:
            mask = 0
            for j, y in enumerate(second_blocks):
                if not (x & y):
                    mask |= 1 << j
            disjoint_masks.append(mask)

        def grow(idx, chosen, allowed):
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                return "budget"
            if allowed.bit_count() < need_second:
                return None
            if len(chosen) >= need_first:
                return (list(chosen), allowed)
            if idx == nf:
                return None
            if len(chosen) + (nf - idx) < need_first:
                return None
            take = grow(idx + 1, chosen + [idx], allowed & disjoint_masks[idx])
            if take is not None:
                return take
            return grow(idx + 1, chosen, allowed)

        full = (1 << len(second_blocks)) - 1
        return grow(0, [], full)

    for (n1, b1), (n2, b2) in combinations(fams, 2):
        for (fn, fb, need_f), (sn, sb, need_s) in (
            ((n1, b1, t_l), (n2, b2, t_k)),
            ((n2, b2, t_l), (n1, b1, t_k)),
        ):
            found = biclique(list(fb), list(sb), need_f, need_s)
            if found == "budget":
                return Certificate("P6", UNKNOWN, budget_spent=budget, parameters=params)
            if found is not None:
                chosen, allowed = found
                second_idx = []
                rest = allowed
                while rest:
                    low = rest & -rest
                    second_idx.append(low.bit_length() - 1)
                    rest &= rest - 1
                witness = {
                    "pair": [fn, sn],
                    "first_blocks": chosen,
                    "second_blocks": second_idx[:need_s],
                }
                return Certificate(
                    "P6", REFUTED, witness=witness, budget_spent=nodes, parameters=params
                )
    return Certificate("P6", VERIFIED, budget_spent=nodes, parameters=params)


@dataclass(frozen=True)
class TameClass:
    kind: str  # "match" | "mismatch"
    index: int | None  # matched family index
    witness_block: frozenset | None = None
    closest: int | None = None


def classify_tame_partition(system: PartitionSystem, candidate: SetPartition, z) -> TameClass:
    """Single-candidate side of the tame-partition property: a pool-tame
    partition of X - z into l blocks either coincides with some Pi off z
    (Match) or exhibits a block no Pi restriction contains (Mismatch)."""
    z = frozenset(z)
    if len(z) > 9:
        raise InvalidParameters("z may have at most 9 elements")
    ground = frozenset(range(system.x_size)) - z
    if candidate.ground != ground or not candidate.covers_ground():
        raise InvalidCandidate("candidate must partition exactly X - z")
    if len(candidate.blocks) != system.l:
        raise InvalidCandidate(
            f"candidate has {len(candidate.blocks)} blocks, expected {system.l}"
        )
    pool = system.pool_block_sets()
    for block in candidate.blocks:
        cov = coverage(pool, block)
        if not cov.tame:
            raise NotTame(f"candidate block {sorted(block)} is wild", block=block)
    cand = set(candidate.blocks)
    restrictions = []
    for i, part in enumerate(system.p):
        restricted = {b - z for b in part.blocks if b - z}
        restrictions.append(restricted)
        if cand == restricted:
            return TameClass("match", i)
    overlaps = [len(cand & r) for r in restrictions]
    closest = max(range(5), key=lambda i: overlaps[i])
    stray = sorted(cand - restrictions[closest], key=min)[0]
    return TameClass("mismatch", None, witness_block=stray, closest=closest)


def check_p7_set(system: PartitionSystem, s) -> bool:
    """Per-set diagnostic: a pool-tame set bigger than k/2 should be
    covered by the pool (vacuously true for wild or small sets)."""
    s = frozenset(s)
    pool = system.pool_block_sets()
    cov = coverage(pool, s)
    if not cov.tame or 2 * len(s) <= system.k:
        return True
    return cov.covered


def p4_probe(system: PartitionSystem, trials: int, seed: int, swaps: int = 2):
    """Randomized falsification diagnostic for the tame-partition
    property: perturb each Pi by random cross-block element swaps, keep
    pool-tame candidates, and classify them.  Returns per-outcome counts;
    a 'mismatch' hit is a desk-scale falsification witness."""
    counts = {"match": 0, "mismatch": 0, "wild": 0}
    for t in range(trials):
        rng = sub_rng(seed, 7, t)
        i = int(rng.integers(0, 5))
        blocks = [set(b) for b in system.p[i].blocks]
        for _ in range(swaps):
            a, b = rng.choice(len(blocks), size=2, replace=False)
            xa = sorted(blocks[a])[int(rng.integers(0, len(blocks[a])))]
            xb = sorted(blocks[b])[int(rng.integers(0, len(blocks[b])))]
            blocks[a].remove(xa)
            blocks[b].remove(xb)
            blocks[a].add(xb)
            blocks[b].add(xa)
        candidate = SetPartition(
            frozenset(range(system.x_size)), _canonical_blocks(blocks)
        )
        try:
            result = classify_tame_partition(system, candidate, frozenset())
        except NotTame:
            counts["wild"] += 1
            continue
        counts[result.kind] += 1
    return counts
