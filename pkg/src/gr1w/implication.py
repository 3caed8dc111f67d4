"""Exact language inclusion between GR(1) conjunctions.

``L(phi1) <= L(phi2)`` fails iff ``phi1`` intersects one of the disjuncts of
``!phi2``::

    !init2  |  F !inv2  |  FG !fair2_1  |  ...  |  FG !fair2_m

Each disjunct is decided directly on the deterministic labeled automaton of
``phi1``, so no product or complementation is ever built.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .automaton import LabeledAutomaton, coreachable, restrict, scc
from .dimension import DEFAULT_TOLERANCE, compare_weakness, spec_automaton, weakness
from .dimension import WeaknessOrder
from .errors import PreconditionError, VarTableMismatch
from .expr import DEFAULT_MAX_VARS, eval_array, negate
from .spec import Gr1Spec, Lasso, normalize, select


@dataclass(frozen=True)
class InclusionVerdict:
    holds: bool
    witness: Lasso | None = None
    reason: str | None = None     # which disjunct of !phi2 was hit

    def __bool__(self):
        return self.holds


def _check_vars(phi1: Gr1Spec, phi2: Gr1Spec):
    if phi1.vars != phi2.vars:
        raise VarTableMismatch(
            f"variable tables differ: {list(phi1.vars.names)} vs {list(phi2.vars.names)}")


class _Paths:
    """BFS helpers over the live states of an automaton."""

    def __init__(self, aut: LabeledAutomaton):
        self.aut = aut
        self.parent = {}
        queue = deque()
        for q in sorted(aut.initial_out):
            self.parent[q] = None
            queue.append(q)
        while queue:
            q = queue.popleft()
            for t in aut.successors(q):
                if t not in self.parent:
                    self.parent[t] = q
                    queue.append(t)
        self.order = {q: i for i, q in enumerate(self.parent)}

    def from_start(self, q):
        path = []
        while q is not None:
            path.append(q)
            q = self.parent[q]
        return path[::-1]

    def between(self, src, targets, within=None, nonempty=False):
        """States after ``src`` up to the first hit in ``targets``."""
        if src in targets and not nonempty:
            return []
        prev = {}
        queue = deque()
        for t in self.aut.successors(src):
            if (within is None or t in within) and t not in prev:
                prev[t] = None
                queue.append(t)
        while queue:
            q = queue.popleft()
            if q in targets:
                path = []
                while q is not None:
                    path.append(q)
                    q = prev[q]
                return path[::-1]
            for t in self.aut.successors(q):
                if (within is None or t in within) and t not in prev:
                    prev[t] = q
                    queue.append(t)
        raise AssertionError("target unreachable")  # callers guarantee reachability

    def loop(self, entry, component):
        """Cycle from ``entry`` inside ``component`` through one state of each
        fairness set, in declaration order."""
        comp = set(component)
        seq = [entry]
        for fair in self.aut.fair_sets:
            hits = {q for q in comp if fair[q]}
            if seq[-1] in hits:
                continue
            seq += self.between(seq[-1], hits, comp)
        seq += self.between(seq[-1], {entry}, comp, nonempty=True)
        return seq[:-1]


def _fair_complete(aut, comp):
    idx = np.asarray(comp)
    return all(f[idx].any() for f in aut.fair_sets)


def _entry_states(aut, components):
    """Loop entry candidates: states in the first fairness set, if any."""
    states = {q for c in components for q in c}
    if aut.fair_sets:
        states = {q for q in states if aut.fair_sets[0][q]}
    return states


def implies(phi1: Gr1Spec, phi2: Gr1Spec, side="all",
            max_vars=DEFAULT_MAX_VARS) -> InclusionVerdict:
    """Decide whether every word satisfying ``phi1`` satisfies ``phi2``."""
    _check_vars(phi1, phi2)
    vars = phi1.vars
    aut = spec_automaton(phi1, side, max_vars)
    target = normalize(select(phi2, side))

    good = [c for c in scc(aut).nontrivial() if _fair_complete(aut, c)]
    if not good:
        return InclusionVerdict(True)
    comp_of = {q: c for c in good for q in c}
    good_mask = np.zeros(aut.r, bool)
    good_mask[list(comp_of)] = True
    live = coreachable(aut, good_mask)
    paths = _Paths(aut)
    symbols = np.arange(aut.r, dtype=np.int64)

    entries = _entry_states(aut, good)

    def finish(prefix):
        # prefix ends anywhere co-reachable; walk on into a good component
        tail = paths.between(prefix[-1], entries)
        seq = prefix + tail
        entry = seq[-1]
        return Lasso(seq[:-1], paths.loop(entry, comp_of[entry]))

    # initial condition of phi2 violated by the first symbol
    bad_init = aut.initial & live & ~eval_array(target.init, vars, symbols)
    if bad_init.any():
        first = int(np.flatnonzero(bad_init)[0])
        return InclusionVerdict(False, finish([first]), "init")

    # some consecutive pair violates the invariant of phi2
    rows = np.repeat(np.arange(aut.r), np.diff(aut.edges.indptr))
    cols = aut.edges.indices
    bad = ~eval_array(target.inv, vars, rows, cols) & live[cols]
    if bad.any():
        cands = sorted(zip(rows[bad].tolist(), cols[bad].tolist()),
                       key=lambda e: (paths.order[e[0]], e))
        src, dst = cands[0]
        return InclusionVerdict(False, finish(paths.from_start(src) + [dst]), "inv")

    # eventually always outside some fairness set of phi2
    for j, fair in enumerate(target.fairs):
        sub = restrict(aut, negate(fair))
        for comp in scc(sub).nontrivial(only_reachable=False):
            if not _fair_complete(sub, comp):
                continue
            entry = min(_entry_states(sub, [comp]), key=paths.order.__getitem__)
            stem = paths.from_start(entry)[:-1]
            loop = _Paths(sub).loop(entry, comp)
            return InclusionVerdict(False, Lasso(stem, loop), f"fair {j + 1}")

    return InclusionVerdict(True)


class Relation(enum.Enum):
    STRICT_IMPLIES = "strictly implies"
    STRICT_IMPLIED_BY = "strictly implied by"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


def strict_order(phi1: Gr1Spec, phi2: Gr1Spec, side="all",
                 max_vars=DEFAULT_MAX_VARS) -> Relation:
    forward = implies(phi1, phi2, side, max_vars).holds
    backward = implies(phi2, phi1, side, max_vars).holds
    if forward and backward:
        return Relation.EQUIVALENT
    if forward:
        return Relation.STRICT_IMPLIES
    if backward:
        return Relation.STRICT_IMPLIED_BY
    return Relation.INCOMPARABLE


@dataclass(frozen=True)
class DiscriminationStats:
    n_specs: int
    n_pairs: int
    pct_impl: float
    pct_weak: float


def discrimination_stats(specs, side="all", eps=DEFAULT_TOLERANCE,
                         max_vars=DEFAULT_MAX_VARS) -> DiscriminationStats:
    """Share of pairs separated by strict implication vs by the weakness order."""
    specs = list(specs)
    if len(specs) < 2:
        raise PreconditionError("need at least two specifications")
    for other in specs[1:]:
        _check_vars(specs[0], other)
    pairs = [weakness(s, side, max_vars) for s in specs]
    n_pairs = len(specs) * (len(specs) - 1) // 2
    n_impl = n_weak = 0
    for i, j in itertools.combinations(range(len(specs)), 2):
        rel = strict_order(specs[i], specs[j], side, max_vars)
        if rel in (Relation.STRICT_IMPLIES, Relation.STRICT_IMPLIED_BY):
            n_impl += 1
        if compare_weakness(pairs[i], pairs[j], eps) is not WeaknessOrder.EQUAL:
            n_weak += 1
    return DiscriminationStats(len(specs), n_pairs,
                               100.0 * n_impl / n_pairs, 100.0 * n_weak / n_pairs)
