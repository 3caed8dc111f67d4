"""Explicit labeled deterministic automata for conjunctions of invariants.

Every non-initial state is identified with the symbol it is labeled with, so
a state *is* an integer in ``range(2 ** len(vars))``; the transition on
symbol ``t`` from any state leads to state ``t``.  The initial state is
implicit and only described by the set of symbols it can read.

Edges are kept as CSR successor lists over the full symbol index space, with
boolean masks selecting the live states.  All operations return new
automata.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .expr import DEFAULT_MAX_VARS, BoolExpr, VarTable, eval_array

# Upper bound on the number of (source, target) pairs evaluated at once.
_PAIR_CHUNK = 1 << 22


def _readonly(arr):
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


def _mask_edges(edges: sp.csr_matrix, alive: np.ndarray) -> sp.csr_matrix:
    n = edges.shape[0]
    rows = np.repeat(np.arange(n), np.diff(edges.indptr))
    keep = alive[rows] & alive[edges.indices]
    return sp.csr_matrix(
        (edges.data[keep], (rows[keep], edges.indices[keep])), shape=edges.shape)


def _symbol_mask(pred, vars: VarTable) -> np.ndarray:
    symbols = np.arange(vars.alphabet_size, dtype=np.int64)
    if isinstance(pred, BoolExpr):
        return eval_array(pred, vars, symbols)
    if isinstance(pred, np.ndarray):
        return pred.astype(bool)
    return np.fromiter((bool(pred(int(s))) for s in symbols), bool, len(symbols))


@dataclass(frozen=True, eq=False)
class LabeledAutomaton:
    vars: VarTable
    alive: np.ndarray            # bool[r]: live non-initial states
    initial: np.ndarray          # bool[r]: symbols enabled from q0
    edges: sp.csr_matrix         # r x r, only between live states
    fair_exprs: tuple[BoolExpr, ...] = ()
    fair_sets: tuple[np.ndarray, ...] = ()

    @classmethod
    def from_edges(cls, vars, edges, initial, fairs=()):
        """Build directly from explicit ``(source, target)`` symbol pairs."""
        r = vars.alphabet_size
        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        mat = sp.csr_matrix(
            (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(r, r))
        mat.data[:] = 1.0
        alive = np.zeros(r, bool)
        alive[pairs[:, 0]] = True
        alive[pairs[:, 1]] = True
        init = np.zeros(r, bool)
        init[list(initial)] = True
        return cls._make(vars, alive, init & alive, mat, tuple(fairs))

    @classmethod
    def _make(cls, vars, alive, initial, edges, fair_exprs):
        alive = np.asarray(alive, bool)
        edges = _mask_edges(edges, alive)
        fair_sets = tuple(_readonly(_symbol_mask(f, vars) & alive) for f in fair_exprs)
        return cls(vars, _readonly(alive), _readonly(np.asarray(initial, bool) & alive),
                   edges, tuple(fair_exprs), fair_sets)

    @property
    def r(self) -> int:
        return self.vars.alphabet_size

    @property
    def states(self) -> tuple[int, ...]:
        return tuple(int(s) for s in np.flatnonzero(self.alive))

    @property
    def initial_out(self) -> frozenset[int]:
        return frozenset(int(s) for s in np.flatnonzero(self.initial))

    @property
    def num_states(self) -> int:
        return int(np.count_nonzero(self.alive))

    @property
    def num_edges(self) -> int:
        return int(self.edges.nnz)

    def successors(self, q: int) -> tuple[int, ...]:
        lo, hi = self.edges.indptr[q], self.edges.indptr[q + 1]
        return tuple(int(t) for t in self.edges.indices[lo:hi])

    def has_edge(self, q: int, t: int) -> bool:
        return t in self.successors(q)

    def is_empty(self) -> bool:
        return not self.alive.any()

    def adjacency(self, states) -> sp.csr_matrix:
        """Adjacency matrix of the subgraph induced by ``states`` (in order)."""
        idx = np.asarray(states, dtype=np.int64)
        return self.edges[idx][:, idx]

    def fair_set(self, i: int) -> frozenset[int]:
        return frozenset(int(s) for s in np.flatnonzero(self.fair_sets[i]))

    def replace(self, alive=None, initial=None) -> LabeledAutomaton:
        alive = self.alive if alive is None else np.asarray(alive, bool) & self.alive
        initial = self.initial if initial is None else initial
        return LabeledAutomaton._make(self.vars, alive, initial, self.edges, self.fair_exprs)

    def to_dot(self) -> str:
        n = len(self.vars)
        lines = ["digraph automaton {", '  q0 [shape=point];']
        for q in self.states:
            fairs = [str(i + 1) for i, f in enumerate(self.fair_sets) if f[q]]
            note = f"\\nF{','.join(fairs)}" if fairs else ""
            lines.append(f'  s{q} [label="{q:0{n}b}{note}"];')
        for q in sorted(self.initial_out):
            lines.append(f"  q0 -> s{q};")
        for q in self.states:
            for t in self.successors(q):
                lines.append(f"  s{q} -> s{t};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_invariant_automaton(vars: VarTable, inv: BoolExpr, fairs=(),
                              max_vars: int = DEFAULT_MAX_VARS) -> LabeledAutomaton:
    """One state per symbol; ``s -> t`` iff the pair (s, t) satisfies ``inv``."""
    vars.check_cap(max_vars)
    r = vars.alphabet_size
    symbols = np.arange(r, dtype=np.int64)
    step = max(1, _PAIR_CHUNK // r)
    rows, cols = [], []
    for lo in range(0, r, step):
        src = symbols[lo:lo + step]
        ok = eval_array(inv, vars, src[:, None], symbols[None, :])
        i, j = np.nonzero(ok)
        rows.append(i + lo)
        cols.append(j)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    edges = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(r, r))
    has_out = np.diff(edges.indptr) > 0
    alive = has_out.copy()
    alive[cols] = True
    aut = LabeledAutomaton._make(vars, alive, has_out, edges, tuple(fairs))
    return prune(aut)


def reachable(a: LabeledAutomaton, sources=None) -> np.ndarray:
    """Mask of live states reachable from ``sources`` (default: from q0)."""
    seen = (a.initial if sources is None else np.asarray(sources, bool)) & a.alive
    frontier = seen.copy()
    at = a.edges.T.tocsr()
    while frontier.any():
        step = (at @ frontier.astype(np.float64)) > 0
        frontier = step & ~seen
        seen = seen | frontier
    return seen


def coreachable(a: LabeledAutomaton, targets) -> np.ndarray:
    """Mask of live states from which some state in ``targets`` is reachable."""
    seen = np.asarray(targets, bool) & a.alive
    frontier = seen.copy()
    while frontier.any():
        step = (a.edges @ frontier.astype(np.float64)) > 0
        frontier = step & ~seen
        seen = seen | frontier
    return seen


def prune(a: LabeledAutomaton) -> LabeledAutomaton:
    """Drop dead ends and unreachable states until every state lies on an
    infinite path from q0."""
    alive = a.alive.copy()
    edges = a.edges
    while True:
        edges = _mask_edges(edges, alive)
        live = alive & (np.diff(edges.indptr) > 0)
        if not np.array_equal(live, alive):
            alive = live
            continue
        probe = LabeledAutomaton(a.vars, alive, a.initial & alive, edges)
        live = reachable(probe)
        if np.array_equal(live, alive):
            break
        alive = live
    if np.array_equal(alive, a.alive) and a.edges.nnz == edges.nnz:
        return a
    return a.replace(alive=alive)


def apply_init(a: LabeledAutomaton, init: BoolExpr) -> LabeledAutomaton:
    """Keep only first symbols satisfying ``init``; drop what becomes unreachable."""
    mask = _symbol_mask(init, a.vars)
    return prune(a.replace(initial=a.initial & mask))


def restrict(a: LabeledAutomaton, keep) -> LabeledAutomaton:
    """Subgraph on states whose label satisfies ``keep`` (a next-free
    expression, a predicate on symbols or a boolean mask).  Not pruned."""
    mask = _symbol_mask(keep, a.vars)
    return a.replace(alive=a.alive & mask, initial=a.initial & mask)


@dataclass(frozen=True)
class SccDecomposition:
    components: tuple[tuple[int, ...], ...]
    is_trivial: tuple[bool, ...]
    reachable: tuple[bool, ...]

    def __len__(self):
        return len(self.components)

    def nontrivial(self, only_reachable=True):
        for comp, trivial, reach in zip(self.components, self.is_trivial, self.reachable):
            if not trivial and (reach or not only_reachable):
                yield comp


def scc(a: LabeledAutomaton) -> SccDecomposition:
    """Strongly connected components of the live states, ordered by their
    smallest state."""
    _, labels = csgraph.connected_components(a.edges, directed=True, connection="strong")
    groups = {}
    for q in a.states:
        groups.setdefault(int(labels[q]), []).append(q)
    components = sorted(tuple(g) for g in groups.values())
    reach = reachable(a)
    diag = a.edges.diagonal() > 0
    return SccDecomposition(
        tuple(components),
        tuple(len(c) == 1 and not diag[c[0]] for c in components),
        tuple(bool(reach[c[0]]) for c in components))
