"""Entropy, Hausdorff dimension and the (d1, d2) weakness pair.

d1 is the dimension of the specification's language: the largest entropy of
a reachable strongly connected component that meets every fairness set.
The accepting table of the Muller automaton is upward closed, and the
spectral radius grows with the subgraph, so whole SCCs are the only
candidates worth scanning.

d2 is the dimension of the behaviours removed by the fairness conditions.
For each fairness expression ``B`` it equals the entropy of the invariant
automaton restricted to states labeled with ``!B``; the overall value is the
maximum over all fairness conditions.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .automaton import (LabeledAutomaton, apply_init, build_invariant_automaton,
                        prune, restrict, scc)
from .errors import ConvergenceError, PreconditionError
from .expr import DEFAULT_MAX_VARS, BoolExpr, VarTable, count_sat_single, negate
from .spec import Gr1Spec, normalize, select

DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_ITERS = 100_000


def _max_iters():
    value = os.environ.get("GR1W_MAX_ITERS")
    return int(value) if value else DEFAULT_MAX_ITERS


def spectral_radius(adj, rtol: float = 1e-12, max_iters: int | None = None) -> float:
    """Perron root of an irreducible nonnegative matrix.

    Power iteration on ``A + I`` from the all-ones vector.  The shift makes
    periodic components primitive.  Iteration stops once the Collatz-Wielandt
    bounds ``min(Mx/x) <= rho(M) <= max(Mx/x)`` agree to ``rtol``.
    """
    if sp.issparse(adj):
        mat = sp.csr_matrix(adj, dtype=np.float64)
    else:
        mat = np.asarray(adj, dtype=np.float64)
    n = mat.shape[0]
    if mat.ndim != 2 or mat.shape[1] != n:
        raise PreconditionError("adjacency matrix must be square")
    if n == 0:
        return 0.0
    data = mat.data if sp.issparse(mat) else mat
    if (data < 0).any():
        raise PreconditionError("adjacency matrix must be nonnegative")
    if max_iters is None:
        max_iters = _max_iters()

    x = np.ones(n)
    width = math.inf
    for _ in range(max_iters):
        y = mat @ x + x
        ratio = y / x
        lo, hi = ratio.min(), ratio.max()
        width = (hi - lo) / max(hi - 1.0, 1.0)
        if width <= rtol:
            return float((lo + hi) / 2.0 - 1.0)
        x = y / hi
        if not np.all(x > 0):
            break
    raise ConvergenceError(max_iters, width)


def _log_r(rho: float, vars: VarTable) -> float:
    if not len(vars):
        raise PreconditionError("dimension is undefined over an empty variable set")
    value = math.log2(rho) / len(vars)
    return min(1.0, max(0.0, value))


class Entropy(NamedTuple):
    value: float
    base: int
    empty: bool


class Dimension(NamedTuple):
    value: float
    empty: bool


def _best_radius(a: LabeledAutomaton, accept=None):
    """Largest spectral radius over reachable non-trivial SCCs passing ``accept``."""
    best = None
    for comp in scc(a).nontrivial():
        if accept is not None and not accept(comp):
            continue
        rho = spectral_radius(a.adjacency(comp))
        if best is None or rho > best:
            best = rho
    return best


def entropy_closed(a: LabeledAutomaton) -> Entropy:
    """Entropy of the closed language in which every state accepts."""
    rho = _best_radius(a)
    if rho is None:
        return Entropy(0.0, a.r, True)
    return Entropy(_log_r(rho, a.vars), a.r, False)


def _fair_complete(a: LabeledAutomaton):
    sets = a.fair_sets

    def accept(comp):
        idx = np.asarray(comp)
        return all(f[idx].any() for f in sets)
    return accept


def dimension_of(a: LabeledAutomaton) -> Dimension:
    """Hausdorff dimension of the language of ``a`` under its fairness sets."""
    rho = _best_radius(a, _fair_complete(a))
    if rho is None:
        return Dimension(0.0, True)
    return Dimension(_log_r(rho, a.vars), False)


def complement_dimension(a: LabeledAutomaton, fair: BoolExpr) -> float:
    """Dimension of the words that eventually stay out of ``fair`` forever."""
    return entropy_closed(prune(restrict(a, negate(fair)))).value


@dataclass(frozen=True)
class WeaknessPair:
    d1: float
    d2: float
    empty: bool = False
    m: int = 0

    def __iter__(self):
        return iter((self.d1, self.d2))


@dataclass(frozen=True)
class Measurement:
    pair: WeaknessPair
    automaton: LabeledAutomaton
    scc_count: int


def spec_automaton(spec: Gr1Spec, side="all", max_vars=DEFAULT_MAX_VARS) -> LabeledAutomaton:
    """Pruned automaton of the selected units, initial condition applied."""
    norm = normalize(select(spec, side))
    aut = build_invariant_automaton(spec.vars, norm.inv, norm.fairs, max_vars=max_vars)
    return apply_init(aut, norm.init)


def d1(spec: Gr1Spec, side="all", max_vars=DEFAULT_MAX_VARS) -> Dimension:
    return dimension_of(spec_automaton(spec, side, max_vars))


def d2(spec: Gr1Spec, side="all", max_vars=DEFAULT_MAX_VARS) -> float:
    aut = spec_automaton(spec, side, max_vars)
    return max((complement_dimension(aut, f) for f in aut.fair_exprs), default=0.0)


def measure(spec: Gr1Spec, side="all", max_vars=DEFAULT_MAX_VARS) -> Measurement:
    aut = spec_automaton(spec, side, max_vars)
    first = dimension_of(aut)
    second = 0.0
    if not first.empty:
        second = max((complement_dimension(aut, f) for f in aut.fair_exprs), default=0.0)
    pair = WeaknessPair(first.value, second, first.empty, len(aut.fair_exprs))
    return Measurement(pair, aut, len(scc(aut)))


def weakness(spec: Gr1Spec, side="all", max_vars=DEFAULT_MAX_VARS) -> WeaknessPair:
    return measure(spec, side, max_vars).pair


def one_state_dim(expr: BoolExpr, vars: VarTable) -> Dimension:
    """Closed form for ``G expr`` with a next-free ``expr``."""
    if expr.uses_next:
        raise PreconditionError(f"expression uses next(): {expr}")
    count = count_sat_single(expr, vars)
    if count == 0:
        return Dimension(0.0, True)
    return Dimension(_log_r(count, vars), False)


class WeaknessOrder(enum.Enum):
    WEAKER = "strictly weaker"
    STRONGER = "strictly stronger"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_weakness(p: WeaknessPair, q: WeaknessPair,
                     eps: float = DEFAULT_TOLERANCE) -> WeaknessOrder:
    """Where ``p`` stands relative to ``q``: higher d1 is weaker; on equal d1
    a lower d2 is weaker."""
    if eps < 0:
        raise PreconditionError("tolerance must be nonnegative")
    if p.empty or q.empty:
        return WeaknessOrder.EQUAL if p.empty and q.empty else WeaknessOrder.INCOMPARABLE
    values = (p.d1, p.d2, q.d1, q.d2)
    if any(math.isnan(v) for v in values):
        return WeaknessOrder.INCOMPARABLE
    if abs(p.d1 - q.d1) > eps:
        return WeaknessOrder.WEAKER if p.d1 > q.d1 else WeaknessOrder.STRONGER
    if abs(p.d2 - q.d2) > eps:
        return WeaknessOrder.WEAKER if p.d2 < q.d2 else WeaknessOrder.STRONGER
    return WeaknessOrder.EQUAL
