"""Weakness of GR(1) formulae measured by the Hausdorff dimension of their
omega-languages."""

from importlib.resources import files

from .automaton import (LabeledAutomaton, apply_init, build_invariant_automaton,
                        prune, restrict, scc)
from .dimension import (WeaknessOrder, WeaknessPair, compare_weakness, d1, d2,
                        entropy_closed, measure, one_state_dim, spectral_radius,
                        weakness)
from .errors import (CapExceeded, ConvergenceError, Gr1Error, ParseError,
                     PreconditionError, UndeclaredVariable, VarTableMismatch)
from .expr import VarTable, count_sat_single, eval_pair, eval_single, parse_expr
from .implication import (InclusionVerdict, Relation, discrimination_stats,
                          implies, strict_order)
from .spec import Gr1Spec, Gr1Unit, Kind, Lasso, Side, conjoin, normalize, parse_spec, select

__version__ = "0.1.0"


def benchmark_path(name: str):
    """Path of a file in the bundled benchmark corpus (``.gr1`` optional)."""
    if not name.endswith(".gr1"):
        name += ".gr1"
    return files(__name__).joinpath("benchmarks", name)


def load_benchmark(name: str) -> Gr1Spec:
    return parse_spec(benchmark_path(name).read_text())
