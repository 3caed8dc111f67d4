import pytest
from hypothesis import given, settings

import itertools

from gr1w import load_benchmark, scc
from gr1w.dimension import spec_automaton
from gr1w.errors import PreconditionError, VarTableMismatch
from gr1w.implication import Relation, discrimination_stats, implies, strict_order
from gr1w.spec import Gr1Spec, Lasso, parse_spec, satisfies

from oracles import brute_implies
from strategies import spec_pairs

BOUND = {1: 8, 2: 6, 3: 4}


def spec(body, vars=("a", "b")):
    return parse_spec("".join(f"var {v};\n" for v in vars) + body)


def test_fairness_direction_and_witness():
    p1, p2 = load_benchmark("ex4_phi1"), load_benchmark("ex4_phi2")
    assert implies(p1, p2).holds
    verdict = implies(p2, p1)
    assert not verdict
    assert verdict.witness == Lasso((), (p1.vars.symbol("b"),))
    assert verdict.reason == "fair 1"
    assert verdict.witness.format(p1.vars) == "({b})^w"


def test_stop_invariants():
    p1, p2 = load_benchmark("ex2_phi1"), load_benchmark("ex2_phi2")
    assert strict_order(p1, p2) is Relation.STRICT_IMPLIES
    assert strict_order(p2, p1) is Relation.STRICT_IMPLIED_BY


def test_lift_fairness_refinements_incomparable():
    p3, p4 = load_benchmark("lift_phi3"), load_benchmark("lift_phi4")
    assert strict_order(p4, p3) is Relation.INCOMPARABLE


def test_conjunct_dropping():
    assert strict_order(spec("env inv G (a & b);"), spec("env inv G a;")) \
        is Relation.STRICT_IMPLIES


def test_reflexive():
    p = load_benchmark("ex4_phi1")
    assert strict_order(p, p) is Relation.EQUIVALENT


def test_init_violation_witness():
    v = implies(spec(""), spec("env init a;"))
    assert v.reason == "init"
    assert not satisfies(spec("env init a;"), v.witness)


def test_invariant_violation_witness():
    weak, strong = spec(""), spec("env inv G (a -> next(b));")
    v = implies(weak, strong)
    assert v.reason == "inv"
    assert satisfies(weak, v.witness) and not satisfies(strong, v.witness)


def test_incomparable():
    p, q = spec("env inv G a;"), spec("env inv G b;")
    assert strict_order(p, q) is Relation.INCOMPARABLE


def test_empty_implies_everything():
    empty = spec("env inv G false;")
    assert implies(empty, spec("env init a & !a;")).holds


def test_side_filtering():
    p = spec("env inv G a;\nsys inv G b;")
    q = spec("env inv G b;")
    assert not implies(p, q, side="env").holds
    assert implies(p, q, side="all").holds


def test_mismatched_vars():
    with pytest.raises(VarTableMismatch):
        implies(spec("", ("a",)), spec("", ("b",)))


def test_stats_incomparable_pair():
    specs = [load_benchmark(f"count_phi{i}") for i in (1, 2)]
    stats = discrimination_stats(specs)
    # G(a & b) and G c are incomparable, yet their weakness differs
    assert stats.n_pairs == 1
    assert stats.pct_impl == 0.0 and stats.pct_weak == 100.0


def test_stats_chain():
    chain = [spec("env inv G (a & b);"), spec("env inv G a;"), spec("")]
    stats = discrimination_stats(chain)
    assert stats.n_pairs == 3
    assert stats.pct_impl == 100.0 and stats.pct_weak == 100.0


def test_stats_equal_specs():
    p = load_benchmark("ex4_phi1")
    stats = discrimination_stats([p, p])
    assert (stats.pct_impl, stats.pct_weak) == (0.0, 0.0)


def test_stats_fairness_pair():
    stats = discrimination_stats([load_benchmark("ex4_phi1"), load_benchmark("ex4_phi2")])
    assert (stats.pct_impl, stats.pct_weak) == (100.0, 100.0)


def test_stats_against_lasso_oracle():
    specs = [spec("env inv G a;"), spec("env inv G (a & b);"), spec("env fair GF b;")]
    stats = discrimination_stats(specs)
    strict = 0
    for p, q in itertools.combinations(specs, 2):
        fwd, _ = brute_implies(p, q, 5)
        bwd, _ = brute_implies(q, p, 5)
        strict += fwd != bwd
    assert stats.pct_impl == pytest.approx(100.0 * strict / 3)
    assert stats.pct_weak == 100.0
    assert strict == 2          # G(a & b) implies both G a and GF b


def test_stats_needs_two():
    with pytest.raises(PreconditionError):
        discrimination_stats([spec("")])


@settings(max_examples=80, deadline=None)
@given(spec_pairs())
def test_agrees_with_lasso_enumeration(pair):
    phi1, phi2 = pair
    verdict = implies(phi1, phi2)
    expected, _ = brute_implies(phi1, phi2, BOUND[len(phi1.vars)])
    if not verdict.holds:
        w = verdict.witness
        assert satisfies(phi1, w) and not satisfies(phi2, w)
        comps = scc(spec_automaton(phi1)).components
        assert any(set(w.loop) <= set(c) for c in comps)
    # the bounded search can only miss long witnesses, never invent one
    assert expected or not verdict.holds
    if len(phi1.vars) == 1:
        assert verdict.holds == expected


@settings(max_examples=40, deadline=None)
@given(spec_pairs())
def test_conjunction_implies_parts(pair):
    phi1, phi2 = pair
    both = Gr1Spec(phi1.vars, phi1.units + phi2.units)
    assert implies(both, phi1).holds
    assert implies(both, phi2).holds
