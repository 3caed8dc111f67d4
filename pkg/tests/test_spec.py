import pytest
from hypothesis import given

from gr1w import load_benchmark
from gr1w.errors import ParseError, UndeclaredVariable, VarTableMismatch
from gr1w.expr import TRUE, Var, VarTable, parse_expr
from gr1w.spec import (Gr1Spec, Gr1Unit, Kind, Lasso, Side, conjoin, normalize,
                       parse_spec, satisfies, select)

from oracles import lasso_ok
from strategies import specs

TEXT = """\
# lift fragment
var a;
var b;
env init !a;
env inv G (a -> next(b));
r1: sys fair GF b;
"""


def test_parse_preserves_order_and_sides():
    spec = parse_spec(TEXT)
    assert spec.vars.names == ("a", "b")
    assert [(u.side, u.kind) for u in spec.units] == [
        (Side.ENV, Kind.INIT), (Side.ENV, Kind.INV), (Side.SYS, Kind.FAIR)]
    assert spec.units[2].label == "r1"


def test_to_text_roundtrip():
    spec = parse_spec(TEXT)
    assert parse_spec(spec.to_text()) == spec


@given(specs())
def test_to_text_roundtrip_random(spec):
    assert parse_spec(spec.to_text()) == spec


@pytest.mark.parametrize("text, line", [
    ("var a;\nenv init next(a);\n", 2),
    ("var a;\nenv fair GF next(a);\n", 2),
    ("var a;\nenv inv a;\n", 2),
    ("var a;\nenv fair G a;\n", 2),
    ("var a;\nvar a;\n", 2),
    ("var a;\nboth inv G a;\n", 2),
    ("var a;\nenv inv G a\n", 3),
    ("var a;\n\nenv safety G a;\n", 3),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_spec(text)
    assert info.value.line == line


def test_undeclared_variable():
    with pytest.raises(UndeclaredVariable):
        parse_spec("var a;\nenv inv G b;\n")


def test_var_declared_after_use_is_fine():
    spec = parse_spec("env inv G a;\nvar a;\n")
    assert spec.vars.names == ("a",)


def test_select_and_normalize():
    spec = parse_spec(TEXT)
    assert len(select(spec, "env").units) == 2
    assert len(select(spec, Side.SYS).units) == 1
    assert select(spec, "all") == spec
    norm = normalize(select(spec, "sys"))
    assert norm.init == TRUE and norm.inv == TRUE and norm.fairs == (Var("b"),)


def test_side_parse_rejects_unknown():
    with pytest.raises(ValueError):
        Side.parse("both")


def test_conjoin_appends_units():
    base = parse_spec(TEXT)
    extra = parse_spec("var a;\nvar b;\nenv inv G !a;\n")
    joined = conjoin(base, extra)
    assert joined.units == base.units + extra.units
    assert conjoin(base, []) is base


def test_conjoin_requires_same_vars():
    base = parse_spec(TEXT)
    with pytest.raises(VarTableMismatch):
        conjoin(base, parse_spec("var b;\nvar a;\n"))


def test_unit_validation():
    with pytest.raises(ValueError):
        Gr1Unit(Kind.INIT, Side.ENV, parse_expr("next(a)", VarTable(("a",))))
    with pytest.raises(ValueError):
        Gr1Unit(Kind.INV, Side.ALL, TRUE)
    with pytest.raises(VarTableMismatch):
        Gr1Spec(VarTable(("a",)), (Gr1Unit(Kind.INV, Side.ENV, Var("z")),))


def test_lasso_indexing_and_format():
    vars = VarTable(("a", "b"))
    w = Lasso((0,), (1, 2))
    assert [w[i] for i in range(6)] == [0, 1, 2, 1, 2, 1]
    assert w.format(vars) == "{} ({a} {b})^w"
    with pytest.raises(ValueError):
        Lasso((1,), ())


def test_satisfies_example():
    spec = load_benchmark("ex4_phi1")     # G(a -> X b) & GF a
    vars = spec.vars
    a, b, ab = vars.symbol("a"), vars.symbol("b"), vars.symbol("ab")
    assert satisfies(spec, Lasso((), (a, b)))
    assert satisfies(spec, Lasso((), (ab,)))
    assert not satisfies(spec, Lasso((), (b,)))        # never a
    assert not satisfies(spec, Lasso((a,), (a, b)))    # a then a


@given(specs())
def test_satisfies_matches_oracle(spec):
    r = spec.vars.alphabet_size
    for stem in ((), (0,), (r - 1, 0)):
        for loop in ((0,), (r - 1,), (1 % r, r - 1)):
            assert satisfies(spec, Lasso(stem, loop)) == lasso_ok(spec, stem, loop)
