import itertools

import pytest
from hypothesis import given, settings

from conftest import terms
from sheafcalc import corpus
from sheafcalc.errors import ParseError, UnboundVariable, UnknownLogic
from sheafcalc.frames import FiniteFrame
from sheafcalc.logic import (And, HornSequent, Imp, Not, ONE, Or, Var, ZERO, as_logic, eval_in_frame,
                             holds_in_frame, is_admissible, lookup, parse_sequent, parse_term, registry,
                             to_text, uses_implication, variables)

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_examples():
    assert parse_term("p | ~p") == Or(p, Not(p))
    assert parse_term("(p -> q) | (q -> p)") == Or(Imp(p, q), Imp(q, p))


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_term("p -> -> q")
    assert e.value.token == 3 and e.value.column == 5
    assert "token 3" in str(e.value)


@pytest.mark.parametrize("bad", ["", "p &", "(p", "p q", "p $ q", "P", "p = q"])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


def test_precedence_and_associativity():
    assert parse_term("~p & q | r -> p -> q") == Imp(Or(And(Not(p), q), r), Imp(p, q))
    assert parse_term("p & q & r") == And(And(p, q), r)
    assert parse_term("p ∧ ¬q ⇒ ⊥") == Imp(And(p, Not(q)), ZERO)
    assert parse_term("1") == ONE


@settings(max_examples=300)
@given(terms)
def test_print_parse_round_trip(t):
    assert parse_term(to_text(t)) == t


def test_printer_is_minimal():
    assert to_text(Imp(Imp(p, q), r)) == "(p -> q) -> r"
    assert to_text(Imp(p, Imp(q, r))) == "p -> q -> r"
    assert to_text(Not(Or(p, q))) == "~(p | q)"


def test_registry_contents():
    reg = registry()
    assert set(reg) == {"classical", "demorgan", "goedel_dummett", "kreisel_putnam"}
    assert lookup("demorgan").axiom == Or(Not(p), Not(Not(p)))
    assert lookup("classical").axiom == Or(p, Not(p))
    kp = lookup("kreisel_putnam").axiom
    assert kp == Imp(Imp(Not(p), Or(q, r)), Or(Imp(Not(p), q), Imp(Not(p), r)))
    with pytest.raises(UnknownLogic):
        lookup("smetanich")
    with pytest.raises(UnknownLogic):
        as_logic("smetanich")
    assert as_logic("p | ~p").axiom == Or(p, Not(p))


def test_admissibility():
    assert is_admissible(lookup("classical").axiom)
    assert is_admissible(lookup("goedel_dummett").axiom)
    assert is_admissible(lookup("demorgan").axiom)
    assert not is_admissible(lookup("kreisel_putnam").axiom)
    assert is_admissible(parse_term("p -> q"))
    assert not is_admissible(parse_term("~(p | q)"))
    assert uses_implication(lookup("goedel_dummett").axiom)
    assert not uses_implication(lookup("demorgan").axiom)


def test_variables_in_first_occurrence_order():
    assert variables(parse_term("(q -> p) | r & q")) == ["q", "p", "r"]


def test_sequents():
    s = parse_sequent("x & y = 0 |- y = y & ~x")
    assert s.context == ("x", "y") and len(s.premises) == 1
    assert parse_sequent("p | ~p") == HornSequent.axiom(Or(p, Not(p)))
    assert parse_sequent("|- x & x = x").premises == ()
    assert parse_sequent(str(s)) == s
    with pytest.raises(ValueError):
        HornSequent(("x",), (), (Var("x"), Var("y")))
    with pytest.raises(ParseError):
        parse_sequent("x = y |-")


def test_eval_in_frame_examples():
    B = FiniteFrame.boolean(1)
    assert holds_in_frame(lookup("classical"), B)
    C3 = FiniteFrame.chain(3)
    m = C3.elements()[1]
    v = holds_in_frame(lookup("classical"), C3)
    assert not v and v.witness == {"p": m}
    assert eval_in_frame("p | ~p", C3, {"p": m}) == m
    for n in range(1, 6):
        assert holds_in_frame(lookup("goedel_dummett"), FiniteFrame.chain(n))
    with pytest.raises(UnboundVariable):
        eval_in_frame("p & q", C3, {"p": m})


def test_heyting_monotonicity(frames):
    for _, A in frames:
        els = A.elements()
        for a, b, c in itertools.product(els, repeat=3):
            if A.leq(a, b):
                assert A.leq(eval_in_frame("x & z", A, {"x": a, "z": c}), eval_in_frame("x & z", A, {"x": b, "z": c}))
                assert A.leq(eval_in_frame("x | z", A, {"x": a, "z": c}), eval_in_frame("x | z", A, {"x": b, "z": c}))
                assert A.leq(eval_in_frame("x -> z", A, {"x": b, "z": c}), eval_in_frame("x -> z", A, {"x": a, "z": c}))


def test_admissible_axioms_hold_in_boolean_frames():
    for k in range(4):
        B = FiniteFrame.boolean(k)
        for spec in registry().values():
            if spec.admissible:
                assert holds_in_frame(spec, B)
    # also for the corpus of Boolean frames
    for _, A in corpus.frames():
        if A.is_boolean():
            for spec in registry().values():
                assert holds_in_frame(spec, A)
