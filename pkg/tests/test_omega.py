import itertools

import pytest

from sheafcalc import corpus
from sheafcalc.coverage import degenerate_topology, generate_topology, trivial_topology
from sheafcalc.errors import NotClosedError, SieveError, TopologyError
from sheafcalc.fincat import make_sieve, maximal_sieve, pullback_sieve
from sheafcalc.logic import holds_in_frame, lookup, parse_sequent
from sheafcalc.omega import (Site, eval_term_omega, holds_internally, omega_bottom, omega_implies,
                             omega_join, omega_meet, omega_not, omega_top, subobject_frame,
                             validates_logic)


@pytest.fixture
def sierpinski(walking_arrow):
    return Site.presheaf(walking_arrow)


def test_site_rejects_non_topology(walking_arrow):
    from sheafcalc.coverage import GrothendieckTopology
    W = walking_arrow
    bad = GrothendieckTopology(W, [{1}, {0, 3}])
    with pytest.raises(TopologyError):
        Site(W, bad)


def test_bottom_examples(walking_arrow):
    W = walking_arrow
    assert omega_bottom(Site.presheaf(W), "b").is_empty
    assert omega_bottom(Site(W, degenerate_topology(W)), "b").is_maximal
    dense = Site(W, generate_topology(W, None, [make_sieve(W, "b", ["u"])]))
    assert omega_bottom(dense, "b").is_empty


def test_operation_examples(sierpinski):
    s, W = sierpinski, sierpinski.category
    S = make_sieve(W, "b", ["u"])
    assert omega_not(s, S).is_empty
    assert omega_join(s, S, omega_bottom(s, "b")) == S
    assert omega_join(s, S, omega_not(s, S)) == S
    assert omega_not(s, omega_bottom(s, "b")).is_maximal
    for T in s.fiber("b").elements():
        assert omega_implies(s, T, T).is_maximal
    assert omega_meet(s, S, omega_top(s, "b")) == S


def test_operations_validate_input(walking_arrow):
    W = walking_arrow
    dense = Site(W, generate_topology(W, None, [make_sieve(W, "b", ["u"])]))
    with pytest.raises(NotClosedError):
        omega_not(dense, make_sieve(W, "b", ["u"]))
    s = Site.presheaf(W)
    with pytest.raises(SieveError):
        omega_meet(s, maximal_sieve(W, "a"), maximal_sieve(W, "b"))


def test_eval_examples(sierpinski):
    s, W = sierpinski, sierpinski.category
    S = make_sieve(W, "b", ["u"])
    assert eval_term_omega(s, "b", "1", {}).is_maximal
    assert eval_term_omega(s, "b", "p | ~p", {"p": S}) == S
    assert eval_term_omega(s, "b", "~p | ~~p", {"p": S}).is_maximal


def test_validity_examples(sierpinski):
    assert validates_logic(Site.presheaf(corpus.cyclic_group(2)), "classical")
    v = validates_logic(sierpinski, "classical")
    assert not v and v.where == "b" and v.witness["p"].members == {"u"}
    assert not validates_logic(Site.presheaf(corpus.cospan()), "demorgan")
    assert holds_internally(sierpinski, "x & x = x")
    assert holds_internally(sierpinski, "x & y = 0 |- y = y & ~x")
    w = holds_internally(sierpinski, "|- 1 = x | ~x")
    assert not w and w.where == "b" and w.witness["x"].members == {"u"}


def test_subobject_frame_examples(walking_arrow, cospan):
    assert len(subobject_frame(Site.presheaf(corpus.chain(1)), "x0")) == 2
    A = subobject_frame(Site.presheaf(walking_arrow), "b")
    els = A.elements()
    assert len(els) == 3 and all(A.leq(x, y) or A.leq(y, x) for x in els for y in els)
    F = subobject_frame(Site.presheaf(cospan), "a")
    f, g = make_sieve(cospan, "a", ["f"]), make_sieve(cospan, "a", ["g"])
    assert len(F) == 5 and F.meet(f, g).is_empty and F.join(f, g).members == {"f", "g"}


def test_heyting_laws_on_every_fiber(sites):
    for _, s in sites:
        C = s.category
        for c in C.objects:
            fib = s.fiber(c)
            els = fib.elements()
            bot, top = fib.bottom(), fib.top()
            for S in els:
                assert fib.meet(S, top) == S and fib.join(S, bot) == S
                assert fib.neg(S) == fib.imp(S, bot)
                for T in els:
                    assert fib.meet(S, T) == fib.meet(T, S) and fib.join(S, T) == fib.join(T, S)
                    assert fib.join(S, fib.meet(S, T)) == S and fib.meet(S, fib.join(S, T)) == S
                    for R in els:
                        assert fib.leq(fib.meet(R, S), T) == fib.leq(R, fib.imp(S, T))


def test_naturality(sites):
    for _, s in sites:
        C = s.category
        for f in C.arrows:
            c, d = C.cod(f), C.dom(f)
            src, dst = s.fiber(c), s.fiber(d)
            for S, T in itertools.product(src.elements(), repeat=2):
                ps, pt = pullback_sieve(C, f, S), pullback_sieve(C, f, T)
                assert pullback_sieve(C, f, src.meet(S, T)) == dst.meet(ps, pt)
                assert pullback_sieve(C, f, src.join(S, T)) == dst.join(ps, pt)
                assert pullback_sieve(C, f, src.imp(S, T)) == dst.imp(ps, pt)
                assert pullback_sieve(C, f, src.neg(S)) == dst.neg(ps)


BATTERY = ["x & x = x", "x & y = 0 |- y = y & ~x", "p | ~p", "~p | ~~p", "(p -> q) | (q -> p)",
           "(~p -> q | r) -> (~p -> q) | (~p -> r)", "x = ~~x |- x | ~x = 1", "~~(x & y) = ~~x & ~~y"]


def test_pointwise_validity_matches_fibers(sites):
    for _, s in sites:
        if len(s.category.arrows) > 6:
            continue
        for q in BATTERY:
            seq = parse_sequent(q)
            fibers = all(holds_in_frame(seq, subobject_frame(s, c)) for c in s.category.objects)
            assert holds_internally(s, seq).holds == fibers


def test_counterexample_is_first_in_order(cospan):
    v = validates_logic(Site.presheaf(cospan), "goedel_dummett")
    assert v.where == "a"
    assert (v.witness["p"].members, v.witness["q"].members) == ({"f"}, {"g"})


def test_degenerate_site_validates_everything(walking_arrow):
    s = Site(walking_arrow, degenerate_topology(walking_arrow))
    for name in ("classical", "demorgan", "goedel_dummett", "kreisel_putnam"):
        assert validates_logic(s, lookup(name))
    assert trivial_topology(walking_arrow) != s.topology
