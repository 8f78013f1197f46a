import itertools
import warnings

import pytest

from sheafcalc import corpus
from sheafcalc.errors import CapExceeded, FrameError, NucleusError
from sheafcalc.frames import (Filter, FiniteFrame, Nucleus, demorganization_direct, direct_discrepancies,
                              enumerate_nuclei, filter_generated, gd_sublocale_direct, heyting_imp,
                              l_sublocale, nucleus_checks, preserves_implication, preserves_negation,
                              pseudo_not, quotient_by_filter, site_from_frame)
from sheafcalc.logic import holds_in_frame
from sheafcalc.omega import holds_internally


def chain3():
    return FiniteFrame(["0", "m", "1"], [("0", "m"), ("m", "1")])


def test_heyting_examples(fork):
    A = chain3()
    for x in A.elements():
        assert heyting_imp(A, x, x) == "1" and heyting_imp(A, x, "1") == "1"
    assert pseudo_not(A, "m") == "0" and heyting_imp(A, "m", "0") == "0"
    assert heyting_imp(fork, "a", "b") == "b"


def test_imp_is_largest_residual(frames):
    for _, A in frames:
        for a, b in itertools.product(A.elements(), repeat=2):
            cands = [x for x in A.elements() if A.leq(A.meet(x, a), b)]
            assert A.join_all(cands) == A.imp(a, b)


def test_non_distributive_lattices_rejected():
    m3 = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]
    with pytest.raises(FrameError, match="distributiv"):
        FiniteFrame(["0", "a", "b", "c", "1"], m3)
    n5 = [("0", "a"), ("a", "b"), ("0", "c"), ("b", "1"), ("c", "1")]
    with pytest.raises(FrameError):
        FiniteFrame(["0", "a", "b", "c", "1"], n5)
    with pytest.raises(FrameError):
        FiniteFrame(["a", "b"], [])
    with pytest.raises(CapExceeded):
        FiniteFrame.chain(13)


def test_filter_examples(fork):
    assert filter_generated(fork, []).members == {"1"}
    assert filter_generated(fork, ["c"]).members == {"c", "1"}
    F = filter_generated(fork, ["a", "b"])
    assert F.members == set(fork.elements()) and not F.proper
    with pytest.raises(FrameError):
        Filter(fork, frozenset({"a"}))


def test_quotient_examples(fork):
    A = chain3()
    assert quotient_by_filter(A, filter_generated(A, [])).nucleus == Nucleus.identity(A)
    q = quotient_by_filter(A, filter_generated(A, ["m"]))
    assert len(q.frame) == 2 and q.frame.is_boolean()
    assert sorted(map(sorted, q.classes.values())) == [["0"], ["1", "m"]]
    q5 = quotient_by_filter(fork, filter_generated(fork, ["c"]))
    assert sorted(q5.nucleus.fixset) == ["0", "1", "a", "b"]
    assert q5.frame.is_boolean()
    with pytest.warns(UserWarning):
        qi = quotient_by_filter(fork, filter_generated(fork, ["a", "b"]))
    assert len(qi.frame) == 1


def _all_filters(A):
    seen = set()
    for r in range(len(A) + 1):
        for seeds in itertools.combinations(A.elements(), r):
            F = filter_generated(A, seeds)
            if F.members not in seen:
                seen.add(F.members)
                yield F


def test_quotient_classes_join_closed(frames):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _, A in frames:
            if len(A) > 9:
                continue
            for F in _all_filters(A):
                q = quotient_by_filter(A, F)
                for cls in q.classes.values():
                    assert A.join_all(cls) in cls
                    for x, y in itertools.product(cls, repeat=2):
                        assert q.projection[A.join(x, y)] == q.projection[x]


def _frame_maps(A, B):
    els = A.elements()
    inner = [x for x in els if x not in (A.bottom(), A.top())]
    for vals in itertools.product(B.elements(), repeat=len(inner)):
        h = dict(zip(inner, vals))
        h[A.bottom()], h[A.top()] = B.bottom(), B.top()
        if all(h[A.meet(x, y)] == B.meet(h[x], h[y]) and h[A.join(x, y)] == B.join(h[x], h[y])
               for x in els for y in els):
            yield h


def test_universal_property_of_filter_quotients():
    small = [A for _, A in corpus.frames() if len(A) <= 6]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for A in small:
            for F in _all_filters(A):
                q = quotient_by_filter(A, F)
                for B in small:
                    for h in _frame_maps(A, B):
                        if all(h[x] == B.top() for x in F.members):
                            # h factors through the projection: constant on classes
                            assert all(h[x] == h[q.projection[x]] for x in A.elements())


def test_l_sublocale_examples(fork):
    A = chain3()
    q = l_sublocale(A, "classical")
    assert q.filter.members == {"m", "1"} and len(q.frame) == 2
    d = l_sublocale(fork, "demorgan")
    assert sorted(d.nucleus.fixset) == ["0", "1", "a", "b"]
    for k in range(4):
        B = FiniteFrame.boolean(k)
        for name in ("classical", "demorgan", "goedel_dummett", "kreisel_putnam"):
            assert l_sublocale(B, name).nucleus == Nucleus.identity(B)


def test_direct_examples(fork):
    for k in range(4):
        B = FiniteFrame.boolean(k)
        d = demorganization_direct(B)
        assert set(d.fixset) == set(B.elements()) and all(d.reflect[x] == x for x in B.elements())
    dm, gd = demorganization_direct(fork), gd_sublocale_direct(fork)
    assert sorted(dm.fixset) == sorted(gd.fixset) == ["0", "1", "a", "b"]
    assert dm.reflect["c"] == "1" and gd.reflect["c"] == "1"
    for n in range(1, 6):
        C = FiniteFrame.chain(n)
        assert set(gd_sublocale_direct(C).fixset) == set(C.elements())
    for _, A in corpus.frames():
        assert A.top() in demorganization_direct(A).fixset
        assert A.top() in gd_sublocale_direct(A).fixset
        assert direct_discrepancies(A) == []


def test_nucleus_checks_examples(fork):
    for _, A in corpus.frames():
        r = nucleus_checks(A, Nucleus.identity(A))
        assert r.dense and r.weakly_open and r.implicationally_open
    j = Nucleus.open(fork, "a")
    assert j("0") == "b"
    r = nucleus_checks(fork, j)
    assert r.weakly_open and not r.dense


def test_nucleus_validation(fork):
    with pytest.raises(NucleusError):
        Nucleus(fork, {x: "0" for x in fork.elements()})
    with pytest.raises(NucleusError):
        Nucleus(fork, {"0": "a", "a": "a", "b": "b", "c": "c", "1": "1"})


def test_enumerate_nuclei_counts():
    assert len(enumerate_nuclei(FiniteFrame.chain(2))) == 2
    assert len(enumerate_nuclei(FiniteFrame.chain(3))) == 4
    with pytest.raises(CapExceeded):
        enumerate_nuclei(FiniteFrame.chain(9))


def test_nuclei_enumeration_matches_brute_force():
    for _, A in corpus.frames():
        if len(A) > 5:
            continue
        els = A.elements()
        brute = set()
        for vals in itertools.product(els, repeat=len(els)):
            m = dict(zip(els, vals))
            try:
                brute.add(Nucleus(A, m))
            except NucleusError:
                pass
        assert brute == set(enumerate_nuclei(A))


def test_pointwise_conditions_match_preservation():
    for _, A in corpus.frames():
        if len(A) > 8:
            continue
        for j in enumerate_nuclei(A):
            r = nucleus_checks(A, j)
            assert r.weakly_open == preserves_negation(A, j)
            assert r.implicationally_open == preserves_implication(A, j)
            if r.dense:
                assert r.weakly_open
            if r.implicationally_open:
                assert r.weakly_open


def test_site_from_frame_examples():
    B = FiniteFrame.boolean(1)
    s = site_from_frame(B)
    assert len(s.category.objects) == 2
    A = chain3()
    s3 = site_from_frame(A)
    from sheafcalc.fincat import generate_sieve, maximal_sieve
    assert not s3.topology.covers(generate_sieve(s3.category, "1", ["m->1"]))
    for o in s3.category.objects:
        assert s3.topology.covers(maximal_sieve(s3.category, o))


def test_frame_and_site_agree(frames):
    battery = ["x & y = 0 |- y = y & ~x", "p | ~p", "~p | ~~p", "(p -> q) | (q -> p)"]
    for _, A in frames:
        if len(A) > 8:
            continue
        s = site_from_frame(A)
        for q in battery:
            assert holds_in_frame(q, A).holds == holds_internally(s, q).holds
