import pytest

from sheafcalc import corpus
from sheafcalc.coverage import (GrothendieckTopology, degenerate_topology, enumerate_topologies,
                                generate_topology, is_topology, trivial_topology)
from sheafcalc.criteria import is_groupoid, stably_nonempty_covers
from sheafcalc.errors import TopologyError
from sheafcalc.fincat import make_sieve
from sheafcalc.frames import Nucleus, nucleus_from_topology, site_from_frame, topology_from_nucleus
from sheafcalc.logic import lookup
from sheafcalc.ltop import (booleanization, demorgan_generators_direct, demorganization, dense_restriction,
                            implicationally_open_site_criterion, is_dense_over, is_implicationally_open,
                            is_weakly_open, l_topology, l_topology_maximality_check, l_topology_report,
                            relativization_check)
from sheafcalc.omega import Site, validates_logic

ADMISSIBLE = ("classical", "demorgan", "goedel_dummett")


def dense_of(C):
    return GrothendieckTopology(C, stably_nonempty_covers(C))


def test_classical_on_sierpinski(walking_arrow):
    W = walking_arrow
    K = l_topology(Site.presheaf(W), "classical")
    assert K.as_dict() == {"a": [["id_a"]], "b": [["u"], ["id_b", "u"]]}
    assert K == dense_of(W)


def test_boolean_and_de_morgan_sites_are_fixed(walking_arrow):
    for C in corpus.categories():
        if is_groupoid(C):
            s = Site.presheaf(C)
            assert l_topology(s, "classical") == s.topology
            assert booleanization(s) == s.topology
    s = Site.presheaf(walking_arrow)
    assert demorganization(s) == s.topology


def test_booleanization_of_idempotent_monoid():
    M = next(C for C in corpus.categories() if C.name == "idempotent_monoid")
    K = booleanization(Site.presheaf(M))
    assert K == dense_of(M)
    assert K.as_dict() == {"*": [["e"], ["1", "e"]]}


def test_demorganization_of_cospan(cospan):
    s = Site.presheaf(cospan)
    K = demorganization(s)
    assert s.topology < K
    assert validates_logic(Site(cospan, K), "demorgan")
    assert K.as_dict()["a"] == [["f", "g"], ["f", "g", "id_a"]]


def test_demorgan_generators(cospan):
    s = Site.presheaf(cospan)
    gens = {(S.root, S.members) for S in demorgan_generators_direct(s)}
    assert ("a", frozenset({"f", "g"})) in gens
    full = {(S.root, S.members) for S in [make_sieve(cospan, "a", ["id_a", "f", "g"])]}
    assert full <= gens
    with pytest.raises(TopologyError):
        demorgan_generators_direct(Site(cospan, degenerate_topology(cospan)))


def test_density_examples(walking_arrow, sites):
    s = Site.presheaf(walking_arrow)
    assert is_dense_over(s.topology, s.topology)
    assert not is_dense_over(degenerate_topology(walking_arrow), s.topology)
    for _, site in sites:
        assert is_dense_over(booleanization(site), site.topology)
    with pytest.raises(TopologyError):
        is_dense_over(trivial_topology(walking_arrow), degenerate_topology(walking_arrow))


def test_openness_examples(sites):
    for _, s in sites:
        J = s.topology
        assert is_weakly_open(J, J) and is_implicationally_open(J, J)


def test_dense_extensions_are_weakly_open_and_implicational_implies_weak():
    for C in corpus.small_categories():
        tops = enumerate_topologies(C)
        for J in tops:
            for K in tops:
                if not J <= K:
                    continue
                if is_dense_over(K, J):
                    assert is_weakly_open(K, J)
                if is_implicationally_open(K, J):
                    assert is_weakly_open(K, J)


def test_open_nucleus_topology_is_weakly_open_not_dense(fork):
    s = site_from_frame(fork)
    j = Nucleus.open(fork, "a")
    K = topology_from_nucleus(s, j)
    assert is_topology(s.category, K)
    assert nucleus_from_topology(fork, s, K) == j
    assert is_weakly_open(K, s.topology)
    assert not is_dense_over(K, s.topology)


def test_site_criterion_for_implicational_openness():
    disagree = 0
    for C in corpus.small_categories():
        tops = enumerate_topologies(C)
        for J in tops:
            for K in tops:
                if J <= K:
                    assert implicationally_open_site_criterion(K, J) == is_implicationally_open(K, J)
                    disagree += (implicationally_open_site_criterion(K, J, literal=True)
                                 != is_implicationally_open(K, J))
    # reading "covering" as J-covering is not equivalent
    assert disagree > 0


def test_literal_site_criterion_ignores_k(walking_arrow):
    W = walking_arrow
    J = trivial_topology(W)
    verdicts = {implicationally_open_site_criterion(K, J, literal=True) for K in enumerate_topologies(W)}
    assert len(verdicts) == 1


def test_maximality_examples(walking_arrow):
    r = l_topology_maximality_check(Site.presheaf(walking_arrow), "classical")
    assert r.ok and r.minimal and len(r.rows) >= 2
    contains = [row for row in r.rows if row[1]]
    assert all(sat for _, _, sat in contains)
    T = corpus.chain(1)
    for name in ADMISSIBLE:
        rt = l_topology_maximality_check(Site.presheaf(T), name)
        assert rt.ok


def test_l_topology_satisfies_itself(sites):
    for _, s in sites:
        for name in ADMISSIBLE:
            K = l_topology(s, name)
            assert validates_logic(Site(s.category, K), name)


def test_relativization_examples(walking_arrow):
    s = Site.presheaf(walking_arrow)
    for name in ADMISSIBLE:
        assert relativization_check(s, s.topology, name)
    dense = dense_of(walking_arrow)
    r = relativization_check(s, dense, "classical")
    assert r and r.lhs == dense and r.rhs == dense
    for C in corpus.categories():
        if is_groupoid(C) and len(C.arrows) <= 5:
            g = Site.presheaf(C)
            for K in enumerate_topologies(C):
                for name in ADMISSIBLE:
                    rr = relativization_check(g, K, name)
                    assert rr and rr.lhs == K


def test_relativization_requires_openness(walking_arrow):
    s = Site.presheaf(walking_arrow)
    K = generate_topology(walking_arrow, None, [make_sieve(walking_arrow, "a", [])])
    assert not is_weakly_open(K, s.topology)
    with pytest.raises(TopologyError):
        relativization_check(s, K, "classical")


def test_dense_restriction(walking_arrow):
    s = Site.presheaf(walking_arrow)
    assert dense_restriction(s) is s
    K = generate_topology(walking_arrow, None, [make_sieve(walking_arrow, "a", [])])
    r = dense_restriction(Site(walking_arrow, K))
    assert r.category.objects == ("b",)
    assert is_topology(r.category, r.topology)
    assert is_dense_over(r.topology, trivial_topology(r.category))
    with pytest.raises(TopologyError):
        dense_restriction(Site(walking_arrow, degenerate_topology(walking_arrow)))


def test_report_flags_non_admissible(cospan):
    rep = l_topology_report(Site.presheaf(cospan), lookup("kreisel_putnam"))
    assert not rep.guaranteed
    rep = l_topology_report(Site.presheaf(cospan), "demorgan")
    assert rep.guaranteed and rep.dense and rep.satisfies and rep.idempotent
