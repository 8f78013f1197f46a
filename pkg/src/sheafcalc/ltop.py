"""L-topologies on finite sites and openness/density of extensions K of J.

A topology ``K`` containing ``J`` is a local operator on ``Sh(C, J)``; its
closure on J-closed sieves is the K-closure.  Openness is checked on closed
sieves over representables only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .coverage import (GrothendieckTopology, _all_masks, _closed_masks, _closure_mask,
                       enumerate_topologies, generate_topology, join_topologies, same_shape)
from .criteria import is_stably_nonempty
from .errors import TopologyError
from .fincat import FinCategory, Sieve
from .logic import LogicSpec, as_logic, evaluate, lookup
from .omega import Site, validates_logic


def _other_site(site: Site, K: GrothendieckTopology) -> Site:
    return Site(site.category, K, check=False)


def l_topology_generators(site: Site, logic) -> list[Sieve]:
    """The axiom evaluated at every object on every tuple of closed sieves."""
    spec = as_logic(logic)
    vs = spec.variables
    gens: dict[tuple[int, int], Sieve] = {}
    for c in range(len(site.category.objects)):
        fib = site.fiber(c)
        for values in product(fib.elements(), repeat=len(vs)):
            S = evaluate(spec.axiom, fib, dict(zip(vs, values)))
            gens.setdefault((S.obj, S.mask), S)
    return [gens[k] for k in sorted(gens)]


def l_topology(site: Site, logic) -> GrothendieckTopology:
    """Topology generated over J by every instance of the axiom."""
    return generate_topology(site.category, site.topology, l_topology_generators(site, logic))


def booleanization(site: Site) -> GrothendieckTopology:
    return l_topology(site, lookup("classical"))


def demorganization(site: Site) -> GrothendieckTopology:
    return l_topology(site, lookup("demorgan"))


def _require_dense(site: Site) -> None:
    C, J = site.category, site.topology
    bad = [C.objects[c] for c in range(len(C.objects)) if 0 in J._cov[c]]
    if bad:
        raise TopologyError(f"topology is not dense: the empty sieve covers {bad}")


def demorgan_generators_direct(site: Site) -> list[Sieve]:
    """``{f | f*(R) is empty or stably non-empty}`` for every sieve R on every object."""
    _require_dense(site)
    C = site.category
    out = set()
    for c in range(len(C.objects)):
        for R in _all_masks(C, c):
            m = 0
            for i, f in enumerate(C._fanin[c]):
                p = C._pullback(f, R)
                if p == 0 or is_stably_nonempty(C, Sieve(C, C._dom[f], p)):
                    m |= 1 << i
            out.add((c, m))
    return [Sieve(C, c, m) for c, m in sorted(out)]


def l_topology_presheaf(site: Site, logic) -> GrothendieckTopology:
    """For dense J: generate over J from the axiom evaluated on J-closed sieves
    with the presheaf connectives instead of the sheaf ones."""
    _require_dense(site)
    spec = as_logic(logic)
    vs = spec.variables
    psh = Site.presheaf(site.category)
    gens = set()
    for c in range(len(site.category.objects)):
        fib = psh.fiber(c)
        closed = [fib._s(m) for m in _closed_masks(site.topology, c)]
        for values in product(closed, repeat=len(vs)):
            S = evaluate(spec.axiom, fib, dict(zip(vs, values)))
            gens.add(S)
    return generate_topology(site.category, site.topology, sorted(gens, key=lambda S: (S.obj, S.mask)))


def _require_extension(K: GrothendieckTopology, J: GrothendieckTopology) -> None:
    if not same_shape(K.cat, J.cat):
        raise TopologyError("topologies live on different categories")
    if not J <= K:
        raise TopologyError("K does not contain J")


def is_dense_over(K: GrothendieckTopology, J: GrothendieckTopology) -> bool:
    """The K-closure and J-closure of the empty sieve agree everywhere."""
    _require_extension(K, J)
    return all(_closure_mask(K, c, 0) == _closure_mask(J, c, 0) for c in range(len(K.cat.objects)))


def is_weakly_open(K: GrothendieckTopology, J: GrothendieckTopology) -> bool:
    """K-closure carries J-negation of closed sieves to K-negation."""
    _require_extension(K, J)
    C = K.cat
    sJ, sK = Site(C, J, check=False), Site(C, K, check=False)
    for c in range(len(C.objects)):
        fJ, fK = sJ.fiber(c), sK.fiber(c)
        for S in fJ.elements():
            lhs = _closure_mask(K, c, fJ.neg(S).mask)
            rhs = fK.neg(fK._s(_closure_mask(K, c, S.mask))).mask
            if lhs != rhs:
                return False
    return True


def is_implicationally_open(K: GrothendieckTopology, J: GrothendieckTopology) -> bool:
    """K-closure commutes with implication of J-closed sieves."""
    _require_extension(K, J)
    C = K.cat
    sJ = Site(C, J, check=False)
    for c in range(len(C.objects)):
        fJ = sJ.fiber(c)
        els = fJ.elements()
        for S in els:
            kS = fJ._s(_closure_mask(K, c, S.mask))
            for T in els:
                kT = fJ._s(_closure_mask(K, c, T.mask))
                if _closure_mask(K, c, fJ.imp(S, T).mask) != fJ.imp(kS, kT).mask:
                    return False
    return True


def implicationally_open_site_criterion(K: GrothendieckTopology, J: GrothendieckTopology,
                                        literal: bool = False) -> bool:
    """Site-level test for implicational openness.

    For closed S, T on c: if ``f*(S)`` covering implies ``f*(T)`` covering for
    every f, then ``{f | f*(S) <= f*(T)}`` covers.  "Covering" means K; with
    ``literal=True`` it means J throughout, which makes the test independent
    of K and is exposed only for comparison.
    """
    _require_extension(K, J)
    C = K.cat
    T_ = J if literal else K
    for c in range(len(C.objects)):
        closed = _closed_masks(J, c)
        for S in closed:
            for T in closed:
                if all(C._pullback(f, T) in T_._cov[C._dom[f]]
                       for f in C._fanin[c] if C._pullback(f, S) in T_._cov[C._dom[f]]):
                    m = 0
                    for i, f in enumerate(C._fanin[c]):
                        if not C._pullback(f, S) & ~C._pullback(f, T):
                            m |= 1 << i
                    if m not in T_._cov[c]:
                        return False
    return True


def is_open_for(logic: LogicSpec, K: GrothendieckTopology, J: GrothendieckTopology) -> bool:
    """The openness hypothesis matching the axiom's connectives."""
    if logic.uses_implication:
        return is_implicationally_open(K, J)
    return is_weakly_open(K, J)


@dataclass
class MaximalityReport:
    minimal: bool
    rows: list[tuple[GrothendieckTopology, bool, bool]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.minimal and not self.failures

    def __bool__(self) -> bool:
        return self.ok


def l_topology_maximality_check(site: Site, logic, max_arrows: int = 5) -> MaximalityReport:
    """Over every enumerated topology K containing J:

    * K_L is the least one making all generators cover;
    * for every suitably open K, ``K >= K_L`` iff Sh(C, K) satisfies the logic.
    """
    spec = as_logic(logic)
    C, J = site.category, site.topology
    gens = l_topology_generators(site, spec)
    KL = generate_topology(C, J, gens)
    above = [K for K in enumerate_topologies(C, max_arrows) if J <= K]
    holders = [K for K in above if all(K.covers(S) for S in gens)]
    minimal = KL in holders and all(KL <= K for K in holders)
    report = MaximalityReport(minimal)
    if not minimal:
        report.failures.append("K_L is not the least topology covering its generators")
    for K in above:
        if not is_open_for(spec, K, J):
            continue
        contains = KL <= K
        sat = validates_logic(_other_site(site, K), spec).holds
        report.rows.append((K, contains, sat))
        if contains != sat:
            report.failures.append(f"{K.as_dict()}: contains K_L={contains} but satisfies={sat}")
    return report


@dataclass
class RelativizationResult:
    holds: bool
    lhs: GrothendieckTopology
    rhs: GrothendieckTopology

    def __bool__(self) -> bool:
        return self.holds


def relativization_check(site: Site, K: GrothendieckTopology, logic) -> RelativizationResult:
    """L-topology of (C, K) equals the join of K with the L-topology of (C, J)."""
    spec = as_logic(logic)
    if not is_open_for(spec, K, site.topology):
        kind = "implicationally" if spec.uses_implication else "weakly"
        raise TopologyError(f"K is not {kind} open over J")
    lhs = l_topology(_other_site(site, K), spec)
    rhs = join_topologies(K, l_topology(site, spec))
    return RelativizationResult(lhs == rhs, lhs, rhs)


def dense_restriction(site: Site) -> Site:
    """Full subcategory on the objects not covered by the empty sieve, with the
    induced topology (a sieve covers when the sieve it generates in C does)."""
    C, J = site.category, site.topology
    keep = [c for c in range(len(C.objects)) if 0 not in J._cov[c]]
    if not keep:
        raise TopologyError("every object is covered by the empty sieve")
    if len(keep) == len(C.objects):
        return site
    ks = set(keep)
    t = C.tables()
    names = {C.objects[c] for c in ks}
    arrows = [a for a in t["arrows"] if a[1] in names and a[2] in names]
    kept = {a for a, _, _ in arrows}
    D = FinCategory([C.objects[c] for c in keep], arrows,
                    {o: i for o, i in t["identities"].items() if o in names},
                    [x for x in t["composition"] if x[0] in kept and x[1] in kept],
                    max_fanin=C.max_fanin)
    covers = []
    for d, o in enumerate(D.objects):
        c = C.obj_index(o)
        fam = set()
        for m in _all_masks(D, d):
            gen = C._generate(c, [C.arrow_index(D.arrows[a]) for a in D._members(d, m)])
            if gen in J._cov[c]:
                fam.add(m)
        covers.append(fam)
    return Site(D, GrothendieckTopology(D, covers))


@dataclass
class LTopologyReport:
    logic: LogicSpec
    topology: GrothendieckTopology
    guaranteed: bool
    dense: bool
    satisfies: bool
    idempotent: bool


def l_topology_report(site: Site, logic) -> LTopologyReport:
    """Compute K_L and the properties that admissible axioms guarantee.

    For non-admissible axioms the properties are still computed but flagged as
    not guaranteed.
    """
    spec = as_logic(logic)
    K = l_topology(site, spec)
    again = l_topology(_other_site(site, K), spec)
    return LTopologyReport(
        logic=spec, topology=K, guaranteed=spec.admissible,
        dense=is_dense_over(K, site.topology),
        satisfies=validates_logic(_other_site(site, K), spec).holds,
        idempotent=again == K)
