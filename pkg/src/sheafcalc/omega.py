"""The subobject classifier of Sh(C, J) computed fibrewise.

``Omega(c)`` is the set of J-closed sieves on ``c``; the Heyting operations
are the usual sieve formulas.  Internal validity of a Horn sequent is decided
object by object: equalities of subsheaves of a power of Omega are pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .coverage import (GrothendieckTopology, _closed_masks, _closure_mask,
                       is_topology, trivial_topology)
from .errors import NotClosedError, SieveError, TopologyError
from .fincat import FinCategory, Sieve
from .logic import Term, Verdict, as_logic, as_sequent, evaluate, parse_term


@dataclass
class Site:
    category: FinCategory
    topology: GrothendieckTopology
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.topology.cat is not self.category:
            raise TopologyError("topology is defined over a different category")
        if self.check:
            report = is_topology(self.category, self.topology)
            if not report:
                raise TopologyError(f"not a Grothendieck topology: {report.violations[0]}")
        self._fibers: dict[int, OmegaFiber] = {}

    @classmethod
    def presheaf(cls, C: FinCategory) -> Site:
        return cls(C, trivial_topology(C), check=False)

    def fiber(self, c) -> OmegaFiber:
        i = self.category.obj_index(c)
        if i not in self._fibers:
            self._fibers[i] = OmegaFiber(self, i)
        return self._fibers[i]


class OmegaFiber:
    """``Omega(c)`` with memoised Heyting operations on closed sieves."""

    def __init__(self, site: Site, c: int):
        self.site = site
        self.obj = c
        C, J = site.category, site.topology
        self._C, self._J = C, J
        self._masks = _closed_masks(J, c)
        self._intern = {m: Sieve(C, c, m) for m in self._masks}
        # g in fanin(d) such that the empty sieve covers dom g, per object d
        self._empty_closed = tuple(_closure_mask(J, d, 0) for d in range(len(C.objects)))
        self._memo: dict[tuple, Sieve] = {}

    def _s(self, m: int) -> Sieve:
        s = self._intern.get(m)
        if s is None:
            s = self._intern[m] = Sieve(self._C, self.obj, m)
        return s

    def elements(self) -> list[Sieve]:
        return [self._intern[m] for m in self._masks]

    def bottom(self) -> Sieve:
        return self._s(_closure_mask(self._J, self.obj, 0))

    def top(self) -> Sieve:
        return self._s(self._C._full[self.obj])

    def meet(self, S: Sieve, T: Sieve) -> Sieve:
        return self._s(S.mask & T.mask)

    def join(self, S: Sieve, T: Sieve) -> Sieve:
        key = ("|", S.mask, T.mask)
        r = self._memo.get(key)
        if r is None:
            r = self._memo[key] = self._s(_closure_mask(self._J, self.obj, S.mask | T.mask))
        return r

    def imp(self, S: Sieve, T: Sieve) -> Sieve:
        key = ("->", S.mask, T.mask)
        r = self._memo.get(key)
        if r is None:
            C = self._C
            out = 0
            for i, f in enumerate(C._fanin[self.obj]):
                ps, pt = C._pullback(f, S.mask), C._pullback(f, T.mask)
                if not ps & ~pt:
                    out |= 1 << i
            r = self._memo[key] = self._s(out)
        return r

    def neg(self, S: Sieve) -> Sieve:
        key = ("~", S.mask)
        r = self._memo.get(key)
        if r is None:
            C = self._C
            out = 0
            for i, f in enumerate(C._fanin[self.obj]):
                # every g with f.g in S must have the empty sieve covering dom g
                if not C._pullback(f, S.mask) & ~self._empty_closed[C._dom[f]]:
                    out |= 1 << i
            r = self._memo[key] = self._s(out)
        return r

    def leq(self, S: Sieve, T: Sieve) -> bool:
        return not S.mask & ~T.mask

    def __len__(self) -> int:
        return len(self._masks)

    def __repr__(self) -> str:
        return f"<OmegaFiber at {self._C.objects[self.obj]!r}: {len(self)} closed sieves>"


def _check_closed(site: Site, *sieves: Sieve) -> int:
    c = sieves[0].obj
    for S in sieves:
        if S.obj != c:
            raise SieveError(f"root mismatch: {sieves[0].root!r} vs {S.root!r}")
        if _closure_mask(site.topology, S.obj, S.mask) != S.mask:
            raise NotClosedError(f"{S!r} is not closed for the topology")
    return c


def omega_bottom(site: Site, c) -> Sieve:
    return site.fiber(c).bottom()


def omega_top(site: Site, c) -> Sieve:
    return site.fiber(c).top()


def omega_meet(site: Site, S: Sieve, T: Sieve) -> Sieve:
    return site.fiber(_check_closed(site, S, T)).meet(S, T)


def omega_join(site: Site, S: Sieve, T: Sieve) -> Sieve:
    return site.fiber(_check_closed(site, S, T)).join(S, T)


def omega_implies(site: Site, S: Sieve, T: Sieve) -> Sieve:
    return site.fiber(_check_closed(site, S, T)).imp(S, T)


def omega_not(site: Site, S: Sieve) -> Sieve:
    return site.fiber(_check_closed(site, S)).neg(S)


def eval_term_omega(site: Site, c, term: Term | str, assignment: dict[str, Sieve]) -> Sieve:
    if isinstance(term, str):
        term = parse_term(term)
    fib = site.fiber(c)
    if assignment:
        _check_closed(site, *assignment.values())
        for S in assignment.values():
            if S.obj != fib.obj:
                raise SieveError(f"assignment sieve on {S.root!r}, expected {site.category.objects[fib.obj]!r}")
    return evaluate(term, fib, assignment)


def holds_internally(site: Site, sequent) -> Verdict:
    """Validity of a Horn sequent in Omega, with the first counterexample
    in object order and then lexicographic closed-sieve order."""
    seq = as_sequent(sequent)
    for c in range(len(site.category.objects)):
        fib = site.fiber(c)
        elems = fib.elements()
        for values in product(elems, repeat=len(seq.context)):
            env = dict(zip(seq.context, values))
            if all(evaluate(a, fib, env) == evaluate(b, fib, env) for a, b in seq.premises):
                a, b = seq.conclusion
                if evaluate(a, fib, env) != evaluate(b, fib, env):
                    return Verdict(False, env, site.category.objects[c])
    return Verdict(True)


def validates_logic(site: Site, logic) -> Verdict:
    """Does ``Sh(C, J)`` satisfy the logic: is the axiom the maximal sieve
    at every object and every tuple of closed sieves?"""
    return holds_internally(site, as_logic(logic).sequent())


def subobject_frame(site: Site, c):
    """The closed sieves on ``c`` as a :class:`~sheafcalc.frames.FiniteFrame`."""
    from .frames import FiniteFrame

    fib = site.fiber(c)
    elems = fib.elements()
    return FiniteFrame(elems, lambda S, T: S <= T, max_size=max(len(elems), 1))
