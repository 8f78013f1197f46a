"""Finite frames (finite distributive lattices), nuclei, filters and quotients.

Elements are arbitrary hashable labels; internally every frame keeps dense
integer indices and full operation tables.
"""

from __future__ import annotations

import warnings
from collections.abc import Callable, Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import CapExceeded, FrameError, NucleusError
from .logic import LogicSpec, Term, as_logic, evaluate, holds_in

DEFAULT_MAX_FRAME = 12
DEFAULT_MAX_NUCLEI_FRAME = 8
MAX_ASSIGNMENTS = 1_000_000


class FiniteFrame:
    """A finite distributive lattice, hence a frame and a Heyting algebra.

    ``order`` is either a predicate ``leq(x, y)`` or an iterable of pairs
    ``(x, y)`` meaning ``x <= y``; pairs are closed reflexively and
    transitively, so a covering relation is enough.
    """

    def __init__(self, elements: Iterable[Hashable], order, *, max_size: int = DEFAULT_MAX_FRAME,
                 check_distributive: bool = True):
        self.labels: tuple = tuple(elements)
        n = len(self.labels)
        if n == 0:
            raise FrameError("a frame needs at least one element")
        if n > max_size:
            raise CapExceeded(f"frame has {n} elements > max_frame={max_size}")
        self._i = {x: i for i, x in enumerate(self.labels)}
        if len(self._i) != n:
            raise FrameError("duplicate element labels")
        le = [[i == j for j in range(n)] for i in range(n)]
        if callable(order):
            for i, x in enumerate(self.labels):
                for j, y in enumerate(self.labels):
                    if order(x, y):
                        le[i][j] = True
        else:
            for x, y in order:
                try:
                    le[self._i[x]][self._i[y]] = True
                except KeyError as e:
                    raise FrameError(f"order mentions unknown element {e.args[0]!r}") from None
            for k in range(n):
                for i in range(n):
                    if le[i][k]:
                        for j in range(n):
                            if le[k][j]:
                                le[i][j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if le[i][j] and le[j][i]:
                    raise FrameError(f"order is not antisymmetric: {self.labels[i]!r} and {self.labels[j]!r}")
        self._le = tuple(tuple(r) for r in le)

        def extremum(cands, least):
            best = [c for c in cands if all((le[c][d] if least else le[d][c]) for d in cands)]
            return best[0] if best else None

        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                m = extremum([k for k in range(n) if le[k][i] and le[k][j]], least=False)
                s = extremum([k for k in range(n) if le[i][k] and le[j][k]], least=True)
                if m is None or s is None:
                    raise FrameError(f"{self.labels[i]!r} and {self.labels[j]!r} have no "
                                     f"{'meet' if m is None else 'join'}")
                meet[i][j], join[i][j] = m, s
        self._meet = tuple(tuple(r) for r in meet)
        self._join = tuple(tuple(r) for r in join)
        self._bot = extremum(list(range(n)), least=True)
        self._top = extremum(list(range(n)), least=False)

        if check_distributive:
            for a, b, c in product(range(n), repeat=3):
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
                    x, y, z = (self.labels[k] for k in (a, b, c))
                    raise FrameError(f"not distributive: {x!r} & ({y!r} | {z!r}) != "
                                     f"({x!r} & {y!r}) | ({x!r} & {z!r})")
        imp = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                best = self._bot
                for x in range(n):
                    if le[meet[x][a]][b]:
                        best = join[best][x]
                if not le[meet[best][a]][b]:
                    raise FrameError("residuation fails; the lattice is not Heyting")
                imp[a][b] = best
        self._imp = tuple(tuple(r) for r in imp)

    # -- Heyting algebra protocol (on labels) ----------------------------
    def elements(self) -> list:
        return list(self.labels)

    def bottom(self):
        return self.labels[self._bot]

    def top(self):
        return self.labels[self._top]

    def meet(self, x, y):
        return self.labels[self._meet[self._i[x]][self._i[y]]]

    def join(self, x, y):
        return self.labels[self._join[self._i[x]][self._i[y]]]

    def imp(self, x, y):
        return self.labels[self._imp[self._i[x]][self._i[y]]]

    def neg(self, x):
        return self.labels[self._imp[self._i[x]][self._bot]]

    def leq(self, x, y) -> bool:
        return self._le[self._i[x]][self._i[y]]

    def join_all(self, xs: Iterable) -> Hashable:
        acc = self._bot
        for x in xs:
            acc = self._join[acc][self._i[x]]
        return self.labels[acc]

    def meet_all(self, xs: Iterable) -> Hashable:
        acc = self._top
        for x in xs:
            acc = self._meet[acc][self._i[x]]
        return self.labels[acc]

    def down(self, x) -> list:
        return [y for y in self.labels if self.leq(y, x)]

    def order_pairs(self) -> list[tuple]:
        return [(x, y) for x in self.labels for y in self.labels if self.leq(x, y)]

    def is_boolean(self) -> bool:
        return all(self.join(x, self.neg(x)) == self.top() for x in self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, x) -> bool:
        return x in self._i

    def __repr__(self) -> str:
        return f"<FiniteFrame {len(self)} elements>"

    # -- constructors ------------------------------------------------------
    @classmethod
    def chain(cls, n: int, labels: Iterable[str] | None = None) -> FiniteFrame:
        labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        return cls(labels, lambda x, y: labels.index(x) <= labels.index(y))

    @classmethod
    def downsets(cls, points: Iterable[str], leq: Callable[[str, str], bool], **kw) -> FiniteFrame:
        """Frame of down-closed subsets of a finite poset, labelled ``{x,y}``."""
        pts = list(points)
        sets = [frozenset(s) for r in range(len(pts) + 1) for s in combinations(pts, r)
                if all(y in s for x in s for y in pts if leq(y, x))]
        return cls.from_sets(sets, **kw)

    @classmethod
    def boolean(cls, k: int) -> FiniteFrame:
        return cls.downsets([f"x{i}" for i in range(k)], lambda x, y: x == y)

    @classmethod
    def from_sets(cls, sets: Iterable[frozenset], **kw) -> FiniteFrame:
        sets = list(sets)
        label = {s: "{" + ",".join(sorted(map(str, s))) + "}" for s in sets}
        return cls([label[s] for s in sets], {(label[s], label[t]) for s in sets for t in sets if s <= t}, **kw)

    @classmethod
    def product(cls, A: FiniteFrame, B: FiniteFrame, **kw) -> FiniteFrame:
        els = [f"({a},{b})" for a in A.labels for b in B.labels]
        pairs = {f"({a},{b})": (a, b) for a in A.labels for b in B.labels}

        def leq(x, y):
            (a, b), (c, d) = pairs[x], pairs[y]
            return A.leq(a, c) and B.leq(b, d)

        return cls(els, leq, **kw)


def heyting_imp(A: FiniteFrame, a, b):
    return A.imp(a, b)


def pseudo_not(A: FiniteFrame, a):
    return A.neg(a)


def fixset_frame(A: FiniteFrame, fixset: Iterable) -> FiniteFrame:
    fs = list(fixset)
    return FiniteFrame(fs, lambda x, y: A.leq(x, y), max_size=max(len(fs), 1))


# -- filters -----------------------------------------------------------

@dataclass(frozen=True)
class Filter:
    frame: FiniteFrame = field(repr=False, compare=False)
    members: frozenset

    def __post_init__(self):
        A = self.frame
        if A.top() not in self.members:
            raise FrameError("a filter contains 1")
        for x in self.members:
            for y in A.labels:
                if A.leq(x, y) and y not in self.members:
                    raise FrameError(f"filter not upward closed at {x!r} <= {y!r}")
            for y in self.members:
                if A.meet(x, y) not in self.members:
                    raise FrameError(f"filter not closed under {x!r} & {y!r}")

    @property
    def proper(self) -> bool:
        return self.frame.bottom() not in self.members

    def __contains__(self, x) -> bool:
        return x in self.members


def filter_generated(A: FiniteFrame, seeds: Iterable) -> Filter:
    """Upward closure of the finite meets of ``seeds`` together with 1."""
    gens = set(seeds) | {A.top()}
    meets = set(gens)
    while True:
        new = {A.meet(x, y) for x in meets for y in gens} - meets
        if not new:
            break
        meets |= new
    return Filter(A, frozenset(y for y in A.labels if any(A.leq(x, y) for x in meets)))


# -- nuclei --------------------------------------------------------------

class Nucleus:
    """Inflationary, idempotent, meet-preserving endomap of a finite frame."""

    def __init__(self, frame: FiniteFrame, mapping: Mapping):
        self.frame = frame
        self.map = {x: mapping[x] for x in frame.labels}
        problem = nucleus_violation(frame, self.map)
        if problem:
            raise NucleusError(problem)

    @classmethod
    def from_fixset(cls, A: FiniteFrame, fixset: Iterable) -> Nucleus:
        fs = set(fixset)
        return cls(A, {x: A.meet_all(y for y in fs if A.leq(x, y)) for x in A.labels})

    @classmethod
    def identity(cls, A: FiniteFrame) -> Nucleus:
        return cls(A, {x: x for x in A.labels})

    @classmethod
    def open(cls, A: FiniteFrame, u) -> Nucleus:
        """``a |-> u => a``, the nucleus of the open sublocale at ``u``."""
        return cls(A, {x: A.imp(u, x) for x in A.labels})

    def __call__(self, x):
        return self.map[x]

    @property
    def fixset(self) -> list:
        return [x for x in self.frame.labels if self.map[x] == x]

    def fixset_frame(self) -> FiniteFrame:
        return fixset_frame(self.frame, self.fixset)

    def __le__(self, other: Nucleus) -> bool:
        """Pointwise order: ``j <= k`` means the sublocale of ``k`` is smaller."""
        return all(self.frame.leq(self.map[x], other.map[x]) for x in self.frame.labels)

    def __ge__(self, other: Nucleus) -> bool:
        return other <= self

    def __eq__(self, other) -> bool:
        return isinstance(other, Nucleus) and self.map == other.map

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.map.items(), key=repr)))

    def __repr__(self) -> str:
        return f"Nucleus({self.map})"


def nucleus_violation(A: FiniteFrame, j: Mapping) -> str | None:
    for x in A.labels:
        if not A.leq(x, j[x]):
            return f"not inflationary at {x!r}"
        if j[j[x]] != j[x]:
            return f"not idempotent at {x!r}"
    for x in A.labels:
        for y in A.labels:
            if j[A.meet(x, y)] != A.meet(j[x], j[y]):
                return f"does not preserve the meet of {x!r} and {y!r}"
    return None


@dataclass
class NucleusReport:
    dense: bool
    weakly_open: bool
    implicationally_open: bool


def nucleus_checks(A: FiniteFrame, j: Nucleus) -> NucleusReport:
    """The three sublocale properties, each by literal quantification."""
    J = j.map
    L = A.labels
    j0 = J[A.bottom()]
    dense = j0 == A.bottom()
    weakly = all(J[b] == J[A.meet(b, A.neg(a))]
                 for a in L for b in L if J[A.meet(a, b)] == j0)
    implicational = all(A.leq(J[c], J[A.imp(a, b)])
                        for a in L for b in L for c in L if A.leq(J[A.meet(c, a)], J[b]))
    return NucleusReport(dense, weakly, implicational)


def preserves_negation(A: FiniteFrame, j: Nucleus) -> bool:
    """``j(~a) = j(a) => j(0)``: the quotient map preserves pseudocomplements."""
    J = j.map
    return all(J[A.neg(a)] == A.imp(J[a], J[A.bottom()]) for a in A.labels)


def preserves_implication(A: FiniteFrame, j: Nucleus) -> bool:
    J = j.map
    return all(J[A.imp(a, b)] == A.imp(J[a], J[b]) for a in A.labels for b in A.labels)


def enumerate_nuclei(A: FiniteFrame, max_size: int = DEFAULT_MAX_NUCLEI_FRAME) -> list[Nucleus]:
    """All nuclei on ``A``.

    A nucleus is determined by its fixset, so candidate fixsets (subsets
    containing 1) are turned into closure maps and kept when the map passes
    every nucleus law.
    """
    if len(A) > max_size:
        raise CapExceeded(f"frame has {len(A)} elements > {max_size} for nucleus enumeration")
    rest = [x for x in A.labels if x != A.top()]
    out = []
    for r in range(len(rest) + 1):
        for sub in combinations(rest, r):
            fs = set(sub) | {A.top()}
            J = {x: A.meet_all(y for y in fs if A.leq(x, y)) for x in A.labels}
            if set(y for y in A.labels if J[y] == y) != fs:
                continue
            if nucleus_violation(A, J) is None:
                out.append(Nucleus(A, J))
    return out


# -- quotients and sublocales ---------------------------------------------

@dataclass
class Quotient:
    """``A/F`` represented by the greatest element of each class."""

    frame: FiniteFrame
    projection: dict
    nucleus: Nucleus
    filter: Filter | None = None

    @property
    def classes(self) -> dict:
        out: dict = {}
        for x, r in self.projection.items():
            out.setdefault(r, []).append(x)
        return out


def quotient_by_filter(A: FiniteFrame, F: Filter) -> Quotient:
    def equiv(a, b):
        return A.meet(A.imp(a, b), A.imp(b, a)) in F

    proj = {}
    for a in A.labels:
        cls_ = [b for b in A.labels if equiv(a, b)]
        top = A.join_all(cls_)
        if not equiv(a, top):
            raise FrameError(f"class of {a!r} is not closed under joins")
        proj[a] = top
    if not F.proper and len(A) > 1:
        warnings.warn("filter contains 0; the quotient is the one-element frame", stacklevel=2)
    nucleus = Nucleus(A, proj)
    return Quotient(nucleus.fixset_frame(), proj, nucleus, F)


def l_sublocale(A: FiniteFrame, logic: LogicSpec | Term | str) -> Quotient:
    """Quotient of ``A`` by the filter generated by every instance of the axiom."""
    spec = as_logic(logic)
    vs = spec.variables
    if len(A) ** len(vs) > MAX_ASSIGNMENTS:
        raise CapExceeded(f"{len(A)}^{len(vs)} assignments exceed {MAX_ASSIGNMENTS}")
    seeds = {evaluate(spec.axiom, A, dict(zip(vs, xs))) for xs in product(A.labels, repeat=len(vs))}
    return quotient_by_filter(A, filter_generated(A, seeds))


@dataclass
class DirectSublocale:
    """A fixset given by a membership predicate, with its reflection map."""

    fixset: list
    reflect: dict
    problems: list[str] = field(default_factory=list)


def _direct(A: FiniteFrame, member: Callable[[Hashable], bool]) -> DirectSublocale:
    fs = [l for l in A.labels if member(l)]
    problems = []
    reflect = {}
    for l in A.labels:
        up = [m for m in fs if A.leq(l, m)]
        least = A.meet_all(up)
        if least not in fs:
            problems.append(f"no least member above {l!r}")
        reflect[l] = least
    return DirectSublocale(fs, reflect, problems)


def demorganization_direct(A: FiniteFrame) -> DirectSublocale:
    """Fixset of the De Morgan nucleus from the order-theoretic predicate.

    ``l`` is a member when, for all ``r <= a``: if every ``b <= a`` that is
    disjoint from ``r`` or meets ``r`` below each of its non-zero parts lies
    under ``l``, then ``a <= l``.
    """
    L = A.labels
    zero = A.bottom()

    def dense_in(b, r):
        return all(A.meet(c, r) != zero for c in L if c != zero and A.leq(c, b))

    def member(l):
        for a in L:
            for r in A.down(a):
                if all(A.leq(b, l) for b in A.down(a) if A.meet(b, r) == zero or dense_in(b, r)):
                    if not A.leq(a, l):
                        return False
        return True

    return _direct(A, member)


def gd_sublocale_direct(A: FiniteFrame) -> DirectSublocale:
    L = A.labels

    def member(l):
        for c in L:
            below = A.down(c)
            for r in below:
                for s in below:
                    if (A.leq(A.meet(A.imp(r, s), c), l) and A.leq(A.meet(A.imp(s, r), c), l)
                            and not A.leq(c, l)):
                        return False
        return True

    return _direct(A, member)


def direct_discrepancies(A: FiniteFrame) -> list[str]:
    """Compare both direct descriptions against the filter quotients."""
    out = []
    for name, direct in (("demorgan", demorganization_direct), ("goedel_dummett", gd_sublocale_direct)):
        d = direct(A)
        q = l_sublocale(A, name)
        out += [f"{name}: {p}" for p in d.problems]
        if set(d.fixset) != set(q.nucleus.fixset):
            out.append(f"{name}: direct fixset {sorted(map(str, d.fixset))} != "
                       f"quotient fixset {sorted(map(str, q.nucleus.fixset))}")
    return out


def satisfies(A: FiniteFrame, logic) -> bool:
    return holds_in(as_logic(logic), A).holds


# -- bridge to sites ----------------------------------------------------

def site_from_frame(A: FiniteFrame, **kw):
    """The poset ``A`` as a site with its canonical coverage: a sieve on ``a``
    covers when the join of its domains is ``a``."""
    from .coverage import GrothendieckTopology, _all_masks
    from .fincat import FinCategory
    from .omega import Site

    names = {x: str(x) for x in A.labels}
    if len(set(names.values())) != len(names):
        raise FrameError("element labels must be distinct as strings")
    back = {v: k for k, v in names.items()}
    C = FinCategory.from_poset([names[x] for x in A.labels],
                               lambda x, y: A.leq(back[x], back[y]), **kw)
    covers = []
    for c, o in enumerate(C.objects):
        fam = set()
        for m in _all_masks(C, c):
            doms = [back[C.objects[C._dom[a]]] for a in C._members(c, m)]
            if A.join_all(doms) == back[o]:
                fam.add(m)
        covers.append(fam)
    site = Site(C, GrothendieckTopology(C, covers))
    site.frame = A
    site.frame_labels = back
    return site


def nucleus_from_topology(A: FiniteFrame, site, K) -> Nucleus:
    """Nucleus on ``A`` induced by a topology ``K`` containing the canonical one."""
    from .coverage import closure
    from .fincat import generate_sieve

    C = site.category
    top = str(A.top())
    back = site.frame_labels
    j = {}
    for x in A.labels:
        S = generate_sieve(C, top, [C.hom(str(x), top)[0]])
        closed = closure(K, S)
        j[x] = A.join_all(back[C.dom(f)] for f in closed.members)
    return Nucleus(A, j)


def topology_from_nucleus(site, j: Nucleus):
    """Topology on ``site_from_frame(A)`` whose closure induces ``j``: a sieve
    on ``a`` covers when ``a <= j(join of its domains)``."""
    from .coverage import GrothendieckTopology, _all_masks

    C, A, back = site.category, j.frame, site.frame_labels
    covers = []
    for c, o in enumerate(C.objects):
        covers.append({m for m in _all_masks(C, c)
                       if A.leq(back[o], j(A.join_all(back[C.objects[C._dom[a]]] for a in C._members(c, m))))})
    return GrothendieckTopology(C, covers)
