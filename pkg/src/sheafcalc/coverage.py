"""Grothendieck topologies on finite categories.

Topologies are stored extensionally: for every object, the set of covering
sieve masks.  Everything that quantifies over "all sieves on c" goes through
:func:`all_sieves`, which is exponential in the fan-in of ``c`` and guarded by
the category's ``max_fanin``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import CapExceeded, SieveError, TopologyError
from .fincat import FinCategory, Sieve

DEFAULT_MAX_ENUM = 5


def _all_masks(C: FinCategory, c: int) -> tuple[int, ...]:
    cache = C.__dict__.setdefault("_all_sieves_cache", {})
    if c in cache:
        return cache[c]
    fan = C._fanin[c]
    if len(fan) > C.max_fanin:
        raise CapExceeded(f"fan-in of {C.objects[c]!r} is {len(fan)} > {C.max_fanin}")
    k = len(fan)
    princ = [C._principal[a] for a in fan]
    up = [0] * k
    for j in range(k):
        for i in range(k):
            if princ[j] >> i & 1:
                up[i] |= 1 << j
    out: list[int] = []

    # each arrow is either forced in (with everything it generates) or
    # forced out (with everything that generates it)
    def rec(i: int, inc: int, exc: int) -> None:
        if i == k:
            out.append(inc)
            return
        if (inc | exc) >> i & 1:
            rec(i + 1, inc, exc)
            return
        ninc = inc | princ[i]
        if not ninc & exc:
            rec(i + 1, ninc, exc)
        nexc = exc | up[i]
        if not nexc & inc:
            rec(i + 1, inc, nexc)

    rec(0, 0, 0)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    cache[c] = tuple(out)
    return cache[c]


def all_sieves(C: FinCategory, c) -> list[Sieve]:
    """Every sieve on ``c``, smallest first."""
    i = C.obj_index(c)
    return [Sieve(C, i, m) for m in _all_masks(C, i)]


def same_shape(C: FinCategory, D: FinCategory) -> bool:
    return C is D or (C.objects == D.objects and C.arrows == D.arrows)


class GrothendieckTopology:
    """Covering sieves per object.  Build with :func:`generate_topology`,
    :func:`trivial_topology` or :meth:`from_covers`; the latter does not
    validate (use :func:`is_topology`)."""

    def __init__(self, cat: FinCategory, covers: Iterable[Iterable[int]]):
        self.cat = cat
        self._cov: tuple[frozenset[int], ...] = tuple(frozenset(x) for x in covers)
        if len(self._cov) != len(cat.objects):
            raise TopologyError("one covering family per object is required")

    @classmethod
    def from_covers(cls, C: FinCategory, covers: Mapping) -> GrothendieckTopology:
        return cls(C, _covers_to_masks(C, covers))

    def covers(self, S: Sieve) -> bool:
        return S.mask in self._cov[S.obj]

    def covering(self, c) -> list[Sieve]:
        i = self.cat.obj_index(c)
        return [Sieve(self.cat, i, m) for m in sorted(self._cov[i], key=lambda m: (bin(m).count("1"), m))]

    def covers_empty(self, c) -> bool:
        return 0 in self._cov[self.cat.obj_index(c)]

    def as_dict(self) -> dict[str, list[list[str]]]:
        return {o: [sorted(S.members) for S in self.covering(o)] for o in self.cat.objects}

    def __eq__(self, other) -> bool:
        return (isinstance(other, GrothendieckTopology) and same_shape(self.cat, other.cat)
                and self._cov == other._cov)

    def __hash__(self) -> int:
        return hash(self._cov)

    def __le__(self, other: GrothendieckTopology) -> bool:
        """Objectwise inclusion of covering families (``self`` is coarser)."""
        return all(a <= b for a, b in zip(self._cov, other._cov))

    def __ge__(self, other: GrothendieckTopology) -> bool:
        return other <= self

    def __lt__(self, other: GrothendieckTopology) -> bool:
        return self <= other and self != other

    def __repr__(self) -> str:
        n = sum(len(x) for x in self._cov)
        return f"<GrothendieckTopology on {self.cat!r}: {n} covering sieves>"


def _covers_to_masks(C: FinCategory, covers) -> list[set[int]]:
    if isinstance(covers, GrothendieckTopology):
        return [set(x) for x in covers._cov]
    out: list[set[int]] = [set() for _ in C.objects]
    for c, family in covers.items():
        ci = C.obj_index(c)
        for S in family:
            if isinstance(S, Sieve):
                if S.obj != ci:
                    raise SieveError(f"sieve on {S.root!r} listed as covering {C.objects[ci]!r}")
                mask = S.mask
            else:
                idx = [C.arrow_index(a) for a in S]
                bad = [C.arrows[a] for a in idx if C._cod[a] != ci]
                if bad:
                    raise SieveError(f"arrows {bad} listed in a sieve on {C.objects[ci]!r}")
                mask = C._mask_of(idx)
            if not C._is_sieve(ci, mask):
                raise SieveError(f"{sorted(C.arrows[a] for a in C._members(ci, mask))} is not a sieve")
            out[ci].add(mask)
    return out


def trivial_topology(C: FinCategory) -> GrothendieckTopology:
    """Only maximal sieves cover; its sheaves are all presheaves."""
    return GrothendieckTopology(C, [{C._full[c]} for c in range(len(C.objects))])


def degenerate_topology(C: FinCategory) -> GrothendieckTopology:
    return GrothendieckTopology(C, [set(_all_masks(C, c)) for c in range(len(C.objects))])


@dataclass
class TopologyReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def is_topology(C: FinCategory, covers) -> TopologyReport:
    """Check maximality, stability and transitivity; report witnesses."""
    cov = _covers_to_masks(C, covers)
    report = TopologyReport()

    def show(c, m):
        return repr(Sieve(C, c, m))

    for c in range(len(C.objects)):
        if C._full[c] not in cov[c]:
            report.violations.append(("maximality", f"maximal sieve on {C.objects[c]!r} does not cover"))
    for c in range(len(C.objects)):
        for m in sorted(cov[c]):
            for f in C._fanin[c]:
                p = C._pullback(f, m)
                if p not in cov[C._dom[f]]:
                    report.violations.append(
                        ("stability", f"{show(c, m)} covers but its pullback along {C.arrows[f]!r}, "
                                      f"{show(C._dom[f], p)}, does not"))
    for c in range(len(C.objects)):
        for r in _all_masks(C, c):
            if r in cov[c]:
                continue
            for m in sorted(cov[c]):
                if all(C._pullback(f, r) in cov[C._dom[f]] for f in C._members(c, m)):
                    report.violations.append(
                        ("transitivity", f"{show(c, r)} is locally covering on {show(c, m)} but does not cover"))
                    break
    return report


def generate_topology(C: FinCategory, J0=None, gens: Iterable[Sieve] = ()) -> GrothendieckTopology:
    """Least topology containing ``J0`` (a topology or covers mapping) and ``gens``.

    Saturates under stability and transitivity over the full sieve lattice of
    every object until nothing changes.  Upward closure is the special case of
    transitivity where every pullback is maximal.
    """
    n = len(C.objects)
    cov: list[set[int]] = [{C._full[c]} for c in range(n)]
    if J0 is not None:
        for c, xs in enumerate(_covers_to_masks(C, J0)):
            cov[c] |= xs
    for S in gens:
        if S.cat is not C and S.cat.objects != C.objects:
            raise SieveError("generator belongs to another category")
        cov[S.obj].add(S.mask)
    sieves = [_all_masks(C, c) for c in range(n)]

    changed = True
    while changed:
        changed = False
        for c in range(n):
            for m in list(cov[c]):
                for f in C._fanin[c]:
                    p = C._pullback(f, m)
                    d = C._dom[f]
                    if p not in cov[d]:
                        cov[d].add(p)
                        changed = True
        for c in range(n):
            for r in sieves[c]:
                if r in cov[c]:
                    continue
                for m in cov[c]:
                    if all(C._pullback(f, r) in cov[C._dom[f]] for f in C._members(c, m)):
                        cov[c].add(r)
                        changed = True
                        break
    return GrothendieckTopology(C, cov)


def join_topologies(*topologies: GrothendieckTopology) -> GrothendieckTopology:
    C = topologies[0].cat
    cov = [set() for _ in C.objects]
    for K in topologies:
        for c, xs in enumerate(K._cov):
            cov[c] |= xs
    return generate_topology(C, {C.objects[c]: [Sieve(C, c, m) for m in xs] for c, xs in enumerate(cov)})


def _closure_mask(J: GrothendieckTopology, c: int, mask: int) -> int:
    C = J.cat
    out = 0
    for i, f in enumerate(C._fanin[c]):
        if C._pullback(f, mask) in J._cov[C._dom[f]]:
            out |= 1 << i
    return out


def closure(J: GrothendieckTopology, S: Sieve) -> Sieve:
    """``{f : d -> c | f*(S) covers d}``."""
    return Sieve(J.cat, S.obj, _closure_mask(J, S.obj, S.mask))


def is_closed(J: GrothendieckTopology, S: Sieve) -> bool:
    return _closure_mask(J, S.obj, S.mask) == S.mask


def _closed_masks(J: GrothendieckTopology, c: int) -> tuple[int, ...]:
    cache = J.__dict__.setdefault("_closed_cache", {})
    if c not in cache:
        cache[c] = tuple(m for m in _all_masks(J.cat, c) if _closure_mask(J, c, m) == m)
    return cache[c]


def closed_sieves(J: GrothendieckTopology, c) -> list[Sieve]:
    i = J.cat.obj_index(c)
    return [Sieve(J.cat, i, m) for m in _closed_masks(J, i)]


def enumerate_topologies(C: FinCategory, max_arrows: int = DEFAULT_MAX_ENUM) -> list[GrothendieckTopology]:
    """Every Grothendieck topology on ``C`` (oracle use, tiny categories only).

    Every topology is reachable from the trivial one by repeatedly adding a
    single sieve and regenerating, so a breadth-first search finds them all.
    """
    if len(C.arrows) > max_arrows:
        raise CapExceeded(f"{len(C.arrows)} arrows > max_enum={max_arrows}")
    start = trivial_topology(C)
    seen = {start._cov: start}
    frontier = [start]
    while frontier:
        nxt = []
        for K in frontier:
            for c in range(len(C.objects)):
                for m in _all_masks(C, c):
                    if m in K._cov[c]:
                        continue
                    K2 = generate_topology(C, K, [Sieve(C, c, m)])
                    if K2._cov not in seen:
                        seen[K2._cov] = K2
                        nxt.append(K2)
        frontier = nxt
    return sorted(seen.values(), key=lambda K: (sum(len(x) for x in K._cov),
                                                [sorted(x) for x in K._cov]))
