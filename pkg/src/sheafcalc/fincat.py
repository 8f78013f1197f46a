"""Finite categories given by explicit composition tables, and sieves on them.

Objects and arrows carry string ids at the API boundary and dense integer
indices internally.  A sieve on ``c`` is a bitmask over the *fan-in* of ``c``
(the arrows with codomain ``c``, in a fixed order).
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from itertools import product

from .errors import CapExceeded, CategoryError, SieveError

DEFAULT_MAX_FANIN = 16

ArrowSpec = tuple[str, str, str]


def _normalise_arrows(arrows) -> list[ArrowSpec]:
    out = []
    for a in arrows:
        if isinstance(a, Mapping):
            out.append((str(a["id"]), str(a["dom"]), str(a["cod"])))
        else:
            ident, dom, cod = a
            out.append((str(ident), str(dom), str(cod)))
    return out


def _normalise_composition(composition) -> list[tuple[str, str, str]]:
    if isinstance(composition, Mapping):
        return [(str(g), str(f), str(gf)) for (g, f), gf in composition.items()]
    return [(str(g), str(f), str(gf)) for g, f, gf in composition]


def category_violations(objects, arrows, identities, composition) -> list[str]:
    """Return every law violation of the raw tables (empty list when valid)."""
    objects = [str(o) for o in objects]
    arrows = _normalise_arrows(arrows)
    identities = {str(k): str(v) for k, v in identities.items()}
    triples = _normalise_composition(composition)
    problems: list[str] = []

    if len(set(objects)) != len(objects):
        problems.append("duplicate object ids")
    obj_set = set(objects)
    dom: dict[str, str] = {}
    cod: dict[str, str] = {}
    for ident, d, c in arrows:
        if ident in dom:
            problems.append(f"duplicate arrow id {ident!r}")
        if d not in obj_set:
            problems.append(f"arrow {ident!r} has dangling domain {d!r}")
        if c not in obj_set:
            problems.append(f"arrow {ident!r} has dangling codomain {c!r}")
        dom[ident], cod[ident] = d, c

    for o in objects:
        i = identities.get(o)
        if i is None:
            problems.append(f"object {o!r} has no identity")
        elif i not in dom:
            problems.append(f"identity of {o!r} is unknown arrow {i!r}")
        elif dom[i] != o or cod[i] != o:
            problems.append(f"identity {i!r} of {o!r} is not an endomorphism of {o!r}")
    for o in identities:
        if o not in obj_set:
            problems.append(f"identity given for unknown object {o!r}")
    if problems:
        return problems

    table: dict[tuple[str, str], str] = {}
    for g, f, gf in triples:
        for a in (g, f, gf):
            if a not in dom:
                problems.append(f"composition mentions unknown arrow {a!r}")
        if g not in dom or f not in dom or gf not in dom:
            continue
        if cod[f] != dom[g]:
            problems.append(f"composite {g!r}.{f!r} given but cod({f})={cod[f]!r} != dom({g})={dom[g]!r}")
            continue
        if dom[gf] != dom[f] or cod[gf] != cod[g]:
            problems.append(f"composite {g!r}.{f!r} = {gf!r} has the wrong domain or codomain")
        if (g, f) in table and table[(g, f)] != gf:
            problems.append(f"composite {g!r}.{f!r} defined twice ({table[(g, f)]!r} and {gf!r})")
        table[(g, f)] = gf
    if problems:
        return problems

    names = [a for a, _, _ in arrows]
    for f in names:
        for g in names:
            if cod[f] == dom[g] and (g, f) not in table:
                problems.append(f"missing composite {g!r}.{f!r}")
    if problems:
        return problems

    for f in names:
        if table[(identities[cod[f]], f)] != f:
            problems.append(f"identity law fails for {f!r}: id_{cod[f]}.{f} != {f}")
        if table[(f, identities[dom[f]])] != f:
            problems.append(f"identity law fails for {f!r}: {f}.id_{dom[f]} != {f}")
    for f in names:
        for g in names:
            if cod[f] != dom[g]:
                continue
            gf = table[(g, f)]
            for h in names:
                if cod[g] != dom[h]:
                    continue
                if table[(h, gf)] != table[(table[(h, g)], f)]:
                    problems.append(f"associativity fails for ({h!r}, {g!r}, {f!r})")
    return problems


class FinCategory:
    """A finite category with an explicit, total composition table.

    Construction validates the identity, associativity and dom/cod laws and
    raises :class:`CategoryError` listing the violations.  Instances are
    immutable; the only mutable state is an internal pullback memo.
    """

    def __init__(self, objects, arrows, identities, composition, *,
                 max_fanin: int = DEFAULT_MAX_FANIN, name: str | None = None):
        violations = category_violations(objects, arrows, identities, composition)
        if violations:
            raise CategoryError(violations)
        arrows = _normalise_arrows(arrows)
        self.name = name
        self.objects: tuple[str, ...] = tuple(str(o) for o in objects)
        self.arrows: tuple[str, ...] = tuple(a for a, _, _ in arrows)
        self._obj = {o: i for i, o in enumerate(self.objects)}
        self._arr = {a: i for i, a in enumerate(self.arrows)}
        self._dom = tuple(self._obj[d] for _, d, _ in arrows)
        self._cod = tuple(self._obj[c] for _, _, c in arrows)
        self._id = tuple(self._arr[str(identities[o])] for o in self.objects)
        n = len(self.arrows)
        comp = [[-1] * n for _ in range(n)]
        for g, f, gf in _normalise_composition(composition):
            comp[self._arr[g]][self._arr[f]] = self._arr[gf]
        self._comp = tuple(tuple(row) for row in comp)

        fanin = [[] for _ in self.objects]
        for a in range(n):
            fanin[self._cod[a]].append(a)
        self._fanin = tuple(tuple(xs) for xs in fanin)
        self.max_fanin = max_fanin
        worst = max((len(xs) for xs in self._fanin), default=0)
        if worst > max_fanin:
            c = max(range(len(self.objects)), key=lambda i: len(self._fanin[i]))
            raise CapExceeded(f"object {self.objects[c]!r} has fan-in {worst} > max_fanin={max_fanin}")
        self._bit = [0] * n
        for xs in self._fanin:
            for i, a in enumerate(xs):
                self._bit[a] = i
        self._full = tuple((1 << len(xs)) - 1 for xs in self._fanin)
        # pairs (bit of g in fanin(dom f), bit of f.g in fanin(cod f))
        self._pull_pairs = tuple(
            tuple((self._bit[g], self._bit[comp[f][g]]) for g in self._fanin[self._dom[f]])
            for f in range(n))
        self._principal = tuple(self._mask_of(comp[f][g] for g in self._fanin[self._dom[f]])
                                for f in range(n))
        self._pull_cache: dict[tuple[int, int], int] = {}

    # -- name resolution -------------------------------------------------
    def obj_index(self, c) -> int:
        if isinstance(c, int):
            return c
        try:
            return self._obj[c]
        except KeyError:
            raise KeyError(f"unknown object {c!r}") from None

    def arrow_index(self, f) -> int:
        if isinstance(f, int):
            return f
        try:
            return self._arr[f]
        except KeyError:
            raise KeyError(f"unknown arrow {f!r}") from None

    def dom(self, f: str) -> str:
        return self.objects[self._dom[self.arrow_index(f)]]

    def cod(self, f: str) -> str:
        return self.objects[self._cod[self.arrow_index(f)]]

    def identity(self, c: str) -> str:
        return self.arrows[self._id[self.obj_index(c)]]

    def compose(self, g: str, f: str) -> str:
        """``g . f``; raises ``ValueError`` when cod f != dom g."""
        gf = self._comp[self.arrow_index(g)][self.arrow_index(f)]
        if gf < 0:
            raise ValueError(f"{g!r} and {f!r} are not composable")
        return self.arrows[gf]

    def hom(self, x: str, y: str) -> list[str]:
        xi, yi = self.obj_index(x), self.obj_index(y)
        return [self.arrows[a] for a in self._fanin[yi] if self._dom[a] == xi]

    def arrows_into(self, c: str) -> list[str]:
        return [self.arrows[a] for a in self._fanin[self.obj_index(c)]]

    def fanin(self, c) -> int:
        return len(self._fanin[self.obj_index(c)])

    def factors_through(self, f: str, g: str) -> bool:
        """True when ``f = g . h`` for some ``h``."""
        fi, gi = self.arrow_index(f), self.arrow_index(g)
        if self._cod[fi] != self._cod[gi]:
            return False
        return bool(self._principal[gi] >> self._bit[fi] & 1)

    def __len__(self) -> int:
        return len(self.arrows)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FinCategory{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    # -- internal mask helpers ------------------------------------------
    def _mask_of(self, arrows: Iterable[int]) -> int:
        m = 0
        for a in arrows:
            m |= 1 << self._bit[a]
        return m

    def _members(self, c: int, mask: int) -> list[int]:
        return [a for i, a in enumerate(self._fanin[c]) if mask >> i & 1]

    def _pullback(self, f: int, mask: int) -> int:
        key = (f, mask)
        out = self._pull_cache.get(key)
        if out is None:
            out = 0
            for i, j in self._pull_pairs[f]:
                if mask >> j & 1:
                    out |= 1 << i
            self._pull_cache[key] = out
        return out

    def _generate(self, c: int, arrows: Iterable[int]) -> int:
        m = 0
        for a in arrows:
            m |= self._principal[a]
        return m

    def _is_sieve(self, c: int, mask: int) -> bool:
        return all(self._principal[a] | mask == mask for a in self._members(c, mask))

    def sieve(self, c, mask: int) -> Sieve:
        return Sieve(self, self.obj_index(c), mask)

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_monoid(cls, elements: Iterable[str], mul: Callable[[str, str], str] | Mapping,
                    unit: str, *, obj: str = "*", **kw) -> FinCategory:
        """One-object category; ``mul(g, f)`` is the composite ``g . f``."""
        elements = [str(e) for e in elements]
        if isinstance(mul, Mapping):
            table = mul
            mul = lambda g, f: table[(g, f)]  # noqa: E731
        return cls([obj], [(e, obj, obj) for e in elements], {obj: unit},
                   [(g, f, mul(g, f)) for g, f in product(elements, repeat=2)], **kw)

    @classmethod
    def from_poset(cls, elements: Iterable[str], leq: Callable[[str, str], bool], **kw) -> FinCategory:
        """Thin category with an arrow ``x->y`` whenever ``x <= y``."""
        elements = [str(e) for e in elements]

        def name(x, y):
            return f"id_{x}" if x == y else f"{x}->{y}"

        arrows = [(name(x, y), x, y) for x in elements for y in elements if leq(x, y)]
        comp = [(name(y, z), name(x, y), name(x, z))
                for x in elements for y in elements for z in elements
                if leq(x, y) and leq(y, z)]
        return cls(elements, arrows, {x: name(x, x) for x in elements}, comp, **kw)

    def tables(self) -> dict:
        """Raw tables suitable for re-validation or serialisation."""
        return {
            "objects": list(self.objects),
            "arrows": [(a, self.objects[self._dom[i]], self.objects[self._cod[i]])
                       for i, a in enumerate(self.arrows)],
            "identities": {o: self.arrows[self._id[i]] for i, o in enumerate(self.objects)},
            "composition": [(self.arrows[g], self.arrows[f], self.arrows[gf])
                            for g, row in enumerate(self._comp) for f, gf in enumerate(row) if gf >= 0],
        }


def validate_category(objects, arrows, identities, composition, **kw) -> FinCategory:
    """Validate raw tables and build a :class:`FinCategory`."""
    return FinCategory(objects, arrows, identities, composition, **kw)


def disjoint_union(*cats: FinCategory, name: str | None = None) -> FinCategory:
    objects, arrows, ids, comp = [], [], {}, []
    for k, C in enumerate(cats):
        t = C.tables()
        p = f"{k}."
        objects += [p + o for o in t["objects"]]
        arrows += [(p + a, p + d, p + c) for a, d, c in t["arrows"]]
        ids.update({p + o: p + i for o, i in t["identities"].items()})
        comp += [(p + g, p + f, p + gf) for g, f, gf in t["composition"]]
    return FinCategory(objects, arrows, ids, comp, name=name)


@dataclass(frozen=True)
class Sieve:
    """A precomposition-closed set of arrows with a common codomain."""

    cat: FinCategory = field(compare=False, repr=False)
    obj: int
    mask: int

    @property
    def root(self) -> str:
        return self.cat.objects[self.obj]

    @property
    def members(self) -> frozenset[str]:
        return frozenset(self.cat.arrows[a] for a in self.cat._members(self.obj, self.mask))

    def __contains__(self, f) -> bool:
        a = self.cat.arrow_index(f)
        return self.cat._cod[a] == self.obj and bool(self.mask >> self.cat._bit[a] & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(sorted(self.members))

    def __le__(self, other: Sieve) -> bool:
        _same_root(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Sieve) -> bool:
        return self <= other and self.mask != other.mask

    def __or__(self, other: Sieve) -> Sieve:
        return sieve_union(self, other)

    def __and__(self, other: Sieve) -> Sieve:
        return sieve_intersection(self, other)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_maximal(self) -> bool:
        return self.mask == self.cat._full[self.obj]

    def __repr__(self) -> str:
        inner = ", ".join(sorted(self.members))
        return f"Sieve({self.root}: {{{inner}}})"


def _same_root(S: Sieve, T: Sieve) -> None:
    if S.obj != T.obj:
        raise SieveError(f"root mismatch: {S.root!r} vs {T.root!r}")


def make_sieve(C: FinCategory, root, arrows: Iterable[str]) -> Sieve:
    """Wrap an explicit arrow set, checking that it really is a sieve on ``root``."""
    c = C.obj_index(root)
    idx = [C.arrow_index(a) for a in arrows]
    for a in idx:
        if C._cod[a] != c:
            raise SieveError(f"arrow {C.arrows[a]!r} does not have codomain {C.objects[c]!r}")
    mask = C._mask_of(idx)
    if not C._is_sieve(c, mask):
        raise SieveError(f"{sorted(C.arrows[a] for a in idx)} is not closed under precomposition")
    return Sieve(C, c, mask)


def generate_sieve(C: FinCategory, root, generators: Iterable[str]) -> Sieve:
    """Smallest sieve on ``root`` containing ``generators``."""
    c = C.obj_index(root)
    idx = [C.arrow_index(a) for a in generators]
    for a in idx:
        if C._cod[a] != c:
            raise SieveError(f"generator {C.arrows[a]!r} does not have codomain {C.objects[c]!r}")
    return Sieve(C, c, C._generate(c, idx))


def pullback_sieve(C: FinCategory, f: str, S: Sieve) -> Sieve:
    """``f*(S) = {g | f.g in S}``, a sieve on dom f."""
    a = C.arrow_index(f)
    if C._cod[a] != S.obj:
        raise SieveError(f"cannot pull back a sieve on {S.root!r} along {C.arrows[a]!r}: codomain {C.cod(a)!r}")
    return Sieve(C, C._dom[a], C._pullback(a, S.mask))


def sieve_union(S: Sieve, T: Sieve) -> Sieve:
    _same_root(S, T)
    return Sieve(S.cat, S.obj, S.mask | T.mask)


def sieve_intersection(S: Sieve, T: Sieve) -> Sieve:
    _same_root(S, T)
    return Sieve(S.cat, S.obj, S.mask & T.mask)


def maximal_sieve(C: FinCategory, c) -> Sieve:
    i = C.obj_index(c)
    return Sieve(C, i, C._full[i])


def empty_sieve(C: FinCategory, c) -> Sieve:
    return Sieve(C, C.obj_index(c), 0)
