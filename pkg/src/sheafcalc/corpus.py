"""Built-in corpus of small categories, sites and frames."""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence

from .coverage import generate_topology, trivial_topology, GrothendieckTopology
from .criteria import stably_nonempty_covers
from .fincat import FinCategory, disjoint_union, generate_sieve
from .frames import FiniteFrame
from .omega import Site

Map = tuple[int, ...]


def transformation_monoid(gens: Iterable[Sequence[int]], n: int, name: str | None = None,
                          labels: dict[Map, str] | None = None) -> FinCategory:
    """Monoid of self-maps of ``range(n)`` generated by ``gens`` under composition."""
    ident = tuple(range(n))
    gens = [tuple(g) for g in gens]
    elems = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                gf = tuple(g[f[x]] for x in range(n))
                if gf not in seen:
                    seen.add(gf)
                    elems.append(gf)
                    nxt.append(gf)
        frontier = nxt
    labels = dict(labels or {})
    labels.setdefault(ident, "1")
    names = {e: labels.get(e, "m" + "".join(map(str, e))) for e in elems}
    return FinCategory.from_monoid(
        [names[e] for e in elems],
        {(names[g], names[f]): names[tuple(g[f[x]] for x in range(n))] for g in elems for f in elems},
        "1", name=name)


def cyclic_group(k: int) -> FinCategory:
    return FinCategory.from_monoid([f"r{i}" for i in range(k)],
                                   lambda g, f: f"r{(int(g[1:]) + int(f[1:])) % k}", "r0", name=f"C{k}")


def chain(n: int) -> FinCategory:
    pts = [f"x{i}" for i in range(n)]
    return FinCategory.from_poset(pts, lambda x, y: int(x[1:]) <= int(y[1:]), name=f"chain{n}")


def poset(points: Sequence[str], covers: Iterable[tuple[str, str]], name: str | None = None) -> FinCategory:
    """Poset from covering pairs ``(x, y)`` meaning ``x < y``."""
    up = {p: {p} for p in points}
    changed = True
    pairs = list(covers)
    while changed:
        changed = False
        for x, y in pairs:
            for z in list(up[y]):
                if z not in up[x]:
                    up[x].add(z)
                    changed = True
    return FinCategory.from_poset(points, lambda x, y: y in up[x], name=name)


def walking_arrow() -> FinCategory:
    return FinCategory(["a", "b"], [("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "b")],
                       {"a": "id_a", "b": "id_b"},
                       [("id_a", "id_a", "id_a"), ("id_b", "id_b", "id_b"),
                        ("u", "id_a", "u"), ("id_b", "u", "u")], name="walking_arrow")


def cospan() -> FinCategory:
    """``b -f-> a <-g- c``."""
    return FinCategory(["a", "b", "c"],
                       [("id_a", "a", "a"), ("id_b", "b", "b"), ("id_c", "c", "c"),
                        ("f", "b", "a"), ("g", "c", "a")],
                       {"a": "id_a", "b": "id_b", "c": "id_c"},
                       [("id_a", "id_a", "id_a"), ("id_b", "id_b", "id_b"), ("id_c", "id_c", "id_c"),
                        ("f", "id_b", "f"), ("id_a", "f", "f"), ("g", "id_c", "g"), ("id_a", "g", "g")],
                       name="cospan")


def span() -> FinCategory:
    """``b <-f- a -g-> c``."""
    return FinCategory(["a", "b", "c"],
                       [("id_a", "a", "a"), ("id_b", "b", "b"), ("id_c", "c", "c"),
                        ("f", "a", "b"), ("g", "a", "c")],
                       {"a": "id_a", "b": "id_b", "c": "id_c"},
                       [("id_a", "id_a", "id_a"), ("id_b", "id_b", "id_b"), ("id_c", "id_c", "id_c"),
                        ("f", "id_a", "f"), ("id_b", "f", "f"), ("g", "id_a", "g"), ("id_c", "g", "g")],
                       name="span")


def parallel_pair() -> FinCategory:
    return FinCategory(["a", "b"],
                       [("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
                       {"a": "id_a", "b": "id_b"},
                       [("id_a", "id_a", "id_a"), ("id_b", "id_b", "id_b"),
                        ("f", "id_a", "f"), ("id_b", "f", "f"), ("g", "id_a", "g"), ("id_b", "g", "g")],
                       name="parallel_pair")


def walking_iso() -> FinCategory:
    return FinCategory(["a", "b"],
                       [("id_a", "a", "a"), ("id_b", "b", "b"), ("i", "a", "b"), ("j", "b", "a")],
                       {"a": "id_a", "b": "id_b"},
                       [("id_a", "id_a", "id_a"), ("id_b", "id_b", "id_b"),
                        ("i", "id_a", "i"), ("id_b", "i", "i"), ("j", "id_b", "j"), ("id_a", "j", "j"),
                        ("j", "i", "id_a"), ("i", "j", "id_b")], name="walking_iso")


def split_idempotent() -> FinCategory:
    """``s: a -> b``, ``r: b -> a`` with ``r.s = id_a`` and ``e = s.r`` idempotent."""
    comp = {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b",
            ("s", "id_a"): "s", ("id_b", "s"): "s", ("r", "id_b"): "r", ("id_a", "r"): "r",
            ("e", "id_b"): "e", ("id_b", "e"): "e",
            ("r", "s"): "id_a", ("s", "r"): "e", ("e", "e"): "e", ("e", "s"): "s", ("r", "e"): "r"}
    return FinCategory(["a", "b"],
                       [("id_a", "a", "a"), ("id_b", "b", "b"), ("s", "a", "b"), ("r", "b", "a"), ("e", "b", "b")],
                       {"a": "id_a", "b": "id_b"}, comp, name="split_idempotent")


def discrete(k: int) -> FinCategory:
    objs = [f"o{i}" for i in range(k)]
    return FinCategory(objs, [(f"id_{o}", o, o) for o in objs], {o: f"id_{o}" for o in objs},
                       [(f"id_{o}", f"id_{o}", f"id_{o}") for o in objs], name=f"discrete{k}")


def random_poset(seed: int, n: int, p: float = 0.4) -> FinCategory:
    rng = random.Random(seed)
    pts = [f"p{i}" for i in range(n)]
    covers = [(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return poset(pts, covers, name=f"random_poset_{seed}")


def random_monoid(seed: int, n: int = 3, k: int = 2, max_size: int = 8) -> FinCategory:
    rng = random.Random(seed)
    while True:
        gens = [tuple(rng.randrange(n) for _ in range(n)) for _ in range(k)]
        M = transformation_monoid(gens, n, name=f"random_monoid_{seed}")
        if len(M.arrows) <= max_size:
            return M
        k = 1


def categories() -> list[FinCategory]:
    """The presheaf corpus: groups, monoids, posets, small shapes, random tables."""
    idem = transformation_monoid([(0, 0)], 2, name="idempotent_monoid", labels={(0, 0): "e"})
    cats = [
        chain(1),
        cyclic_group(2), cyclic_group(3), cyclic_group(4),
        transformation_monoid([(1, 0, 2), (1, 2, 0)], 3, name="S3"),
        disjoint_union(cyclic_group(3), cyclic_group(3), name="C3+C3"),
        walking_iso(),
        idem,
        transformation_monoid([(0, 0, 1)], 3, name="nilpotent_monoid"),
        transformation_monoid([(0, 0), (1, 1)], 2, name="left_zero_monoid"),
        transformation_monoid([(1, 0), (0, 0)], 2, name="T2"),
        transformation_monoid([(1, 2, 2)], 3, name="cyclic_monoid_a3_eq_a2"),
        transformation_monoid([(0, 0, 2), (0, 1, 0)], 3, name="orthogonal_idempotents"),
        chain(2), chain(3), chain(4), chain(5),
        poset(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")], name="diamond"),
        poset(["d", "b", "c", "a"], [("d", "b"), ("d", "c"), ("b", "a"), ("c", "a")], name="square"),
        walking_arrow(), span(), cospan(), parallel_pair(), split_idempotent(), discrete(2),
        poset(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("b", "d")], name="N_poset"),
        poset(["a", "b", "c"], [("a", "b"), ("a", "c")], name="V_poset"),
        disjoint_union(chain(2), cyclic_group(2), name="arrow+C2"),
    ]
    cats += [random_poset(s, 4) for s in range(4)]
    cats += [random_monoid(s) for s in range(4)]
    return cats


def small_categories(max_arrows: int = 5) -> list[FinCategory]:
    return [C for C in categories() if len(C.arrows) <= max_arrows]


def sites() -> list[tuple[str, Site]]:
    """Corpus sites with trivial, dense and generated topologies."""
    out: list[tuple[str, Site]] = []
    for C in categories():
        out.append((f"{C.name}/trivial", Site(C, trivial_topology(C), check=False)))
        dense = GrothendieckTopology(C, stably_nonempty_covers(C))
        out.append((f"{C.name}/dense", Site(C, dense, check=False)))
    # a few hand-generated, non-dense topologies
    W = walking_arrow()
    out.append(("walking_arrow/cover_a_by_empty",
                Site(W, generate_topology(W, None, [generate_sieve(W, "a", [])]))))
    P = cospan()
    out.append(("cospan/f_covers", Site(P, generate_topology(P, None, [generate_sieve(P, "a", ["f"])]))))
    S = span()
    out.append(("span/b_empty", Site(S, generate_topology(S, None, [generate_sieve(S, "b", [])]))))
    D = poset(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")], name="diamond")
    out.append(("diamond/l_r_cover_t",
                Site(D, generate_topology(D, None, [generate_sieve(D, "t", ["l->t", "r->t"])]))))
    return out


def fork_frame() -> FiniteFrame:
    """``0 < a, b < c < 1`` with ``a & b = 0``: downsets of the cospan."""
    return FiniteFrame(["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")])


def frames() -> list[tuple[str, FiniteFrame]]:
    fs = [(f"chain{n}", FiniteFrame.chain(n)) for n in range(1, 6)]
    fs += [(f"boolean{k}", FiniteFrame.boolean(k)) for k in range(1, 4)]
    fs += [("fork", fork_frame()),
           ("V_downsets", FiniteFrame.downsets("abc", lambda x, y: x == y or (x == "a" and y in "bc"))),
           ("N_downsets", FiniteFrame.downsets(
               "abcd", lambda x, y: x == y or (x, y) in {("a", "c"), ("b", "c"), ("b", "d")})),
           ("chain2xchain3", FiniteFrame.product(FiniteFrame.chain(2), FiniteFrame.chain(3))),
           ("chain3xchain3", FiniteFrame.product(FiniteFrame.chain(3), FiniteFrame.chain(3))),
           ("fork_with_top", FiniteFrame(["0", "a", "b", "c", "d", "1"],
                                         [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "d"), ("d", "1")])),
           ("three_prong", FiniteFrame.downsets("abcd", lambda x, y: x == y or (y == "a" and x in "bcd"))),
           ("diamond_over_point", FiniteFrame(["0", "x", "a", "b", "1"],
                                              [("0", "x"), ("x", "a"), ("x", "b"), ("a", "1"), ("b", "1")])),
           ("chain2xchain4", FiniteFrame.product(FiniteFrame.chain(2), FiniteFrame.chain(4)))]
    seen, out = set(), []
    for name, A in fs:
        if name not in seen:
            seen.add(name)
            out.append((name, A))
    return out
