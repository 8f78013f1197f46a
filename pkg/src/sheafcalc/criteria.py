"""Combinatorial site conditions that predict the internal logic.

These are deliberately written as literal quantifier checks over arrows and
sieves so they stay independent of :mod:`sheafcalc.omega`.
"""

from __future__ import annotations

from itertools import combinations

from .coverage import _all_masks, _closed_masks
from .fincat import FinCategory, Sieve


def is_groupoid(C: FinCategory) -> bool:
    """Every arrow has a two-sided inverse."""
    for f in range(len(C.arrows)):
        d, c = C._dom[f], C._cod[f]
        if not any(C._comp[g][f] == C._id[d] and C._comp[f][g] == C._id[c]
                   for g in C._fanin[d] if C._dom[g] == c):
            return False
    return True


def right_ore(C: FinCategory) -> bool:
    """Every cospan ``b -f-> a <-g- c`` completes to a commuting square."""
    for a in range(len(C.objects)):
        into = C._fanin[a]
        for f in into:
            for g in into:
                b, c = C._dom[f], C._dom[g]
                if not any(C._dom[h] == C._dom[k] and C._comp[f][h] == C._comp[g][k]
                           for h in C._fanin[b] for k in C._fanin[c]):
                    return False
    return True


def gd_factorization(C: FinCategory) -> bool:
    """Of any two arrows with a common codomain, one factors through the other."""
    for a in range(len(C.objects)):
        for f, g in combinations(C._fanin[a], 2):
            if not (C._principal[g] >> C._bit[f] & 1 or C._principal[f] >> C._bit[g] & 1):
                return False
    return True


def gd_site_criterion(site) -> bool:
    """For closed R, S on c the arrows along which R and S become comparable
    form a covering sieve."""
    C, J = site.category, site.topology
    for c in range(len(C.objects)):
        closed = _closed_masks(J, c)
        for R in closed:
            for S in closed:
                comparable = 0
                for i, f in enumerate(C._fanin[c]):
                    r, s = C._pullback(f, R), C._pullback(f, S)
                    if not r & ~s or not s & ~r:
                        comparable |= 1 << i
                if comparable not in J._cov[c]:
                    return False
    return True


def is_stably_nonempty(C: FinCategory, S: Sieve) -> bool:
    return all(C._pullback(f, S.mask) for f in C._fanin[S.obj])


def is_indecomposable_bruteforce(C: FinCategory, R: Sieve) -> bool:
    """No two proper subsieves of ``R`` have union ``R``."""
    proper = [m for m in _all_masks(C, R.obj) if m & ~R.mask == 0 and m != R.mask]
    return not any(s | t == R.mask for s, t in combinations(proper, 2))


def is_indecomposable_char(C: FinCategory, R: Sieve) -> bool:
    """Any two members of ``R`` factor through a common member."""
    members = C._members(R.obj, R.mask)
    return all(any(C._principal[h] & (1 << C._bit[f]) and C._principal[h] & (1 << C._bit[g])
                   for h in members)
               for f in members for g in members)


def presheaf_negation(C: FinCategory, R: Sieve) -> Sieve:
    """``{f | f*(R) is empty}``."""
    m = 0
    for i, f in enumerate(C._fanin[R.obj]):
        if not C._pullback(f, R.mask):
            m |= 1 << i
    return Sieve(C, R.obj, m)


def kp_presheaf_criterion(C: FinCategory) -> bool:
    """Presheaves on ``C`` satisfy Kreisel-Putnam iff every sieve of the form
    ``{f | f*(R) is empty}`` is indecomposable."""
    return all(is_indecomposable_char(C, presheaf_negation(C, Sieve(C, c, m)))
               for c in range(len(C.objects)) for m in _all_masks(C, c))


def kp_stably_nonempty_criterion(C: FinCategory) -> bool:
    """Every stably non-empty sieve is indecomposable.

    Sufficient for Kreisel-Putnam but not necessary: on the cospan category it
    fails while the presheaf topos does satisfy the axiom.
    """
    for c in range(len(C.objects)):
        for m in _all_masks(C, c):
            S = Sieve(C, c, m)
            if is_stably_nonempty(C, S) and not is_indecomposable_char(C, S):
                return False
    return True


def stably_nonempty_covers(C: FinCategory) -> list[set[int]]:
    """Covering families of the double-negation topology on presheaves."""
    return [{m for m in _all_masks(C, c) if is_stably_nonempty(C, Sieve(C, c, m))}
            for c in range(len(C.objects))]
