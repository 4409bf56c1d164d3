"""Slow, independent enumerators used to cross-check :mod:`kottwitz.sets`.

Nothing here is clever on purpose.  The polygon walk knows only type A,
the Levi-path construction builds Newton points from cocharacters instead of
solving for them, and cone membership is decided by trying every basis.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

from .lattice import RatVector, dot, express_in_span, inverse, rank_of, ratvec, vadd, vscale, vsub
from .sets import (
    GroupDatum,
    HNVerdict,
    central_projection,
    levi_projection,
    newton_of_basic,
    sharp,
    standard_levi_masks,
)


class OracleError(RuntimeError):
    pass


SlopeSequence = Tuple[Fraction, ...]


def _hodge(mu: Sequence[int]) -> List[int]:
    mu = sorted(mu, reverse=True)
    out = [0]
    for m in mu:
        out.append(out[-1] + m)
    return out


def gln_polygon_enumerate(n: int, mu: Sequence[int]) -> Set[SlopeSequence]:
    """Concave polygons from (0,0) to (n, sum mu) with integral breakpoints
    lying on or below the Hodge polygon of mu, as slope sequences."""
    if n > 8:
        raise OracleError("polygon oracle is limited to n <= 8")
    if len(mu) != n:
        raise OracleError("mu must have n entries")
    hodge = _hodge(mu)
    total = hodge[-1]
    lowest = min(mu) if mu else 0
    out: Set[SlopeSequence] = set()

    def walk(x: int, y: int, prev: Optional[Fraction], slopes: List[Fraction]):
        if x == n:
            if y == total:
                out.add(tuple(slopes))
            return
        for x2 in range(x + 1, n + 1):
            for y2 in range(y + lowest * (x2 - x), hodge[x2] + 1):
                s = Fraction(y2 - y, x2 - x)
                if prev is not None and s >= prev:
                    continue
                walk(x2, y2, s, slopes + [s] * (x2 - x))

    walk(0, 0, None, [])
    return out


_BASES: dict = {}


def _independent_subfamilies(gens: Tuple[RatVector, ...]):
    """Every linearly independent subfamily, paired with a left inverse (A^T A)^-1 A^T."""
    if gens not in _BASES:
        found = []
        dim = rank_of(list(gens)) if gens else 0
        for k in range(1, dim + 1):
            for subset in combinations(gens, k):
                if rank_of(list(subset)) < k:
                    continue
                gram = [[dot(a, b) for b in subset] for a in subset]
                inv = inverse(gram)
                n = len(subset[0])
                left = [[sum(inv[i][j] * subset[j][c] for j in range(k)) for c in range(n)] for i in range(k)]
                found.append((subset, left))
        _BASES[gens] = found
    return _BASES[gens]


def cone_member_bruteforce(x: Sequence, generators: Sequence[Sequence]) -> bool:
    """Caratheodory: x is in the cone iff it is a nonnegative combination of
    some linearly independent subfamily of the generators."""
    x = ratvec(x)
    if all(c == 0 for c in x):
        return True
    gens = tuple(ratvec(g) for g in generators)
    for subset, left in _independent_subfamilies(gens):
        coeffs = [dot(row, x) for row in left]
        if any(c < 0 for c in coeffs):
            continue
        # the least-squares coefficients reproduce x exactly iff x lies in the span
        if all(sum(c * g[i] for c, g in zip(coeffs, subset)) == x[i] for i in range(len(x))):
            return True
    return False


def leq_bruteforce(gd: GroupDatum, nu1: Sequence, nu2: Sequence) -> bool:
    # the positive coroots and the simple coroots span the same cone
    return cone_member_bruteforce(vsub(ratvec(nu2), ratvec(nu1)), gd.rd.simple_coroots)


def default_bound(gd: GroupDatum, delta: Sequence) -> int:
    vals = [dot(delta, w) for w in gd.rel.omega_tilde]
    return math.ceil(max(vals)) + 1 if vals else 1


def levi_path_enumerate(
    gd: GroupDatum,
    mu_lift: Sequence[int],
    delta: Sequence,
    coefficient_bound: Optional[int] = None,
    check_stability: bool = False,
) -> Set[Tuple[RatVector, Tuple[int, ...]]]:
    """Build candidate Newton points ``v = avg(pr_M(mu_lift + xi - sum c_a gamma_a))``
    for every standard Levi M and integer coefficients outside M, and keep
    those that are dominant, have centralizer exactly M, and lie below delta.

    Returns ``(nu, kappa coordinates)`` pairs; kappa is the image of mu_lift.
    """
    mu_lift = tuple(int(x) for x in mu_lift)
    delta = ratvec(delta)
    bound = default_bound(gd, delta) if coefficient_bound is None else coefficient_bound
    result = _levi_path(gd, mu_lift, delta, bound)
    if check_stability:
        wider = _levi_path(gd, mu_lift, delta, bound + 2)
        if wider != result:
            raise OracleError(f"coefficient bound {bound} is not stable: {len(result)} vs {len(wider)}")
    return result


def _levi_path(gd, mu_lift, delta, bound):
    rel = gd.rel
    kappa = sharp(gd, mu_lift).coords
    if newton_of_basic(gd, mu_lift) != central_projection(gd, delta):
        return set()
    start = vadd(mu_lift, gd.xi)
    start_avg = gd.average(start)
    coroots = [gd.rd.simple_coroots[rel.orbits[k][0]] for k in range(rel.size)]
    reps = [gd.rd.simple_roots[rel.orbits[k][0]] for k in range(rel.size)]
    out = set()
    below = {}
    for mask in standard_levi_masks(gd):
        outside = [k for k in range(rel.size) if k not in mask]
        centers = [math.floor(dot(start_avg, rel.omega_tilde[k])) for k in outside]
        ranges = [range(m - bound, m + bound + 1) for m in centers]
        # lam -> avg(pr_M(lam)) is linear, so project the start point and each coroot once;
        # the box is then walked in integers scaled by a common denominator
        base = gd.average(levi_projection(gd, start, mask))
        steps = [gd.average(levi_projection(gd, coroots[k], mask)) for k in outside]
        den = math.lcm(*(Fraction(x).denominator for vec in [base] + steps for x in vec))
        base_i = [int(x * den) for x in base]
        steps_i = [[int(x * den) for x in vec] for vec in steps]
        for cs in product(*ranges):
            v_i = list(base_i)
            for c, step in zip(cs, steps_i):
                if c:
                    v_i = [a - c * b for a, b in zip(v_i, step)]
            pairings = [dot(v_i, r) for r in reps]
            if any(p < 0 for p in pairings):
                continue
            if frozenset(k for k, p in enumerate(pairings) if p == 0) != mask:
                continue
            v = tuple(Fraction(a, den) for a in v_i)
            if not gd.rd.is_dominant(v) or rel.levi_mask(v) != mask:
                continue
            if v not in below:
                below[v] = leq_bruteforce(gd, v, delta)
            if not below[v]:
                continue
            out.add((v, kappa))
    return out


def hn_decomposable_exhaustive(gd: GroupDatum, nu: Sequence, delta: Sequence) -> HNVerdict:
    """Try every strict standard Levi containing the centralizer of nu."""
    nu = ratvec(nu)
    cent = gd.rel.levi_mask(nu)
    if len(cent) == gd.rel.size:
        return HNVerdict("basic")
    diff = vsub(ratvec(delta), nu)
    best: Optional[FrozenSet[int]] = None
    for mask in standard_levi_masks(gd):
        if len(mask) == gd.rel.size or not cent <= mask:
            continue
        gens = [gd.rel.averaged_simple_coroots[k] for k in sorted(mask)]
        ok = all(c == 0 for c in diff) if not gens else express_in_span(gens, diff) is not None
        if ok and (best is None or len(mask) < len(best)):
            best = mask
    return HNVerdict("decomposable", best) if best is not None else HNVerdict("indecomposable")
