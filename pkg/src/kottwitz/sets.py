"""Generalized Kottwitz sets and Hodge-Newton decomposability.

A class ``[b]`` is recorded through its complete invariant pair: the Newton
point ``nu`` (a dominant Galois-invariant rational cocharacter) and the
Kottwitz invariant ``kappa`` in the Galois coinvariants of the algebraic
fundamental group.  Inner forms are handled by an explicit coweight ``xi``
on the quasi-split datum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .lattice import (
    FinAbGroup,
    IntVector,
    RatVector,
    coinvariants,
    dot,
    express_in_span,
    format_vector,
    is_zero,
    ratvec,
    solve,
    vadd,
    vscale,
    vsub,
)
from .rootdatum import (
    BasedRootDatum,
    GaloisAction,
    RelativeData,
    Violation,
    galois_average,
    is_minuscule,
    leq_dominance,
    relative_data,
    validate,
    w0_negate_dominant,
    weyl_orbit,
)


class KottwitzError(ValueError):
    pass


class InvalidDatum(KottwitzError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class ParameterError(KottwitzError):
    pass


class PreconditionError(KottwitzError):
    pass


# ---------------------------------------------------------------------------
# group data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupDatum:
    rd: BasedRootDatum
    g: GaloisAction
    rel: RelativeData
    xi: RatVector
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def make(cls, rd, g=None, xi=None, name="", check=True) -> "GroupDatum":
        g = g or GaloisAction.trivial(rd.rank)
        if check:
            bad = validate(rd, g)
            if bad:
                raise InvalidDatum(bad)
        xi = ratvec(xi) if xi is not None else ratvec([0] * rd.rank)
        if len(xi) != rd.rank:
            raise InvalidDatum([Violation("xi dimension", f"xi has length {len(xi)}, rank is {rd.rank}")])
        if not is_zero(xi):
            if express_in_span(rd.simple_coroots, xi) is None:
                raise InvalidDatum([Violation("xi in span of coroots", f"xi = {format_vector(xi)}")])
            for r in rd.simple_roots:
                if dot(xi, r).denominator != 1:
                    raise InvalidDatum(
                        [Violation("xi pairs integrally with roots", f"<xi, {r}> = {dot(xi, r)}")]
                    )
        return cls(rd, g, relative_data(rd, g), xi, name)

    def with_xi(self, xi, name=None) -> "GroupDatum":
        return GroupDatum.make(self.rd, self.g, xi, name if name is not None else self.name, check=False)

    @property
    def quasi_split(self) -> bool:
        return is_zero(self.xi)

    @property
    def all_orbits(self) -> FrozenSet[int]:
        return frozenset(range(self.rel.size))

    def average(self, v: Sequence) -> RatVector:
        return galois_average(self.rd, self.g, v)

    @property
    def xi_average(self) -> RatVector:
        if "xi_avg" not in self._cache:
            self._cache["xi_avg"] = self.average(self.xi)
        return self._cache["xi_avg"]


@dataclass(frozen=True)
class Pi1Element:
    group: FinAbGroup
    coords: IntVector

    def __add__(self, other: "Pi1Element") -> "Pi1Element":
        return Pi1Element(self.group, self.group.add(self.coords, other.coords))

    def __neg__(self) -> "Pi1Element":
        return Pi1Element(self.group, self.group.neg(self.coords))

    def __sub__(self, other: "Pi1Element") -> "Pi1Element":
        return self + (-other)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def pi1_gamma(gd: GroupDatum) -> FinAbGroup:
    """Galois coinvariants of ``X_*(T) / <coroots>``."""
    if "pi1" not in gd._cache:
        n = gd.rd.rank
        relations = [list(c) for c in gd.rd.simple_coroots]
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            relations.append([int(x) for x in vsub(gd.g.act_cochar(e), e)])
        gd._cache["pi1"] = coinvariants(n, relations)
    return gd._cache["pi1"]


def sharp(gd: GroupDatum, lam: Sequence[int]) -> Pi1Element:
    group = pi1_gamma(gd)
    if any(Fraction(x).denominator != 1 for x in lam):
        raise ParameterError(f"{format_vector(lam)} is not an integral cocharacter")
    return Pi1Element(group, group.project([int(x) for x in lam]))


def pi1_zero(gd: GroupDatum) -> Pi1Element:
    group = pi1_gamma(gd)
    return Pi1Element(group, group.zero())


def levi_projection(gd: GroupDatum, lam: Sequence, mask: FrozenSet[int]) -> RatVector:
    """Project along the coroots of the standard Levi ``mask`` onto ``<Phi_M>^perp``."""
    simple_pos = [i for k in sorted(mask) for i in gd.rel.orbits[k]]
    lam = ratvec(lam)
    if not simple_pos:
        return lam
    roots = [gd.rd.simple_roots[i] for i in simple_pos]
    coroots = [gd.rd.simple_coroots[i] for i in simple_pos]
    # sum_j c_j <coroot_j, root_i> = <lam, root_i>
    system = [[dot(coroots[j], roots[i]) for j in range(len(roots))] for i in range(len(roots))]
    c = solve(system, [dot(lam, r) for r in roots])
    out = lam
    for cj, cv in zip(c, coroots):
        out = vsub(out, vscale(cj, cv))
    return out


def central_projection(gd: GroupDatum, lam: Sequence) -> RatVector:
    return levi_projection(gd, lam, gd.all_orbits)


def adjoint_image(gd: GroupDatum, lam: Sequence) -> RatVector:
    """Component of ``lam`` in the rational coroot span (its image for the adjoint group)."""
    return vsub(ratvec(lam), central_projection(gd, lam))


def newton_of_basic(gd: GroupDatum, lam: Sequence) -> RatVector:
    """Newton point of the basic class with Kottwitz invariant ``sharp(lam)``."""
    return gd.average(central_projection(gd, lam))


# ---------------------------------------------------------------------------
# classes and sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KottwitzClass:
    nu: RatVector
    kappa: Pi1Element
    levi_mask: FrozenSet[int]
    n_orbits: int

    @property
    def basic(self) -> bool:
        return len(self.levi_mask) == self.n_orbits

    def key(self):
        return (self.nu, self.kappa.coords)


@dataclass(frozen=True)
class HNVerdict:
    kind: str  # "basic", "decomposable", "indecomposable"
    witness: Optional[FrozenSet[int]] = None

    @property
    def decomposable(self) -> Optional[bool]:
        return None if self.kind == "basic" else self.kind == "decomposable"

    def json_value(self):
        return "basic" if self.kind == "basic" else self.kind == "decomposable"


@dataclass(frozen=True)
class KottwitzSet:
    gd: GroupDatum = field(repr=False)
    epsilon: Pi1Element
    delta: RatVector
    xi: RatVector
    elements: Tuple[KottwitzClass, ...]
    basic_index: Optional[int]
    hn_verdicts: Tuple[HNVerdict, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def newton_points(self) -> List[RatVector]:
        return [c.nu for c in self.elements]

    @property
    def basic(self) -> Optional[KottwitzClass]:
        return None if self.basic_index is None else self.elements[self.basic_index]


def _check_newton_input(gd: GroupDatum, delta: Sequence) -> RatVector:
    delta = ratvec(delta)
    if len(delta) != gd.rd.rank:
        raise ParameterError(f"delta has length {len(delta)}, rank is {gd.rd.rank}")
    if not gd.rd.is_dominant(delta):
        raise ParameterError(f"delta = {format_vector(delta)} is not dominant")
    if gd.average(delta) != delta:
        raise ParameterError(f"delta = {format_vector(delta)} is not Galois-invariant")
    return delta


def _face_candidates(gd: GroupDatum, support: Tuple[int, ...], delta: RatVector, shift: RatVector):
    """Newton points whose relative support is exactly ``support``.

    ``shift`` is ``mu_lift^avg + xi^avg``; the integers
    ``n_a = <shift - v, omega_tilde_a>`` for ``a`` in the support pin ``v`` down
    on the face where the other relative simple roots vanish.
    """
    rel = gd.rel
    size = rel.size
    S = list(support)
    T = [k for k in range(size) if k not in support]
    R = rel.relative_cartan
    k_vals = [dot(vsub(shift, delta), w) for w in rel.omega_tilde]
    d_vals = [dot(delta, w) for w in rel.omega_tilde]
    delta_pair = [rel.pair_relative(delta, k) for k in range(size)]

    # c_T = e - F n_S
    if T:
        R_TT = [[R[i][j] for j in T] for i in T]
        rhs_const = [delta_pair[i] + sum(R[i][a] * k_vals[a] for a in S) for i in T]
        e = solve(R_TT, rhs_const)
        F_cols = {a: solve(R_TT, [R[i][a] for i in T]) for a in S}
    else:
        e, F_cols = (), {}

    zero = ratvec([0] * gd.rd.rank)
    v0 = delta
    for a in S:
        v0 = vadd(v0, vscale(k_vals[a], rel.averaged_simple_coroots[a]))
    for t_pos, t in enumerate(T):
        v0 = vsub(v0, vscale(e[t_pos], rel.averaged_simple_coroots[t]))
    w = {}
    for a in S:
        wa = vscale(-1, rel.averaged_simple_coroots[a])
        for t_pos, t in enumerate(T):
            wa = vadd(wa, vscale(F_cols[a][t_pos], rel.averaged_simple_coroots[t]))
        w[a] = wa

    ranges = []
    for a in S:
        lo = math.ceil(k_vals[a])
        hi = math.floor(k_vals[a] + d_vals[a])
        if hi < lo:
            return []
        ranges.append(range(lo, hi + 1))

    # integer affine forms for <v, alpha_s>, s in S
    reps = [rel.representative(s) for s in S]
    const = [dot(v0, r) for r in reps]
    lin = [[dot(w[a], r) for a in S] for r in reps]
    denom = 1
    for x in const + [y for row in lin for y in row]:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    const_i = [int(x * denom) for x in const]
    lin_i = [[int(y * denom) for y in row] for row in lin]

    found = []
    for ns in product(*ranges):
        if all(c + sum(l * n for l, n in zip(row, ns)) > 0 for c, row in zip(const_i, lin_i)):
            v = v0
            for a, n in zip(S, ns):
                v = vadd(v, vscale(n, w[a]))
            found.append(v)
    return found


def enumerate_kottwitz(
    gd: GroupDatum, epsilon: Pi1Element, mu_lift: Sequence[int], delta: Sequence
) -> KottwitzSet:
    """Enumerate ``B(G, epsilon, delta)`` as a finite set of Newton points.

    ``mu_lift`` is an integral cocharacter with ``sharp(mu_lift) == epsilon``.
    A point ``v`` of the Newton chamber belongs to the set when ``delta - v``
    lies in the span of the relative coroots and, for every relative simple
    root ``a`` with ``<v, a> != 0``, ``<delta - v, omega_tilde_a> >= 0`` and
    ``<mu_lift + xi - v, omega_tilde_a>`` (Galois averages) is an integer.
    """
    mu_lift = tuple(int(x) for x in mu_lift)
    if sharp(gd, mu_lift) != epsilon:
        raise ParameterError(
            f"epsilon {epsilon} is not the image of the lift {mu_lift} (which maps to {sharp(gd, mu_lift)})"
        )
    delta = _check_newton_input(gd, delta)
    elements: List[KottwitzClass] = []
    if newton_of_basic(gd, mu_lift) == central_projection(gd, delta):
        shift = vadd(gd.average(mu_lift), gd.xi_average)
        seen = set()
        for size in range(gd.rel.size + 1):
            for support in combinations(range(gd.rel.size), size):
                for v in _face_candidates(gd, support, delta, shift):
                    if v in seen:
                        continue
                    seen.add(v)
                    elements.append(KottwitzClass(v, epsilon, gd.rel.levi_mask(v), gd.rel.size))
    return _package(gd, epsilon, delta, elements)


def _package(gd, epsilon, delta, elements) -> KottwitzSet:
    elements = sorted(elements, key=KottwitzClass.key)
    basic_index = next((i for i, c in enumerate(elements) if c.basic), None)
    verdicts = tuple(is_hn_decomposable(gd, c, delta) for c in elements)
    return KottwitzSet(gd, epsilon, delta, gd.xi, tuple(elements), basic_index, verdicts)


def galois_average_mu(gd: GroupDatum, mu: Sequence[int]) -> RatVector:
    return gd.average(tuple(int(x) for x in mu))


def _check_mu(gd: GroupDatum, mu: Sequence) -> IntVector:
    if len(mu) != gd.rd.rank:
        raise ParameterError(f"mu has length {len(mu)}, rank is {gd.rd.rank}")
    if any(Fraction(x).denominator != 1 for x in mu):
        raise ParameterError(f"mu = {format_vector(mu)} is not integral")
    mu = tuple(int(x) for x in mu)
    if not gd.rd.is_dominant(mu):
        raise ParameterError(f"mu = {mu} is not dominant")
    return mu


def enumerate_B_mu(gd: GroupDatum, mu: Sequence[int]) -> KottwitzSet:
    """``B(G, mu) = B(G, mu^sharp, mu^avg)``; mu need not be minuscule."""
    mu = _check_mu(gd, mu)
    return enumerate_kottwitz(gd, sharp(gd, mu), mu, gd.average(mu))


def dual_delta(gd: GroupDatum, mu: Sequence[int]) -> RatVector:
    """``nu_b + (w0 mu^-1)^avg`` for the basic ``[b]`` in ``B(G, mu)``."""
    mu = _check_mu(gd, mu)
    nu_b = newton_of_basic(gd, mu)
    return vadd(nu_b, gd.average(w0_negate_dominant(gd.rd, mu)))


def enumerate_B_dual(gd: GroupDatum, mu: Sequence[int]) -> KottwitzSet:
    """``B(G, 0, nu_b mu^-1)``: index set of the HN stratification of the flag variety."""
    delta = dual_delta(gd, mu)
    zero = tuple([0] * gd.rd.rank)
    return enumerate_kottwitz(gd, pi1_zero(gd), zero, delta)


# ---------------------------------------------------------------------------
# HN decomposability and the minute criterion
# ---------------------------------------------------------------------------


def is_hn_decomposable(gd: GroupDatum, cls: KottwitzClass, delta: Sequence) -> HNVerdict:
    """Decide whether a non-basic class is HN decomposable relative to ``delta``.

    A strict standard Levi M works iff it contains the centralizer of nu and
    ``delta - nu`` is in the span of M's averaged coroots, so the smallest
    candidate is the centralizer mask together with the support of
    ``delta - nu`` in the averaged-coroot basis.
    """
    if cls.basic:
        return HNVerdict("basic")
    rel = gd.rel
    diff = vsub(ratvec(delta), cls.nu)
    coeffs = express_in_span(rel.averaged_simple_coroots, diff)
    if coeffs is None:
        return HNVerdict("indecomposable")
    mask = frozenset(cls.levi_mask) | frozenset(k for k, c in enumerate(coeffs) if c != 0)
    if len(mask) < rel.size:
        return HNVerdict("decomposable", mask)
    return HNVerdict("indecomposable")


def is_fully_hn_decomposable(ks: KottwitzSet) -> bool:
    return all(v.kind != "indecomposable" for v in ks.hn_verdicts)


def fractional_part(q: Fraction) -> Fraction:
    q = Fraction(q)
    return q - math.floor(q)


@dataclass(frozen=True)
class MinuteReport:
    values: Tuple[Fraction, ...]
    orbit_names: Tuple[str, ...]

    @property
    def minute(self) -> bool:
        return all(v <= 1 for v in self.values)

    @property
    def witnesses(self) -> List[Tuple[str, Fraction]]:
        return [(n, v) for n, v in zip(self.orbit_names, self.values) if v > 1]

    def __bool__(self) -> bool:
        return self.minute


def minute(gd: GroupDatum, mu: Sequence[int]) -> MinuteReport:
    """Per relative simple root, ``<mu^avg, omega_tilde> + {<xi^avg, omega_tilde>}``."""
    mu = _check_mu(gd, mu)
    mu_avg = gd.average(mu)
    vals = tuple(
        dot(mu_avg, w) + fractional_part(dot(gd.xi_average, w)) for w in gd.rel.omega_tilde
    )
    return MinuteReport(vals, tuple(gd.rel.orbit_name(k) for k in range(gd.rel.size)))


def admissibility_bound_check(gd: GroupDatum, mu: Sequence[int], nu: Sequence) -> bool:
    """Membership of ``[b]`` with Newton point nu in ``A(G, mu)``: ``nu <= mu^avg``."""
    mu = _check_mu(gd, mu)
    nu = _check_newton_input(gd, nu)
    return leq_dominance(gd.rel, nu, gd.average(mu))


# ---------------------------------------------------------------------------
# the inner form J_b and the HN stratification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Duality:
    gd_J: GroupDatum
    mu_inv: IntVector
    nu_b: RatVector
    kappa_b: Pi1Element
    dual_set: KottwitzSet  # B(G, 0, nu_b mu^-1)
    jb_set: KottwitzSet  # B(J_b, mu^-1)
    pairs: Tuple[Tuple[int, int], ...]  # (index in jb_set, index in dual_set)
    unmatched: Tuple[int, ...]

    @property
    def is_bijection(self) -> bool:
        return not self.unmatched and len(self.jb_set) == len(self.dual_set) == len(self.pairs)


def dualize_to_Jb(gd: GroupDatum, mu: Sequence[int]) -> Duality:
    """Match ``B(J_b, mu^-1)`` with ``B(G, 0, nu_b mu^-1)`` for basic ``[b]`` in ``B(G, mu)``.

    ``J_b`` is the inner form with ``xi_J = xi + adjoint image of kappa(b)``;
    a class of ``J_b`` with invariants ``(nu, kappa)`` corresponds to the class
    of G with ``(nu_b + nu, kappa(b) + kappa)``.
    """
    mu = _check_mu(gd, mu)
    nu_b = newton_of_basic(gd, mu)
    kappa_b = sharp(gd, mu)
    gd_J = gd.with_xi(vadd(gd.xi, adjoint_image(gd, mu)), name=(gd.name + "_J") if gd.name else "J_b")
    mu_inv = tuple(int(x) for x in w0_negate_dominant(gd.rd, mu))
    jb_set = enumerate_B_mu(gd_J, mu_inv)
    dual_set = enumerate_B_dual(gd, mu)
    index = {c.key(): i for i, c in enumerate(dual_set.elements)}
    pairs, unmatched = [], []
    for j, c in enumerate(jb_set.elements):
        image = (vadd(nu_b, c.nu), (kappa_b + c.kappa).coords)
        if image in index:
            pairs.append((j, index[image]))
        else:
            unmatched.append(j)
    return Duality(gd_J, mu_inv, nu_b, kappa_b, dual_set, jb_set, tuple(pairs), tuple(unmatched))


def covering_relations(rel: RelativeData, nus: Sequence[Sequence]) -> List[Tuple[int, int]]:
    """Edges ``(i, j)`` with ``nus[i] < nus[j]`` and nothing strictly between."""
    n = len(nus)
    less = [[i != j and leq_dominance(rel, nus[i], nus[j]) for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if less[i][j] and not any(less[i][k] and less[k][j] for k in range(n)):
                edges.append((i, j))
    return edges


@dataclass(frozen=True)
class Stratum:
    cls: KottwitzClass
    verdict: HNVerdict
    dimension: Fraction
    admissible: bool
    c1: Pi1Element
    bundle_slope: RatVector


@dataclass(frozen=True)
class StratificationReport:
    mu: IntVector
    flag_dimension: int
    strata: Tuple[Stratum, ...]
    hasse: Tuple[Tuple[int, int], ...]
    expected_c1: Pi1Element
    fully_hn_decomposable: bool

    @property
    def c1_consistent(self) -> bool:
        return all(s.c1 == self.expected_c1 for s in self.strata)


def flag_dimension(gd: GroupDatum, mu: Sequence[int]) -> int:
    return dot(mu, gd.rel.two_rho)


def stratification_report(gd: GroupDatum, mu: Sequence[int]) -> StratificationReport:
    """Harder-Narasimhan strata of the flag variety ``F(G, mu)`` for basic b.

    Indexed by ``B(G, 0, nu_b mu^-1)``; the stratum of ``[b']`` has dimension
    ``<mu, 2rho> - <nu_b', 2rho>``.  The basic index is the admissible locus.
    """
    mu = _check_mu(gd, mu)
    if not is_minuscule(gd.rd, mu):
        raise PreconditionError(
            f"mu = {mu} is not minuscule; the HN stratification is only described for minuscule mu"
        )
    ks = enumerate_B_dual(gd, mu)
    dim_f = flag_dimension(gd, mu)
    kappa_b = sharp(gd, mu)
    strata = []
    for c, verdict in zip(ks.elements, ks.hn_verdicts):
        strata.append(
            Stratum(
                c,
                verdict,
                dim_f - dot(c.nu, gd.rel.two_rho),
                c.basic,
                -c.kappa,
                w0_negate_dominant(gd.rd, c.nu),
            )
        )
    return StratificationReport(
        mu,
        dim_f,
        tuple(strata),
        tuple(covering_relations(gd.rel, ks.newton_points)),
        sharp(gd, mu) - kappa_b,
        is_fully_hn_decomposable(ks),
    )


# ---------------------------------------------------------------------------
# the Levi lemma used in the main theorem
# ---------------------------------------------------------------------------


def standard_levi_masks(gd: GroupDatum) -> List[FrozenSet[int]]:
    size = gd.rel.size
    return [frozenset(c) for k in range(size + 1) for c in combinations(range(size), k)]


def levi_lemma_counterexamples(gd: GroupDatum, mu: Sequence[int]) -> List[Tuple[FrozenSet[int], tuple]]:
    """Search for ``(M, mu1)`` violating: M-dominant ``mu1`` in ``W mu`` with
    ``<mu - mu1, omega_tilde_a> <= 0`` for all ``a`` outside M forces ``mu1 == mu``."""
    mu = _check_mu(gd, mu)
    orbit = weyl_orbit(gd.rd, mu)
    rel = gd.rel
    bad = []
    for mask in standard_levi_masks(gd):
        simple_m = [gd.rd.simple_roots[i] for k in mask for i in rel.orbits[k]]
        outside = [k for k in range(rel.size) if k not in mask]
        for mu1 in orbit:
            if any(dot(mu1, b) < 0 for b in simple_m):
                continue
            diff = vsub(mu, mu1)
            if all(dot(diff, rel.omega_tilde[k]) <= 0 for k in outside) and tuple(mu1) != mu:
                bad.append((mask, tuple(mu1)))
    return bad
