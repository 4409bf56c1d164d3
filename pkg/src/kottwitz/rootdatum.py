"""Based root data, Weyl group operations and Galois-relative data.

Characters and cocharacters are both written in coordinates of ``Z^rank``;
the pairing between them is the dot product.  Relative objects (Newton
points, the functionals ``omega_tilde``) live inside the absolute rational
spaces as Galois-invariant vectors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .lattice import (
    IntMatrix,
    IntVector,
    RatVector,
    dot,
    express_in_span,
    format_vector,
    inverse,
    rank_of,
    ratvec,
    solve,
    vadd,
    vscale,
    vsub,
)

MAX_ROOTS = 1200


class RootDatumError(ValueError):
    """Raised when simple data cannot be closed into a finite root system."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.witness}"


def reflect_char(chi: Sequence, root: Sequence, coroot: Sequence) -> tuple:
    return vsub(chi, vscale(dot(coroot, chi), root))


def reflect_cochar(lam: Sequence, root: Sequence, coroot: Sequence) -> tuple:
    return vsub(lam, vscale(dot(lam, root), coroot))


@dataclass(frozen=True)
class BasedRootDatum:
    rank: int
    roots: Tuple[IntVector, ...]
    coroots: Tuple[IntVector, ...]
    simple_indices: Tuple[int, ...]

    @classmethod
    def from_simple(
        cls,
        rank: int,
        simple_roots: Sequence[Sequence[int]],
        simple_coroots: Sequence[Sequence[int]],
        max_roots: int = MAX_ROOTS,
    ) -> "BasedRootDatum":
        """Close the simple system under simple reflections.

        Roots are put in a canonical order when the result is a genuine
        based root system: simple roots first, then the other positive roots
        by height, then the negatives in the same order.
        """
        simple = [tuple(int(a) for a in s) for s in simple_roots]
        cosimple = [tuple(int(a) for a in s) for s in simple_coroots]
        if len(simple) != len(cosimple):
            raise RootDatumError("simple roots and simple coroots differ in number")
        for v in simple + cosimple:
            if len(v) != rank:
                raise RootDatumError(f"vector {v} does not have length {rank}")
        pairs: Dict[IntVector, IntVector] = {}
        queue = deque()
        for a, ac in zip(simple, cosimple):
            for r, rc in ((a, ac), (tuple(-x for x in a), tuple(-x for x in ac))):
                if r not in pairs:
                    pairs[r] = rc
                    queue.append(r)
        while queue:
            r = queue.popleft()
            rc = pairs[r]
            for a, ac in zip(simple, cosimple):
                s = reflect_char(r, a, ac)
                if s not in pairs:
                    if len(pairs) >= max_roots:
                        raise RootDatumError(
                            f"closure under simple reflections exceeds {max_roots} roots "
                            "(the simple data do not generate a finite root system)"
                        )
                    pairs[s] = reflect_cochar(rc, a, ac)
                    queue.append(s)
        order = _canonical_root_order(simple, list(pairs))
        roots = tuple(order)
        return cls(
            rank,
            roots,
            tuple(pairs[r] for r in roots),
            tuple(roots.index(s) for s in simple),
        )

    # -- basic accessors ----------------------------------------------------

    @property
    def simple_roots(self) -> Tuple[IntVector, ...]:
        return tuple(self.roots[i] for i in self.simple_indices)

    @property
    def simple_coroots(self) -> Tuple[IntVector, ...]:
        return tuple(self.coroots[i] for i in self.simple_indices)

    @property
    def n_simple(self) -> int:
        return len(self.simple_indices)

    @cached_property
    def coroot_of(self) -> Dict[IntVector, IntVector]:
        return dict(zip(self.roots, self.coroots))

    @cached_property
    def cartan(self) -> Tuple[Tuple[int, ...], ...]:
        """``cartan[i][j] = <alpha_i^vee, alpha_j>``."""
        s, c = self.simple_roots, self.simple_coroots
        return tuple(tuple(dot(c[i], s[j]) for j in range(len(s))) for i in range(len(s)))

    @cached_property
    def simple_coefficients(self) -> Dict[IntVector, RatVector]:
        """Coordinates of each root in the basis of simple roots."""
        s = self.simple_roots
        if not s:
            return {}
        out = {}
        for r in self.roots:
            rhs = [dot(c, r) for c in self.simple_coroots]
            out[r] = solve(self.cartan, rhs)
        return out

    @cached_property
    def positive_roots(self) -> Tuple[IntVector, ...]:
        return tuple(r for r in self.roots if all(c >= 0 for c in self.simple_coefficients[r]))

    @cached_property
    def positive_coroots(self) -> Tuple[IntVector, ...]:
        return tuple(self.coroot_of[r] for r in self.positive_roots)

    def pair(self, cochar: Sequence, char: Sequence):
        return dot(cochar, char)

    def is_dominant(self, v: Sequence) -> bool:
        return all(dot(v, b) >= 0 for b in self.simple_roots)


def _canonical_root_order(simple, roots):
    if not simple:
        return sorted(roots)
    basis_rows = [list(s) for s in simple]
    if rank_of(basis_rows) < len(simple):
        return sorted(roots)
    coeffs = {}
    for r in roots:
        c = express_in_span(simple, r)
        if c is None or any(x.denominator != 1 for x in c):
            return sorted(roots)
        if not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            return sorted(roots)
        coeffs[r] = tuple(int(x) for x in c)
    simple_set = set(simple)
    pos = [r for r in roots if sum(coeffs[r]) > 0 and r not in simple_set]
    pos.sort(key=lambda r: (sum(coeffs[r]), tuple(-x for x in coeffs[r])))
    ordered_pos = list(simple) + pos
    neg = [tuple(-x for x in r) for r in ordered_pos]
    return ordered_pos + neg


@dataclass(frozen=True)
class GaloisAction:
    """A finite-order automorphism acting on characters by ``generator``.

    Cocharacters carry the contragredient action ``(generator^-1)^T``.
    """

    generator: IntMatrix
    order: int

    @classmethod
    def trivial(cls, rank: int) -> "GaloisAction":
        return cls(IntMatrix.identity(rank), 1)

    @classmethod
    def from_permutation(cls, perm: Sequence[int], signs: Optional[Sequence[int]] = None) -> "GaloisAction":
        """Character action ``e_i -> sign_i * e_perm[i]``."""
        n = len(perm)
        signs = signs or [1] * n
        rows = [[0] * n for _ in range(n)]
        for i, (p, s) in enumerate(zip(perm, signs)):
            rows[p][i] = s
        m = IntMatrix.from_rows(rows, cols=n)
        order, power = 1, m
        while power != IntMatrix.identity(n):
            power = power @ m
            order += 1
        return cls(m, order)

    def is_trivial(self) -> bool:
        return self.generator == IntMatrix.identity(self.generator.rows)

    @cached_property
    def cochar_matrix(self) -> Tuple[Tuple[Fraction, ...], ...]:
        inv = inverse(self.generator.to_rows())
        n = self.generator.rows
        return tuple(tuple(inv[j][i] for j in range(n)) for i in range(n))

    def act_char(self, v: Sequence) -> tuple:
        return self.generator.apply(v)

    def act_cochar(self, v: Sequence) -> tuple:
        m = self.cochar_matrix
        out = tuple(dot(row, v) for row in m)
        if all(isinstance(a, int) for a in v):
            return tuple(int(x) for x in out)
        return out

    def char_orbit(self, v: Sequence) -> List[tuple]:
        out = [tuple(v)]
        for _ in range(self.order - 1):
            out.append(self.act_char(out[-1]))
        return out

    def cochar_orbit(self, v: Sequence) -> List[tuple]:
        out = [tuple(v)]
        for _ in range(self.order - 1):
            out.append(self.act_cochar(out[-1]))
        return out


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate(rd: BasedRootDatum, g: Optional[GaloisAction] = None) -> List[Violation]:
    """Check the root datum and Galois axioms; an empty list means valid."""
    out: List[Violation] = []
    n = rd.rank
    for v in list(rd.roots) + list(rd.coroots):
        if len(v) != n:
            out.append(Violation("dimension", f"vector {v} does not have length {n}"))
            return out
    if len(rd.roots) != len(rd.coroots):
        out.append(Violation("root/coroot bijection", "different numbers of roots and coroots"))
        return out
    if len(set(rd.roots)) != len(rd.roots):
        out.append(Violation("root/coroot bijection", "repeated root"))
    for r, c in zip(rd.roots, rd.coroots):
        if dot(c, r) != 2:
            out.append(
                Violation("<alpha^vee,alpha> != 2", f"root {r} with coroot {c} pairs to {dot(c, r)}")
            )
    if out:
        return out

    pairs = set(zip(rd.roots, rd.coroots))
    for a, ac in zip(rd.simple_roots, rd.simple_coroots):
        for r, c in zip(rd.roots, rd.coroots):
            image = (reflect_char(r, a, ac), reflect_cochar(c, a, ac))
            if image not in pairs:
                out.append(
                    Violation(
                        "simple reflection permutes Phi",
                        f"s_{a} sends ({r}, {c}) to {image}, not a root/coroot pair",
                    )
                )
                break

    if rank_of([list(s) for s in rd.simple_roots]) < rd.n_simple:
        out.append(Violation("Delta linearly independent", f"simple roots {rd.simple_roots}"))
        return out

    try:
        closure = BasedRootDatum.from_simple(n, rd.simple_roots, rd.simple_coroots)
        if set(zip(closure.roots, closure.coroots)) != pairs:
            extra = pairs - set(zip(closure.roots, closure.coroots))
            out.append(
                Violation(
                    "Phi = W.Delta",
                    f"{len(closure.roots)} roots generated by Delta vs {len(rd.roots)} given"
                    + (f"; e.g. {sorted(extra)[0][0]} is not generated" if extra else ""),
                )
            )
    except RootDatumError as exc:
        out.append(Violation("Phi = W.Delta", str(exc)))

    for r in rd.roots:
        c = express_in_span(rd.simple_roots, r)
        if c is None:
            out.append(Violation("positive roots are N-combinations of Delta", f"{r} not in span of Delta"))
            break
        if any(x.denominator != 1 for x in c) or not (
            all(x >= 0 for x in c) or all(x <= 0 for x in c)
        ):
            out.append(
                Violation(
                    "positive roots are N-combinations of Delta",
                    f"root {r} has coefficients {format_vector(c)}",
                )
            )
            break

    if g is not None:
        out.extend(_validate_galois(rd, g))
    return out


def _validate_galois(rd: BasedRootDatum, g: GaloisAction) -> List[Violation]:
    out = []
    n = rd.rank
    m = g.generator
    if m.rows != n or m.cols != n:
        return [Violation("Galois generator shape", f"expected {n}x{n}, got {m.rows}x{m.cols}")]
    if g.order < 1:
        return [Violation("Galois order", f"order {g.order} must be positive")]
    power = IntMatrix.identity(n)
    for _ in range(g.order):
        power = power @ m
    if power != IntMatrix.identity(n):
        return [Violation("generator^order = identity", f"generator^{g.order} != identity")]
    roots = set(rd.roots)
    for r, c in zip(rd.roots, rd.coroots):
        gr = g.act_char(r)
        if gr not in roots:
            out.append(Violation("Galois generator permutes Phi", f"{r} maps to {gr}"))
            return out
        gc = g.act_cochar(c)
        if tuple(gc) != rd.coroot_of[gr]:
            out.append(
                Violation(
                    "Galois generator commutes with root/coroot bijection",
                    f"coroot of {r} maps to {tuple(gc)}, expected {rd.coroot_of[gr]}",
                )
            )
            return out
    simple = set(rd.simple_roots)
    for s in rd.simple_roots:
        if g.act_char(s) not in simple:
            out.append(Violation("Galois generator fixes Delta", f"simple root {s} maps to {g.act_char(s)}"))
            break
    return out


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------


def apply_word(rd: BasedRootDatum, word: Sequence[int], v: Sequence) -> tuple:
    """Apply ``s_word[0] ... s_word[-1]`` to a cocharacter (rightmost first)."""
    s, c = rd.simple_roots, rd.simple_coroots
    out = tuple(v)
    for i in reversed(word):
        out = reflect_cochar(out, s[i], c[i])
    return out


def dominant_rep(rd: BasedRootDatum, v: Sequence) -> Tuple[tuple, Tuple[int, ...]]:
    """Dominant W-conjugate of a cocharacter and a reduced word carrying v to it.

    Returns ``(v_dom, word)`` with ``v_dom == apply_word(rd, word, v)``;
    simple reflections are indexed from 0.
    """
    s, c = rd.simple_roots, rd.simple_coroots
    cur = tuple(v)
    applied: List[int] = []
    while True:
        i = next((k for k, b in enumerate(s) if dot(cur, b) < 0), None)
        if i is None:
            return cur, tuple(reversed(applied))
        cur = reflect_cochar(cur, s[i], c[i])
        applied.append(i)


def w0_negate_dominant(rd: BasedRootDatum, nu: Sequence) -> tuple:
    """The dominant representative of ``-nu``, i.e. ``w0(-nu)`` for dominant nu."""
    return dominant_rep(rd, tuple(-a for a in nu))[0]


def weyl_orbit(rd: BasedRootDatum, v: Sequence, limit: int = 100_000) -> List[tuple]:
    s, c = rd.simple_roots, rd.simple_coroots
    start = tuple(v)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for a, ac in zip(s, c):
            nxt = reflect_cochar(cur, a, ac)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > limit:
                    raise RuntimeError("Weyl orbit exceeds limit")
                queue.append(nxt)
    return sorted(seen)


def regular_dominant_cocharacter(rd: BasedRootDatum) -> RatVector:
    """A cocharacter in the coroot span pairing to 1 with every simple root."""
    if rd.n_simple == 0:
        return ratvec([0] * rd.rank)
    # v = sum x_j alpha_j^vee with <v, alpha_i> = sum_j x_j cartan[j][i] = 1
    cartan_t = [[rd.cartan[j][i] for j in range(rd.n_simple)] for i in range(rd.n_simple)]
    x = solve(cartan_t, [1] * rd.n_simple)
    v = ratvec([0] * rd.rank)
    for xj, cj in zip(x, rd.simple_coroots):
        v = vadd(v, vscale(xj, cj))
    return v


def weyl_group_order(rd: BasedRootDatum) -> int:
    return len(weyl_orbit(rd, regular_dominant_cocharacter(rd)))


def two_rho(rd: BasedRootDatum) -> IntVector:
    out = (0,) * rd.rank
    for r in rd.positive_roots:
        out = vadd(out, r)
    return out


def fundamental_weights(rd: BasedRootDatum) -> Tuple[RatVector, ...]:
    """``omega_beta`` in the span of the roots with ``<gamma^vee, omega_beta> = delta``."""
    k = rd.n_simple
    if k == 0:
        return ()
    inv = inverse(rd.cartan)
    out = []
    for b in range(k):
        coeffs = [inv[j][b] for j in range(k)]
        w = ratvec([0] * rd.rank)
        for a, r in zip(coeffs, rd.simple_roots):
            w = vadd(w, vscale(a, r))
        out.append(w)
    return tuple(out)


def is_minuscule(rd: BasedRootDatum, mu: Sequence[int]) -> bool:
    if not rd.is_dominant(mu):
        raise ValueError(f"is_minuscule expects a dominant cocharacter, got {tuple(mu)}")
    return all(dot(mu, b) in (-1, 0, 1) for b in rd.roots)


def galois_average(rd: BasedRootDatum, g: GaloisAction, v: Sequence, kind: str = "cochar") -> RatVector:
    """Mean of ``v`` over the cyclic group generated by ``g``."""
    orbit = g.cochar_orbit(v) if kind == "cochar" else g.char_orbit(v)
    total = ratvec([0] * len(v))
    for w in orbit:
        total = vadd(total, w)
    return tuple(x / len(orbit) for x in total)


# ---------------------------------------------------------------------------
# relative data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelativeData:
    orbits: Tuple[Tuple[int, ...], ...]
    omega_tilde: Tuple[RatVector, ...]
    averaged_simple_coroots: Tuple[RatVector, ...]
    two_rho: IntVector
    simple_roots: Tuple[IntVector, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.orbits)

    def orbit_name(self, k: int) -> str:
        return "+".join(f"a{i + 1}" for i in self.orbits[k])

    def representative(self, k: int) -> IntVector:
        """A simple root lying over the k-th relative simple root."""
        return self.simple_roots[self.orbits[k][0]]

    def pair_relative(self, v: Sequence, k: int):
        """``<v, alpha>`` for the k-th relative simple root (v Galois-invariant)."""
        return dot(v, self.representative(k))

    def omega_pairings(self, v: Sequence) -> Tuple[Fraction, ...]:
        return tuple(dot(v, w) for w in self.omega_tilde)

    @cached_property
    def relative_cartan(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """``[i][j] = <averaged coroot j, alpha_i>``."""
        return tuple(
            tuple(dot(self.averaged_simple_coroots[j], self.representative(i)) for j in range(self.size))
            for i in range(self.size)
        )

    def levi_mask(self, v: Sequence) -> frozenset:
        """Orbits on which the Galois-invariant cocharacter ``v`` pairs to zero."""
        return frozenset(k for k in range(self.size) if self.pair_relative(v, k) == 0)


def relative_data(rd: BasedRootDatum, g: GaloisAction) -> RelativeData:
    simple = rd.simple_roots
    index = {s: i for i, s in enumerate(simple)}
    seen = set()
    orbits = []
    for i, s in enumerate(simple):
        if i in seen:
            continue
        orb = sorted({index[t] for t in g.char_orbit(s)})
        seen.update(orb)
        orbits.append(tuple(orb))
    omegas = fundamental_weights(rd)
    omega_tilde = []
    averaged = []
    for orb in orbits:
        w = ratvec([0] * rd.rank)
        for i in orb:
            w = vadd(w, omegas[i])
        omega_tilde.append(w)
        averaged.append(galois_average(rd, g, rd.simple_coroots[orb[0]]))
    return RelativeData(tuple(orbits), tuple(omega_tilde), tuple(averaged), two_rho(rd), simple)


def leq_dominance(rel: RelativeData, nu1: Sequence, nu2: Sequence) -> bool:
    """``nu1 <= nu2``: the difference is a nonnegative combination of averaged simple coroots."""
    d = vsub(nu2, nu1)
    coeffs = rel.omega_pairings(d)
    if any(c < 0 for c in coeffs):
        return False
    residual = d
    for c, a in zip(coeffs, rel.averaged_simple_coroots):
        residual = vsub(residual, vscale(c, a))
    return all(x == 0 for x in residual)
