"""Built-in root data for the classical groups used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .lattice import IntMatrix
from .rootdatum import BasedRootDatum, GaloisAction


class CatalogError(ValueError):
    pass


def _e(n: int, i: int) -> Tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def _diff(n: int, i: int, j: int) -> Tuple[int, ...]:
    return tuple(int(k == i) - int(k == j) for k in range(n))


def _type_a_simple(n: int):
    return [_diff(n, i, i + 1) for i in range(n - 1)]


def gl(n: int):
    simple = _type_a_simple(n)
    return BasedRootDatum.from_simple(n, simple, simple), GaloisAction.trivial(n)


def _cartan_a(n: int):
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]


def sl(n: int):
    """SL_n with cocharacter lattice spanned by the simple coroots."""
    c = _cartan_a(n - 1)
    k = n - 1
    # coroots are the standard basis; alpha_j has coordinates <alpha_i^vee, alpha_j>
    simple = [tuple(c[i][j] for i in range(k)) for j in range(k)]
    cosimple = [_e(k, i) for i in range(k)]
    return BasedRootDatum.from_simple(k, simple, cosimple), GaloisAction.trivial(k)


def pgl(n: int):
    """PGL_n with character lattice spanned by the simple roots."""
    c = _cartan_a(n - 1)
    k = n - 1
    simple = [_e(k, j) for j in range(k)]
    cosimple = [tuple(c[i][j] for j in range(k)) for i in range(k)]
    return BasedRootDatum.from_simple(k, simple, cosimple), GaloisAction.trivial(k)


def sp(n: int):
    """Sp_2n in the standard coordinates (simply connected, type C_n)."""
    simple = _type_a_simple(n) + [tuple(2 * x for x in _e(n, n - 1))]
    cosimple = _type_a_simple(n) + [_e(n, n - 1)]
    return BasedRootDatum.from_simple(n, simple, cosimple), GaloisAction.trivial(n)


def gsp(n: int):
    """GSp_2n; the last coordinate is the similitude character."""
    m = n + 1
    simple = _type_a_simple(m)[: n - 1] + [tuple(2 * int(k == n - 1) - int(k == n) for k in range(m))]
    cosimple = _type_a_simple(m)[: n - 1] + [_e(m, n - 1)]
    return BasedRootDatum.from_simple(m, simple, cosimple), GaloisAction.trivial(m)


def so_split(big_n: int):
    """Split SO_N: type B_n for N = 2n+1, type D_n for N = 2n."""
    if big_n < 3:
        raise CatalogError("so_split needs N >= 3")
    n = big_n // 2
    base = _type_a_simple(n)
    if big_n % 2:
        simple = base + [_e(n, n - 1)]
        cosimple = base + [tuple(2 * x for x in _e(n, n - 1))]
    else:
        if n < 2:
            raise CatalogError("so_split needs N >= 3")
        last = tuple(int(k in (n - 2, n - 1)) for k in range(n))
        simple = base + [last]
        cosimple = base + [last]
    return BasedRootDatum.from_simple(n, simple, cosimple), GaloisAction.trivial(n)


def u_quasisplit(n: int):
    """Quasi-split unitary group: GL_n data with Frobenius acting by ``-w0``."""
    rd, _ = gl(n)
    g = GaloisAction.from_permutation([n - 1 - i for i in range(n)], [-1] * n)
    return rd, g


def res_gl(n: int, d: int):
    """Restriction of scalars of GL_n along an unramified extension of degree d."""
    size = n * d
    simple = []
    for b in range(d):
        simple += [_diff(size, b * n + i, b * n + i + 1) for i in range(n - 1)]
    rd = BasedRootDatum.from_simple(size, simple, simple)
    perm = [((i // n + 1) % d) * n + i % n for i in range(size)]
    return rd, GaloisAction.from_permutation(perm)


BUILDERS: Dict[str, Tuple[Callable, int]] = {
    "gl": (gl, 1),
    "sl": (sl, 1),
    "pgl": (pgl, 1),
    "sp": (sp, 1),
    "gsp": (gsp, 1),
    "so_split": (so_split, 1),
    "u_quasisplit": (u_quasisplit, 1),
    "res_gl": (res_gl, 2),
}

_MINIMUM = {"gl": 1, "sl": 2, "pgl": 2, "sp": 1, "gsp": 1, "so_split": 3, "u_quasisplit": 2}
MAX_RANK = 12


def build(name: str, params: Sequence[int]):
    """Return ``(BasedRootDatum, GaloisAction)`` for a catalog group."""
    if name not in BUILDERS:
        raise CatalogError(f"unknown catalog group {name!r}; expected one of {sorted(BUILDERS)}")
    fn, arity = BUILDERS[name]
    params = [int(p) for p in params]
    if len(params) != arity:
        raise CatalogError(f"{name} takes {arity} integer parameter(s), got {len(params)}")
    if name == "res_gl":
        if params[0] < 1 or params[1] < 1:
            raise CatalogError("res_gl needs n >= 1 and d >= 1")
        if params[0] * params[1] > MAX_RANK:
            raise CatalogError(f"rank {params[0] * params[1]} exceeds {MAX_RANK}")
    else:
        if params[0] < _MINIMUM[name]:
            raise CatalogError(f"{name} needs parameter >= {_MINIMUM[name]}")
        if params[0] > MAX_RANK + 1:
            raise CatalogError(f"{name}:{params[0]} is larger than supported")
    return fn(*params)


def suggested_mus(name: str, params: Sequence[int]) -> List[Tuple[int, ...]]:
    """Dominant minuscule cocharacters worth looking at for a catalog group."""
    rd, _ = build(name, params)
    if name in ("gl", "u_quasisplit"):
        n = params[0]
        return [tuple([1] * i + [0] * (n - i)) for i in range(n + 1)]
    if name == "pgl":
        k = params[0] - 1
        return [tuple([0] * k)] + [tuple(int(j == i) for j in range(k)) for i in range(k)]
    if name in ("sl", "sp"):
        return [tuple([0] * rd.rank)]
    if name == "gsp":
        return [tuple([0] * rd.rank), tuple([1] * rd.rank)]
    if name == "so_split":
        n = rd.rank
        return [tuple([0] * n), tuple(int(i == 0) for i in range(n))]
    if name == "res_gl":
        n, d = params
        blocks = [tuple([1] * i + [0] * (n - i)) for i in range(n + 1)]
        out = []
        for combo in product(blocks, repeat=d):
            out.append(tuple(x for b in combo for x in b))
        return out
    return []


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: Tuple[int, ...]
    xi: Optional[Tuple[Fraction, ...]] = None

    @property
    def label(self) -> str:
        base = f"{self.name}:{','.join(str(p) for p in self.parameters)}"
        if self.xi is not None and any(self.xi):
            base += " xi=(" + ",".join(str(x) for x in self.xi) + ")"
        return base

    def build(self):
        return build(self.name, self.parameters)

    def mus(self) -> List[Tuple[int, ...]]:
        return suggested_mus(self.name, self.parameters)


def inner_form_gl(n: int, k: int) -> Tuple[Fraction, ...]:
    """Coweight ``xi`` for the inner form of GL_n with Hasse invariant k/n."""
    return tuple(Fraction(n - k, n) if i < k else Fraction(-k, n) for i in range(n))


def standard_catalog(max_rank: int = 5) -> List[CatalogEntry]:
    """The catalog swept by the acceptance suite."""
    out: List[CatalogEntry] = []
    out += [CatalogEntry("gl", (n,)) for n in range(1, max_rank + 1)]
    out += [CatalogEntry("sl", (n,)) for n in range(2, max_rank + 2)]
    out += [CatalogEntry("pgl", (n,)) for n in range(2, max_rank + 2)]
    out += [CatalogEntry("sp", (n,)) for n in range(1, max_rank + 1)]
    out += [CatalogEntry("gsp", (n,)) for n in range(1, max_rank)]
    out += [CatalogEntry("so_split", (big_n,)) for big_n in range(3, 2 * max_rank + 2)]
    out += [CatalogEntry("u_quasisplit", (n,)) for n in range(3, 6)]
    out.append(CatalogEntry("res_gl", (2, 2)))
    out.append(CatalogEntry("gl", (2,), inner_form_gl(2, 1)))
    out.append(CatalogEntry("gl", (3,), inner_form_gl(3, 1)))
    out.append(CatalogEntry("gl", (4,), inner_form_gl(4, 2)))
    return out
