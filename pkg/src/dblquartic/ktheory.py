"""Numerical K-theory of the resolved fivefold through Hirzebruch-Riemann-Roch.

Chern characters live in the ring of ``PE``; integration over the fivefold is
integration over ``PE`` against its class ``2H + 2h``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .chow import InconsistencyError, build_space, integrate, todd
from .cohomology import (
    DIVISOR_CLASS,
    Block,
    FormalObject,
    LineBundle,
    NotComputableError,
    PushZ,
    Shift,
)
from .exactalg import GradedClass, exp_series

SPACE = "Xt"
CANONICAL = (-2, -2)


@dataclass(frozen=True)
class KClass:
    chern_character: GradedClass

    @property
    def rank(self) -> int:
        r = self.chern_character.constant_term()
        if r.denominator != 1:
            raise InconsistencyError("non-integral rank")
        return int(r)

    def __add__(self, other: "KClass") -> "KClass":
        return KClass(self.chern_character + other.chern_character)

    def __sub__(self, other: "KClass") -> "KClass":
        return KClass(self.chern_character - other.chern_character)

    def __mul__(self, n: int) -> "KClass":
        return KClass(self.chern_character * n)

    __rmul__ = __mul__

    def __neg__(self) -> "KClass":
        return KClass(-self.chern_character)


def _space():
    return build_space(SPACE)


def _divisor(a, b) -> GradedClass:
    return _space().divisor(a, b)


@lru_cache(maxsize=4096)
def k_class(obj: FormalObject, divisor: tuple = DIVISOR_CLASS) -> KClass:
    if isinstance(obj, Block):
        raise NotComputableError("opaque block has no K-class here")
    if isinstance(obj, Shift):
        return k_class(obj.inner, divisor) * (-1 if obj.n % 2 else 1)
    if isinstance(obj, LineBundle):
        return KClass(exp_series(_divisor(obj.a, obj.b)))
    if isinstance(obj, PushZ):
        z = _divisor(*divisor)
        return KClass(exp_series(_divisor(obj.a, obj.b)) * (1 - exp_series(-z)))
    raise TypeError(f"not a formal object: {obj!r}")


@lru_cache(maxsize=1)
def _todd_xt() -> GradedClass:
    return todd(_space())


def euler_characteristic(cls: KClass) -> int:
    val = integrate(_space(), cls.chern_character * _todd_xt())
    if val.denominator != 1:
        raise InconsistencyError(f"non-integral Euler characteristic {val}")
    return int(val)


def pairing_classes(e: KClass, f: KClass) -> int:
    return euler_characteristic(KClass(e.chern_character.dual() * f.chern_character))


@lru_cache(maxsize=1)
def _gram():
    """Pairing matrix on the normal monomial basis: ``int m_i m_j Td``."""
    space = _space()
    basis = [m for d in range(space.dimension + 1) for m in space.ring.normal_monomials(d)]
    td = _todd_xt()
    monos = [GradedClass(space.ring, {m: 1}) for m in basis]
    gram = [[integrate(space, a * b * td) for b in monos] for a in monos]
    return basis, gram


@lru_cache(maxsize=8192)
def _left_vector(e: FormalObject, divisor: tuple) -> tuple:
    basis, gram = _gram()
    dual = k_class(e, divisor).chern_character.dual()
    coeffs = [dual.coefficient(m) for m in basis]
    return tuple(sum(c * row[j] for c, row in zip(coeffs, gram) if c) for j in range(len(basis)))


@lru_cache(maxsize=65536)
def euler_pairing(e: FormalObject, f: FormalObject, divisor: tuple = DIVISOR_CLASS) -> int:
    """``chi(E, F) = sum (-1)^i dim Hom^i(E, F)``."""
    basis, _ = _gram()
    w = _left_vector(e, divisor)
    ch = k_class(f, divisor).chern_character
    val = sum(x * ch.coefficient(m) for x, m in zip(w, basis) if x)
    if val.denominator != 1:
        raise InconsistencyError(f"non-integral Euler pairing {val}")
    return int(val)


def mutation_k_check(e: FormalObject, f: FormalObject, result: FormalObject, side: str,
                     divisor: tuple = DIVISOR_CLASS) -> bool:
    """Check the class of a mutation of ``f`` through ``e``.

    Left: ``[F] - chi(E, F)[E]``; right: ``[F] - chi(F, E)[E]``.
    """
    if side == "left":
        chi = euler_pairing(e, f, divisor)
    elif side == "right":
        chi = euler_pairing(f, e, divisor)
    else:
        raise ValueError("side must be 'left' or 'right'")
    expected = k_class(f, divisor) - k_class(e, divisor) * chi
    return expected.chern_character == k_class(result, divisor).chern_character


def serre_pairing_check(e: FormalObject, f: FormalObject) -> bool:
    """``chi(E, F) = (-1)^dim chi(F, E (x) omega)`` on the fivefold."""
    dim = _space().dimension
    lhs = euler_pairing(e, f)
    rhs = euler_pairing(f, e.twist(CANONICAL))
    return lhs == (-1) ** dim * rhs


def twisted_pairing_check(e: FormalObject, f: FormalObject, d) -> bool:
    return euler_pairing(e.twist(d), f.twist(d)) == euler_pairing(e, f)


# -- reports ---------------------------------------------------------------

def grid_objects(grid: int) -> list:
    rng = range(-grid, grid + 1)
    return [LineBundle(a, b) for a in rng for b in rng] + [PushZ(a, b) for a in rng for b in rng]


def hrr_mismatches(grid: int = 4) -> list[tuple[int, int]]:
    from .cohomology import coh_Xt

    O = LineBundle(0, 0)
    rng = range(-grid, grid + 1)
    return [(a, b) for a in rng for b in rng if euler_pairing(O, LineBundle(a, b)) != coh_Xt(a, b).euler()]


def pair_mismatches(grid: int = 2) -> tuple[int, list]:
    """Compare HRR with every exact Hom table over pairs of grid objects."""
    from .cohomology import hom_table

    objs = grid_objects(grid)
    bad, compared = [], 0
    for e in objs:
        for f in objs:
            t = hom_table(e, f)
            if not t.exact:
                continue
            compared += 1
            if t.euler() != euler_pairing(e, f):
                bad.append((str(e), str(f)))
    return compared, bad


def suite(grid: int = 4):
    from .report import DERIVED, TRIVIAL, check

    O = LineBundle(0, 0)
    out = [
        check("k.chi-examples", "chi(O, O), chi(O, O(H)), chi(O, O(H-2h))", [1, 6, 0],
              [euler_pairing(O, O), euler_pairing(O, LineBundle(1, 0)), euler_pairing(O, LineBundle(1, -2))],
              DERIVED),
        check("k.hrr-vs-oracle", f"HRR against the cohomology oracle, |a|,|b| <= {grid}", [],
              hrr_mismatches(grid), DERIVED, detail={"points": (2 * grid + 1) ** 2}),
    ]
    small = min(grid, 3)
    compared, bad = pair_mismatches(small)
    out.append(check("k.hrr-vs-hom-tables", f"HRR against exact Hom tables over object pairs, |coeffs| <= {small}",
                     [], bad, DERIVED, detail={"pairs": compared}))
    objs = grid_objects(1)
    twists = [(1, 0), (0, 1), (-1, 2)]
    tw_bad = [(str(e), str(f), d) for e in objs for f in objs for d in twists if not twisted_pairing_check(e, f, d)]
    out.append(check("k.twist-invariance", "chi(E(D), F(D)) = chi(E, F)", [], tw_bad, TRIVIAL))
    se_bad = [(str(e), str(f)) for e in objs for f in objs if not serre_pairing_check(e, f)]
    out.append(check("k.serre", "chi(E, F) = -chi(F, E(K)) on the fivefold", [], se_bad, DERIVED))
    z = PushZ(0, 0)
    out.append(check("k.mutation-examples", "class identities for three quoted mutations", [True, True, True],
                     [mutation_k_check(LineBundle(0, 1), LineBundle(1, 0), PushZ(1, 0), "left"),
                      mutation_k_check(z, O, LineBundle(-1, 1), "right"),
                      mutation_k_check(PushZ(1, 1), LineBundle(0, 2), LineBundle(1, 1), "left")], DERIVED))
    chi_self = [str(e) for e in grid_objects(grid) if euler_pairing(e, e) != 1]
    out.append(check("k.exceptional-numerical", f"chi(E, E) = 1 for line bundles and i*O_Z twists, |coeffs| <= {grid}",
                     [], chi_self, DERIVED))
    return out
