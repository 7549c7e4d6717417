"""Chow rings of the spaces in the quadric-bundle picture, with integration.

Every space is either a projective space, a product, a tower of projective
bundles of split (or filtered) bundles over ``P3``, or a divisor inside one of
those.  A divisor space shares the ring of its ambient bundle and integrates
through its fundamental class, so only classes restricted from the ambient are
representable.

Relative hyperplane convention on ``P(V) -> B`` (rank ``r``): the tautological
line ``O(-H)`` sits inside ``V``, so ``pushforward O(H) = V^dual`` and

    H^r + c_1(V) H^(r-1) + ... + c_r(V) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .exactalg import GradedClass, GradedRing, exp_series, invert_series

SPACE_NAMES = ("P3", "P5", "P1xP3", "PF", "PE", "Xt", "PEbar", "PG", "Xhat")

# Splittings over P3, as degrees of h.
LINE_PROJECTION_BUNDLE = (0, 0, -1)  # pushforward dual of O(H) from the blow-up of P5 along a line
QUADRIC_AMBIENT_BUNDLE = (-1, 0, 0, 1)  # rank-4 bundle whose projectivization holds the quadric bundle
SECTION_SUBBUNDLE = (-1,)  # line subbundle cut out by the isotropic sections
REDUCED_AMBIENT_BUNDLE = (1, 0, 0)  # quotient of the ambient bundle by the section subbundle

QUADRIC_BUNDLE_CLASS = (2, 2)  # (H, h) coefficients of the quadric bundle inside PE
RESOLVED_CLASS = (1, 1, 2)  # (H, xi, h) coefficients of the blown-up quadric bundle inside PG


class UnknownSpaceError(KeyError):
    pass


class InconsistencyError(ArithmeticError):
    """Raised when an identity that must hold exactly fails."""


@dataclass(frozen=True)
class Space:
    name: str
    ring: GradedRing
    dimension: int
    canonical_class: GradedClass
    fundamental_factor: GradedClass
    point_monomial: tuple
    divisor_basis: tuple[str, ...]
    base: str | None = None
    todd_factors: tuple = field(default=(), repr=False, compare=False)

    @property
    def ambient_dimension(self) -> int:
        return self.ring.mono_degree(self.point_monomial)

    def gen(self, name: str) -> GradedClass:
        return self.ring.gen(name)

    def divisor(self, *coeffs) -> GradedClass:
        if len(coeffs) != len(self.divisor_basis):
            raise ValueError(f"{self.name} divisors need {len(self.divisor_basis)} coefficients")
        out = self.ring.zero()
        for c, n in zip(coeffs, self.divisor_basis):
            out = out + self.ring.gen(n) * c
        return out

    def divisor_coefficients(self, cls: GradedClass) -> tuple[Fraction, ...]:
        lin = cls.linear_coefficients()
        return tuple(lin[n] for n in self.divisor_basis)


@dataclass(frozen=True)
class SplitBundle:
    """A direct sum of line bundles; each summand is a multidegree vector."""

    space: Space
    summands: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, space: Space, summands: Sequence) -> "SplitBundle":
        norm = []
        for s in summands:
            s = (s,) if isinstance(s, int) else tuple(s)
            if len(s) != len(space.divisor_basis):
                raise ValueError("summand length does not match the divisor basis")
            norm.append(s)
        return cls(space, tuple(sorted(norm)))

    @property
    def rank(self) -> int:
        return len(self.summands)

    def classes(self) -> list[GradedClass]:
        return [self.space.divisor(*s) for s in self.summands]

    def dual(self) -> "SplitBundle":
        return SplitBundle.of(self.space, [tuple(-x for x in s) for s in self.summands])

    def twist(self, degree: Sequence[int] | int) -> "SplitBundle":
        d = (degree,) if isinstance(degree, int) else tuple(degree)
        return SplitBundle.of(self.space, [tuple(a + b for a, b in zip(s, d)) for s in self.summands])

    def __add__(self, other: "SplitBundle") -> "SplitBundle":
        return SplitBundle.of(self.space, self.summands + other.summands)

    def tensor(self, other: "SplitBundle") -> "SplitBundle":
        return SplitBundle.of(
            self.space,
            [tuple(a + b for a, b in zip(s, t)) for s in self.summands for t in other.summands],
        )

    def sym(self, k: int) -> "SplitBundle":
        if k < 0:
            return SplitBundle.of(self.space, [])
        zero = (0,) * len(self.space.divisor_basis)
        out = []
        for combo in combinations_with_replacement(self.summands, k):
            tot = zero
            for s in combo:
                tot = tuple(a + b for a, b in zip(tot, s))
            out.append(tot)
        return SplitBundle.of(self.space, out)

    def wedge(self, k: int) -> "SplitBundle":
        zero = (0,) * len(self.space.divisor_basis)
        out = []
        for combo in combinations(self.summands, k):
            tot = zero
            for s in combo:
                tot = tuple(a + b for a, b in zip(tot, s))
            out.append(tot)
        return SplitBundle.of(self.space, out)

    def determinant(self) -> tuple[int, ...]:
        zero = (0,) * len(self.space.divisor_basis)
        tot = zero
        for s in self.summands:
            tot = tuple(a + b for a, b in zip(tot, s))
        return tot

    def traceless_endomorphisms(self) -> "SplitBundle":
        """``(V^dual (x) V)_0``: the trivial summand split off by the trace."""
        full = list(self.dual().tensor(self).summands)
        full.remove((0,) * len(self.space.divisor_basis))
        return SplitBundle.of(self.space, full)


# -- characteristic classes ------------------------------------------------

def _line_todd(d: GradedClass) -> GradedClass:
    # D / (1 - e^-D) = 1 / (sum_k (-D)^k / (k+1)!)
    ring = d.ring
    series = ring.one()
    power = ring.one()
    k = 1
    fact = 1
    while True:
        power = power * (-d)
        if power.is_zero():
            break
        fact *= k + 1
        series = series + power * Fraction(1, fact)
        k += 1
    return invert_series(series)


def chern_total(bundle: SplitBundle) -> GradedClass:
    out = bundle.space.ring.one()
    for c in bundle.classes():
        out = out * (1 + c)
    return out


def segre_total(bundle: SplitBundle) -> GradedClass:
    return invert_series(chern_total(bundle))


def chern_character(bundle: SplitBundle) -> GradedClass:
    out = bundle.space.ring.zero()
    for c in bundle.classes():
        out = out + exp_series(c)
    return out


def chern_classes(bundle: SplitBundle) -> list[GradedClass]:
    total = chern_total(bundle)
    return [total.homogeneous(i) for i in range(bundle.rank + 1)]


def todd(obj) -> GradedClass:
    """Todd class of a split bundle or of a built space."""
    if isinstance(obj, SplitBundle):
        out = obj.space.ring.one()
        for c in obj.classes():
            out = out * _line_todd(c)
        return out
    if isinstance(obj, Space):
        return _space_todd(obj.name)
    raise TypeError("todd() takes a SplitBundle or a Space")


@lru_cache(maxsize=None)
def _space_todd(name: str) -> GradedClass:
    space = build_space(name)
    out = space.ring.one()
    for num in space.todd_factors[0]:
        out = out * _line_todd(num)
    for den in space.todd_factors[1]:
        out = out * invert_series(_line_todd(den))
    return out


def integrate(space: Space, cls: GradedClass) -> Fraction:
    """Degree of the top-dimensional part of ``cls`` on ``space``."""
    if cls.ring is not space.ring:
        cls = space.ring.coerce(cls)
    top = (cls * space.fundamental_factor).homogeneous(space.ambient_dimension)
    if top.is_zero():
        return Fraction(0)
    terms = top.terms
    if set(terms) != {space.point_monomial}:
        raise InconsistencyError(f"top-degree part {top!r} is not a multiple of the point class")
    return terms[space.point_monomial]


# -- the spaces ------------------------------------------------------------

def _projective_bundle_relation(H: GradedClass, chern: GradedClass, rank: int):
    # H^r -> -(c_1 H^(r-1) + ... + c_r)
    rep = H.ring.zero()
    for i in range(1, rank + 1):
        rep = rep - chern.homogeneous(i) * H ** (rank - i)
    return H**rank, rep


def _base_p3_chern(ring: GradedRing, degrees, hname="h") -> GradedClass:
    h = ring.gen(hname)
    out = ring.one()
    for d in degrees:
        out = out * (1 + h * d)
    return out


@lru_cache(maxsize=None)
def build_space(name: str) -> Space:
    if name not in SPACE_NAMES:
        raise UnknownSpaceError(name)
    builder = _BUILDERS[name]
    return builder()


def _p3() -> Space:
    R = GradedRing([("h", 1)], 3)
    (h,) = R.gens()
    return Space("P3", R, 3, h * -4, R.one(), (3,), ("h",), todd_factors=((h,) * 4, ()))


def _p5() -> Space:
    R = GradedRing([("H", 1)], 5)
    (H,) = R.gens()
    return Space("P5", R, 5, H * -6, R.one(), (5,), ("H",), todd_factors=((H,) * 6, ()))


def _p1xp3() -> Space:
    R = GradedRing([("H", 1), ("h", 1)], 4)
    H, h = R.gens()
    R = R.quotient([(H**2, 0), (h**4, 0)])
    H, h = R.gens()
    return Space(
        "P1xP3", R, 4, -2 * H - 4 * h, R.one(), (1, 3), ("H", "h"),
        todd_factors=((H, H, h, h, h, h), ()),
    )


def _projective_bundle_over_p3(name: str, degrees) -> Space:
    r = len(degrees)
    dim = 3 + r - 1
    R = GradedRing([("H", 1), ("h", 1)], dim)
    H, h = R.gens()
    R = R.quotient([_projective_bundle_relation(H, _base_p3_chern(R, degrees), r), (h**4, 0)])
    H, h = R.gens()
    c1 = sum(degrees)
    # K = pi^*K_B - c_1(V) - r H
    K = -r * H + h * (-4 - c1)
    factors = (h,) * 4 + tuple(H + h * d for d in degrees)
    return Space(name, R, dim, K, R.one(), (r - 1, 3), ("H", "h"), base="P3", todd_factors=(factors, ()))


def _pf() -> Space:
    return _projective_bundle_over_p3("PF", LINE_PROJECTION_BUNDLE)


def _pe() -> Space:
    return _projective_bundle_over_p3("PE", QUADRIC_AMBIENT_BUNDLE)


def _xt() -> Space:
    pe = build_space("PE")
    cls = pe.divisor(*QUADRIC_BUNDLE_CLASS)
    num, _ = pe.todd_factors
    return Space(
        "Xt", pe.ring, pe.dimension - 1, pe.canonical_class + cls, cls,
        pe.point_monomial, pe.divisor_basis, base="P3", todd_factors=(num, (cls,)),
    )


def _pebar() -> Space:
    # relative hyperplane class named xi
    degrees = REDUCED_AMBIENT_BUNDLE
    r = len(degrees)
    R = GradedRing([("xi", 1), ("h", 1)], 5)
    xi, h = R.gens()
    R = R.quotient([_projective_bundle_relation(xi, _base_p3_chern(R, degrees), r), (h**4, 0)])
    xi, h = R.gens()
    K = -r * xi + h * (-4 - sum(degrees))
    factors = (h,) * 4 + tuple(xi + h * d for d in degrees)
    return Space("PEbar", R, 5, K, R.one(), (2, 3), ("xi", "h"), base="P3", todd_factors=(factors, ()))


def _pg() -> Space:
    # G is an extension of O(-xi) by the pulled-back section subbundle: roots -h and -xi.
    R = GradedRing([("H", 1), ("xi", 1), ("h", 1)], 6)
    H, xi, h = R.gens()
    chern_ebar = _base_p3_chern(R, REDUCED_AMBIENT_BUNDLE)
    xi3, xi_rep = _projective_bundle_relation(xi, chern_ebar, 3)
    roots = (h * SECTION_SUBBUNDLE[0], -xi)
    chern_g = (1 + roots[0]) * (1 + roots[1])
    R = R.quotient([_projective_bundle_relation(H, chern_g, 2), (xi3, xi_rep), (h**4, 0)])
    H, xi, h = R.gens()
    c1_g = roots[0] + roots[1]
    K_pebar = -3 * xi + h * (-4 - sum(REDUCED_AMBIENT_BUNDLE))
    K = R.coerce(0) + _transport(K_pebar, R) - _transport(c1_g, R) - 2 * H
    factors = (h,) * 4 + tuple(xi + h * d for d in REDUCED_AMBIENT_BUNDLE)
    factors += (H + _transport(roots[0], R), H + _transport(roots[1], R))
    return Space("PG", R, 6, K, R.one(), (1, 2, 3), ("H", "xi", "h"), base="PEbar", todd_factors=(factors, ()))


def _xhat() -> Space:
    pg = build_space("PG")
    cls = pg.divisor(*RESOLVED_CLASS)
    num, _ = pg.todd_factors
    return Space(
        "Xhat", pg.ring, pg.dimension - 1, pg.canonical_class + cls, cls,
        pg.point_monomial, pg.divisor_basis, base="PEbar", todd_factors=(num, (cls,)),
    )


def _transport(cls: GradedClass, ring: GradedRing) -> GradedClass:
    """Move a class into a ring with the same generator names."""
    if cls.ring is ring:
        return cls
    names = cls.ring.names
    idx = [ring.names.index(n) for n in names]
    terms = {}
    for m, c in cls.terms.items():
        e = [0] * len(ring.names)
        for i, x in zip(idx, m):
            e[i] = x
        terms[tuple(e)] = c
    return GradedClass(ring, terms)


_BUILDERS = {
    "P3": _p3,
    "P5": _p5,
    "P1xP3": _p1xp3,
    "PF": _pf,
    "PE": _pe,
    "Xt": _xt,
    "PEbar": _pebar,
    "PG": _pg,
    "Xhat": _xhat,
}


# -- named bundles ---------------------------------------------------------

def p3_bundle(degrees) -> SplitBundle:
    return SplitBundle.of(build_space("P3"), [(d,) for d in degrees])


def line_projection_bundle() -> SplitBundle:
    return p3_bundle(LINE_PROJECTION_BUNDLE)


def quadric_ambient_bundle() -> SplitBundle:
    return p3_bundle(QUADRIC_AMBIENT_BUNDLE)


# -- checks ----------------------------------------------------------------

def discriminant_degrees(bundle: SplitBundle | None = None) -> tuple[int, int]:
    """Degrees of the corank >= 1 and corank >= 2 loci of a conic bundle.

    ``bundle`` is the rank-3 bundle ``V`` with the conic bundle cut out by a
    section of ``Sym^2(V)``; default is ``F^dual (x) O(h)``.  Returns
    ``(deg 2c_1, deg 4(c_1 c_2 - c_0 c_3))``.
    """
    if bundle is None:
        bundle = line_projection_bundle().dual().twist(1)
    p3 = build_space("P3")
    c = chern_classes(bundle)
    while len(c) < 4:
        c.append(p3.ring.zero())
    h = p3.gen("h")
    deg_d = integrate(p3, 2 * c[1] * h**2)
    deg_d0 = integrate(p3, 4 * (c[1] * c[2] - c[0] * c[3]))
    for v in (deg_d, deg_d0):
        if v.denominator != 1:
            raise InconsistencyError("non-integral degree")
    return int(deg_d), int(deg_d0)


def solve_relative_class(extra_summand: int = 1) -> int:
    """Find ``n`` with ``[quadric bundle] = 2H + n h`` inside ``P(F + O(m h))``.

    Pushing ``0 -> O(-2H - n h) (2H) -> O(2H) -> O_X(2H) -> 0`` down gives
    ``0 -> O(-n h) -> Sym^2(E^dual) -> Sym^2(F^dual) + F^dual(-m h) -> 0``;
    comparing first Chern classes determines ``n``.  ``m`` is ``extra_summand``.
    """
    F = line_projection_bundle()
    M = p3_bundle((extra_summand,))
    E = F + M
    sym2 = E.dual().sym(2)
    quotient = F.dual().sym(2) + F.dual().tensor(M.dual())
    h = build_space("P3").gen("h")
    lhs = chern_total(sym2).homogeneous(1)
    rhs = chern_total(quotient).homogeneous(1)
    diff = (rhs - lhs).coefficient(h)  # = n
    if diff.denominator != 1:
        raise InconsistencyError("no integral relative class")
    n = int(diff)
    # the full total Chern classes must then agree as well
    sub = p3_bundle((-n,))
    if chern_total(sub) * chern_total(quotient) != chern_total(sym2):
        raise InconsistencyError("relative class inconsistent beyond degree one")
    return n


def bezout_nodes(degrees: Sequence[int] = (3, 3, 2)) -> int:
    """Number of points cut out on P3 by three hypersurfaces of the given degrees."""
    if len(degrees) != 3:
        raise ValueError("need three hypersurfaces in P3")
    p3 = build_space("P3")
    h = p3.gen("h")
    cls = p3.ring.one()
    for d in degrees:
        cls = cls * (h * d)
    return int(integrate(p3, cls))


def pushforward_power(space: Space, k: int) -> GradedClass:
    """``pi_* H^(r-1+k)`` on P3, read off by pairing with ``h^(3-k)``."""
    p3 = build_space("P3")
    if not 0 <= k <= 3:
        return p3.ring.zero()
    r = space.point_monomial[0] + 1
    H = space.gen(space.divisor_basis[0])
    h = space.gen("h")
    val = integrate(space, H ** (r - 1 + k) * h ** (3 - k))
    return p3.gen("h") ** k * val


# -- reports ---------------------------------------------------------------

def _lattice(space: Space, cls: GradedClass) -> tuple[int, ...]:
    return tuple(int(c) for c in space.divisor_coefficients(cls))


def canonical_identities():
    """Canonical classes by adjunction, by the double-cover formula, and from Todd classes."""
    from .report import DERIVED, REFERENCE, check

    out = []
    pf, pe, xt = build_space("PF"), build_space("PE"), build_space("Xt")
    pg, xhat = build_space("PG"), build_space("Xhat")
    H, h = pf.gen("H"), pf.gen("h")
    # blow-up of P5 along a line: K = -6H + 3E with exceptional class E = H - h
    blowup = -6 * H + 3 * (H - h)
    out.append(check("chow.K-PF", "canonical class of the blown-up P5", (-3, -3), _lattice(pf, blowup),
                     REFERENCE, detail={"bundle formula": _lattice(pf, pf.canonical_class)}))
    out.append(check("chow.K-PF-bundle", "canonical class from the projective-bundle formula", (-3, -3),
                     _lattice(pf, pf.canonical_class), DERIVED))
    H, h = pe.gen("H"), pe.gen("h")
    adj = pe.canonical_class + pe.divisor(*QUADRIC_BUNDLE_CLASS)
    out.append(check("chow.K-Xt-adjunction", "canonical class of the quadric bundle by adjunction", (-2, -2),
                     _lattice(pe, adj), REFERENCE))
    # double cover of PF branched along 4H - 2E = 2H + 2h
    branch = 4 * pf.gen("H") - 2 * (pf.gen("H") - pf.gen("h"))
    cover = pf.canonical_class + branch * Fraction(1, 2)
    out.append(check("chow.K-Xt-double-cover", "canonical class of the double cover of PF", (-2, -2),
                     _lattice(pf, cover), DERIVED))
    out.append(check("chow.K-Xt-todd", "canonical class as -2 Td_1", (-2, -2),
                     _lattice(xt, -2 * todd(xt).homogeneous(1)), DERIVED))
    Hg, xi, hg = pg.gen("H"), pg.gen("xi"), pg.gen("h")
    zp = Hg - xi
    adj_hat = pg.canonical_class + pg.divisor(*RESOLVED_CLASS)
    out.append(check("chow.K-Xhat", "anticanonical class of the special resolution is 2H - Z' + 2h", True,
                     -adj_hat == 2 * Hg - zp + 2 * hg, REFERENCE, detail=repr(-adj_hat)))
    out.append(check("chow.K-Xhat-todd", "canonical class of the special resolution as -2 Td_1", True,
                     -2 * todd(xhat).homogeneous(1) == xhat.canonical_class, DERIVED))
    out.append(check("chow.xi", "relative hyperplane class xi equals H - Z'", True, xi == Hg - zp, REFERENCE))
    out.append(check("chow.H-equals-h-on-Z'", "(H - h) Z' = 0 in the ring of PG", True,
                     ((Hg - hg) * zp).is_zero(), DERIVED))
    return out


def suite():
    from .report import DERIVED, REFERENCE, TRIVIAL, check

    out = []
    bundle = line_projection_bundle().dual().twist(1)
    out.append(check("chow.chern-twisted-F", "total Chern class of the twisted rank-3 bundle",
                     "1 + 4*h + 5*h^2 + 2*h^3", repr(chern_total(bundle)), REFERENCE))
    out.append(check("chow.discriminant-degrees", "degrees of the discriminant surface and its node locus",
                     [8, 72], list(discriminant_degrees()), REFERENCE))
    out.append(check("chow.discriminant-trivial-control", "same formula for O(h)^3", [6, 32],
                     list(discriminant_degrees(p3_bundle((1, 1, 1)))), DERIVED))
    out.append(check("chow.relative-class", "coefficient n of h in the class of the quadric bundle", 2,
                     solve_relative_class(), REFERENCE))
    out.append(check("chow.relative-class-control", "same computation with an untwisted extra summand", 0,
                     solve_relative_class(0), DERIVED))
    out.append(check("chow.bezout", "points cut out by two cubics and a quadric in P3", 18, bezout_nodes(),
                     REFERENCE))
    out.append(check("chow.bezout-controls", "three quadrics; two cubics and a quartic", [8, 36],
                     [bezout_nodes((2, 2, 2)), bezout_nodes((3, 3, 4))], TRIVIAL))
    pe = build_space("PE")
    H, h = pe.gen("H"), pe.gen("h")
    out.append(check("chow.integrate-PE", "integrals of H^3 h^3 and H^5 h on PE", [1, 1],
                     [integrate(pe, H**3 * h**3), integrate(pe, H**5 * h)], DERIVED))
    E = quadric_ambient_bundle()
    out.append(check("chow.segre-E", "Segre class of the rank-4 bundle", "1 + h^2", repr(segre_total(E)),
                     DERIVED))
    out.append(check("chow.todd-P3", "Todd class of P3", "1 + 2*h + 11/6*h^2 + h^3",
                     repr(todd(build_space("P3"))), DERIVED))
    chis = {n: integrate(build_space(n), todd(build_space(n))) for n in SPACE_NAMES}
    out.append(check("chow.chi-structure-sheaf", "integral of the Todd class on every modeled space",
                     {n: 1 for n in SPACE_NAMES}, chis, DERIVED))
    return out + canonical_identities()
