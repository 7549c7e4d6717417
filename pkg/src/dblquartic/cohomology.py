"""Line-bundle cohomology oracle and Hom tables between formal objects.

Everything is reduced to Bott's formula on projective spaces: double covers
split the pushforward of pulled-back bundles, projective bundles of split
bundles push forward to split bundles, and the exceptional divisor ``Z`` of the
resolved fivefold is a double cover of ``P1 x P3`` split the same way.

Objects on the resolved fivefold are written in the ``(H, h)`` basis.  ``Z`` has
class ``H - h``, restriction to ``Z`` sends ``H -> (1, 0)`` and ``h -> (0, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence, Union

from .chow import LINE_PROJECTION_BUNDLE, QUADRIC_AMBIENT_BUNDLE

DIVISOR_CLASS = (1, -1)


class NotComputableError(ValueError):
    """A Hom involving an opaque category block was requested."""


@dataclass(frozen=True)
class CohTable:
    """Dimensions of cohomology groups by degree.

    ``exact`` is False when an unresolved connecting map means the dimensions
    are only upper bounds.
    """

    dims: tuple[tuple[int, int], ...] = ()
    exact: bool = True

    @classmethod
    def of(cls, dims: Mapping[int, int] | None = None, exact: bool = True) -> "CohTable":
        clean = {int(k): int(v) for k, v in (dims or {}).items() if v}
        if any(v < 0 for v in clean.values()):
            raise ValueError("negative dimension")
        return cls(tuple(sorted(clean.items())), exact)

    @classmethod
    def zero(cls) -> "CohTable":
        return cls((), True)

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    def __getitem__(self, i: int) -> int:
        return dict(self.dims).get(i, 0)

    def is_zero(self) -> bool:
        return not self.dims

    def euler(self) -> int:
        return sum((-1) ** k * v for k, v in self.dims)

    def shift(self, n: int) -> "CohTable":
        """Move every dimension from degree ``k`` to ``k + n``."""
        return CohTable(tuple((k + n, v) for k, v in self.dims), self.exact)

    def __add__(self, other: "CohTable") -> "CohTable":
        out = dict(self.dims)
        for k, v in other.dims:
            out[k] = out.get(k, 0) + v
        return CohTable.of(out, self.exact and other.exact)

    def with_exact(self, exact: bool) -> "CohTable":
        return CohTable(self.dims, exact)

    def __eq__(self, other):
        if isinstance(other, CohTable):
            return self.dims == other.dims and self.exact == other.exact
        if isinstance(other, Mapping):
            return self.as_dict() == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash((self.dims, self.exact))

    def __str__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.dims)
        return "{" + body + "}" + ("" if self.exact else " (upper bound)")


def direct_sum(tables: Iterable[CohTable]) -> CohTable:
    out = CohTable.zero()
    for t in tables:
        out = out + t
    return out


# -- formal objects --------------------------------------------------------

@dataclass(frozen=True)
class LineBundle:
    a: int
    b: int

    def twist(self, d) -> "LineBundle":
        return LineBundle(self.a + d[0], self.b + d[1])

    @property
    def degree(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self):
        return f"O({_fmt_div(self.a, self.b)})"


@dataclass(frozen=True)
class PushZ:
    """Pushforward of ``O_Z(aH + bh)`` from the exceptional divisor."""

    a: int
    b: int

    def twist(self, d) -> "PushZ":
        return PushZ(self.a + d[0], self.b + d[1])

    @property
    def degree(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self):
        return f"i*O_Z({_fmt_div(self.a, self.b)})"


@dataclass(frozen=True)
class Shift:
    inner: "FormalObject"
    n: int

    def __post_init__(self):
        if isinstance(self.inner, Shift):
            raise ValueError("use shift() to compose shifts")

    def twist(self, d) -> "Shift":
        return Shift(self.inner.twist(d), self.n)

    def __str__(self):
        return f"{self.inner}[{self.n}]"


@dataclass(frozen=True)
class Block:
    """Opaque admissible subcategory; carries only a name and its history."""

    name: str
    annotations: tuple[str, ...] = field(default=(), compare=False)

    def twist(self, d) -> "Block":
        return Block(self.name, self.annotations + (f"twist{tuple(d)}",))

    def annotate(self, note: str) -> "Block":
        return Block(self.name, self.annotations + (note,))

    def __str__(self):
        return self.name


FormalObject = Union[LineBundle, PushZ, Shift, Block]


def shift(obj: FormalObject, n: int) -> FormalObject:
    if isinstance(obj, Block):
        raise NotComputableError("cannot shift an opaque block")
    base, m = unshift(obj)
    return base if m + n == 0 else Shift(base, m + n)


def unshift(obj: FormalObject) -> tuple[FormalObject, int]:
    if isinstance(obj, Shift):
        return obj.inner, obj.n
    return obj, 0


def _fmt_div(a: int, b: int) -> str:
    parts = []
    for c, s in ((a, "H"), (b, "h")):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, mag + s))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, t in parts[1:]:
        out += sign + t
    return out


# -- Bott and friends ------------------------------------------------------

def coh_Pn(n: int, k: int) -> CohTable:
    """Cohomology of ``O(k)`` on ``P^n``."""
    if n < 1:
        raise ValueError("need n >= 1")
    if k >= 0:
        return CohTable.of({0: comb(n + k, n)})
    if k <= -n - 1:
        return CohTable.of({n: comb(-k - 1, n)})
    return CohTable.zero()


def _kunneth(t1: CohTable, t2: CohTable) -> CohTable:
    out: dict[int, int] = {}
    for i, x in t1.dims:
        for j, y in t2.dims:
            out[i + j] = out.get(i + j, 0) + x * y
    return CohTable.of(out)


def coh_product(a: int, b: int) -> CohTable:
    """``O(a, b)`` on ``P1 x P3``."""
    return _kunneth(coh_Pn(1, a), coh_Pn(3, b))


def coh_X5(m: int) -> CohTable:
    """``O(mH)`` on the quartic double fivefold."""
    return coh_Pn(5, m) + coh_Pn(5, m - 2)


def coh_split_on_p3(degrees: Iterable[int]) -> CohTable:
    return direct_sum(coh_Pn(3, d) for d in degrees)


def _sym_degrees(degrees: Sequence[int], k: int) -> list[int]:
    return [sum(c) for c in combinations_with_replacement(degrees, k)]


def coh_projective_bundle(degrees: Sequence[int], a: int, b: int) -> CohTable:
    """``O(aH + bh)`` on ``P(V) -> P3`` with ``V`` split of the given degrees."""
    r = len(degrees)
    if a >= 0:
        dual = [-d for d in degrees]
        return coh_split_on_p3(s + b for s in _sym_degrees(dual, a))
    if a > -r:
        return CohTable.zero()
    # R^(r-1) pi_* O(aH) = Sym^(-a-r)(V) (x) det V
    det = sum(degrees)
    return coh_split_on_p3(s + det + b for s in _sym_degrees(degrees, -a - r)).shift(r - 1)


def coh_PF(a: int, b: int) -> CohTable:
    return coh_projective_bundle(LINE_PROJECTION_BUNDLE, a, b)


def coh_PE(a: int, b: int) -> CohTable:
    return coh_projective_bundle(QUADRIC_AMBIENT_BUNDLE, a, b)


def coh_Xt(a: int, b: int) -> CohTable:
    """``O(aH + bh)`` on the resolved fivefold, a double cover of ``PF``."""
    return coh_PF(a, b) + coh_PF(a - 1, b - 1)


def coh_Z(a: int, b: int) -> CohTable:
    """``O_Z(aH + bh)``: ``Z`` is a double cover of ``P1 x P3`` split like the fivefold."""
    return coh_product(a, b) + coh_product(a - 1, b - 1)


COH_BY_SPACE = {
    "P3": (3, lambda a, b: coh_Pn(3, b)),
    "P1xP3": (4, coh_product),
    "PF": (5, coh_PF),
    "PE": (6, coh_PE),
    "Xt": (5, coh_Xt),
}
CANONICAL_BY_SPACE = {
    "P3": (0, -4),
    "P1xP3": (-2, -4),
    "PF": (-3, -3),
    "PE": (-4, -4),
    "Xt": (-2, -2),
}


# -- Hom tables ------------------------------------------------------------

def _adjacent(t1: CohTable, t2: CohTable) -> bool:
    d1 = {k for k, _ in t1.dims}
    d2 = {k for k, _ in t2.dims}
    return any(k + 1 in d2 or k - 1 in d2 for k in d1)


def hom_table(src: FormalObject, dst: FormalObject, divisor=DIVISOR_CLASS) -> CohTable:
    """Dimensions of ``Hom^i(src, dst)`` on the resolved fivefold.

    ``divisor`` is the class of the exceptional divisor; changing it is only
    meaningful as a negative control.
    """
    if isinstance(src, Block) or isinstance(dst, Block):
        raise NotComputableError("not computable: opaque block")
    s, m = unshift(src)
    t, n = unshift(dst)
    # Hom^i(E[m], F[n]) = Hom^(i+n-m)(E, F)
    return _hom_unshifted(s, t, tuple(divisor)).shift(m - n)


def _hom_unshifted(src, dst, divisor) -> CohTable:
    za, zb = divisor
    if isinstance(src, LineBundle) and isinstance(dst, LineBundle):
        return coh_Xt(dst.a - src.a, dst.b - src.b)
    if isinstance(src, LineBundle) and isinstance(dst, PushZ):
        return coh_Z(dst.a - src.a, dst.b - src.b)
    if isinstance(src, PushZ) and isinstance(dst, LineBundle):
        # Grothendieck duality: i^! O(D) = O_Z(D + Z)[-1]
        return coh_Z(dst.a - src.a + za, dst.b - src.b + zb).shift(1)
    if isinstance(src, PushZ) and isinstance(dst, PushZ):
        # L i^* i_* O_Z(A) has O_Z(A) in degree 0 and O_Z(A - Z) in degree -1
        first = coh_Z(dst.a - src.a, dst.b - src.b)
        second = coh_Z(dst.a - src.a + za, dst.b - src.b + zb).shift(1)
        exact = first.is_zero() or second.is_zero() or not _adjacent(first, second)
        return (first + second).with_exact(exact)
    raise TypeError(f"unsupported objects {src!r}, {dst!r}")


# -- reports ---------------------------------------------------------------

def serre_violations(space: str, grid: int = 4) -> list[tuple[int, int]]:
    dim, fn = COH_BY_SPACE[space]
    ka, kb = CANONICAL_BY_SPACE[space]
    bad = []
    for a in range(-grid, grid + 1):
        for b in range(-grid, grid + 1):
            t, u = fn(a, b), fn(ka - a, kb - b)
            if any(t[i] != u[dim - i] for i in range(dim + 1)):
                bad.append((a, b))
    return bad


QUOTED_TABLES = (
    # id, description, computed-by, expected
    ("coh.Xt-H-2h", "cohomology of O(H-2h) on the resolved fivefold", lambda: coh_Xt(1, -2), {}),
    ("coh.Xt-H-h", "cohomology of O(H-h) on the resolved fivefold", lambda: coh_Xt(1, -1), {0: 1}),
    ("coh.Z-structure", "cohomology of O_Z", lambda: coh_Z(0, 0), {0: 1}),
    ("coh.hom-PushZ-to-line", "Hom(i*O_Z(H+h), O(2h))",
     lambda: hom_table(PushZ(1, 1), LineBundle(0, 2)), {1: 1}),
    ("coh.Z-2H-h", "cohomology of O_Z(2H-h)", lambda: coh_Z(2, -1), {}),
)


def suite(grid: int = 4):
    from .report import DERIVED, REFERENCE, TRIVIAL, check

    out = []
    for id_, desc, fn, expected in QUOTED_TABLES:
        t = fn()
        out.append(check(id_, desc, {k: v for k, v in expected.items()}, t.as_dict(), REFERENCE,
                         equal=t.as_dict() == expected and t.exact))
    out.append(check("coh.X5-range", "O(mH) on the double fivefold for m = 0, -1, -2, -3",
                     [{0: 1}, {}, {}, {}], [coh_X5(m).as_dict() for m in (0, -1, -2, -3)], REFERENCE))
    out.append(check("coh.PF-example", "O(H-h) on PF", {0: 1}, coh_PF(1, -1).as_dict(), DERIVED))
    out.append(check("coh.restriction-map", "Hom(O, i*O_Z)", {0: 1},
                     hom_table(LineBundle(0, 0), PushZ(0, 0)).as_dict(), REFERENCE))
    self_z = hom_table(PushZ(0, 0), PushZ(0, 0))
    out.append(check("coh.PushZ-self", "Hom(i*O_Z, i*O_Z) and its exactness", [{0: 1}, True],
                     [self_z.as_dict(), self_z.exact], DERIVED))
    out.append(check("coh.bott-examples", "O(0), O(-4), O(2) on P3", [{0: 1}, {3: 1}, {0: 10}],
                     [coh_Pn(3, k).as_dict() for k in (0, -4, 2)], TRIVIAL))
    for space in ("P3", "P1xP3", "PF", "PE", "Xt"):
        out.append(check(f"coh.serre-{space}", f"Serre duality of the oracle on {space}, |coeffs| <= {grid}",
                         [], serre_violations(space, grid), DERIVED))
    lb_fail = [(a, b) for a in range(-grid, grid + 1) for b in range(-grid, grid + 1)
               if hom_table(LineBundle(a, b), LineBundle(a, b)) != CohTable.of({0: 1})]
    out.append(check("coh.exceptional-line-bundles", f"Hom(O(D), O(D)) = k for |coeffs| <= {grid}", [],
                     lb_fail, DERIVED))
    return out
