"""Local models near the nodes: tangent-cone rank, the coordinate change that
moves the isotropic section, and Jacobian smoothness of the projected model."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

from .discriminant import rank_mod_p
from .exactalg import GradedClass, GradedRing
from .report import DERIVED, REFERENCE, TRIVIAL, VerificationReport, check

LOCAL_VARS = ("x0", "x1", "x2", "y0", "y1", "y2", "y3", "b11", "b12", "b22")
MODEL_VARS = ("x0", "x1", "x2", "y0", "y1", "y2")
DEFAULT_BETA = {"b11": 1, "b12": 0, "b22": 1}
DEFAULT_PRIMES = (7, 11, 13)


@lru_cache(maxsize=None)
def local_ring() -> GradedRing:
    return GradedRing([(v, 1) for v in LOCAL_VARS], 6)


def _g():
    R = local_ring()
    return R, {v: R.gen(v) for v in LOCAL_VARS}


def _binary_form(g) -> GradedClass:
    return g["b11"] * g["y1"] ** 2 + g["b12"] * g["y1"] * g["y2"] + g["b22"] * g["y2"] ** 2


def section_equation() -> GradedClass:
    """Quadric bundle with the isotropic section through ``(x0 : 0 : 0 : 1)``."""
    R, g = _g()
    return -g["y0"] ** 2 + _binary_form(g) + (g["x1"] * g["y1"] + g["x2"] * g["y2"] + g["x0"] ** 2 * g["y3"]) * g["y3"]


def moved_equation() -> GradedClass:
    """Same bundle once the section sits at ``(0 : 0 : 0 : 1)``."""
    R, g = _g()
    return -g["y0"] ** 2 + _binary_form(g) + (g["x0"] * g["y0"] + g["x1"] * g["y1"] + g["x2"] * g["y2"]) * g["y3"]


def literal_change(eq: GradedClass, sign: int = 1) -> GradedClass:
    R, g = _g()
    return eq.substitute({"y0": g["y0"] + g["x0"] * g["y3"] * sign})


def corrected_change(eq: GradedClass) -> GradedClass:
    """``y0 -> y0 + x0 y3`` followed by the base rescaling ``x0 -> -x0/2``."""
    R, g = _g()
    step = literal_change(eq)
    return step.substitute({"x0": g["x0"] * Fraction(-1, 2)})


def coordinate_change_check() -> list[VerificationReport]:
    src, dst = section_equation(), moved_equation()
    literal = literal_change(src)
    corrected = corrected_change(src)
    R, g = _g()
    # the section must move to (0:0:0:1): y0 = x0 y3 satisfies the original
    on_section = src.substitute({"y0": g["x0"] * g["y3"], "y1": R.zero(), "y2": R.zero()})
    twice = literal_change(literal_change(src), -1)
    return [
        check("localgeom.section-on-quadric", "(x0:0:0:1) lies on the quadric bundle", "0", repr(on_section),
              REFERENCE),
        check("localgeom.coordinate-change", "moving the section to (0:0:0:1) gives the displayed equation",
              repr(dst), repr(corrected), REFERENCE,
              detail={"substitution": "y0 -> y0 + x0*y3, then x0 -> -x0/2",
                      "literal_residual": repr(literal - dst)}),
        check("localgeom.literal-substitution-residual",
              "y0 -> y0 + x0*y3 alone leaves a multiple of x0*y0*y3", repr(-3 * g["x0"] * g["y0"] * g["y3"]),
              repr(literal - dst), DERIVED),
        check("localgeom.identity-control", "identity substitution does not reach the displayed equation",
              True, not (src - dst).is_zero(), DERIVED, detail=repr(src - dst)),
        check("localgeom.involution", "substitution then its sign flip restores the equation",
              repr(src), repr(twice), TRIVIAL),
    ]


# -- Jacobian criterion ----------------------------------------------------

@dataclass
class LocalModel:
    """Complete intersection ``f = g = 0`` in ``A3 x P2`` (``x`` affine, ``y`` projective)."""

    beta: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_BETA))

    def equations(self) -> tuple[GradedClass, GradedClass]:
        R, g = _g()
        f = -g["y0"] ** 2 + _binary_form(g)
        f = f.substitute({k: R.coerce(v) for k, v in self.beta.items()})
        h = g["x0"] * g["y0"] + g["x1"] * g["y1"] + g["x2"] * g["y2"]
        return f, h

    def gram_determinant(self) -> int:
        b11, b12, b22 = (self.beta[k] for k in ("b11", "b12", "b22"))
        return 4 * b11 * b22 - b12 * b12


def _projective_plane(p: int):
    for lead in range(3):
        for tail in product(range(p), repeat=2 - lead):
            yield (0,) * lead + (1,) + tail


@dataclass
class JacobianResult:
    prime: int
    points: list
    singular: list

    @property
    def smooth(self) -> bool:
        return not self.singular


def jacobian_survey(model: LocalModel, p: int) -> JacobianResult:
    f, h = model.equations()
    grads = [[eq.derivative(v) for v in MODEL_VARS] for eq in (f, h)]
    points, singular = [], []
    for y in _projective_plane(p):
        pt = {"x0": 0, "x1": 0, "x2": 0, "y0": y[0], "y1": y[1], "y2": y[2]}
        if f.evaluate(pt, p) or h.evaluate(pt, p):
            continue
        points.append(y)
        jac = [[d.evaluate(pt, p) for d in row] for row in grads]
        if rank_mod_p(jac, p) < 2:
            singular.append(y)
    return JacobianResult(p, points, singular)


def symbolic_certificate(model: LocalModel) -> tuple[bool, str]:
    """Characteristic-zero argument over the origin.

    The ``x``-block of the second row is ``(y0, y1, y2)``, nonzero on ``P2``;
    the first row lives in the ``y``-block and equals ``(-2 y0, G (y1, y2))``
    with ``G = [[2 b11, b12], [b12, 2 b22]]``.  Rank drops only if that row
    vanishes, forcing ``y0 = 0`` and ``G (y1, y2) = 0``; with ``det G != 0``
    this gives ``y = 0``, impossible.
    """
    d = model.gram_determinant()
    if d != 0:
        return True, f"det G = {d} != 0: first row vanishes only at y = 0, so rank 2 everywhere"
    return False, "det G = 0: the binary form is degenerate and the argument does not apply"


def jacobian_smoothness(model: LocalModel | None = None, p: int = 11) -> VerificationReport:
    model = model or LocalModel()
    res = jacobian_survey(model, p)
    return check(
        f"localgeom.jacobian-p{p}", f"fiber over the origin is smooth (p = {p})", True, res.smooth, DERIVED,
        detail={"points": len(res.points), "singular": [list(s) for s in res.singular]},
    )


# -- tangent cone ----------------------------------------------------------

def exact_rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def tangent_cone_rank(linear_parts: Sequence[Sequence]) -> VerificationReport:
    """Five linear forms in six variables; independent forms make the point a node."""
    if len(linear_parts) != 5 or any(len(r) != 6 for r in linear_parts):
        raise ValueError("need 5 linear forms in 6 variables")
    r = exact_rank(linear_parts)
    verdict = "node" if r == 5 else "worse than node"
    return check("localgeom.tangent-cone", "rank of the linear parts at a singular point", "node", verdict,
                 DERIVED, detail={"rank": r})


def suite(primes: Sequence[int] = DEFAULT_PRIMES) -> list[VerificationReport]:
    out = coordinate_change_check()
    model = LocalModel()
    out += [jacobian_smoothness(model, p) for p in primes]
    ok, text = symbolic_certificate(model)
    out.append(check("localgeom.jacobian-symbolic", "characteristic-zero rank argument", True, ok, REFERENCE,
                     detail=text))
    degenerate = jacobian_survey(LocalModel({"b11": 0, "b12": 0, "b22": 0}), primes[0])
    out.append(check("localgeom.jacobian-degenerate-control", "zero binary form has a singular point",
                     True, not degenerate.smooth, DERIVED, detail=[list(s) for s in degenerate.singular[:3]]))
    coords = [[1 if i == j else 0 for j in range(6)] for i in range(5)]
    out.append(tangent_cone_rank(coords))
    return out
