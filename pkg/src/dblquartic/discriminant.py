"""The symmetric 4x4 form of the conic-bundle discriminant.

Two layers share one determinant expansion: a symbolic layer over opaque
graded symbols (quadrics ``b11, b12, b22``, cubics ``a1, a2``, quadric ``q``)
and an instance layer over explicit polynomials on ``P3`` over ``F_p``.

The form is ``A = 1/2 M`` with

    M = [[-2, 0,     0,     0   ],
         [ 0, 2 b11, b12,   a1  ],
         [ 0, b12,   2 b22, a2  ],
         [ 0, a1,    a2,    2q^2]].
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path
from typing import Sequence

from .chow import bezout_nodes
from .exactalg import GradedClass, GradedRing
from .report import DERIVED, REFERENCE, TRIVIAL, VerificationReport, check

SYMBOLS = (("b11", 2), ("b12", 2), ("b22", 2), ("a1", 3), ("a2", 3), ("q", 2))
COORDS = ("x0", "x1", "x2", "x3")
MAX_PRIME = 13
FORM_DEGREE = 8


class EnumerationBoundError(ValueError):
    pass


def determinant(m: Sequence[Sequence], one):
    """Leibniz expansion; ``one`` fixes the coefficient ring."""
    n = len(m)
    total = one * 0
    for perm in permutations(range(n)):
        term = one
        skip = False
        for i, j in enumerate(perm):
            e = m[i][j]
            if _is_zero(e):
                skip = True
                break
            term = term * e
        if skip:
            continue
        if _parity(perm):
            total = total - term
        else:
            total = total + term
    return total


def _is_zero(e) -> bool:
    return e.is_zero() if isinstance(e, GradedClass) else e == 0


def _parity(perm) -> int:
    seen = [False] * len(perm)
    odd = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        odd ^= (length - 1) & 1
    return odd


def form_matrix(b11, b12, b22, a1, a2, q, half: bool = True):
    """The form ``A`` (or ``M = 2A`` when ``half`` is False) from its entries."""
    zero = b11 * 0
    m = [
        [zero - 2, zero, zero, zero],
        [zero, b11 * 2, b12, a1],
        [zero, b12, b22 * 2, a2],
        [zero, a1, a2, q * q * 2],
    ]
    if half:
        m = [[e * Fraction(1, 2) for e in row] for row in m]
    return m


# -- symbolic layer --------------------------------------------------------

@lru_cache(maxsize=None)
def symbol_ring() -> GradedRing:
    return GradedRing(list(SYMBOLS), FORM_DEGREE + 4)


def symbolic_form():
    R = symbol_ring()
    g = {n: R.gen(n) for n, _ in SYMBOLS}
    return R, g, form_matrix(g["b11"], g["b12"], g["b22"], g["a1"], g["a2"], g["q"])


def displayed_octic(g) -> GradedClass:
    b11, b12, b22, a1, a2, q = (g[n] for n, _ in SYMBOLS)
    return a2 * a2 * b11 - a1 * a2 * b12 + a1 * a1 * b22 - q * q * (4 * b11 * b22 - b12 * b12)


def det_identity() -> list[VerificationReport]:
    R, g, A = symbolic_form()
    det = determinant(A, R.one())
    octic = displayed_octic(g)
    computed = -4 * det
    if computed == octic:
        sign = 1
    elif computed == -octic:
        sign = -1
    else:
        sign = 0
    degrees = det.degrees_present()
    # diagonal instance pins the orientation
    diag = {"b11": 1, "b22": 1, "b12": 0, "a1": 0, "a2": 0, "q": 1}
    diag_det = det.evaluate(diag)
    zero_det = det.evaluate({})
    return [
        check(
            "discriminant.det-identity", "determinant of the conic-bundle form against the displayed octic",
            "equal up to a global sign", f"-4 det(A) = {'+' if sign == 1 else '-'}(displayed octic)",
            REFERENCE, equal=sign != 0,
            detail={"global_sign": sign, "det": repr(det), "displayed": repr(octic)},
        ),
        check("discriminant.degree-8", "graded degree of det(A)", [FORM_DEGREE], degrees, REFERENCE),
        check("discriminant.diagonal-instance", "det(A) at b11=b22=q=1, rest 0", -1, diag_det, DERIVED),
        check("discriminant.zero-instance", "det(A) with every symbol zero", 0, zero_det, TRIVIAL),
        check(
            "discriminant.sign-pinned", "global sign relating -4det(A) and the displayed octic",
            -1, sign, DERIVED,
        ),
    ]


def isotropy_check() -> list[VerificationReport]:
    R, g, A = symbolic_form()
    q = g["q"]
    out = []

    def quad(v):
        total = R.zero()
        for i in range(4):
            for j in range(4):
                if not _is_zero(v[i]) and not _is_zero(v[j]):
                    total = total + v[i] * A[i][j] * v[j]
        return total

    for sign, name in ((1, "plus"), (-1, "minus")):
        v = [q * sign, R.zero(), R.zero(), R.one()]
        out.append(check(f"discriminant.isotropy-{name}", f"v^T A v for v = ({'+' if sign > 0 else '-'}q, 0, 0, 1)",
                         "0", repr(quad(v)), REFERENCE))
    control = quad([R.zero(), R.zero(), R.zero(), R.one()])
    out.append(check("discriminant.isotropy-control", "v^T A v for v = (0, 0, 0, 1)", "q^2", repr(control),
                     TRIVIAL))
    return out


# -- instance layer --------------------------------------------------------

@lru_cache(maxsize=None)
def coordinate_ring() -> GradedRing:
    return GradedRing([(c, 1) for c in COORDS], FORM_DEGREE)


_TERM = re.compile(r"^([+-]?\d*)\*?((?:x[0-3](?:\^\d+)?\*?)*)$")


def parse_polynomial(text: str, ring: GradedRing | None = None) -> GradedClass:
    """Parse ``3*x0^2 + x1*x2 - 5`` style polynomials in ``x0..x3``."""
    ring = ring or coordinate_ring()
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    s = s.replace("-", "+-")
    out = ring.zero()
    for tok in s.split("+"):
        if not tok:
            continue
        m = _TERM.match(tok)
        if not m or (not m.group(1).lstrip("+-") and not m.group(2)):
            raise ValueError(f"cannot parse term {tok!r}")
        coeff_txt, mono_txt = m.group(1), m.group(2)
        if coeff_txt in ("", "+"):
            coeff = 1
        elif coeff_txt == "-":
            coeff = -1
        else:
            coeff = int(coeff_txt)
        exps = [0] * 4
        for f in filter(None, mono_txt.split("*")):
            var, _, e = f.partition("^")
            exps[int(var[1])] += int(e) if e else 1
        out = out + GradedClass(ring, {tuple(exps): coeff})
    return out


def format_polynomial(poly: GradedClass) -> str:
    parts = []
    for mono in sorted(poly.terms, reverse=True):
        c = poly.terms[mono]
        if c.denominator != 1:
            raise ValueError("instance polynomials have integer coefficients")
        c = int(c)
        factors = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mono) if e]
        body = "*".join(factors)
        if not body:
            t = str(abs(c))
        elif abs(c) == 1:
            t = body
        else:
            t = f"{abs(c)}*{body}"
        parts.append(("-" if c < 0 else "+", t))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


@dataclass
class FiniteFieldInstance:
    prime: int
    seed: int | None
    b11: GradedClass
    b12: GradedClass
    b22: GradedClass
    a1: GradedClass
    a2: GradedClass
    q: GradedClass
    forced_points: list = field(default_factory=list)

    KEYS = ("b11", "b12", "b22", "a1", "a2", "q")

    def polys(self) -> dict[str, GradedClass]:
        return {k: getattr(self, k) for k in self.KEYS}

    def dumps(self) -> str:
        lines = [f"prime={self.prime}", f"seed={'' if self.seed is None else self.seed}"]
        lines += [f"{k}={format_polynomial(getattr(self, k))}" for k in self.KEYS]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "FiniteFieldInstance":
        ring = coordinate_ring()
        vals = {}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            vals[k] = v
        missing = [k for k in ("prime",) + cls.KEYS if k not in vals]
        if missing:
            raise ValueError(f"instance file lacks {', '.join(missing)}")
        polys = {k: parse_polynomial(vals[k], ring) for k in cls.KEYS}
        for k, d in (("b11", 2), ("b12", 2), ("b22", 2), ("a1", 3), ("a2", 3), ("q", 2)):
            if not polys[k].is_zero() and polys[k].degrees_present() != [d]:
                raise ValueError(f"{k} must be homogeneous of degree {d}")
        seed = vals.get("seed") or None
        return cls(int(vals["prime"]), int(seed) if seed is not None else None, **polys)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> "FiniteFieldInstance":
        return cls.loads(Path(path).read_text())


def projective_points(p: int, n: int = 3):
    """Normalised representatives of ``P^n(F_p)``: first nonzero coordinate 1."""
    for lead in range(n + 1):
        for tail in product(range(p), repeat=n - lead):
            yield (0,) * lead + (1,) + tail


def _point(pt) -> dict[str, int]:
    return dict(zip(COORDS, pt))


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def null_space_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    m = [[x % p for x in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][free] % p
        basis.append(v)
    return basis


def _random_form(ring, degree, rng, p) -> GradedClass:
    monos = ring.normal_monomials(degree)
    return GradedClass(ring, {m: rng.randrange(p) for m in monos})


def _quadric_from_gram(ring, gram, p) -> GradedClass:
    terms = {}
    for i in range(4):
        for j in range(i, 4):
            e = [0] * 4
            e[i] += 1
            e[j] += 1
            c = gram[i][j] if i == j else 2 * gram[i][j]
            terms[tuple(e)] = (terms.get(tuple(e), 0) + c) % p
    return GradedClass(ring, terms)


def _cubic_through(ring, points, rng, p) -> GradedClass:
    monos = ring.normal_monomials(3)
    rows = [[_mono_value(m, pt, p) for m in monos] for pt in points]
    basis = null_space_mod_p(rows, len(monos), p)
    coeffs = [0] * len(monos)
    for v in basis:
        c = rng.randrange(p)
        coeffs = [(x + c * y) % p for x, y in zip(coeffs, v)]
    return GradedClass(ring, dict(zip(monos, coeffs)))


def _mono_value(m, pt, p) -> int:
    v = 1
    for x, e in zip(pt, m):
        v = v * pow(x, e, p) % p
    return v


def random_instance(prime: int = 7, seed: int = 0, forced: int = 3) -> FiniteFieldInstance:
    """Seeded member of the linear system with ``forced`` points on ``V(a1, a2, q)``.

    The quadric is smooth (full-rank Gram matrix); the binary form in the
    ``b``'s is resampled until it is nondegenerate at every point of
    ``V(a1, a2, q)``, which is the genericity the node statement needs.
    """
    if prime <= 2:
        raise ValueError("need an odd prime")
    rng = random.Random(seed)
    ring = coordinate_ring()
    while True:
        gram = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                gram[i][j] = gram[j][i] = rng.randrange(prime)
        if rank_mod_p(gram, prime) == 4:
            break
    q = _quadric_from_gram(ring, gram, prime)
    on_q = [pt for pt in projective_points(prime) if q.evaluate(_point(pt), prime) == 0]
    chosen = rng.sample(on_q, min(forced, len(on_q)))
    a1 = _cubic_through(ring, chosen, rng, prime)
    a2 = _cubic_through(ring, chosen, rng, prime)
    base = [pt for pt in on_q if a1.evaluate(_point(pt), prime) == 0 and a2.evaluate(_point(pt), prime) == 0]
    for _ in range(1000):
        b11, b12, b22 = (_random_form(ring, 2, rng, prime) for _ in range(3))
        if all(_binary_discriminant(b11, b12, b22, pt, prime) for pt in base):
            break
    else:  # pragma: no cover - astronomically unlikely
        raise RuntimeError("could not find a nondegenerate binary form")
    return FiniteFieldInstance(prime, seed, b11, b12, b22, a1, a2, q, sorted(chosen))


def _binary_discriminant(b11, b12, b22, pt, p) -> int:
    P = _point(pt)
    return (4 * b11.evaluate(P, p) * b22.evaluate(P, p) - b12.evaluate(P, p) ** 2) % p


def instance_det(inst: FiniteFieldInstance) -> GradedClass:
    """``det(2A)`` as a polynomial on ``P3`` (degree 8)."""
    ring = inst.q.ring
    m = form_matrix(inst.b11, inst.b12, inst.b22, inst.a1, inst.a2, inst.q, half=False)
    return determinant(m, ring.one())


def _matrix_at(inst: FiniteFieldInstance, pt) -> list[list[int]]:
    P = _point(pt)
    p = inst.prime
    v = {k: f.evaluate(P, p) for k, f in inst.polys().items()}
    return [
        [-2, 0, 0, 0],
        [0, 2 * v["b11"], v["b12"], v["a1"]],
        [0, v["b12"], 2 * v["b22"], v["a2"]],
        [0, v["a1"], v["a2"], 2 * v["q"] ** 2],
    ]


@dataclass
class NodeSurvey:
    prime: int
    base_points: list
    singular: dict
    corank: dict
    corank2_on_quadric: list
    quadric_points: int

    @property
    def all_singular(self) -> bool:
        return all(self.singular.values())

    @property
    def all_corank_one(self) -> bool:
        return all(c == 1 for c in self.corank.values())


def survey_nodes(inst: FiniteFieldInstance) -> NodeSurvey:
    p = inst.prime
    if p > MAX_PRIME:
        raise EnumerationBoundError(f"p = {p} exceeds the enumeration bound {MAX_PRIME}")
    if p <= 2:
        raise ValueError("need an odd prime")
    det = instance_det(inst)
    partials = [det.derivative(c) for c in COORDS]
    base, on_q_count, bad_q = [], 0, []
    singular, corank = {}, {}
    for pt in projective_points(p):
        P = _point(pt)
        if inst.q.evaluate(P, p):
            continue
        on_q_count += 1
        mat = _matrix_at(inst, pt)
        r = rank_mod_p(mat, p)
        if r <= 2:
            bad_q.append(pt)
        if inst.a1.evaluate(P, p) or inst.a2.evaluate(P, p):
            continue
        base.append(pt)
        singular[pt] = det.evaluate(P, p) == 0 and all(d.evaluate(P, p) == 0 for d in partials)
        corank[pt] = 4 - r
    return NodeSurvey(p, base, singular, corank, bad_q, on_q_count)


def finite_field_nodes(inst: FiniteFieldInstance | None = None) -> list[VerificationReport]:
    inst = inst or random_instance()
    s = survey_nodes(inst)
    tag = f"p={inst.prime}, seed={inst.seed}"
    return [
        check("discriminant.ff-base-nonempty", f"points of V(a1, a2, q) found ({tag})",
              True, len(s.base_points) > 0, DERIVED, detail=[list(x) for x in s.base_points]),
        check("discriminant.ff-singular", f"every point of V(a1, a2, q) is singular on V(det A) ({tag})",
              True, s.all_singular, REFERENCE),
        check("discriminant.ff-corank-one", f"corank of A is exactly 1 at those points ({tag})",
              True, s.all_corank_one, REFERENCE, detail={str(k): v for k, v in s.corank.items()}),
        check("discriminant.ff-corank2-off-quadric", f"corank >= 2 locus avoids V(q) ({tag})",
              [], [list(x) for x in s.corank2_on_quadric], DERIVED),
        check("discriminant.bezout-bound", "scheme-theoretic count of V(a1, a2, q)",
              18, bezout_nodes(), REFERENCE, detail={"points over F_p": len(s.base_points)}),
    ]


def degenerate_instance(prime: int = 7, seed: int = 0) -> FiniteFieldInstance:
    """Control with ``a1 = a2 = 0``: every point of ``V(q)`` becomes singular on ``D``."""
    inst = random_instance(prime, seed)
    zero = inst.q.ring.zero()
    return FiniteFieldInstance(prime, seed, inst.b11, inst.b12, inst.b22, zero, zero, inst.q)


def suite(prime: int = 7, seed: int = 0, instance: FiniteFieldInstance | None = None) -> list[VerificationReport]:
    inst = instance or random_instance(prime, seed)
    return det_identity() + isotropy_check() + finite_field_nodes(inst)
