"""Truncated graded polynomial rings with exact rational coefficients.

A :class:`GradedRing` is ``Q[x_1, ..., x_n]`` with positive integer degrees on
the generators, modulo a fixed set of monomial rewrite rules and modulo every
monomial of total degree above ``top_degree``.  Elements are
:class:`GradedClass` instances, which are immutable and always stored in
normal form.

Rewrite rules are oriented: the leading monomial must be strictly larger than
every monomial of its replacement in the degree-lexicographic order (generator
order = declaration order).  This is enough for the tower-of-projective-bundle
relations used elsewhere in the package; it is not a Groebner basis engine.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...] of exponents

__all__ = [
    "GradedClass",
    "GradedRing",
    "RingMismatchError",
    "exp_series",
    "invert_series",
    "ring_add",
    "ring_mul",
]


class RingMismatchError(ValueError):
    pass


def _deglex_key(degrees, mono):
    return (sum(d * e for d, e in zip(degrees, mono)), mono)


class GradedRing:
    """``Q[gens] / (relations, everything above top_degree)``.

    >>> R = GradedRing([("h", 1)], top_degree=3)
    >>> (h,) = R.gens()
    >>> (1 + h) * (1 - h)
    1 - h^2
    """

    def __init__(self, variables: Sequence[tuple[str, int]], top_degree: int, relations=()):
        if any(d <= 0 for _, d in variables):
            raise ValueError("generator degrees must be positive")
        self.names = tuple(n for n, _ in variables)
        self.degrees = tuple(int(d) for _, d in variables)
        self.top_degree = int(top_degree)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._relations: tuple = ()
        self._nf_cache: dict = {}
        if relations:
            self._install(relations)

    # -- construction -------------------------------------------------
    def quotient(self, relations: Iterable[tuple["GradedClass", object]]) -> "GradedRing":
        """New ring with extra rewrite rules ``lead -> replacement``.

        ``lead`` must be a single monomial of this ring; ``replacement`` is a
        class (or scalar) of this ring.
        """
        raw = [(r.lead_monomial_exact(), self.coerce(rep)._terms) for r, rep in relations]
        return GradedRing(
            list(zip(self.names, self.degrees)),
            self.top_degree,
            list(self._relations) + raw,
        )

    def _install(self, relations):
        checked = []
        for lead, rep in relations:
            lead = tuple(lead)
            rep = {tuple(m): Fraction(c) for m, c in dict(rep).items() if c}
            lk = _deglex_key(self.degrees, lead)
            for m in rep:
                if _deglex_key(self.degrees, m) >= lk:
                    raise ValueError(
                        f"relation for {self._fmt_mono(lead)} does not decrease: "
                        f"{self._fmt_mono(m)}"
                    )
            checked.append((lead, rep))
        self._relations = tuple(checked)

    # -- element helpers ----------------------------------------------
    def gens(self) -> tuple["GradedClass", ...]:
        out = []
        for i in range(len(self.names)):
            e = [0] * len(self.names)
            e[i] = 1
            out.append(GradedClass(self, {tuple(e): 1}))
        return tuple(out)

    def gen(self, name: str) -> "GradedClass":
        return self.gens()[self._index[name]]

    def one(self) -> "GradedClass":
        return GradedClass(self, {self.unit_monomial(): 1})

    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.names)

    def monomial(self, **exps) -> "GradedClass":
        e = [0] * len(self.names)
        for k, v in exps.items():
            e[self._index[k]] = v
        return GradedClass(self, {tuple(e): 1})

    def coerce(self, x) -> "GradedClass":
        if isinstance(x, GradedClass):
            if x.ring is not self:
                raise RingMismatchError("operands live in different rings")
            return x
        if isinstance(x, (int, Fraction)):
            return GradedClass(self, {self.unit_monomial(): x} if x else {})
        raise TypeError(f"cannot coerce {type(x).__name__} into a graded ring")

    def mono_degree(self, mono: Monomial) -> int:
        return sum(d * e for d, e in zip(self.degrees, mono))

    def normal_monomials(self, degree: int) -> list[Monomial]:
        """All reduced monomials of the given total degree, deglex-sorted."""
        out = []

        def rec(i, left, acc):
            if i == len(self.names):
                if left == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[i]
            for e in range(left // d + 1):
                rec(i + 1, left - e * d, acc + [e])

        rec(0, degree, [])
        reduced = [m for m in out if not any(_divides(lead, m) for lead, _ in self._relations)]
        return sorted(reduced, key=lambda m: _deglex_key(self.degrees, m))

    # -- normal form --------------------------------------------------
    def _normal_form_monomial(self, mono: Monomial) -> dict:
        if self.mono_degree(mono) > self.top_degree:
            return {}
        hit = self._nf_cache.get(mono)
        if hit is not None:
            return hit
        result = {mono: Fraction(1)}
        for lead, rep in self._relations:
            if _divides(lead, mono):
                rest = tuple(a - b for a, b in zip(mono, lead))
                result = {}
                for m, c in rep.items():
                    prod = tuple(a + b for a, b in zip(m, rest))
                    for mm, cc in self._normal_form_monomial(prod).items():
                        result[mm] = result.get(mm, 0) + c * cc
                result = {m: c for m, c in result.items() if c}
                break
        self._nf_cache[mono] = result
        return result

    def _reduce(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            if not c:
                continue
            for mm, cc in self._normal_form_monomial(tuple(m)).items():
                out[mm] = out.get(mm, 0) + Fraction(c) * cc
        return {m: c for m, c in out.items() if c}

    def _fmt_mono(self, mono) -> str:
        parts = []
        for n, e in zip(self.names, mono):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts) or "1"

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        rels = ", ".join(
            f"{self._fmt_mono(lead)}->{GradedClass(self, rep, _raw=True)!r}"
            for lead, rep in self._relations
        )
        return f"GradedRing([{gens}], top={self.top_degree}, relations=[{rels}])"


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


class GradedClass:
    """An element of a :class:`GradedRing`, kept in normal form."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: GradedRing, terms: Mapping, _raw: bool = False):
        self.ring = ring
        self._terms = dict(terms) if _raw else ring._reduce(terms)
        self._hash = None

    # -- accessors ----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, mono) -> Fraction:
        if isinstance(mono, GradedClass):
            mono = mono.lead_monomial_exact()
        return self._terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(self.ring.unit_monomial(), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def homogeneous(self, degree: int) -> "GradedClass":
        md = self.ring.mono_degree
        return GradedClass(self.ring, {m: c for m, c in self._terms.items() if md(m) == degree}, _raw=True)

    def degrees_present(self) -> list[int]:
        return sorted({self.ring.mono_degree(m) for m in self._terms})

    def lead_monomial_exact(self) -> Monomial:
        if len(self._terms) != 1 or next(iter(self._terms.values())) != 1:
            raise ValueError(f"{self!r} is not a bare monomial")
        return next(iter(self._terms))

    def linear_coefficients(self) -> dict[str, Fraction]:
        """Coefficients of the degree-1 generators, by name."""
        out = {}
        for i, n in enumerate(self.ring.names):
            if self.ring.degrees[i] == 1:
                e = [0] * len(self.ring.names)
                e[i] = 1
                out[n] = self._terms.get(tuple(e), Fraction(0))
        return out

    # -- arithmetic ---------------------------------------------------
    def _other(self, other) -> "GradedClass":
        return self.ring.coerce(other)

    def __add__(self, other):
        o = self._other(other)
        t = dict(self._terms)
        for m, c in o._terms.items():
            t[m] = t.get(m, 0) + c
        return GradedClass(self.ring, {m: c for m, c in t.items() if c}, _raw=True)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {m: -c for m, c in self._terms.items()}, _raw=True)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return GradedClass(self.ring, {m: c * other for m, c in self._terms.items()}, _raw=True)
        o = self._other(other)
        ring = self.ring
        top = ring.top_degree
        md = ring.mono_degree
        acc: dict = {}
        for m1, c1 in self._terms.items():
            d1 = md(m1)
            for m2, c2 in o._terms.items():
                if d1 + md(m2) > top:
                    continue
                prod = tuple(a + b for a, b in zip(m1, m2))
                for mm, cc in ring._normal_form_monomial(prod).items():
                    acc[mm] = acc.get(mm, 0) + c1 * c2 * cc
        return GradedClass(ring, {m: c for m, c in acc.items() if c}, _raw=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * invert_series(self._other(other))

    def __pow__(self, n: int):
        if n < 0:
            return invert_series(self) ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GradedClass):
            return self.ring is other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == self.ring.coerce(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.ring), frozenset(self._terms.items())))
        return self._hash

    # -- transformations ----------------------------------------------
    def dual(self) -> "GradedClass":
        """Multiply the degree-k part by (-1)^k (Chern character of the dual)."""
        md = self.ring.mono_degree
        return GradedClass(
            self.ring, {m: (-c if md(m) % 2 else c) for m, c in self._terms.items()}, _raw=True
        )

    def map_coefficients(self, fn: Callable[[Fraction], Fraction]) -> "GradedClass":
        return GradedClass(self.ring, {m: fn(c) for m, c in self._terms.items()})

    def derivative(self, name: str) -> "GradedClass":
        i = self.ring._index[name]
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = out.get(tuple(mm), 0) + c * m[i]
        return GradedClass(self.ring, out)

    def substitute(self, values: Mapping[str, "GradedClass"]) -> "GradedClass":
        """Replace generators by classes (of the same ring)."""
        ring = self.ring
        images = [ring.coerce(values[n]) if n in values else g for n, g in zip(ring.names, ring.gens())]
        out = ring.zero()
        for m, c in self._terms.items():
            term = ring.coerce(c)
            for img, e in zip(images, m):
                if e:
                    term = term * img**e
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, int], modulus: int | None = None):
        """Evaluate at a point; with ``modulus`` the result lives in Z/p."""
        coords = [point.get(n, 0) for n in self.ring.names]
        if modulus is None:
            total = Fraction(0)
            for m, c in self._terms.items():
                v = c
                for x, e in zip(coords, m):
                    if e:
                        v *= Fraction(x) ** e
                total += v
            return total
        p = modulus
        total = 0
        for m, c in self._terms.items():
            v = c.numerator * pow(c.denominator, -1, p)
            for x, e in zip(coords, m):
                if e:
                    v = v * pow(x, e, p)
            total = (total + v) % p
        return total

    # -- display ------------------------------------------------------
    def __repr__(self):
        if not self._terms:
            return "0"
        ring = self.ring
        items = sorted(self._terms.items(), key=lambda kv: _deglex_key(ring.degrees, kv[0]))
        out = []
        for m, c in items:
            mono = ring._fmt_mono(m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s


def ring_add(a: GradedClass, b: GradedClass) -> GradedClass:
    if a.ring is not b.ring:
        raise RingMismatchError("operands live in different rings")
    return a + b


def ring_mul(a: GradedClass, b: GradedClass) -> GradedClass:
    if a.ring is not b.ring:
        raise RingMismatchError("operands live in different rings")
    return a * b


def exp_series(a: GradedClass) -> GradedClass:
    """``sum a^k / k!`` truncated at the ring's top degree."""
    if a.constant_term() != 0:
        raise ValueError("exp_series needs a nilpotent argument (zero constant term)")
    ring = a.ring
    result = ring.one()
    power = ring.one()
    for k in range(1, ring.top_degree + 1):
        power = power * a
        if power.is_zero():
            break
        result = result + power * Fraction(1, factorial(k))
    return result


def invert_series(a: GradedClass) -> GradedClass:
    """Multiplicative inverse of a class with constant term 1."""
    if a.constant_term() != 1:
        raise ValueError("invert_series needs constant term 1")
    ring = a.ring
    nil = ring.one() - a
    result = ring.one()
    power = ring.one()
    for _ in range(ring.top_degree):
        power = power * nil
        if power.is_zero():
            break
        result = result + power
    return result
