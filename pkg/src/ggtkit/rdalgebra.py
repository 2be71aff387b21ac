"""Bounding-function classes and weighted l1 seminorms on finitely
supported group-algebra elements.

A bounding function is a symbolic nondecreasing function R+ -> R+ built
from constants, affine pieces, polynomials over the (1+x)^m basis, and
exponentials, closed under positive rational combinations, max, and
composition.  Nondecreasingness is guaranteed structurally (all weights
and coefficients are nonnegative).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .config import DEFAULT_RADIUS_CAP
from .errors import ClassEscape, DomainError
from .groups import Element, GroupModel, exact_length

Number = Union[int, Fraction, float]


class BoundingClass(enum.IntEnum):
    """The named classes, ordered Bmin < Lin < P < E < Bmax."""

    BMIN = 0
    LIN = 1
    P = 2
    E = 3
    BMAX = 4

    def __str__(self):
        return {0: "Bmin", 1: "Lin", 2: "P", 3: "E", 4: "Bmax"}[int(self)]


def _check_nonneg(x) -> None:
    if x < 0:
        raise DomainError("bounding functions are only defined on x >= 0")


class BoundingFunction:
    """Base class; subclasses are immutable value objects."""

    def __call__(self, x: Number) -> Number:
        raise NotImplementedError

    def tag(self) -> BoundingClass:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.describe()}>"


@dataclass(frozen=True)
class Const(BoundingFunction):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value <= 0:
            raise DomainError("constant bounding functions must be positive")

    def __call__(self, x):
        _check_nonneg(x)
        return self.value

    def tag(self):
        return BoundingClass.BMIN

    def describe(self):
        return str(self.value)


@dataclass(frozen=True)
class Affine(BoundingFunction):
    """a + b*x with a, b >= 0 rational (the class Lin when b > 0)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise DomainError("affine bounding functions need a, b >= 0, not both zero")

    def __call__(self, x):
        _check_nonneg(x)
        return self.a + self.b * x

    def tag(self):
        return BoundingClass.BMIN if self.b == 0 else BoundingClass.LIN

    def describe(self):
        return f"{self.a} + {self.b}*x"


@dataclass(frozen=True)
class Poly(BoundingFunction):
    """Positive rational combination of (1+x)^m basis functions."""

    coeffs: tuple  # sorted tuple of (m, coefficient)

    def __post_init__(self):
        norm = {}
        for m, c in self.coeffs:
            c = Fraction(c)
            if m < 0 or int(m) != m:
                raise DomainError("basis exponents must be nonnegative integers")
            if c < 0:
                raise DomainError("basis coefficients must be nonnegative")
            if c:
                norm[int(m)] = norm.get(int(m), Fraction(0)) + c
        if not norm:
            raise DomainError("a polynomial bounding function needs a positive term")
        object.__setattr__(self, "coeffs", tuple(sorted(norm.items())))

    @staticmethod
    def basis(m: int, coefficient=1) -> "Poly":
        return Poly(((m, Fraction(coefficient)),))

    def __call__(self, x):
        _check_nonneg(x)
        return sum(c * (1 + x) ** m for m, c in self.coeffs)

    def degree(self) -> int:
        return self.coeffs[-1][0]

    def coeff_total(self) -> Fraction:
        return sum(c for _, c in self.coeffs)

    def tag(self):
        deg = self.degree()
        if deg == 0:
            return BoundingClass.BMIN
        return BoundingClass.LIN if deg == 1 else BoundingClass.P

    def describe(self):
        parts = []
        for m, c in self.coeffs:
            if m == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"(1+x)^{m}")
            else:
                parts.append(f"{c}*(1+x)^{m}")
        return " + ".join(parts)


@dataclass(frozen=True)
class Exp(BoundingFunction):
    """base^(scale*x) with rational base >= 1 and rational scale > 0."""

    base: Fraction
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.base < 1:
            raise DomainError("exponential base must be >= 1")
        if self.scale <= 0:
            raise DomainError("exponential scale must be positive")

    def __call__(self, x):
        _check_nonneg(x)
        e = self.scale * Fraction(x) if not isinstance(x, float) else None
        if e is not None and e.denominator == 1:
            return self.base ** int(e)
        return float(self.base) ** float(self.scale * x)

    def tag(self):
        return BoundingClass.BMIN if self.base == 1 else BoundingClass.E

    def describe(self):
        inner = "x" if self.scale == 1 else f"{self.scale}*x"
        return f"{self.base}^({inner})"


@dataclass(frozen=True)
class Sum(BoundingFunction):
    """Positive rational linear combination of bounding functions."""

    terms: tuple  # tuple of (weight, BoundingFunction)

    def __post_init__(self):
        terms = tuple((Fraction(w), f) for w, f in self.terms)
        if not terms or any(w <= 0 for w, _ in terms):
            raise DomainError("sum terms need positive weights")
        object.__setattr__(self, "terms", terms)

    def __call__(self, x):
        return sum(w * f(x) for w, f in self.terms)

    def tag(self):
        return max(f.tag() for _, f in self.terms)

    def describe(self):
        return " + ".join(
            f.describe() if w == 1 else f"{w}*({f.describe()})" for w, f in self.terms
        )


@dataclass(frozen=True)
class MaxOf(BoundingFunction):
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise DomainError("max needs at least one part")

    def __call__(self, x):
        return max(f(x) for f in self.parts)

    def tag(self):
        return max(f.tag() for f in self.parts)

    def describe(self):
        return "max(" + ", ".join(f.describe() for f in self.parts) + ")"


@dataclass(frozen=True)
class Compose(BoundingFunction):
    outer: BoundingFunction
    inner: BoundingFunction

    def __call__(self, x):
        return self.outer(self.inner(x))

    def tag(self):
        to, ti = self.outer.tag(), self.inner.tag()
        if to == BoundingClass.BMIN:
            return BoundingClass.BMIN
        if BoundingClass.E in (to, ti):
            return BoundingClass.E
        return max(to, ti)  # compositions up to P stay in P

    def describe(self):
        return f"({self.outer.describe()}) o ({self.inner.describe()})"


IDENTITY = Affine(0, 1)
ONE = Const(1)


# ---------------------------------------------------------------------------
# structural operations


def f2_of(f: BoundingFunction) -> BoundingFunction:
    """A class member f2 with f(2x) <= f2(x) for all x >= 0.

    Constructive choices: (1+x)^m -> (1+x)^(2m) since 1+2x <= (1+x)^2;
    base^(s x) -> base^(2s x); constants unchanged.
    """
    if isinstance(f, Const):
        out = f
    elif isinstance(f, Affine):
        out = Affine(f.a, 2 * f.b)
    elif isinstance(f, Poly):
        out = Poly(tuple((2 * m, c) for m, c in f.coeffs))
    elif isinstance(f, Exp):
        out = Exp(f.base, 2 * f.scale)
    elif isinstance(f, Sum):
        out = Sum(tuple((w, f2_of(g)) for w, g in f.terms))
    elif isinstance(f, MaxOf):
        out = MaxOf(tuple(f2_of(g) for g in f.parts))
    elif isinstance(f, Compose):
        out = Compose(f.outer, f2_of(f.inner))
    else:
        raise DomainError(f"no doubling rule for {type(f).__name__}")
    _verify_dominance(lambda x: f(2 * x), out, range(0, 17), "f(2x) <= f2(x)")
    return out


def _verify_dominance(lhs, rhs, grid: Iterable[int], what: str) -> None:
    for x in grid:
        try:
            lv, rv = lhs(x), rhs(x)
        except OverflowError:
            continue
        if isinstance(lv, float) or isinstance(rv, float):
            if float(lv) > float(rv) * (1 + 1e-9) + 1e-9:
                raise DomainError(f"dominance check failed at x={x}: {what}")
        elif lv > rv:
            raise DomainError(f"dominance check failed at x={x}: {what}")


def _poly_envelope(f: BoundingFunction):
    """(c, M) with f(x) <= c * (1+x)^M, for functions of class <= P."""
    if isinstance(f, Const):
        return f.value, 0
    if isinstance(f, Affine):
        return f.a + f.b, 1
    if isinstance(f, Poly):
        return f.coeff_total(), f.degree()
    if isinstance(f, Sum):
        envs = [_poly_envelope(g) for _, g in f.terms]
        ws = [w for w, _ in f.terms]
        return sum(w * c for w, (c, _) in zip(ws, envs)), max(m for _, m in envs)
    if isinstance(f, MaxOf):
        envs = [_poly_envelope(g) for g in f.parts]
        return sum(c for c, _ in envs), max(m for _, m in envs)
    if isinstance(f, Compose):
        co, mo = _poly_envelope(f.outer)
        ci, mi = _poly_envelope(f.inner)
        # outer(inner) <= co (1 + ci (1+x)^mi)^mo <= co (1+ci)^mo (1+x)^(mi mo)
        return co * (1 + ci) ** mo, mi * mo
    raise DomainError(f"no polynomial envelope for {type(f).__name__}")


def compose_bound(
    f1: BoundingFunction,
    f2: BoundingFunction,
    target_class: Optional[BoundingClass] = None,
) -> BoundingFunction:
    """A symbolic f3 with f1(f2(x)) <= f3(x), verified on a grid.

    Raises ClassEscape when the constructed bound leaves ``target_class``.
    """
    if isinstance(f1, Const):
        out = f1
    elif isinstance(f2, Const):
        val = f1(f2.value)
        out = Const(val if not isinstance(val, float) else Fraction(math.ceil(val)))
    elif isinstance(f1, Affine):
        terms = []
        if f1.a:
            terms.append((Fraction(1), Const(f1.a)))
        if f1.b:
            terms.append((f1.b, f2))
        out = Sum(tuple(terms))
    elif f1.tag() <= BoundingClass.P and f2.tag() <= BoundingClass.P:
        ci, mi = _poly_envelope(f2)
        if isinstance(f1, Poly):
            pieces = f1.coeffs
        else:
            c1, m1 = _poly_envelope(f1)
            pieces = ((m1, c1),)
        # (1 + f2)^m <= ((1 + ci) (1+x)^mi)^m
        out = Poly(tuple((m * mi, c * (1 + ci) ** m) for m, c in pieces))
    elif isinstance(f1, Poly) and isinstance(f2, Exp) and f2.base > 1:
        # (1 + C^(sx))^m <= (2 C^(sx))^m
        terms = []
        for m, c in f1.coeffs:
            if m == 0:
                terms.append((c, ONE))
            else:
                terms.append((c * 2**m, Exp(f2.base, f2.scale * m)))
        out = Sum(tuple(terms))
    else:
        out = Compose(f1, f2)  # honest member of the composition closure E

    grid = range(0, 65) if out.tag() <= BoundingClass.P else range(0, 9)
    _verify_dominance(lambda x: f1(f2(x)), out, grid, "f1(f2(x)) <= f3(x)")
    if target_class is not None and out.tag() > target_class:
        raise ClassEscape(
            f"composition lands in {out.tag()}, outside requested {target_class}"
        )
    return out


def dominates_on_grid(f: BoundingFunction, g: BoundingFunction, grid=range(0, 65)) -> bool:
    """Grid refutation check for f <= g; True never certifies, False refutes."""
    try:
        _verify_dominance(f, g, grid, "f <= g")
    except DomainError:
        return False
    return True


def parse_bounding_function(text: str) -> BoundingFunction:
    """Parse simple expressions: '1', '5/2', 'x', '(1+x)^3', '2^x', sums
    like '3*(1+x)^2 + 1'."""
    text = text.strip()
    terms = [t.strip() for t in text.split("+")]
    # re-join splits inside '(1+x)' parentheses
    merged: list[str] = []
    depth = 0
    for t in terms:
        if depth > 0:
            merged[-1] += "+" + t
        else:
            merged.append(t)
        depth += t.count("(") - t.count(")")
    parsed = []
    for term in merged:
        term = term.strip()
        weight = Fraction(1)
        if "*" in term:
            w, term = term.split("*", 1)
            weight = Fraction(w.strip())
            term = term.strip()
        if term == "x":
            parsed.append((weight, IDENTITY))
        elif term.startswith("(1+x)"):
            m = 1
            if "^" in term:
                m = int(term.split("^", 1)[1])
            parsed.append((weight, Poly.basis(m)))
        elif "^x" in term:
            base = Fraction(term.split("^", 1)[0])
            parsed.append((weight, Exp(base)))
        else:
            parsed.append((weight, Const(Fraction(term))))
    if len(parsed) == 1 and parsed[0][0] == 1:
        return parsed[0][1]
    return Sum(tuple(parsed))


# ---------------------------------------------------------------------------
# finitely supported vectors and seminorms


def _to_pair(value):
    if isinstance(value, tuple):
        return (Fraction(value[0]), Fraction(value[1]))
    if isinstance(value, complex):
        return (Fraction(value.real), Fraction(value.imag))
    return (Fraction(value), Fraction(0))


class SupportedVector:
    """Finitely supported function from group elements to C.

    In exact mode coefficients are pairs of rationals; in float mode they
    are python complex numbers.  Zero coefficients are never stored.
    """

    def __init__(self, model: GroupModel, terms=None, exact: bool = True):
        self.model = model
        self.exact = exact
        self.coeffs: dict = {}
        if terms:
            for elem, value in terms:
                self.add_term(elem, value)

    @staticmethod
    def delta(model: GroupModel, elem: Element, coefficient=1, exact: bool = True):
        return SupportedVector(model, [(elem, coefficient)], exact=exact)

    def _coerce(self, value):
        if self.exact:
            pair = _to_pair(value)
            return None if pair == (0, 0) else pair
        c = complex(value[0], value[1]) if isinstance(value, tuple) else complex(value)
        return None if c == 0 else c

    def add_term(self, elem: Element, value) -> None:
        self.model.validate_element(elem)
        if self.exact:
            old = self.coeffs.get(elem, (Fraction(0), Fraction(0)))
            new_pair = _to_pair(value)
            new = (old[0] + new_pair[0], old[1] + new_pair[1])
            if new == (0, 0):
                self.coeffs.pop(elem, None)
            else:
                self.coeffs[elem] = new
        else:
            val = self.coeffs.get(elem, 0j) + (
                complex(value[0], value[1]) if isinstance(value, tuple) else complex(value)
            )
            if val == 0:
                self.coeffs.pop(elem, None)
            else:
                self.coeffs[elem] = val

    def support(self):
        return list(self.coeffs.keys())

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: self.model.element_str(kv[0]))

    def __eq__(self, other):
        return (
            isinstance(other, SupportedVector)
            and other.model == self.model
            and self._normalized() == other._normalized()
        )

    def _normalized(self):
        if self.exact:
            return dict(self.coeffs)
        return {k: complex(v) for k, v in self.coeffs.items()}

    def __add__(self, other):
        if other.model != self.model:
            raise DomainError("vectors live over different models")
        out = SupportedVector(self.model, exact=self.exact and other.exact)
        for src in (self, other):
            for elem, val in src.coeffs.items():
                out.add_term(elem, val)
        return out

    def scale(self, c):
        out = SupportedVector(self.model, exact=self.exact and not isinstance(c, (float, complex)))
        for elem, val in self.coeffs.items():
            if out.exact:
                a, b = val
                cr, ci = _to_pair(c)
                out.add_term(elem, (a * cr - b * ci, a * ci + b * cr))
            else:
                va = complex(val[0], val[1]) if isinstance(val, tuple) else complex(val)
                out.add_term(elem, va * complex(c))
        return out

    def abs_coefficient(self, elem: Element):
        val = self.coeffs[elem]
        if self.exact:
            re, im = val
            if im == 0:
                return abs(re)
            if re == 0:
                return abs(im)
            return math.sqrt(float(re * re + im * im))
        return abs(val)

    def convolve(self, other: "SupportedVector") -> "SupportedVector":
        """Group-algebra product: coefficient of g is the sum of a(g1) b(g2)
        over factorizations g1 g2 = g."""
        if other.model != self.model:
            raise DomainError("vectors live over different models")
        model = self.model
        out = SupportedVector(model, exact=self.exact and other.exact)
        for g1, v1 in self.coeffs.items():
            for g2, v2 in other.coeffs.items():
                prod = model.multiply(g1, g2)
                if out.exact:
                    a, b = v1
                    c, d = v2
                    out.add_term(prod, (a * c - b * d, a * d + b * c))
                else:
                    w1 = complex(v1[0], v1[1]) if isinstance(v1, tuple) else complex(v1)
                    w2 = complex(v2[0], v2[1]) if isinstance(v2, tuple) else complex(v2)
                    out.add_term(prod, w1 * w2)
        return out

    def to_json(self) -> list:
        """JSON form: a list of {element, re, im} with normal-form element
        strings and rational coefficient strings."""
        out = []
        for elem, val in self.items_sorted():
            if self.exact:
                re, im = val
            else:
                re, im = Fraction(val.real), Fraction(val.imag)
            out.append({"element": self.model.element_str(elem), "re": str(re), "im": str(im)})
        return out

    @staticmethod
    def from_json(model: GroupModel, data, exact: bool = True) -> "SupportedVector":
        vec = SupportedVector(model, exact=exact)
        for term in data:
            elem = model.parse_element(term["element"])
            vec.add_term(elem, (Fraction(term["re"]), Fraction(term["im"])))
        return vec

    def seminorm(self, f: BoundingFunction, length_cap: int = DEFAULT_RADIUS_CAP):
        """Weighted l1 seminorm: sum |coeff(g)| * f(L(g)) over the support."""
        total = Fraction(0)
        for elem, _ in self.items_sorted():
            length = exact_length(self.model, elem, length_cap)
            total = total + self.abs_coefficient(elem) * f(length)
        return total

    def l1(self):
        total = Fraction(0)
        for elem, _ in self.items_sorted():
            total = total + self.abs_coefficient(elem)
        return total


def seminorm(vec: SupportedVector, f: BoundingFunction, length_cap: int = DEFAULT_RADIUS_CAP):
    return vec.seminorm(f, length_cap)


def convolve(a: SupportedVector, b: SupportedVector) -> SupportedVector:
    return a.convolve(b)


@dataclass(frozen=True)
class ProductEstimateReport:
    lhs: Number
    rhs: Number
    holds: bool
    f2_description: str


def check_product_estimate(
    a: SupportedVector,
    b: SupportedVector,
    f: BoundingFunction,
    length_cap: int = DEFAULT_RADIUS_CAP,
) -> ProductEstimateReport:
    """Executable submultiplicativity estimate for the weighted seminorms:

        |a * b|_f  <=  |a|_1 |b|_f2 + |a|_f2 |b|_1

    with f2 the constructive doubling bound of f."""
    f2 = f2_of(f)
    lhs = a.convolve(b).seminorm(f, length_cap)
    rhs = a.l1() * b.seminorm(f2, length_cap) + a.seminorm(f2, length_cap) * b.l1()
    if isinstance(lhs, float) or isinstance(rhs, float):
        holds = float(lhs) <= float(rhs) * (1 + 1e-9) + 1e-9
    else:
        holds = lhs <= rhs
    return ProductEstimateReport(lhs, rhs, holds, f2.describe())
