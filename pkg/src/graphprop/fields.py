"""Scalar fields: Q, GF(p), Q(alpha), Q(x) and an approximate complex adapter.

A field is an arithmetic context; elements are plain immutable Python values
(``Fraction``, ``int``, coefficient tuples, :class:`RatFunc`, ``complex``).
All exact kinds keep elements in canonical form, so ``==`` on elements is
field equality and ``format`` is a bijection onto canonical strings.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from graphprop import expr, poly


class FieldError(ValueError):
    """Invalid field descriptor."""


class ScalarParseError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    """A rational function was specialised at a root of its denominator."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class Field:
    exact = True
    kind = "?"

    # subclasses provide: zero, one, from_int, from_fraction, add, sub, mul,
    # neg, inv, parse, format, descriptor

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return a == b

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        out = self.one
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def generator(self, name: str):
        raise ScalarParseError(f"unknown symbol {name!r} in field {self}")

    def _expr_ops(self):
        return {
            "add": self.add,
            "sub": self.sub,
            "mul": self.mul,
            "div": self._checked_div,
            "neg": self.neg,
            "pow": self.pow,
            "int": self.from_int,
            "dec": self._decimal,
            "name": self.generator,
        }

    def _checked_div(self, a, b):
        if self.is_zero(b):
            raise ScalarParseError("division by zero")
        return self.div(a, b)

    def _decimal(self, text):
        return self.from_fraction(Fraction(text))

    def parse_expression(self, text: str):
        try:
            return expr.evaluate(text, self._expr_ops())
        except (expr.ExprError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"cannot parse {text!r} in {self}: {exc}") from None

    def parse(self, text: str):
        return self.parse_expression(text)

    def __repr__(self):
        return f"field({self.spec()!r})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.spec())


class Rationals(Field):
    kind = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def format(self, a) -> str:
        return str(a)

    def descriptor(self):
        return {"kind": "Q"}

    def spec(self):
        return "Q"


class PrimeField(Field):
    kind = "GF"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"GF:{p}: modulus is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, q):
        q = Fraction(q)
        den = q.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"{q} has no image in GF({self.p})")
        return q.numerator * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def parse(self, text):
        m = re.fullmatch(r"\s*(.*?)\s+mod\s+(\d+)\s*", text)
        if m:
            if int(m.group(2)) != self.p:
                raise ScalarParseError(f"{text!r}: modulus differs from {self.p}")
            text = m.group(1)
        return self.parse_expression(text)

    def format(self, a) -> str:
        return f"{a} mod {self.p}"

    def descriptor(self):
        return {"kind": "GF", "p": self.p}

    def spec(self):
        return f"GF:{self.p}"


class NumberField(Field):
    """Q[t]/(minpoly) with elements as coefficient tuples of length deg."""

    kind = "nf"

    def __init__(self, minpoly: Sequence[int], gen: str = "alpha"):
        coeffs = poly.trim([int(c) for c in minpoly])
        if len(coeffs) < 2:
            raise FieldError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise FieldError("minimal polynomial must be monic")
        if len(coeffs) - 1 <= 4 and not poly.is_irreducible_small(coeffs):
            raise FieldError(f"{poly.to_str(coeffs)} is reducible over Q")
        self.minpoly = coeffs
        self.deg = len(coeffs) - 1
        self.gen = gen
        self.zero = (Fraction(0),) * self.deg
        self.one = (Fraction(1),) + (Fraction(0),) * (self.deg - 1)
        # t^k reduced mod minpoly for deg <= k <= 2 deg - 2
        self._fold = {}
        cur = tuple(Fraction(-c) for c in coeffs[:-1])
        for k in range(self.deg, 2 * self.deg - 1):
            self._fold[k] = cur
            shifted = (Fraction(0),) + cur[:-1]
            top = cur[-1]
            cur = tuple(shifted[i] - top * coeffs[i] for i in range(self.deg))

    def _pad(self, coeffs):
        coeffs = list(coeffs)
        return tuple(Fraction(c) for c in coeffs) + (Fraction(0),) * (self.deg - len(coeffs))

    def element(self, coeffs):
        """Reduce an arbitrary rational polynomial in the generator."""
        _, rem = poly.divmod_(poly.trim([Fraction(c) for c in coeffs]), self.minpoly)
        return self._pad(rem)

    def from_int(self, n):
        return (Fraction(n),) + (Fraction(0),) * (self.deg - 1)

    def from_fraction(self, q):
        return (Fraction(q),) + (Fraction(0),) * (self.deg - 1)

    def generator(self, name):
        if name != self.gen:
            return super().generator(name)
        if self.deg == 1:
            return (Fraction(-self.minpoly[0]),)
        return self.element([0, 1])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        d = self.deg
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                fold = self._fold[k]
                for i in range(d):
                    out[i] += c * fold[i]
        return tuple(out)

    def inv(self, a):
        g, s, _ = poly.ext_gcd(poly.trim(a), self.minpoly)
        if not g:
            raise ZeroDivisionError("inverse of 0")
        # g is a nonzero constant: minpoly is irreducible
        return self._pad(s)

    def parse(self, text):
        m = re.fullmatch(r"\s*\[(.*)\]\s*of\s+([A-Za-z_]\w*)\s*", text.replace("−", "-"))
        if m:
            if m.group(2) != self.gen:
                raise ScalarParseError(f"generator {m.group(2)!r} is not {self.gen!r}")
            try:
                coeffs = [Fraction(c.strip()) for c in m.group(1).split(",") if c.strip()]
            except ValueError as exc:
                raise ScalarParseError(str(exc)) from None
            if len(coeffs) > self.deg:
                return self.element(coeffs)
            return self._pad(coeffs)
        return self.parse_expression(text)

    def format(self, a) -> str:
        return "[" + ",".join(str(c) for c in a) + f"] of {self.gen}"

    def descriptor(self):
        return {"kind": "nf", "minpoly": list(self.minpoly), "gen": self.gen}

    def spec(self):
        s = "nf:" + poly.to_str(self.minpoly, "x")
        return s if self.gen == "alpha" else f"{s}:{self.gen}"

    def embed_rational(self, field: Field, a):
        """Image of an element lying in Q (all higher coefficients zero)."""
        if any(a[1:]):
            raise ValueError("element is not rational")
        return field.from_fraction(a[0])


@dataclass(frozen=True)
class RatFunc:
    """Canonical num/den over Q: den monic, gcd(num, den) = 1, 0 = 0/1."""

    num: tuple
    den: tuple

    def __repr__(self):
        return f"RatFunc({poly.to_str(self.num)!r}, {poly.to_str(self.den)!r})"


_ONE_POLY = (Fraction(1),)


def _canon(num, den) -> RatFunc:
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return RatFunc((), _ONE_POLY)
    if len(den) > 1:
        g = poly.gcd(num, den)
        if len(g) > 1:
            num = poly.exact_div(num, g)
            den = poly.exact_div(den, g)
    lead = den[-1]
    if lead != 1:
        num = poly.scale(num, 1 / Fraction(lead))
        den = poly.scale(den, 1 / Fraction(lead))
    return RatFunc(tuple(Fraction(c) for c in num), tuple(Fraction(c) for c in den))


class RationalFunctions(Field):
    kind = "Qx"

    def __init__(self, var: str = "x"):
        self.var = var
        self.zero = RatFunc((), _ONE_POLY)
        self.one = RatFunc(_ONE_POLY, _ONE_POLY)

    def make(self, num, den=(1,)) -> RatFunc:
        return _canon(poly.trim([Fraction(c) for c in num]), poly.trim([Fraction(c) for c in den]))

    def from_int(self, n):
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q):
        q = Fraction(q)
        if not q:
            return self.zero
        return RatFunc((q,), _ONE_POLY)

    def generator(self, name):
        if name != self.var:
            return super().generator(name)
        return RatFunc((Fraction(0), Fraction(1)), _ONE_POLY)

    def is_zero(self, a):
        return not a.num

    def add(self, a, b):
        if not a.num:
            return b
        if not b.num:
            return a
        if a.den == b.den:
            return _canon(poly.add(a.num, b.num), a.den)
        return _canon(poly.add(poly.mul(a.num, b.den), poly.mul(b.num, a.den)), poly.mul(a.den, b.den))

    def neg(self, a):
        return RatFunc(poly.neg(a.num), a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a.num or not b.num:
            return self.zero
        if len(a.den) == 1 and len(b.den) == 1:
            return RatFunc(poly.mul(a.num, b.num), _ONE_POLY)
        return _canon(poly.mul(a.num, b.num), poly.mul(a.den, b.den))

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("inverse of 0")
        return _canon(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        num = poly.to_str(a.num, self.var)
        if a.den == _ONE_POLY:
            return num
        den = poly.to_str(a.den, self.var)
        if poly.term_count(a.num) > 1 or "/" in num:
            num = f"({num})"
        if poly.term_count(a.den) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def descriptor(self):
        return {"kind": "Qx", "var": self.var}

    def spec(self):
        return "Qx" if self.var == "x" else f"Qx:{self.var}"


class ComplexApprox(Field):
    """Double-precision complex numbers; equality within ``epsilon``."""

    exact = False
    kind = "C"

    def __init__(self, epsilon: float = 1e-12):
        self.epsilon = float(epsilon)
        self.zero = 0j
        self.one = 1 + 0j

    def from_int(self, n):
        return complex(n)

    def from_fraction(self, q):
        return complex(float(q))

    def _decimal(self, text):
        return complex(float(text))

    def generator(self, name):
        if name in ("i", "j", "I"):
            return 1j
        return super().generator(name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return abs(a) <= self.epsilon

    def eq(self, a, b):
        return abs(a - b) <= self.epsilon

    def parse(self, text):
        t = text.strip().replace("−", "-").replace(" ", "")
        try:
            return complex(t.replace("i", "j"))
        except ValueError:
            return self.parse_expression(text)

    def format(self, a) -> str:
        a = complex(a)
        if a.imag == 0:
            return repr(a.real)
        sign = "-" if math.copysign(1.0, a.imag) < 0 else "+"
        return f"{a.real!r}{sign}{abs(a.imag)!r}j"

    def descriptor(self):
        return {"kind": "C", "epsilon": self.epsilon}

    def spec(self):
        return f"C:{self.epsilon!r}"


def field_make(descriptor) -> Field:
    """Build a field from a descriptor string ("Q", "GF:5", "nf:x^2-5", "Qx",
    "C:1e-12") or from its JSON dict form."""
    if isinstance(descriptor, Field):
        return descriptor
    if isinstance(descriptor, dict):
        kind = descriptor.get("kind")
        if kind == "Q":
            return Rationals()
        if kind == "GF":
            return PrimeField(int(descriptor["p"]))
        if kind == "nf":
            return NumberField(descriptor["minpoly"], descriptor.get("gen", "alpha"))
        if kind == "Qx":
            return RationalFunctions(descriptor.get("var", "x"))
        if kind == "C":
            return ComplexApprox(descriptor.get("epsilon", 1e-12))
        raise FieldError(f"unknown field kind {kind!r}")
    text = str(descriptor).strip()
    head, _, rest = text.partition(":")
    head_l = head.lower()
    if head_l in ("q", "qq"):
        return Rationals()
    if head_l in ("gf", "fp"):
        try:
            return PrimeField(int(rest))
        except ValueError:
            raise FieldError(f"bad prime in {text!r}") from None
    if head_l == "nf":
        body, _, gen = rest.partition(":")
        return NumberField(parse_int_poly(body, "x"), gen or "alpha")
    if head_l == "qx":
        return RationalFunctions(rest or "x")
    if head_l in ("c", "cc"):
        return ComplexApprox(float(rest) if rest else 1e-12)
    raise FieldError(f"unknown field descriptor {text!r}")


def parse_int_poly(text: str, var: str = "x") -> tuple:
    """Parse an integer polynomial such as ``x^3+x^2-1`` into coefficients."""
    qx = RationalFunctions(var)
    try:
        val = qx.parse_expression(text)
    except ScalarParseError as exc:
        raise FieldError(str(exc)) from None
    if val.den != _ONE_POLY or any(c.denominator != 1 for c in val.num):
        raise FieldError(f"{text!r} is not an integer polynomial")
    return tuple(int(c) for c in val.num)


def scalar_parse(field: Field, text: str):
    return field.parse(text)


def scalar_print(field: Field, s) -> str:
    return field.format(s)


def rational_function_eval(f: RatFunc, field: Field, a):
    """Specialise ``f`` at ``a`` in ``field``; PoleError if the denominator vanishes."""
    def horner(p):
        acc = field.zero
        for c in reversed(p):
            acc = field.add(field.mul(acc, a), field.from_fraction(c))
        return acc

    den = horner(f.den)
    if field.is_zero(den):
        raise PoleError(f"denominator vanishes at {field.format(a)}")
    return field.div(horner(f.num), den)
