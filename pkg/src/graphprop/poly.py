"""Dense univariate polynomials as coefficient tuples, lowest degree first.

The zero polynomial is the empty tuple.  Coefficients are ``Fraction`` or
``int``; every function returns a trimmed tuple (no trailing zeros).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

Poly = Tuple


def trim(coeffs: Sequence) -> Poly:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, c) -> Poly:
    if not c:
        return ()
    return tuple(a * c for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Euclidean division over Q.  Raises ZeroDivisionError for q = 0."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in p]
    lead = Fraction(q[-1])
    dq = len(q) - 1
    if len(r) <= dq:
        return (), trim(r)
    quot = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1, dq - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c / lead
        quot[k - dq] = c
        for j in range(dq + 1):
            r[k - dq + j] -= c * q[j]
    return trim(quot), trim(r[:dq])


def exact_div(p: Poly, q: Poly) -> Poly:
    """Quotient p/q, asserting the remainder vanishes.  Integer in, integer out."""
    quot, rem = divmod_(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    if all(isinstance(c, int) for c in p) and all(isinstance(c, int) for c in q):
        if any(c.denominator != 1 for c in quot):
            raise ArithmeticError("quotient is not integral")
        return tuple(int(c) for c in quot)
    return quot


def monic(p: Poly) -> Poly:
    if not p:
        return ()
    lead = Fraction(p[-1])
    if lead == 1:
        return tuple(Fraction(c) for c in p)
    return tuple(Fraction(c) / lead for c in p)


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over Q; gcd(0, 0) = 0."""
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def ext_gcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = tuple(Fraction(c) for c in p), tuple(Fraction(c) for c in q)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return (), s0, t0
    lead = r0[-1]
    return scale(r0, 1 / lead), scale(s0, 1 / lead), scale(t0, 1 / lead)


def evaluate(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def to_str(p: Poly, var: str = "x") -> str:
    """Render with explicit ``*``; parseable by :mod:`graphprop.expr`."""
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        c = Fraction(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


def term_count(p: Poly) -> int:
    return sum(1 for c in p if c)


def is_irreducible_small(coeffs: Sequence[int]) -> bool:
    """Irreducibility over Q of a monic integer polynomial of degree <= 4.

    Degree 2 and 3 reduce to the absence of rational (hence integer) roots;
    degree 4 additionally rules out a product of two monic integer quadratics.
    """
    p = trim(list(coeffs))
    deg = len(p) - 1
    if deg < 1:
        raise ValueError("degree must be >= 1")
    if deg > 4:
        raise ValueError("irreducibility check only implemented up to degree 4")
    if p[-1] != 1 or any(int(c) != c for c in p):
        raise ValueError("expected a monic integer polynomial")
    p = tuple(int(c) for c in p)
    if deg == 1:
        return True
    if _has_integer_root(p):
        return False
    if deg <= 3:
        return True
    e0, e1, e2, e3 = p[0], p[1], p[2], p[3]
    # (x^2 + a x + b)(x^2 + c x + d)
    for b in _divisors_signed(e0):
        d = e0 // b
        if d != b:
            num = e1 - b * e3
            if num % (d - b):
                continue
            a = num // (d - b)
            c = e3 - a
            if b + d + a * c == e2:
                return False
        else:
            if e1 != b * e3:
                continue
            # a + c = e3, a c = e2 - 2b
            disc = e3 * e3 - 4 * (e2 - 2 * b)
            if disc >= 0 and _isqrt_exact(disc) is not None:
                s = _isqrt_exact(disc)
                if (e3 + s) % 2 == 0:
                    return False
    return True


def _divisors_signed(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.extend([k, n // k])
        k += 1
    out = sorted(set(out))
    return out + [-x for x in out]


def _has_integer_root(p: Poly) -> bool:
    if p[0] == 0:
        return True
    return any(evaluate(p, r) == 0 for r in _divisors_signed(p[0]))


def _isqrt_exact(n: int):
    import math

    s = math.isqrt(n)
    return s if s * s == n else None
