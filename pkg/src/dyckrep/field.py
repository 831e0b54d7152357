"""Exact arithmetic in Q(v, t, a1, ..., a6) with q = v**2.

Values are reduced fractions of integer polynomials.  The polynomial kernel
(multiplication, exact division, gcd) is FLINT's ``fmpz_mpoly``; this module
only keeps fractions in canonical form and adds the theta automorphism, the
Lambda operator on characters, and a printable/parseable string form.

Canonical form: gcd(num, den) = 1 and the leading coefficient of the
denominator under degree-lexicographic order (v > t > a1 > ...) is positive.
Zero is 0/1.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping

import flint

NUM_PARAMS = 6
VAR_NAMES: tuple[str, ...] = ("v", "t") + tuple(f"a{i}" for i in range(1, NUM_PARAMS + 1))
NVARS = len(VAR_NAMES)

_CTX = flint.fmpz_mpoly_ctx.get(VAR_NAMES, "deglex")
_ZERO_EXP = (0,) * NVARS

Monomial = tuple  # exponent vector over VAR_NAMES, Laurent (signed)


class DivisionByZero(ZeroDivisionError):
    pass


class NonzeroConstantTerm(ValueError):
    pass


class ParseError(ValueError):
    pass


def _poly_const(c: int):
    return _CTX.from_dict({_ZERO_EXP: c}) if c else _CTX.from_dict({})


_P_ONE = _poly_const(1)
_P_ZERO = _poly_const(0)


def _poly_key(p) -> tuple:
    return tuple((e, int(c)) for e, c in p.terms())


class RatFunc:
    """An element of the coefficient field, always in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=None, den=None, *, _reduced: bool = False):
        if num is None:
            num = _P_ZERO
        elif isinstance(num, int):
            num = _poly_const(num)
        if den is None:
            den = _P_ONE
        elif isinstance(den, int):
            den = _poly_const(den)
        if not _reduced:
            if den.is_zero():
                raise DivisionByZero("zero denominator")
            if num.is_zero():
                num, den = _P_ZERO, _P_ONE
            elif not den.is_one():
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                if den.leading_coefficient() < 0:
                    num, den = -num, -den
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers
    @staticmethod
    def coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, int):
            return RatFunc(_poly_const(x), _P_ONE, _reduced=True)
        if isinstance(x, Fraction):
            return RatFunc(x.numerator, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    @staticmethod
    def monomial(exps: Iterable[int], coeff: int = 1) -> "RatFunc":
        exps = tuple(exps)
        pos = tuple(max(e, 0) for e in exps)
        neg = tuple(max(-e, 0) for e in exps)
        num = _CTX.from_dict({pos: coeff})
        den = _CTX.from_dict({neg: 1})
        return RatFunc(num, den, _reduced=coeff != 0)

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_monomial(self) -> bool:
        """True when the value is c * (Laurent monomial) with c = 1."""
        return len(self.num) == 1 and len(self.den) == 1 and self.num.leading_coefficient() == 1 \
            and self.den.leading_coefficient() == 1

    def monomial_exponents(self) -> Monomial:
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        (en, _), = self.num.terms()
        (ed, _), = self.den.terms()
        return tuple(a - b for a, b in zip(en, ed))

    def is_laurent(self) -> bool:
        return len(self.den) == 1

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den.is_one() and other.den.is_one():
            s = self.num + other.num
            return RatFunc(s, _P_ONE, _reduced=True) if not s.is_zero() else ZERO
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.is_one():
            return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)
        d1 = self.den // g
        d2 = other.den // g
        return RatFunc(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, _P_ONE, _reduced=True)
        n1, d2 = self.num, other.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        n2, d1 = other.num, self.den
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        num, den = n1 * n2, d1 * d2
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RatFunc(num, den, _reduced=True)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return ONE
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    # comparison and hashing
    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((_poly_key(self.num), _poly_key(self.den)))
            self._hash = h
        return h

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"RatFunc({to_string(self)!r})"

    def __str__(self):
        return to_string(self)

    def __reduce__(self):
        return (parse, (to_string(self),))

    def key(self) -> tuple:
        """Total order key, deterministic across runs."""
        return (_poly_key(self.num), _poly_key(self.den))


ZERO = RatFunc()
ONE = RatFunc(1)
V = RatFunc(_CTX.gen(0), _P_ONE, _reduced=True)
T = RatFunc(_CTX.gen(1), _P_ONE, _reduced=True)
Q = V * V


def param(i: int) -> RatFunc:
    """The framing parameter a_i, 1 <= i <= NUM_PARAMS."""
    if not 1 <= i <= NUM_PARAMS:
        raise ValueError(f"parameter index {i} outside 1..{NUM_PARAMS}")
    return RatFunc(_CTX.gen(1 + i), _P_ONE, _reduced=True)


def q_power(half_exp: int) -> RatFunc:
    """q^(half_exp/2) = v^half_exp."""
    return RatFunc.monomial((half_exp,) + (0,) * (NVARS - 1))


def rf(x) -> RatFunc:
    if isinstance(x, str):
        return parse(x)
    return RatFunc.coerce(x)


def rf_arith(x: RatFunc, y: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if y.is_zero():
            raise DivisionByZero("division by zero")
        return x / y
    raise ValueError(f"unknown op {op!r}")


# theta: v -> 1/v, t -> 1/t, a_i -> 1/a_i

def _theta_poly(p):
    terms = list(p.terms())
    top = tuple(max(e[i] for e, _ in terms) for i in range(NVARS))
    flipped = _CTX.from_dict({tuple(m - a for m, a in zip(top, e)): c for e, c in terms})
    return flipped, top


def rf_theta(x: RatFunc) -> RatFunc:
    if x.num.is_zero():
        return x
    n, tn = _theta_poly(x.num)
    d, td = _theta_poly(x.den)
    # x = n(1/vars) / d(1/vars) = (n' / vars^tn) / (d' / vars^td)
    shift = tuple(b - a for a, b in zip(tn, td))
    pos = _CTX.from_dict({tuple(max(s, 0) for s in shift): 1})
    neg = _CTX.from_dict({tuple(max(-s, 0) for s in shift): 1})
    return RatFunc(n * pos, d * neg)


theta = rf_theta


# canonical string form

def _fmt_monomial(exps) -> str:
    parts = []
    ev = exps[0]
    if ev:
        if ev % 2 == 0:
            parts.append("q" if ev == 2 else f"q^{ev // 2}")
        else:
            parts.append(f"q^({ev}/2)")
    for name, e in zip(VAR_NAMES[1:], exps[1:]):
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _fmt_poly(p) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(p.terms()):
        c = int(c)
        mono = _fmt_monomial(e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def to_string(x: RatFunc) -> str:
    n = _fmt_poly(x.num)
    if x.den.is_one():
        return n
    d = _fmt_poly(x.den)
    if len(x.num) > 1:
        n = f"({n})"
    if len(x.den) > 1 or "*" in d:
        d = f"({d})"
    return f"{n}/{d}"


_NAMES = {"v": V, "t": T, "q": Q, **{f"a{i}": param(i) for i in range(1, NUM_PARAMS + 1)}}


def _eval_exponent(node) -> Fraction:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_exponent(node.operand)
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        return _eval_exponent(node.left) / _eval_exponent(node.right)
    raise ParseError("exponent must be an integer or a fraction n/2")


def _eval(node) -> RatFunc:
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return RatFunc.coerce(node.value)
    if isinstance(node, ast.Name):
        try:
            return _NAMES[node.id]
        except KeyError:
            raise ParseError(f"unknown symbol {node.id!r}") from None
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_eval(node.operand)
        if isinstance(node.op, ast.UAdd):
            return _eval(node.operand)
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            e = _eval_exponent(node.right)
            if isinstance(node.left, ast.Name) and node.left.id == "q" and e.denominator in (1, 2):
                return q_power(int(2 * e))
            if e.denominator != 1:
                raise ParseError("fractional exponent allowed only on q")
            return _eval(node.left) ** int(e)
        a, b = _eval(node.left), _eval(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if b.is_zero():
                raise DivisionByZero("division by zero in literal")
            return a / b
    raise ParseError(f"unsupported syntax: {ast.dump(node)}")


def parse(s: str) -> RatFunc:
    """Parse the canonical string form (and ordinary arithmetic in q, v, t, a_i)."""
    try:
        tree = ast.parse(s.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(str(exc)) from None
    return _eval(tree)


# characters and Lambda

class Character:
    """Finite Z-linear combination of Laurent monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[tuple(m)] = clean.get(tuple(m), 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self.terms = clean

    @staticmethod
    def from_ratfunc(x: RatFunc) -> "Character":
        """Read a Laurent polynomial (monomial denominator) as a character."""
        if not x.is_laurent() or x.den.leading_coefficient() != 1:
            raise ValueError(f"{x} is not a Laurent polynomial")
        (ed, _), = x.den.terms()
        return Character({tuple(a - b for a, b in zip(e, ed)): int(c) for e, c in x.num.terms()})

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Character(out)

    def __neg__(self) -> "Character":
        return Character({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __mul__(self, other: "Character") -> "Character":
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Character(out)

    def __eq__(self, other):
        return isinstance(other, Character) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        inner = ", ".join(f"{_fmt_monomial(m) or '1'}:{c}"
                          for m, c in sorted(self.terms.items()))
        return f"Character({{{inner}}})"

    def constant_term(self) -> int:
        return self.terms.get(_ZERO_EXP, 0)


def char_lambda(c: Character) -> RatFunc:
    """prod over terms of (1 - monomial)^multiplicity."""
    if c.constant_term():
        raise NonzeroConstantTerm(f"constant term {c.constant_term()} in Lambda argument")
    num = ONE
    den = ONE
    for m, k in sorted(c.terms.items()):
        f = ONE - RatFunc.monomial(m)
        if k > 0:
            num = num * f ** k
        else:
            den = den * f ** (-k)
    return num / den


def sort_key(x: RatFunc) -> str:
    return to_string(x)
