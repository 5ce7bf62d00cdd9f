"""Exact fields, graded polynomial rings and sparse polynomials.

Monomials are packed into Python integers: one 16-bit field per variable plus
one field carrying the weighted degree.  The top bit of every field is a guard
bit, so products can be checked for overflow and divisibility can be decided
with a single subtraction.  Module terms reuse the same packing with the basis
position stored above the monomial fields.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

__all__ = [
    "AlgebraError",
    "ParseError",
    "Field",
    "QQ",
    "GF",
    "ORDERS",
    "Ring",
    "ring_new",
    "Polynomial",
    "LaurentPolynomial",
    "is_prime",
]


class AlgebraError(ValueError):
    """Raised for invalid algebraic input (ring mismatch, bad degrees, ...)."""


class ParseError(AlgebraError):
    """Polynomial text could not be parsed; ``position`` is a 0-based offset."""

    def __init__(self, message, position=0):
        super().__init__(f"{message} (at offset {position})")
        self.reason = message
        self.position = position


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """The rationals (characteristic 0) or a prime field GF(p)."""

    __slots__ = ("_p",)

    def __init__(self, characteristic: int = 0):
        p = int(characteristic)
        if p < 0:
            raise AlgebraError("characteristic must be non-negative")
        if p and (p >= 2**63 or not is_prime(p)):
            raise AlgebraError(f"modulus {p} is not a prime below 2^63")
        self._p = p

    @property
    def characteristic(self) -> int:
        return self._p

    @property
    def kind(self) -> str:
        return "prime-field" if self._p else "rationals"

    def __call__(self, x):
        p = self._p
        if isinstance(x, str):
            return self.parse(x)
        if p:
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
                return x.numerator * pow(x.denominator, -1, p) % p
            return int(x) % p
        return Fraction(x)

    @property
    def zero(self):
        return 0 if self._p else Fraction(0)

    @property
    def one(self):
        return 1 if self._p else Fraction(1)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self._p:
            return pow(x, -1, self._p)
        return 1 / Fraction(x)

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self(Fraction(int(num), int(den)))
        return self(int(text))

    def format(self, x) -> str:
        p = self._p
        if p:
            x = int(x) % p
            return str(x - p if x > p // 2 else x)
        return str(Fraction(x))

    def random_element(self, rng, nonzero=True):
        """Uniform element of GF(p) (or a small integer over QQ)."""
        if self._p:
            lo = 1 if nonzero else 0
            return int(rng.integers(lo, self._p))
        while True:
            v = int(rng.integers(-9, 10))
            if v or not nonzero:
                return Fraction(v)

    @classmethod
    def from_name(cls, name: str) -> "Field":
        text = name.strip().replace(" ", "")
        if text.upper() in ("QQ", "Q"):
            return QQ
        for prefix in ("GF(", "ZZ/(", "ZZ/"):
            if text.upper().startswith(prefix):
                body = text[len(prefix):].rstrip(")")
                return cls(int(body))
        raise AlgebraError(f"unknown field {name!r}")

    def __eq__(self, other):
        return isinstance(other, Field) and other._p == self._p

    def __hash__(self):
        return hash(("Field", self._p))

    def __repr__(self):
        return f"GF({self._p})" if self._p else "QQ"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class LaurentPolynomial:
    """Integer Laurent polynomial in one variable t."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, dict):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {int(e): c for e, c in coeffs.items() if c}

    @classmethod
    def monomial(cls, e, c=1):
        return cls({e: c})

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = LaurentPolynomial({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial({0: other})
        return isinstance(other, LaurentPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, value):
        return sum(c * value**e for e, c in self.coeffs.items())

    def shift(self, k):
        return LaurentPolynomial({e + k: c for e, c in self.coeffs.items()})

    def reciprocal(self):
        """Substitute t -> 1/t."""
        return LaurentPolynomial({-e: c for e, c in self.coeffs.items()})

    def low(self):
        return min(self.coeffs) if self.coeffs else None

    def high(self):
        return max(self.coeffs) if self.coeffs else None

    def coefficient(self, e):
        return self.coeffs.get(e, 0)

    def divide_one_minus_t_power(self, a):
        """Exact quotient by (1 - t^a), or None when it does not divide."""
        if not self.coeffs:
            return LaurentPolynomial()
        lo, hi = self.low(), self.high()
        quot = {}
        for e in range(lo, hi - a + 1):
            quot[e] = self.coeffs.get(e, 0) + quot.get(e - a, 0)
        q = LaurentPolynomial(quot)
        if q * LaurentPolynomial({0: 1, a: -1}) != self:
            return None
        return q

    def to_dict(self):
        return {str(e): c for e, c in sorted(self.coeffs.items())}

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    __repr__ = __str__


def _as_laurent(x):
    if isinstance(x, LaurentPolynomial):
        return x
    return LaurentPolynomial({0: x})


ORDERS = ("grevlex", "lex", "deglex")
_ORDER_ALIASES = {"graded-lex": "deglex", "glex": "deglex", "grlex": "deglex"}

_W = 16
_FMASK = (1 << _W) - 1
_EMAX = (1 << (_W - 1)) - 1


class Ring:
    """Graded polynomial ring k[x_1..x_n] with variable degrees and a monomial order."""

    def __init__(self, field: Field, variables, degrees=None, order="grevlex"):
        variables = tuple(str(v) for v in variables)
        if len(set(variables)) != len(variables):
            dup = sorted({v for v in variables if variables.count(v) > 1})
            raise AlgebraError(f"duplicate variable name {dup[0]!r}")
        for v in variables:
            if not v or not (v[0].isalpha() or v[0] == "_") or not all(ch.isalnum() or ch == "_" for ch in v):
                raise AlgebraError(f"invalid variable name {v!r}")
        if degrees is None:
            degrees = (1,) * len(variables)
        degrees = tuple(int(d) for d in degrees)
        if len(degrees) != len(variables):
            raise AlgebraError("one degree per variable is required")
        if any(d < 1 for d in degrees):
            raise AlgebraError("variable degrees must be positive")
        order = _ORDER_ALIASES.get(order, order)
        if order not in ORDERS:
            raise AlgebraError(f"unknown monomial order {order!r}")
        if not isinstance(field, Field):
            raise AlgebraError("field must be a Field")
        self.field = field
        self.vars = variables
        self.degrees = degrees
        self.order = order
        n = self.nvars = len(variables)
        slots = range(n) if order == "grevlex" else range(n - 1, -1, -1)
        self._shifts = tuple(_W * s for s in slots)
        self.degree_shift = _W * n
        self.exp_mask = (1 << (_W * n)) - 1
        self.mono_mask = (1 << (_W * (n + 1))) - 1
        self.pos_shift = _W * (n + 1)
        self.guard = sum(1 << (_W * k + _W - 1) for k in range(n + 1))
        self.div_mask = self.guard | (-1 << self.pos_shift)
        self._var_monos = tuple(
            (1 << sh) + (d << self.degree_shift) for sh, d in zip(self._shifts, degrees)
        )
        self._name_index = {v: i for i, v in enumerate(variables)}
        self._hash = hash((field, variables, degrees, order))

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.field == other.field
            and self.vars == other.vars
            and self.degrees == other.degrees
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        degs = "" if self.is_standard_graded else f", degrees={list(self.degrees)}"
        return f"{self.field}[{', '.join(self.vars)}]({self.order}{degs})"

    @property
    def is_standard_graded(self) -> bool:
        return all(d == 1 for d in self.degrees)

    @property
    def a_constant(self) -> int:
        """lcm of the variable degrees (the constant a of the reciprocity law)."""
        return math.lcm(*self.degrees) if self.degrees else 1

    @property
    def canonical_degree(self) -> int:
        """Sum of the variable degrees; the canonical module is A(-this)."""
        return sum(self.degrees)

    def with_order(self, order) -> "Ring":
        return Ring(self.field, self.vars, self.degrees, order)

    # -- monomial packing ---------------------------------------------------
    def pack(self, exps) -> int:
        if len(exps) != self.nvars:
            raise AlgebraError("exponent vector has wrong length")
        m = 0
        deg = 0
        for e, sh, d in zip(exps, self._shifts, self.degrees):
            if e < 0:
                raise AlgebraError("negative exponent")
            if e > _EMAX:
                raise OverflowError("exponent exceeds the packed field width")
            m |= e << sh
            deg += e * d
        if deg > _EMAX:
            raise OverflowError("degree exceeds the packed field width")
        return m | (deg << self.degree_shift)

    def unpack(self, m) -> tuple:
        return tuple((m >> sh) & _FMASK for sh in self._shifts)

    def mdeg(self, m) -> int:
        """Weighted degree of a packed monomial (position bits ignored)."""
        return (m >> self.degree_shift) & _FMASK

    def mono_divides(self, a, b) -> bool:
        """True when packed term a divides packed term b (same position)."""
        return ((b + self.guard - a) & self.div_mask) == self.guard

    def mono_lcm(self, a, b) -> int:
        pa = a >> self.pos_shift
        ea = self.unpack(a)
        eb = self.unpack(b)
        return self.pack(tuple(map(max, ea, eb))) | (pa << self.pos_shift)

    def mono_gcd(self, a, b) -> int:
        return self.pack(tuple(map(min, self.unpack(a), self.unpack(b))))

    def mono_coprime(self, a, b) -> bool:
        return not any(x and y for x, y in zip(self.unpack(a), self.unpack(b)))

    def monomial_key(self):
        """Sort key on packed monomials (larger key = larger in the order)."""
        em = self.exp_mask
        mm = self.mono_mask
        if self.order == "grevlex":
            return lambda m: (m & mm) + em - ((m & em) << 1)
        if self.order == "deglex":
            return lambda m: m & mm
        return lambda m: m & em

    def monomials_of_degree(self, d):
        """All packed monomials of weighted degree d, in descending order."""
        out = []

        def rec(i, left, acc):
            if i == self.nvars - 1:
                if left % self.degrees[i] == 0:
                    out.append(acc + (left // self.degrees[i],))
                return
            for e in range(left // self.degrees[i], -1, -1):
                rec(i + 1, left - e * self.degrees[i], acc + (e,))

        if d < 0:
            return []
        if self.nvars == 0:
            return [0] if d == 0 else []
        rec(0, d, ())
        key = self.monomial_key()
        return sorted((self.pack(e) for e in out), key=key, reverse=True)

    # -- polynomial constructors -------------------------------------------
    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {0: self.field.one})

    @property
    def gens(self):
        return tuple(Polynomial(self, {m: self.field.one}) for m in self._var_monos)

    def var(self, name) -> "Polynomial":
        try:
            i = self._name_index[name]
        except KeyError:
            raise AlgebraError(f"variable {name!r} is not in {self!r}") from None
        return Polynomial(self, {self._var_monos[i]: self.field.one})

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {0: c} if c else {})

    def monomial(self, exps, coeff=1) -> "Polynomial":
        c = self.field(coeff)
        return Polynomial(self, {self.pack(tuple(exps)): c} if c else {})

    def from_terms(self, terms) -> "Polynomial":
        """Build from an iterable of (exponent tuple, coefficient)."""
        out = {}
        p = self.field.characteristic
        for exps, c in terms:
            m = self.pack(tuple(exps))
            out[m] = out.get(m, 0) + self.field(c)
            if p:
                out[m] %= p
        return Polynomial(self, {m: c for m, c in out.items() if c})

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise AlgebraError("ring mismatch")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.constant(x)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def random_form(self, degree, rng, density=1.0) -> "Polynomial":
        """Random homogeneous form with nonzero coefficients on chosen monomials."""
        monos = self.monomials_of_degree(degree)
        terms = {}
        for m in monos:
            if density >= 1.0 or rng.random() < density:
                terms[m] = self.field.random_element(rng)
        return Polynomial(self, terms)

    def hom(self, target: "Ring", images):
        """Ring map self -> target sending variable i to images[i]."""
        images = [target(g) for g in images]
        if len(images) != self.nvars:
            raise AlgebraError("one image per variable is required")

        def apply(f: "Polynomial") -> "Polynomial":
            if f.ring != self:
                raise AlgebraError("ring mismatch")
            out = target.zero
            for m, c in f.coeffs.items():
                term = target.constant(target.field(_lift_coefficient(self.field, c)))
                for e, g in zip(self.unpack(m), images):
                    if e:
                        term = term * g**e
                out = out + term
            return out

        return apply


def ring_new(field, variables, degrees=None, order="grevlex") -> Ring:
    return Ring(field, variables, degrees, order)


def _lift_coefficient(field, c):
    return int(c) if field.characteristic else Fraction(c)


class Polynomial:
    """Immutable sparse polynomial; ``coeffs`` maps packed monomials to coefficients."""

    __slots__ = ("ring", "coeffs", "_sorted", "_deg", "_hash")

    def __init__(self, ring: Ring, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs
        self._sorted = None
        self._deg = None
        self._hash = None

    # -- structure ------------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise AlgebraError("ring mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def sorted_monomials(self):
        if self._sorted is None:
            key = self.ring.monomial_key()
            self._sorted = tuple(sorted(self.coeffs, key=key, reverse=True))
        return self._sorted

    def terms(self):
        """Terms as (exponent tuple, coefficient), strictly descending."""
        return [(self.ring.unpack(m), self.coeffs[m]) for m in self.sorted_monomials()]

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    @property
    def leading_monomial(self) -> int:
        if not self.coeffs:
            raise AlgebraError("zero polynomial has no leading term")
        return self.sorted_monomials()[0]

    @property
    def leading_coefficient(self):
        return self.coeffs[self.leading_monomial]

    def leading_exponents(self):
        return self.ring.unpack(self.leading_monomial)

    def degree(self):
        """Weighted degree if homogeneous, else the string 'inhomogeneous'."""
        if not self.coeffs:
            raise AlgebraError("the zero polynomial has no degree")
        if self._deg is None:
            mdeg = self.ring.mdeg
            degs = {mdeg(m) for m in self.coeffs}
            self._deg = degs.pop() if len(degs) == 1 else "inhomogeneous"
        return self._deg

    def is_homogeneous(self) -> bool:
        return not self.coeffs or self.degree() != "inhomogeneous"

    def is_constant(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def total_degree(self) -> int:
        mdeg = self.ring.mdeg
        return max(mdeg(m) for m in self.coeffs)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.characteristic
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {m: (-c) % p for m, c in self.coeffs.items()})
        return Polynomial(self.ring, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        p = ring.field.characteristic
        guard = ring.guard
        out = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = m1 + m2
                if m & guard:
                    raise OverflowError("exponent overflow in product")
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items() if c % p}
        else:
            out = {m: c for m, c in out.items() if c}
        return Polynomial(ring, out)

    __rmul__ = __mul__

    def scale(self, c):
        c = self.ring.field(c)
        if not c:
            return self.ring.zero
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self.coeffs.items()})
        return Polynomial(self.ring, {m: v * c for m, v in self.coeffs.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power")
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient))

    def times_monomial(self, m, c=1):
        """Multiply by the packed monomial m and the scalar c."""
        p = self.ring.field.characteristic
        guard = self.ring.guard
        out = {}
        for t, v in self.coeffs.items():
            nt = t + m
            if nt & guard:
                raise OverflowError("exponent overflow in product")
            out[nt] = v * c % p if p else v * c
        return Polynomial(self.ring, out)

    def divide_exact(self, other: "Polynomial") -> "Polynomial":
        """Quotient self/other; raises when other does not divide self."""
        other = self._check(other)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        ring = self.ring
        field = ring.field
        lm = other.leading_monomial
        inv = field.inv(other.leading_coefficient)
        rem = self
        quot = ring.zero
        while rem:
            m = rem.leading_monomial
            if not ring.mono_divides(lm, m):
                raise AlgebraError("polynomial is not divisible")
            c = field(rem.coeffs[m] * inv)
            q = Polynomial(ring, {m - lm: c})
            quot = quot + q
            rem = rem - other * q
        return quot

    # -- comparison / printing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.coeffs.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_monomial(ring: Ring, m) -> str:
    parts = []
    for name, e in zip(ring.vars, ring.unpack(m)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text: terms in descending order, coefficients then monomials."""
    if not f.coeffs:
        return "0"
    field = f.ring.field
    pieces = []
    for m in f.sorted_monomials():
        c = field.format(f.coeffs[m])
        neg = c.startswith("-")
        if neg:
            c = c[1:]
        mono = format_monomial(f.ring, m)
        if mono and c == "1":
            body = mono
        elif mono:
            body = f"{c}*{mono}"
        else:
            body = c
        pieces.append((neg, body))
    text = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        text += (" - " if neg else " + ") + body
    return text


class _Parser:
    """Recursive descent: expr := term (('+'|'-') term)*; term := factor (['*'] factor)*."""

    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.pos = 0
        self.names = sorted(ring.vars, key=len, reverse=True)

    def error(self, msg):
        raise ParseError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        if not self.text.strip():
            self.error("empty polynomial")
        out = self.expr()
        if self.peek():
            self.error(f"unexpected character {self.peek()!r}")
        return out

    def expr(self):
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                if self.peek() == "*":
                    self.error("use ^ for powers")
                out = out * self.factor()
            elif ch and (ch.isalpha() or ch in "(_"):
                out = out * self.factor()
            else:
                return out

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected exponent")
            base = base ** int(self.text[start:self.pos])
        return base

    def atom(self):
        ch = self.peek()
        if not ch:
            self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            out = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return out
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            num = int(self.text[start:self.pos])
            if self.peek() == "/":
                self.pos += 1
                self.skip()
                s2 = self.pos
                while self.pos < len(self.text) and self.text[self.pos].isdigit():
                    self.pos += 1
                if s2 == self.pos:
                    self.error("expected denominator")
                den = int(self.text[s2:self.pos])
                if den == 0:
                    self.error("zero denominator")
                return self.ring.constant(Fraction(num, den))
            return self.ring.constant(num)
        if ch.isalpha() or ch == "_":
            for name in self.names:
                if self.text.startswith(name, self.pos):
                    end = self.pos + len(name)
                    self.pos = end
                    return self.ring.var(name)
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            self.pos = start
            self.error(f"unknown variable {self.text[start:].split()[0]!r}")
        self.error(f"unexpected character {ch!r}")


def binomial(n, k) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def subsets(r, i):
    """Lex-ordered i-subsets of range(r) as tuples."""
    return list(itertools.combinations(range(r), i))
