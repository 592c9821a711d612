"""Exact scalar arithmetic for weighted matching computations.

Three interchangeable scalar kinds flow through the pipeline:

* ``Fraction`` (stdlib) -- exact rationals, the default backend.
* ``EpsScalar`` -- a reduced ratio of polynomials in a formal
  infinitesimal ``e``.  Zero edge weights get replaced by ``e`` so that
  cell factors never vanish; the limit at ``e -> 0`` is taken at the
  very end.  Full polynomial fractions are carried (not just leading
  terms): leading-term-only arithmetic is unsound under cancellation in
  addition, e.g. (1+e) + (-1) must come out as exactly ``e``.
* ``float`` -- IEEE doubles, only for large-order sampling/rendering.
  Zero weights are rejected under this backend.

All three support ``+ - * /`` against each other's own kind and plain
ints, so the pipeline code is written once, generically.

EpsScalar is stored as  scale * num(e) / den(e)  with ``scale`` a
Fraction and ``num``, ``den`` primitive integer polynomials (content 1,
lowest nonzero coefficient positive, no common factor of e or anything
else).  Keeping the polynomial arithmetic over plain ints makes the
gcd (a primitive pseudo-remainder sequence) cheap; a naive Euclid over
rational coefficients blows up badly here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Sequence, Union

Rational = Fraction

Scalar = Union[Fraction, "EpsScalar", float]


class PoleAtZero(ArithmeticError):
    """The limit at e -> 0 does not exist (numerator vanishes slower)."""


class ZeroCellFactor(ArithmeticError):
    """A cell factor wz + xy was exactly zero during reduction."""

    def __init__(self, order: int, r: int, c: int):
        super().__init__(f"zero cell factor at order {order}, cell ({r}, {c})")
        self.order = order
        self.r = r
        self.c = c


class ZeroWeight(ValueError):
    """An operation that assumes non-vanishing weights saw a zero."""


# Products and sums skip the polynomial-gcd reduction below this degree;
# division always reduces.  Contents and powers of e are stripped on
# every operation regardless, which is what actually bounds growth.
GCD_DEGREE_THRESHOLD = 1


# -- integer polynomial helpers (dense, constant term first) -----------------

def _trim(coeffs: list) -> list:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _ipoly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return _trim(out)


def _ipoly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _trim(out)


def _ipoly_content(a: Sequence[int]) -> int:
    g = 0
    for v in a:
        g = _int_gcd(g, abs(v))
        if g == 1:
            break
    return g


def _ipoly_valuation(a: Sequence[int]) -> int:
    for i, v in enumerate(a):
        if v:
            return i
    return len(a)


def _ipoly_pseudo_rem(a: list[int], b: Sequence[int]) -> list[int]:
    """Remainder of lead(b)^k * a by b, all in integer arithmetic."""
    rem = list(a)
    lead = b[-1]
    while len(rem) >= len(b):
        coef = rem[-1]
        deg = len(rem) - len(b)
        rem = [v * lead for v in rem]
        for i, v in enumerate(b):
            rem[deg + i] -= coef * v
        _trim(rem)
        if not rem:
            break
    return rem


def _ipoly_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive gcd by a content-stripped pseudo-remainder sequence."""
    a, b = list(a), list(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _ipoly_pseudo_rem(a, b)
        cont = _ipoly_content(r)
        if cont > 1:
            r = [v // cont for v in r]
        a, b = b, r
    cont = _ipoly_content(a)
    if cont > 1:
        a = [v // cont for v in a]
    if a and a[_ipoly_valuation(a)] < 0:
        a = [-v for v in a]
    return a


def _ipoly_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """a / b when the division is exact over the integers."""
    rem = list(a)
    out = [0] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b):
        q, r = divmod(rem[-1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        deg = len(rem) - len(b)
        out[deg] = q
        for i, v in enumerate(b):
            rem[deg + i] -= q * v
        _trim(rem)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


def _to_int_poly(coeffs: Sequence) -> tuple[Fraction, list[int]]:
    """Fraction-coefficient list -> (scale, primitive int polynomial)."""
    fracs = [Fraction(v) for v in coeffs]
    fracs = _trim(fracs)
    if not fracs:
        return Fraction(0), []
    denom_lcm = 1
    for v in fracs:
        denom_lcm = denom_lcm * v.denominator // _int_gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in fracs]
    cont = _ipoly_content(ints)
    ints = [v // cont for v in ints]
    scale = Fraction(cont, denom_lcm)
    if ints[_ipoly_valuation(ints)] < 0:
        ints = [-v for v in ints]
        scale = -scale
    return scale, ints


class EpsScalar:
    """scale * num(e)/den(e), kept in a canonical reduced form.

    Equality is decidable by comparing the canonical fields directly.
    """

    __slots__ = ("scale", "inum", "iden")

    def __init__(self, num, den=None):
        if isinstance(num, EpsScalar) and den is None:
            self.scale, self.inum, self.iden = num.scale, num.inum, num.iden
            return
        if isinstance(num, (int, Fraction)):
            num = [Fraction(num)]
        if den is None:
            den = [1]
        elif isinstance(den, (int, Fraction)):
            den = [Fraction(den)]
        qn, pn = _to_int_poly(num)
        qd, pd = _to_int_poly(den)
        if not pd:
            raise ZeroDivisionError("EpsScalar with zero denominator")
        self.scale, self.inum, self.iden = _normalize(qn / qd, pn, pd, force_gcd=True)

    @classmethod
    def _raw(cls, scale: Fraction, inum: list[int], iden: list[int]) -> "EpsScalar":
        out = cls.__new__(cls)
        out.scale, out.inum, out.iden = scale, inum, iden
        return out

    @classmethod
    def epsilon(cls) -> "EpsScalar":
        return cls._raw(Fraction(1), [0, 1], [1])

    @classmethod
    def const(cls, value) -> "EpsScalar":
        value = Fraction(value)
        if value == 0:
            return cls._raw(Fraction(0), [1], [1])
        return cls._raw(value, [1], [1])

    def is_zero(self) -> bool:
        return self.scale == 0

    # Rational-coefficient views, used by the text encoding and tests.
    @property
    def num(self) -> list[Fraction]:
        return [self.scale * v for v in self.inum]

    @property
    def den(self) -> list[Fraction]:
        return [Fraction(v) for v in self.iden]

    # -- field operations --------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, EpsScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return EpsScalar.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.scale == 0:
            return o
        if o.scale == 0:
            return self
        # common scale: write self.scale = (a/b), o.scale = (c/d)
        a, b = self.scale.numerator, self.scale.denominator
        c, d = o.scale.numerator, o.scale.denominator
        left = _ipoly_mul([a * d], _ipoly_mul(self.inum, o.iden))
        right = _ipoly_mul([c * b], _ipoly_mul(o.inum, self.iden))
        num = _ipoly_add(left, right)
        if not num:
            return EpsScalar.const(0)
        den = _ipoly_mul(self.iden, o.iden)
        return EpsScalar._raw(*_normalize(Fraction(1, b * d), num, den))

    __radd__ = __add__

    def __neg__(self):
        if self.scale == 0:
            return self
        return EpsScalar._raw(-self.scale, self.inum, self.iden)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.scale == 0 or o.scale == 0:
            return EpsScalar.const(0)
        return EpsScalar._raw(
            *_normalize(
                self.scale * o.scale,
                _ipoly_mul(self.inum, o.inum),
                _ipoly_mul(self.iden, o.iden),
            )
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.scale == 0:
            raise ZeroDivisionError("EpsScalar division by zero")
        if self.scale == 0:
            return self
        return EpsScalar._raw(
            *_normalize(
                self.scale / o.scale,
                _ipoly_mul(self.inum, o.iden),
                _ipoly_mul(self.iden, o.inum),
                force_gcd=True,
            )
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = EpsScalar.const(other)
        if not isinstance(other, EpsScalar):
            return NotImplemented
        a = self.fully_reduced()
        b = other.fully_reduced()
        return a.scale == b.scale and a.inum == b.inum and a.iden == b.iden

    def __hash__(self):
        a = self.fully_reduced()
        return hash((a.scale, tuple(a.inum), tuple(a.iden)))

    def __repr__(self):
        return f"EpsScalar({format_eps_poly(self.num)!r} / {format_eps_poly(self.den)!r})"

    def fully_reduced(self) -> "EpsScalar":
        return EpsScalar._raw(*_normalize(self.scale, self.inum, self.iden, force_gcd=True))

    def degree(self) -> int:
        return max(len(self.inum), len(self.iden)) - 1

    # -- limits --------------------------------------------------------------

    def valuation_gap(self) -> int:
        """valuation(num) - valuation(den); negative means a pole at 0."""
        if self.scale == 0:
            return 0
        return _ipoly_valuation(self.inum) - _ipoly_valuation(self.iden)

    def limit0(self) -> Fraction:
        if self.scale == 0:
            return Fraction(0)
        gap = self.valuation_gap()
        if gap < 0:
            raise PoleAtZero(f"valuation deficit {-gap} in eps limit")
        if gap > 0:
            return Fraction(0)
        v = _ipoly_valuation(self.inum)
        w = _ipoly_valuation(self.iden)
        return self.scale * Fraction(self.inum[v], self.iden[w])


def _normalize(scale: Fraction, num: list[int], den: list[int], force_gcd: bool = False):
    """Canonicalize: strip e powers and contents, optionally divide out
    the polynomial gcd, and make both lowest coefficients positive."""
    shift = min(_ipoly_valuation(num), _ipoly_valuation(den))
    if shift:
        num = num[shift:]
        den = den[shift:]
    cn = _ipoly_content(num)
    if cn > 1:
        num = [v // cn for v in num]
        scale = scale * cn
    cd = _ipoly_content(den)
    if cd > 1:
        den = [v // cd for v in den]
        scale = scale / cd
    if (force_gcd or min(len(num), len(den)) - 1 > GCD_DEGREE_THRESHOLD) and len(den) > 1 and len(num) > 1:
        g = _ipoly_gcd(num, den)
        if len(g) > 1:
            num = _ipoly_exact_div(num, g)
            den = _ipoly_exact_div(den, g)
    if num[_ipoly_valuation(num)] < 0:
        num = [-v for v in num]
        scale = -scale
    if den[_ipoly_valuation(den)] < 0:
        den = [-v for v in den]
        scale = -scale
    return scale, num, den


def eps_limit0(s) -> Fraction:
    """Limit of an eps scalar (or plain rational) as e goes to 0."""
    if isinstance(s, EpsScalar):
        return s.limit0()
    return Fraction(s)


# -- backends ---------------------------------------------------------------

EXACT = "exact"
EPS = "eps"
FLOAT64 = "float64"

BACKENDS = (EXACT, EPS, FLOAT64)


@dataclass(frozen=True)
class Backend:
    """Scalar conversion contract shared by one whole computation."""

    mode: str = EXACT

    def __post_init__(self):
        if self.mode not in BACKENDS:
            raise ValueError(f"unknown backend {self.mode!r}")

    def from_rational(self, value: Fraction) -> Scalar:
        value = Fraction(value)
        if self.mode == EXACT:
            return value
        if self.mode == EPS:
            return EpsScalar.epsilon() if value == 0 else EpsScalar.const(value)
        if value == 0:
            raise ZeroWeight("float64 backend does not support zero weights")
        return float(value)

    def finalize(self, value: Scalar):
        """Collapse a pipeline scalar back to a reportable number."""
        if self.mode == EPS:
            return eps_limit0(value)
        return value


# -- text encoding ------------------------------------------------------------

def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_eps_poly(coeffs: Sequence[Fraction]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i, v in enumerate(coeffs):
        if v == 0:
            continue
        if i == 0:
            parts.append(str(v))
        elif i == 1:
            parts.append(f"{v}*e")
        else:
            parts.append(f"{v}*e^{i}")
    return " + ".join(parts) if parts else "0"


def parse_eps_poly(text: str) -> list[Fraction]:
    coeffs: dict[int, Fraction] = {}
    for raw in text.replace("-", "+-").split("+"):
        term = raw.strip()
        if not term:
            continue
        if "e" not in term:
            coeffs[0] = coeffs.get(0, Fraction(0)) + Fraction(term)
            continue
        head, _, tail = term.partition("e")
        head = head.strip().rstrip("*").strip()
        if head in ("", "-"):
            coef = Fraction(head + "1")
        else:
            coef = Fraction(head)
        tail = tail.strip()
        power = 1 if not tail else int(tail.lstrip("^").strip())
        coeffs[power] = coeffs.get(power, Fraction(0)) + coef
    if not coeffs:
        return []
    out = [Fraction(0)] * (max(coeffs) + 1)
    for k, v in coeffs.items():
        out[k] = v
    return out


def format_scalar(value: Scalar) -> str:
    if isinstance(value, EpsScalar):
        if value.iden == [1]:
            return format_eps_poly(value.num)
        return f"({format_eps_poly(value.num)}) / ({format_eps_poly(value.den)})"
    if isinstance(value, float):
        return repr(value)
    return format_rational(value)


def parse_scalar(text: str):
    """Parse the weight-file grammar: "p/q" or an eps polynomial/fraction."""
    text = text.strip()
    if text.startswith("("):
        numtxt, _, dentxt = text.partition(")/")
        num = parse_eps_poly(numtxt.strip().lstrip("("))
        den = parse_eps_poly(dentxt.strip().lstrip("(").rstrip(")"))
        return EpsScalar(num, den)
    if "e" in text:
        return EpsScalar(parse_eps_poly(text))
    return parse_rational(text)
