"""Exact arithmetic in the parameter coefficient rings and their fraction fields.

Coefficients throughout the package are Laurent polynomials over Q in a small
set of formal parameters: ``v`` for the one-parameter trigonometric setting,
``u1, u2`` (square roots of the two deformation parameters, so that all
exponents stay integral) for the two-parameter setting, and ``h`` for the
rational (Yangian-type) setting.  ``ParamPoly`` is the Laurent ring,
``ParamFrac`` its fraction field.  Rationals are ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Dict, Iterable, Optional, Tuple

from .errors import FlavorMismatchError

Rational = Fraction

Exponents = Tuple[int, ...]
Terms = Dict[Exponents, Fraction]


@dataclass(frozen=True)
class ParamSet:
    """Ordered list of formal parameter names."""

    symbols: Tuple[str, ...]

    def index(self, name: str) -> int:
        return self.symbols.index(name)

    def __len__(self) -> int:
        return len(self.symbols)


PARAMS_V = ParamSet(("v",))
PARAMS_U = ParamSet(("u1", "u2"))
PARAMS_H = ParamSet(("h",))


def _frac_gcd(values: Iterable[Fraction]) -> Fraction:
    """gcd of rationals: gcd of numerators over lcm of denominators."""
    num = 0
    den = 1
    for q in values:
        num = _int_gcd(num, abs(q.numerator))
        den = den * q.denominator // _int_gcd(den, q.denominator)
    if num == 0:
        return Fraction(0)
    return Fraction(num, den)


class ParamPoly:
    """Sparse Laurent polynomial in the parameters with rational coefficients.

    Immutable by convention: no method mutates ``terms`` after construction.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params: ParamSet, terms: Terms):
        object.__setattr__(self, "params", params)
        clean = {e: c for e, c in terms.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("ParamPoly is immutable")

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, params: ParamSet) -> "ParamPoly":
        return cls(params, {})

    @classmethod
    def const(cls, params: ParamSet, value) -> "ParamPoly":
        q = Fraction(value)
        if q == 0:
            return cls.zero(params)
        return cls(params, {(0,) * len(params): q})

    @classmethod
    def one(cls, params: ParamSet) -> "ParamPoly":
        return cls.const(params, 1)

    @classmethod
    def monomial(cls, params: ParamSet, exps: Dict[str, int], coeff=1) -> "ParamPoly":
        vec = [0] * len(params)
        for name, e in exps.items():
            vec[params.index(name)] += e
        q = Fraction(coeff)
        if q == 0:
            return cls.zero(params)
        return cls(params, {tuple(vec): q})

    @classmethod
    def var(cls, params: ParamSet, name: str, power: int = 1) -> "ParamPoly":
        return cls.monomial(params, {name: power})

    # predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        zero_vec = (0,) * len(self.params)
        return set(self.terms) == {zero_vec} and self.terms[zero_vec] == 1

    def is_constant(self) -> bool:
        zero_vec = (0,) * len(self.params)
        return not self.terms or set(self.terms) == {zero_vec}

    def is_monomial(self) -> bool:
        """Single term, hence invertible in the Laurent ring iff nonzero."""
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return self.terms[(0,) * len(self.params)]

    # arithmetic ------------------------------------------------------------

    def _check(self, other: "ParamPoly"):
        if self.params != other.params:
            raise FlavorMismatchError(
                f"parameter sets differ: {self.params.symbols} vs {other.params.symbols}"
            )

    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ParamPoly(self.params, out)

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return ParamPoly(self.params, out)

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(self.params, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: Terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ParamPoly(self.params, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, q) -> "ParamPoly":
        q = Fraction(q)
        return ParamPoly(self.params, {e: c * q for e, c in self.terms.items()})

    def __pow__(self, n: int) -> "ParamPoly":
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = ParamPoly.one(self.params)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse_monomial(self) -> "ParamPoly":
        if not self.is_monomial():
            raise ValueError("only monomials are invertible in the Laurent ring")
        (e, c), = self.terms.items()
        return ParamPoly(self.params, {tuple(-x for x in e): Fraction(1) / c})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.params, frozenset(self.terms.items())))

    # structure -------------------------------------------------------------

    def min_exponents(self) -> Exponents:
        if self.is_zero():
            return (0,) * len(self.params)
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.params)))

    def shifted(self, shift: Exponents) -> "ParamPoly":
        return ParamPoly(
            self.params,
            {tuple(a + b for a, b in zip(e, shift)): c for e, c in self.terms.items()},
        )

    def leading(self) -> Tuple[Exponents, Fraction]:
        """Lexicographically largest exponent vector and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def content(self) -> Fraction:
        return _frac_gcd(self.terms.values())

    def divide_exact(self, den: "ParamPoly") -> Optional["ParamPoly"]:
        """Return q with self == q * den in the Laurent ring, or None."""
        self._check(den)
        if den.is_zero():
            raise ZeroDivisionError("division by zero ParamPoly")
        if self.is_zero():
            return self
        if den.is_monomial():
            return self * den.inverse_monomial()
        # Shift both factors into the ordinary polynomial ring, divide there.
        sn = tuple(-x for x in self.min_exponents())
        sd = tuple(-x for x in den.min_exponents())
        num_terms = self.shifted(sn).terms
        den_terms = den.shifted(sd).terms
        quot = _poly_divide_exact(num_terms, den_terms)
        if quot is None:
            return None
        back = tuple(b - a for a, b in zip(sn, sd))
        return ParamPoly(self.params, quot).shifted(back)

    def divides(self, other: "ParamPoly") -> bool:
        return other.divide_exact(self) is not None

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{s}^{k}" if k != 1 else s
                for s, k in zip(self.params.symbols, e)
                if k != 0
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


# -- raw polynomial helpers (non-negative exponent dicts) --------------------


def _poly_divide_exact(num: Terms, den: Terms) -> Optional[Terms]:
    """Exact division of ordinary (non-Laurent) sparse polynomials.

    Single-divisor division under lex order; exact iff remainder is zero.
    """
    den_lead = max(den)
    den_lc = den[den_lead]
    cur = dict(num)
    quot: Terms = {}
    while cur:
        lead = max(cur)
        diff = tuple(a - b for a, b in zip(lead, den_lead))
        if any(d < 0 for d in diff):
            return None
        q = cur[lead] / den_lc
        quot[diff] = quot.get(diff, Fraction(0)) + q
        for e, c in den.items():
            tgt = tuple(a + b for a, b in zip(diff, e))
            val = cur.get(tgt, Fraction(0)) - q * c
            if val == 0:
                cur.pop(tgt, None)
            else:
                cur[tgt] = val
    return quot


def _poly_mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _poly_content_and_primitive(terms: Terms, nsym: int) -> Tuple[Terms, Terms]:
    """Content (as a polynomial in the first nsym-1 symbols) and primitive part
    with respect to the last symbol."""
    by_deg: Dict[int, Terms] = {}
    for e, c in terms.items():
        by_deg.setdefault(e[-1], {})[e[:-1]] = c
    cont: Optional[Terms] = None
    for coeff in by_deg.values():
        cont = coeff if cont is None else _poly_gcd(cont, coeff, nsym - 1)
    assert cont is not None
    pp: Terms = {}
    for d, coeff in by_deg.items():
        q = _poly_divide_exact(coeff, cont)
        assert q is not None
        for e, c in q.items():
            pp[e + (d,)] = c
    return cont, pp


def _poly_gcd(a: Terms, b: Terms, nsym: int) -> Terms:
    """gcd of ordinary sparse polynomials, normalized with content 1 and
    positive lex-leading coefficient.  Recursion over the number of symbols."""
    if not a:
        base = dict(b)
    elif not b:
        base = dict(a)
    elif nsym == 1:
        base = _poly_gcd_univ(a, b)
    else:
        cont_a, pp_a = _poly_content_and_primitive(a, nsym)
        cont_b, pp_b = _poly_content_and_primitive(b, nsym)
        cont_g = _poly_gcd(cont_a, cont_b, nsym - 1)
        pp_g = _poly_gcd_prs(pp_a, pp_b, nsym)
        base = _poly_mul({e + (0,): c for e, c in cont_g.items()}, pp_g)
    if not base:
        return base
    # normalize: content 1, positive leading coefficient
    g = _frac_gcd(base.values())
    lead = max(base)
    if base[lead] < 0:
        g = -g
    return {e: c / g for e, c in base.items()}


def _poly_gcd_univ(a: Terms, b: Terms) -> Terms:
    fa = {e[0]: c for e, c in a.items()}
    fb = {e[0]: c for e, c in b.items()}
    while fb:
        fa, fb = fb, _poly_rem_univ(fa, fb)
    return {(d,): c for d, c in fa.items()}


def _poly_rem_univ(a: Dict[int, Fraction], b: Dict[int, Fraction]) -> Dict[int, Fraction]:
    db = max(b)
    lb = b[db]
    cur = dict(a)
    while cur and max(cur) >= db:
        da = max(cur)
        q = cur[da] / lb
        for e, c in b.items():
            tgt = da - db + e
            val = cur.get(tgt, Fraction(0)) - q * c
            if val == 0:
                cur.pop(tgt, None)
            else:
                cur[tgt] = val
    return cur


def _poly_gcd_prs(a: Terms, b: Terms, nsym: int) -> Terms:
    """Primitive pseudo-remainder sequence in the last symbol."""
    def deg(p: Terms) -> int:
        return max(e[-1] for e in p)

    def lc(p: Terms) -> Terms:
        d = deg(p)
        return {e[:-1]: c for e, c in p.items() if e[-1] == d}

    def scale_main(p: Terms, s: Terms) -> Terms:
        s_full = {e + (0,): c for e, c in s.items()}
        return _poly_mul(p, s_full)

    def shift_main(p: Terms, k: int) -> Terms:
        return {e[:-1] + (e[-1] + k,): c for e, c in p.items()}

    if deg(a) < deg(b):
        a, b = b, a
    while True:
        if not b:
            return a
        db = deg(b)
        if db == 0:
            # b has no main-variable dependence: gcd reduces to contents
            g = _poly_gcd({e[:-1]: c for e, c in b.items()}, _content_wrt_main(a), nsym - 1)
            return {e + (0,): c for e, c in g.items()}
        # pseudo-remainder: cur <- lc(b)*cur - lc(cur)*x^(d-db)*b at each step
        cur = dict(a)
        while cur and deg(cur) >= db:
            d = deg(cur)
            head = lc(cur)
            cur = _poly_sub(scale_main(cur, lc(b)), scale_main(shift_main(b, d - db), head))
        if not cur:
            return b
        _, cur = _poly_content_and_primitive(cur, nsym)
        a, b = b, cur


def _content_wrt_main(p: Terms) -> Terms:
    by_deg: Dict[int, Terms] = {}
    for e, c in p.items():
        by_deg.setdefault(e[-1], {})[e[:-1]] = c
    cont: Optional[Terms] = None
    nsym = len(next(iter(p))) if p else 1
    for coeff in by_deg.values():
        cont = coeff if cont is None else _poly_gcd(cont, coeff, nsym - 1)
    return cont or {}


def _poly_sub(a: Terms, b: Terms) -> Terms:
    out = dict(a)
    for e, c in b.items():
        val = out.get(e, Fraction(0)) - c
        if val == 0:
            out.pop(e, None)
        else:
            out[e] = val
    return out


def param_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """gcd in the Laurent ring, normalized to a true polynomial with content 1
    and positive leading coefficient (monomial units are quotiented away)."""
    if a.is_zero() and b.is_zero():
        return ParamPoly.zero(a.params)
    ta = a.shifted(tuple(-x for x in a.min_exponents())).terms
    tb = b.shifted(tuple(-x for x in b.min_exponents())).terms
    return ParamPoly(a.params, _poly_gcd(ta, tb, len(a.params)))


class ParamFrac:
    """Element of the fraction field of ParamPoly, kept normalized: the
    denominator is a polynomial (no negative exponents) with positive leading
    rational and trivial gcd with the numerator."""

    __slots__ = ("num", "den")

    def __init__(self, num: ParamPoly, den: Optional[ParamPoly] = None):
        if den is None:
            den = ParamPoly.one(num.params)
        if den.is_zero():
            raise ZeroDivisionError("ParamFrac with zero denominator")
        num, den = self._normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("ParamFrac is immutable")

    @staticmethod
    def _normalize(num: ParamPoly, den: ParamPoly) -> Tuple[ParamPoly, ParamPoly]:
        if num.is_zero():
            return num, ParamPoly.one(den.params)
        # clear monomial units so den is an honest polynomial
        shift = tuple(-x for x in den.min_exponents())
        den = den.shifted(shift)
        num = num.shifted(shift)
        g = param_gcd(num, den)
        if not g.is_one() and not g.is_zero():
            num_q = num.divide_exact(g)
            den_q = den.divide_exact(g)
            assert num_q is not None and den_q is not None
            num, den = num_q, den_q
            shift2 = tuple(-x for x in den.min_exponents())
            den = den.shifted(shift2)
            num = num.shifted(shift2)
        # positive leading rational, content-1 denominator
        _, lc = den.leading()
        c = den.content()
        if lc < 0:
            c = -c
        den = den.scale(Fraction(1) / c)
        num = num.scale(Fraction(1) / c)
        return num, den

    @classmethod
    def from_poly(cls, p: ParamPoly) -> "ParamFrac":
        return cls(p)

    @classmethod
    def const(cls, params: ParamSet, value) -> "ParamFrac":
        return cls(ParamPoly.const(params, value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_poly(self) -> Optional[ParamPoly]:
        """The underlying ParamPoly if the fraction is denominator-free."""
        return self.num.divide_exact(self.den)

    @property
    def params(self) -> ParamSet:
        return self.num.params

    @staticmethod
    def _coerce(other, params: ParamSet) -> "ParamFrac":
        if isinstance(other, ParamFrac):
            return other
        if isinstance(other, ParamPoly):
            return ParamFrac(other)
        if isinstance(other, (int, Fraction)):
            return ParamFrac(ParamPoly.const(params, other))
        raise TypeError(f"cannot coerce {type(other)} to ParamFrac")

    def __add__(self, other):
        o = self._coerce(other, self.params)
        return ParamFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other, self.params)
        return ParamFrac(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other, self.params)
        return o - self

    def __neg__(self):
        return ParamFrac(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ParamFrac(self.num.scale(other), self.den)
        o = self._coerce(other, self.params)
        return ParamFrac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other, self.params)
        if o.is_zero():
            raise ZeroDivisionError("division by zero ParamFrac")
        return ParamFrac(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other, self.params)
        return o / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (ParamPoly, int, Fraction)):
            other = self._coerce(other, self.params)
        if not isinstance(other, ParamFrac):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        if self.den.is_one():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


# -- q-arithmetic -------------------------------------------------------------


def qint(k: int, params: ParamSet = PARAMS_V) -> ParamPoly:
    """The balanced q-integer v^{k-1} + v^{k-3} + ... + v^{1-k}."""
    if "v" not in params.symbols:
        raise FlavorMismatchError("q-integers are defined in the v-parameter ring only")
    if k < 1:
        raise ValueError("qint requires k >= 1")
    i = params.index("v")
    terms: Terms = {}
    for j in range(k):
        vec = [0] * len(params)
        vec[i] = k - 1 - 2 * j
        terms[tuple(vec)] = Fraction(1)
    return ParamPoly(params, terms)


def qfact(k: int, params: ParamSet = PARAMS_V) -> ParamPoly:
    """The q-factorial [1]_v [2]_v ... [k]_v, with qfact(0) = 1."""
    if k < 0:
        raise ValueError("qfact requires k >= 0")
    out = ParamPoly.one(params)
    for j in range(1, k + 1):
        out = out * qint(j, params)
    return out


def divide_exact(a: ParamPoly, b: ParamPoly) -> Optional[ParamPoly]:
    """Module-level alias for exact Laurent division (None if not divisible)."""
    return a.divide_exact(b)


def degenerate_two_param(p: ParamPoly) -> ParamPoly:
    """Specialize the two-parameter ring at u1*u2^-1 -> v, u1*u2 -> 1.

    Defined on the even sublattice u1^a u2^b with a = b (mod 2); raises
    ValueError otherwise.
    """
    if p.params != PARAMS_U:
        raise FlavorMismatchError("degeneration applies to the (u1, u2) ring")
    out: Terms = {}
    for (a, b), c in p.terms.items():
        if (a - b) % 2 != 0:
            raise ValueError(f"monomial u1^{a} u2^{b} has no image under the degeneration")
        e = ((a - b) // 2,)
        out[e] = out.get(e, Fraction(0)) + c
    return ParamPoly(PARAMS_V, out)
