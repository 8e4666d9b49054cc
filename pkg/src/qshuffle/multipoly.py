"""Sparse multivariate Laurent polynomials in colored, slot-indexed variables.

Variables are identified by (namespace, color, slot): ``x`` variables carry
the shuffle-element arguments, ``y`` and ``z`` variables are the targets of
the specialization maps (for those, the color field holds the index of the
positive root in the canonical root order).  Coefficients are ``ParamPoly``
values; selected internal routines also run with ``ParamFrac`` coefficients,
which support the same arithmetic protocol.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import ContractViolationError, ExactDivisionError, GuardExceededError
from .ring import ParamPoly, ParamSet

DEFAULT_GUARD = 10_000_000


@dataclass(frozen=True, order=True)
class VarId:
    namespace: str
    color: int
    slot: int

    def key(self) -> str:
        return f"{self.namespace}:{self.color}:{self.slot}"

    @classmethod
    def from_key(cls, key: str) -> "VarId":
        ns, color, slot = key.split(":")
        return cls(ns, int(color), int(slot))


def xvar(color: int, slot: int) -> VarId:
    return VarId("x", color, slot)


def yvar(root_index: int, slot: int) -> VarId:
    return VarId("y", root_index, slot)


def zvar(root_index: int, slot: int) -> VarId:
    return VarId("z", root_index, slot)


# A monomial is a sorted tuple of (VarId, nonzero exponent) pairs.
Monomial = Tuple[Tuple[VarId, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: Dict[VarId, int] = dict(a)
    for var, e in b:
        val = exps.get(var, 0) + e
        if val == 0:
            exps.pop(var, None)
        else:
            exps[var] = val
    return tuple(sorted(exps.items()))


class XPoly:
    """Sparse polynomial: map from monomials to coefficients.

    Coefficient-ring agnostic: anything with +, -, *, is_zero() works.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object]):
        object.__setattr__(
            self, "terms", {m: c for m, c in terms.items() if not c.is_zero()}
        )

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("XPoly is immutable")

    @classmethod
    def zero(cls) -> "XPoly":
        return cls({})

    @classmethod
    def const(cls, coeff) -> "XPoly":
        return cls({(): coeff})

    @classmethod
    def var(cls, var: VarId, coeff, power: int = 1) -> "XPoly":
        if power == 0:
            return cls.const(coeff)
        return cls({((var, power),): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> Set[VarId]:
        return {var for mono in self.terms for var, _ in mono}

    def constant_coeff(self):
        return self.terms.get(())

    def __eq__(self, other) -> bool:
        if not isinstance(other, XPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "XPoly") -> "XPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            cur = out.get(m)
            out[m] = c if cur is None else cur + c
        return XPoly(out)

    def __sub__(self, other: "XPoly") -> "XPoly":
        return self + (-other)

    def __neg__(self) -> "XPoly":
        return XPoly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "XPoly") -> "XPoly":
        out: Dict[Monomial, object] = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                cur = out.get(m)
                out[m] = c if cur is None else cur + c
        return XPoly(out)

    def scale(self, coeff) -> "XPoly":
        return XPoly({m: c * coeff for m, c in self.terms.items()})

    def scale_exact(self, divisor: ParamPoly) -> "XPoly":
        """Divide every coefficient by a scalar ParamPoly, exactly."""
        out = {}
        for m, c in self.terms.items():
            q = c.divide_exact(divisor)
            if q is None:
                raise ExactDivisionError(f"coefficient {c!r} not divisible by {divisor!r}")
            out[m] = q
        return XPoly(out)

    def coeff_divisible(self, divisor: ParamPoly) -> bool:
        return all(c.divide_exact(divisor) is not None for c in self.terms.values())

    def map_coefficients(self, fn) -> "XPoly":
        return XPoly({m: fn(c) for m, c in self.terms.items()})

    def rename_variables(self, mapping: Mapping[VarId, VarId]) -> "XPoly":
        out: Dict[Monomial, object] = {}
        for mono, c in self.terms.items():
            new = tuple(sorted((mapping.get(var, var), e) for var, e in mono))
            if len({var for var, _ in new}) != len(new):
                raise ContractViolationError("variable renaming is not injective on this term")
            cur = out.get(new)
            out[new] = c if cur is None else cur + c
        return XPoly(out)

    def leading_monomial(self) -> Monomial:
        """Largest monomial under lex order: variables in VarId order, the
        earlier variable's exponent compared first, larger exponent wins."""
        if self.is_zero():
            raise ValueError("zero polynomial has no leading monomial")
        varlist = sorted(self.variables())
        best = None
        best_vec = None
        for mono in self.terms:
            exps = dict(mono)
            vec = tuple(exps.get(v, 0) for v in varlist)
            if best_vec is None or vec > best_vec:
                best_vec = vec
                best = mono
        return best

    def min_exponents(self) -> Dict[VarId, int]:
        out: Dict[VarId, int] = {}
        for mono in self.terms:
            exps = dict(mono)
            for var in self.variables():
                e = exps.get(var, 0)
                if var not in out or e < out[var]:
                    out[var] = e
        return out

    def shifted(self, shift: Mapping[VarId, int]) -> "XPoly":
        out = {}
        for mono, c in self.terms.items():
            exps = dict(mono)
            for var, s in shift.items():
                val = exps.get(var, 0) + s
                if val == 0:
                    exps.pop(var, None)
                else:
                    exps[var] = val
            out[tuple(sorted(exps.items()))] = c
        return XPoly(out)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: tuple((v, -e) for v, e in m)):
            c = self.terms[mono]
            body = "*".join(
                f"{var.key()}^{e}" if e != 1 else var.key() for var, e in mono
            )
            parts.append(f"({c!r})" + (f"*{body}" if body else ""))
        return " + ".join(parts)


def substitute(f: XPoly, assignment: Mapping[VarId, XPoly]) -> XPoly:
    """Simultaneous substitution of every variable of f.

    Assignment values that are a single invertible term (monomial coefficient
    times one variable, or a constant monomial) support negative exponents;
    general polynomial values require non-negative exponents.
    """
    missing = f.variables() - set(assignment)
    if missing:
        raise ContractViolationError(f"substitution does not cover {sorted(v.key() for v in missing)}")
    power_cache: Dict[Tuple[VarId, int], XPoly] = {}

    def var_power(var: VarId, e: int) -> XPoly:
        got = power_cache.get((var, e))
        if got is not None:
            return got
        target = assignment[var]
        if e >= 0:
            out = _xp_pow(target, e)
        else:
            inv = _invert_term(target)
            if inv is None:
                raise ContractViolationError(
                    f"negative exponent of {var.key()} needs an invertible substitution target"
                )
            out = _xp_pow(inv, -e)
        power_cache[(var, e)] = out
        return out

    total = XPoly.zero()
    for mono, c in f.terms.items():
        term = XPoly.const(c)
        for var, e in mono:
            term = term * var_power(var, e)
        total = total + term
    return total


def _xp_pow(p: XPoly, n: int) -> XPoly:
    # exponents in stored monomials are nonzero, so n >= 1 here
    result: Optional[XPoly] = None
    base = p
    k = n
    while k:
        if k & 1:
            result = base if result is None else result * base
        base = base * base
        k >>= 1
    return result


def _coeff_one_like(c):
    if isinstance(c, ParamPoly):
        return ParamPoly.one(c.params)
    return c / c  # ParamFrac and Fraction both support this


def _invert_term(p: XPoly) -> Optional[XPoly]:
    if len(p.terms) != 1:
        return None
    (mono, c), = p.terms.items()
    if isinstance(c, ParamPoly):
        if not c.is_monomial():
            return None
        inv_c = c.inverse_monomial()
    else:
        inv_c = _coeff_one_like(c) / c
    return XPoly({tuple((var, -e) for var, e in mono): inv_c})


def _color_slots(grading: Sequence[int]) -> List[List[VarId]]:
    return [[xvar(i + 1, r + 1) for r in range(k)] for i, k in enumerate(grading)]


def symmetrize(
    f: XPoly,
    grading: Sequence[int],
    skew_colors: Iterable[int] = (),
    guard: Optional[int] = None,
) -> XPoly:
    """Average of f over the product of per-color symmetric groups, with the
    sign character on the colors listed in skew_colors."""
    limit = DEFAULT_GUARD if guard is None else guard
    count = 1
    for k in grading:
        count *= math.factorial(k)
    if count > limit:
        raise GuardExceededError(f"symmetrization would generate {count} summands (guard {limit})")
    skew = set(skew_colors)
    slots = _color_slots(grading)
    total = XPoly.zero()
    for perms in itertools.product(*[itertools.permutations(range(k)) for k in grading]):
        mapping: Dict[VarId, VarId] = {}
        sign = 1
        for color_idx, perm in enumerate(perms):
            vars_here = slots[color_idx]
            for src, dst in enumerate(perm):
                mapping[vars_here[src]] = vars_here[dst]
            if (color_idx + 1) in skew:
                sign *= _perm_sign(perm)
        g = f.rename_variables(mapping)
        total = total + (g if sign == 1 else -g)
    return total.scale(Fraction(1, count))


def _perm_sign(perm: Sequence[int]) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def is_symmetric(f: XPoly, color: int, nslots: int, skew: bool = False) -> bool:
    """Invariance (or sign-flip) under adjacent transpositions of one color."""
    for r in range(1, nslots):
        a, b = xvar(color, r), xvar(color, r + 1)
        g = f.rename_variables({a: b, b: a})
        if skew:
            if g != -f:
                return False
        elif g != f:
            return False
    return True


def monomial_symmetric_expand(f: XPoly, color: int, k: int):
    """Coefficients of f in the monomial symmetric basis m_(r1<=...<=rk).

    f must be symmetric in the k variables of the given color and use no
    other variables; reconstruction of f from the output is exact.
    """
    coeffs = _orbit_expand(f, color, k, skew=False)
    rebuilt = XPoly.zero()
    for tup, c in coeffs:
        rebuilt = rebuilt + monomial_symmetric(tup, color, c)
    if rebuilt != f:
        raise ContractViolationError("input is not symmetric in the stated variables")
    return coeffs


def skew_monomial_expand(f: XPoly, color: int, k: int):
    """Coefficients of f in the skew basis a_(r1<...<rk) of alternating sums."""
    coeffs = _orbit_expand(f, color, k, skew=True)
    rebuilt = XPoly.zero()
    for tup, c in coeffs:
        rebuilt = rebuilt + skew_monomial(tup, color, c)
    if rebuilt != f:
        raise ContractViolationError("input is not skew-symmetric in the stated variables")
    return coeffs


def _orbit_expand(f: XPoly, color: int, k: int, skew: bool):
    slots = [xvar(color, r + 1) for r in range(k)]
    slot_index = {v: i for i, v in enumerate(slots)}
    seen: Dict[Tuple[int, ...], object] = {}
    for mono, c in f.terms.items():
        exps = [0] * k
        for var, e in mono:
            if var not in slot_index:
                raise ContractViolationError(f"unexpected variable {var.key()} in rank-1 input")
            exps[slot_index[var]] = e
        key = tuple(sorted(exps))
        if skew:
            if len(set(exps)) != k:
                raise ContractViolationError("skew-symmetric input has a repeated exponent")
            sign = _perm_sign(_argsort(exps))
            c = c if sign == 1 else -c
        if key not in seen:
            seen[key] = c
    return sorted(seen.items())


def _argsort(values: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted(range(len(values)), key=lambda i: values[i]))


def monomial_symmetric(exps: Sequence[int], color: int, coeff) -> XPoly:
    """m_(exps): sum of distinct permutations of the exponent tuple."""
    k = len(exps)
    out: Dict[Monomial, object] = {}
    for perm in set(itertools.permutations(exps)):
        mono = tuple(sorted((xvar(color, r + 1), e) for r, e in enumerate(perm) if e != 0))
        out[mono] = coeff
    return XPoly(out)


def skew_monomial(exps: Sequence[int], color: int, coeff) -> XPoly:
    """a_(exps): alternating sum over permutations of a strict exponent tuple."""
    if len(set(exps)) != len(exps):
        return XPoly.zero()
    base = tuple(sorted(exps))
    out: Dict[Monomial, object] = {}
    for perm in itertools.permutations(base):
        sign = _perm_sign(_argsort(perm))
        mono = tuple(sorted((xvar(color, r + 1), e) for r, e in enumerate(perm) if e != 0))
        out[mono] = coeff if sign == 1 else -coeff
    return XPoly(out)


def xp_divide_exact(num: XPoly, den: XPoly) -> Optional[XPoly]:
    """Exact division in the Laurent ring over an exact coefficient ring.

    Works whenever coefficient division is available: ParamFrac coefficients
    divide freely; ParamPoly coefficients use divide_exact.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by zero XPoly")
    if num.is_zero():
        return num
    varlist = sorted(num.variables() | den.variables())
    shift_n = {v: -e for v, e in num.min_exponents().items() if e}
    shift_d = {v: -e for v, e in den.min_exponents().items() if e}
    n = num.shifted(shift_n)
    d = den.shifted(shift_d)

    def vec(mono: Monomial) -> Tuple[int, ...]:
        exps = dict(mono)
        return tuple(exps.get(v, 0) for v in varlist)

    def unvec(vector: Tuple[int, ...]):
        return tuple((v, e) for v, e in zip(varlist, vector) if e != 0)

    n_terms = {vec(m): c for m, c in n.terms.items()}
    d_terms = {vec(m): c for m, c in d.terms.items()}
    d_lead = max(d_terms)
    d_lc = d_terms[d_lead]
    quot: Dict[Tuple[int, ...], object] = {}
    while n_terms:
        lead = max(n_terms)
        diff = tuple(a - b for a, b in zip(lead, d_lead))
        if any(x < 0 for x in diff):
            return None
        q = _coeff_div(n_terms[lead], d_lc)
        if q is None:
            return None
        quot[diff] = q
        for e, c in d_terms.items():
            tgt = tuple(a + b for a, b in zip(diff, e))
            cur = n_terms.get(tgt)
            val = (-(q * c)) if cur is None else cur - q * c
            if val.is_zero():
                n_terms.pop(tgt, None)
            else:
                n_terms[tgt] = val
    result = XPoly({unvec(e): c for e, c in quot.items()})
    back = {v: shift_d.get(v, 0) - shift_n.get(v, 0) for v in varlist}
    return result.shifted({v: s for v, s in back.items() if s})


def _coeff_div(a, b):
    if isinstance(a, ParamPoly) and isinstance(b, ParamPoly):
        return a.divide_exact(b)
    return a / b
