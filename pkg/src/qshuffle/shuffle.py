"""Flavors, shuffle elements, the shuffle product, and pole/wheel predicates.

An element of a flavor's shuffle algebra is stored as a Laurent-polynomial
numerator over the standard pole denominator

    prod_{adjacent colors i} prod_{r, r'} (x_{i,r} - x_{i+1,r'}),

which is never materialized.  The product symmetrizes (averaging over the
product of per-color symmetric groups, with the sign character on the odd
color in the super flavors) and clears the same-color interaction
denominators by exact division, so results stay in the canonical form.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .errors import (
    ContractViolationError,
    ExactDivisionError,
    FlavorMismatchError,
    GuardExceededError,
)
from .multipoly import DEFAULT_GUARD, Monomial, VarId, XPoly, substitute, xvar, xp_divide_exact
from .ring import PARAMS_H, PARAMS_U, PARAMS_V, ParamPoly, ParamSet

KIND_TRIG_A = "trig-a"
KIND_TRIG_2P = "trig-2p"
KIND_TRIG_SUPER = "trig-super"
KIND_YANG_A = "yang-a"
KIND_YANG_SUPER = "yang-super"

ALL_KINDS = (KIND_TRIG_A, KIND_TRIG_2P, KIND_TRIG_SUPER, KIND_YANG_A, KIND_YANG_SUPER)

# formal argument of the zeta rational functions (color 0 never names a real color)
ZVAR = VarId("z", 0, 0)


def effective_guard(guard: Optional[int]) -> int:
    if guard is not None:
        return guard
    env = os.environ.get("QSA_GUARD")
    if env:
        return int(env)
    return DEFAULT_GUARD


@dataclass(frozen=True)
class Flavor:
    """One of the five algebra settings sharing the shuffle formalism."""

    kind: str
    n: int
    m: int = 0

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown flavor kind {self.kind!r}")
        if self.is_super:
            if self.m < 1 or self.n < 1:
                raise ValueError("super flavors need m >= 1 and n >= 1")
        else:
            if self.n < 2:
                raise ValueError("non-super flavors need n >= 2")
            if self.m:
                raise ValueError("m is only meaningful for super flavors")

    # structure ---------------------------------------------------------------

    @property
    def is_super(self) -> bool:
        return self.kind in (KIND_TRIG_SUPER, KIND_YANG_SUPER)

    @property
    def is_yangian(self) -> bool:
        return self.kind in (KIND_YANG_A, KIND_YANG_SUPER)

    @property
    def num_colors(self) -> int:
        return (self.m + self.n - 1) if self.is_super else (self.n - 1)

    @property
    def colors(self) -> range:
        return range(1, self.num_colors + 1)

    @property
    def skew_color(self) -> Optional[int]:
        return self.m if self.is_super else None

    @property
    def params(self) -> ParamSet:
        if self.kind == KIND_TRIG_2P:
            return PARAMS_U
        if self.is_yangian:
            return PARAMS_H
        return PARAMS_V

    def cartan(self, i: int, j: int) -> int:
        """Entries c_ij of the Cartan matrix, or their super analogue."""
        if i == j:
            if not self.is_super:
                return 2
            if i < self.m:
                return 2
            if i > self.m:
                return -2
            return 0
        if abs(i - j) != 1:
            return 0
        if not self.is_super:
            return -1
        # -(eps_k, eps_k) for the shared index k = max(i, j)
        k = max(i, j)
        return -1 if k <= self.m else 1

    def sign_v(self, i: int) -> int:
        """(eps_i, eps_i): +1 below the odd color, -1 above (super only)."""
        return 1 if i <= self.m else -1

    def normalizer(self) -> ParamPoly:
        if self.kind == KIND_TRIG_2P:
            return ParamPoly.monomial(PARAMS_U, {"u1": 1, "u2": -1}) - ParamPoly.monomial(
                PARAMS_U, {"u1": -1, "u2": 1}
            )
        if self.is_yangian:
            return ParamPoly.var(PARAMS_H, "h")
        return ParamPoly.var(PARAMS_V, "v") - ParamPoly.var(PARAMS_V, "v", -1)

    def one(self) -> ParamPoly:
        return ParamPoly.one(self.params)

    def describe(self) -> str:
        if self.is_super:
            return f"{self.kind}({self.m}|{self.n})"
        return f"{self.kind}({self.n})"


def trig_a(n: int) -> Flavor:
    return Flavor(KIND_TRIG_A, n)


def trig_2p(n: int) -> Flavor:
    return Flavor(KIND_TRIG_2P, n)


def trig_super(m: int, n: int) -> Flavor:
    return Flavor(KIND_TRIG_SUPER, n, m)


def yang_a(n: int) -> Flavor:
    return Flavor(KIND_YANG_A, n)


def yang_super(m: int, n: int) -> Flavor:
    return Flavor(KIND_YANG_SUPER, n, m)


# -- zeta matrices -------------------------------------------------------------


def _zeta_data(flavor: Flavor, i: int, j: int):
    """Internal description of zeta_{i,j}: None if identically 1, else a tuple
    (mult_coeff, shift_coeff, prefactor) encoding

        trig:  prefactor * (u - mult_coeff * u') / (u - u')
        yang:  (u - u' + shift_coeff) / (u - u')

    evaluated at a left variable u of color i and a right variable u' of
    color j."""
    P = flavor.params
    if i not in flavor.colors or j not in flavor.colors:
        raise ValueError(f"color out of range for {flavor.describe()}")
    if abs(i - j) > 1:
        return None
    one = ParamPoly.one(P)
    if flavor.kind == KIND_TRIG_A:
        c = flavor.cartan(i, j)
        return (ParamPoly.var(P, "v", -c), None, one)
    if flavor.kind == KIND_TRIG_2P:
        w = ParamPoly.monomial(P, {"u1": 1, "u2": -1})
        if j == i:
            return (ParamPoly.monomial(P, {"u1": -2, "u2": 2}), None, one)
        if j == i - 1:
            return (w, None, one)
        return (w, None, ParamPoly.monomial(P, {"u1": 1, "u2": 1}))
    if flavor.kind == KIND_TRIG_SUPER:
        mm = flavor.m
        if j == i:
            if i == mm:
                return None
            return (ParamPoly.var(P, "v", -2 if i < mm else 2), None, one)
        if j == i + 1:
            return (ParamPoly.var(P, "v", 1 if i < mm else -1), None, one)
        return (ParamPoly.var(P, "v", 1 if i <= mm else -1), None, one)
    h = ParamPoly.var(P, "h")
    if flavor.kind == KIND_YANG_A:
        c = flavor.cartan(i, j)
        return (None, h.scale(Fraction(c, 2)), one)
    # yang-super
    mm = flavor.m
    if j == i:
        if i == mm:
            return None
        return (None, h if i < mm else -h, one)
    if j == i + 1:
        return (None, h.scale(Fraction(-1, 2)) if i < mm else h.scale(Fraction(1, 2)), one)
    return (None, h.scale(Fraction(-1, 2)) if i <= mm else h.scale(Fraction(1, 2)), one)


def zeta(flavor: Flavor, i: int, j: int) -> Tuple[XPoly, XPoly]:
    """The rational function zeta_{i,j}(z) as a (numerator, denominator) pair
    of polynomials in the formal variable ``z``."""
    data = _zeta_data(flavor, i, j)
    one = flavor.one()
    z = XPoly.var(ZVAR, one)
    if data is None:
        return XPoly.const(one), XPoly.const(one)
    mult, shift, prefactor = data
    if mult is not None:
        num = (z - XPoly.const(mult)).scale(prefactor)
    else:
        num = z + XPoly.const(shift)
    return num, z - XPoly.const(one)


def zeta_factor(flavor: Flavor, i: int, j: int, u: VarId, uprime: VarId) -> Optional[XPoly]:
    """Numerator of zeta_{i,j} evaluated at concrete variables; None when the
    factor is trivial.  The implied denominator is (u - u')."""
    data = _zeta_data(flavor, i, j)
    if data is None:
        return None
    mult, shift, prefactor = data
    one = flavor.one()
    if mult is not None:
        return XPoly.var(u, prefactor) - XPoly.var(uprime, prefactor * mult)
    return XPoly.var(u, one) - XPoly.var(uprime, one) + XPoly.const(shift)


def zeta_has_denominator(flavor: Flavor, i: int, j: int) -> bool:
    return _zeta_data(flavor, i, j) is not None


# -- elements -------------------------------------------------------------------


@dataclass(frozen=True)
class ShuffleElement:
    """Graded element: numerator over the standard pole denominator."""

    flavor: Flavor
    grading: Tuple[int, ...]
    numerator: XPoly

    def __post_init__(self):
        if len(self.grading) != self.flavor.num_colors:
            raise ValueError(
                f"grading length {len(self.grading)} != {self.flavor.num_colors} colors"
            )
        for var in self.numerator.variables():
            if var.namespace != "x":
                raise ValueError(f"element numerator uses non-x variable {var.key()}")
            if not (1 <= var.color <= self.flavor.num_colors):
                raise ValueError(f"variable color out of range: {var.key()}")
            if not (1 <= var.slot <= self.grading[var.color - 1]):
                raise ValueError(f"variable slot exceeds grading: {var.key()}")

    @property
    def total_degree(self) -> int:
        return sum(self.grading)

    def parity(self) -> int:
        m = self.flavor.skew_color
        if m is None:
            return 0
        return self.grading[m - 1] % 2

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def _check_compatible(self, other: "ShuffleElement"):
        if self.flavor != other.flavor:
            raise FlavorMismatchError(
                f"{self.flavor.describe()} vs {other.flavor.describe()}"
            )

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        self._check_compatible(other)
        if self.grading != other.grading:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError("cannot add elements of different gradings")
        return ShuffleElement(self.flavor, self.grading, self.numerator + other.numerator)

    def __sub__(self, other: "ShuffleElement") -> "ShuffleElement":
        return self + (-other)

    def __neg__(self) -> "ShuffleElement":
        return ShuffleElement(self.flavor, self.grading, -self.numerator)

    def scale(self, coeff) -> "ShuffleElement":
        if isinstance(coeff, (int, Fraction)):
            coeff = ParamPoly.const(self.flavor.params, coeff)
        return ShuffleElement(self.flavor, self.grading, self.numerator.scale(coeff))

    def scale_exact(self, divisor: ParamPoly) -> "ShuffleElement":
        return ShuffleElement(self.flavor, self.grading, self.numerator.scale_exact(divisor))


def unit(flavor: Flavor) -> ShuffleElement:
    return ShuffleElement(flavor, (0,) * flavor.num_colors, XPoly.const(flavor.one()))


def generator(flavor: Flavor, i: int, r: int) -> ShuffleElement:
    """Image of the degree-(i, r) generator: the single variable x_{i,1}^r."""
    if i not in flavor.colors:
        raise ValueError(f"color {i} out of range for {flavor.describe()}")
    if flavor.is_yangian and r < 0:
        raise ValueError("rational flavors only have modes r >= 0")
    grading = tuple(1 if c == i else 0 for c in flavor.colors)
    return ShuffleElement(flavor, grading, XPoly.var(xvar(i, 1), flavor.one(), r))


# -- the product ----------------------------------------------------------------


def _inversions(subset: Sequence[int], complement: Sequence[int]) -> int:
    return sum(1 for a in subset for b in complement if a > b)


def _vandermonde(color: int, slots: Sequence[int], one: ParamPoly) -> XPoly:
    out = XPoly.const(one)
    for a, b in itertools.combinations(slots, 2):
        out = out * (XPoly.var(xvar(color, a), one) - XPoly.var(xvar(color, b), one))
    return out


class _KernelTable:
    """Pairwise interaction data consumed by the generic product core."""

    def __init__(
        self,
        num_colors: int,
        params: ParamSet,
        pair_num: Callable[[int, int, VarId, VarId], Optional[XPoly]],
        same_color_den: Set[int],
        skew_colors: Set[int],
        adjacent_den: bool = True,
    ):
        self.num_colors = num_colors
        self.params = params
        self.pair_num = pair_num
        self.same_color_den = same_color_den
        self.skew_colors = skew_colors
        self.adjacent_den = adjacent_den


def flavor_kernel(flavor: Flavor) -> _KernelTable:
    same_den = {i for i in flavor.colors if zeta_has_denominator(flavor, i, i)}
    skew = {flavor.skew_color} if flavor.is_super else set()

    def pair_num(i, j, u, uprime):
        return zeta_factor(flavor, i, j, u, uprime)

    return _KernelTable(flavor.num_colors, flavor.params, pair_num, same_den, skew)


def product_core(
    num_f: XPoly,
    num_g: XPoly,
    grad_f: Sequence[int],
    grad_g: Sequence[int],
    table: _KernelTable,
    guard: Optional[int] = None,
) -> XPoly:
    """Numerator of the shuffle product of two canonical-form numerators."""
    limit = effective_guard(guard)
    total_grading = [a + b for a, b in zip(grad_f, grad_g)]
    nominal = 1
    for k in total_grading:
        nominal *= math.factorial(k)
    if nominal > limit:
        raise GuardExceededError(
            f"product symmetrization would generate {nominal} summands (guard {limit})"
        )
    one = ParamPoly.one(table.params)

    # orientation flips: zeta denominators (x_{i+1,F} - x_{i,G}) against the
    # standard order (color i first)
    flips = 0
    for i in range(1, table.num_colors):
        flips += grad_f[i] * grad_g[i - 1]
    base_sign = -1 if flips % 2 else 1

    choices = []
    for idx, total in enumerate(total_grading):
        choices.append(list(itertools.combinations(range(1, total + 1), grad_f[idx])))

    f_vars = [
        (i + 1, slot + 1) for i, k in enumerate(grad_f) for slot in range(k)
    ]
    g_vars = [
        (i + 1, slot + 1) for i, k in enumerate(grad_g) for slot in range(k)
    ]

    total_sum = XPoly.zero()
    for combo in itertools.product(*choices):
        mapping_f: Dict[VarId, VarId] = {}
        mapping_g: Dict[VarId, VarId] = {}
        sign = base_sign
        g_slots: List[List[int]] = []
        for color_idx, subset in enumerate(combo):
            color = color_idx + 1
            complement = [
                s for s in range(1, total_grading[color_idx] + 1) if s not in subset
            ]
            g_slots.append(complement)
            for pos, s in enumerate(subset):
                mapping_f[xvar(color, pos + 1)] = xvar(color, s)
            for pos, s in enumerate(complement):
                mapping_g[xvar(color, pos + 1)] = xvar(color, s)
            if _inversions(subset, complement) % 2:
                sign = -sign
        term = num_f.rename_variables(mapping_f) * num_g.rename_variables(mapping_g)
        for (ci, si) in f_vars:
            u = mapping_f[xvar(ci, si)]
            for (cj, sj) in g_vars:
                up = mapping_g[xvar(cj, sj)]
                factor = table.pair_num(ci, cj, u, up)
                if factor is not None:
                    term = term * factor
        for color_idx, subset in enumerate(combo):
            color = color_idx + 1
            if color in table.same_color_den:
                term = term * _vandermonde(color, subset, one)
                term = term * _vandermonde(color, g_slots[color_idx], one)
        total_sum = total_sum + (term if sign == 1 else -term)

    if total_sum.is_zero():
        return total_sum
    clearing = XPoly.const(one)
    for color in sorted(table.same_color_den):
        if total_grading[color - 1] >= 2:
            clearing = clearing * _vandermonde(
                color, range(1, total_grading[color - 1] + 1), one
            )
    result = xp_divide_exact(total_sum, clearing)
    if result is None:
        raise ExactDivisionError(
            "shuffle product numerator is not divisible by the interaction denominators"
        )
    prefactor = Fraction(1)
    for kf, kg, kt in zip(grad_f, grad_g, total_grading):
        prefactor *= Fraction(math.factorial(kf) * math.factorial(kg), math.factorial(kt))
    return result.scale(prefactor)


def shuffle_product(
    F: ShuffleElement, G: ShuffleElement, guard: Optional[int] = None
) -> ShuffleElement:
    """The flavor's associative product; grading adds."""
    F._check_compatible(G)
    table = flavor_kernel(F.flavor)
    numerator = product_core(F.numerator, G.numerator, F.grading, G.grading, table, guard)
    grading = tuple(a + b for a, b in zip(F.grading, G.grading))
    return ShuffleElement(F.flavor, grading, numerator)


# -- predicates -----------------------------------------------------------------


def check_pole(F: ShuffleElement) -> bool:
    """Symmetry of the numerator per color (sign-flip on the odd color) and,
    for the rational flavors, polynomiality (no negative exponents)."""
    from .multipoly import is_symmetric

    if F.flavor.is_yangian:
        for exps in F.numerator.min_exponents().values():
            if exps < 0:
                return False
    skew = F.flavor.skew_color
    for color in F.flavor.colors:
        k = F.grading[color - 1]
        if k >= 2 and not is_symmetric(F.numerator, color, k, skew=(color == skew)):
            return False
    return True


def _wheel_substitutions(F: ShuffleElement):
    """Yield (label, assignment) pairs covering every applicable wheel pattern.

    By the (skew-)symmetry of the numerator, one slot choice per pattern is
    enough; the remaining variables are left untouched.
    """
    flavor = F.flavor
    P = flavor.params
    one = flavor.one()
    k = F.grading
    m = flavor.skew_color

    def ident(assignment: Dict[VarId, XPoly]) -> Dict[VarId, XPoly]:
        full = {var: XPoly.var(var, one) for var in F.numerator.variables()}
        full.update(assignment)
        return full

    for i in flavor.colors:
        if flavor.is_super and i == m:
            continue
        if k[i - 1] < 2:
            continue
        for eps in (1, -1):
            j = i + eps
            if j not in flavor.colors or k[j - 1] < 1:
                continue
            t = xvar(i, 2)
            if flavor.is_yangian:
                h = ParamPoly.var(P, "h")
                assignment = {
                    xvar(i, 1): XPoly.var(t, one) + XPoly.const(h),
                    xvar(j, 1): XPoly.var(t, one) + XPoly.const(h.scale(Fraction(1, 2))),
                }
            else:
                if flavor.kind == KIND_TRIG_2P:
                    q = ParamPoly.monomial(P, {"u1": 1, "u2": -1})
                elif flavor.kind == KIND_TRIG_SUPER:
                    q = ParamPoly.var(P, "v", flavor.sign_v(i))
                else:
                    q = ParamPoly.var(P, "v")
                assignment = {
                    xvar(i, 1): XPoly.var(t, q * q),
                    xvar(j, 1): XPoly.var(t, q),
                }
            yield f"first-kind wheel at color {i}, eps {eps:+d}", ident(assignment)

    if flavor.is_super and m is not None:
        if (
            m - 1 in flavor.colors
            and m + 1 in flavor.colors
            and k[m - 1] >= 2
            and k[m - 2] >= 1
            and k[m] >= 1
        ):
            t = xvar(m - 1, 1)
            if flavor.kind == KIND_TRIG_SUPER:
                v = ParamPoly.var(P, "v")
                assignment = {
                    xvar(m, 1): XPoly.var(t, v.inverse_monomial()),
                    xvar(m + 1, 1): XPoly.var(t, one),
                    xvar(m, 2): XPoly.var(t, v),
                }
            else:
                h2 = ParamPoly.var(P, "h").scale(Fraction(1, 2))
                assignment = {
                    xvar(m, 1): XPoly.var(t, one) - XPoly.const(h2),
                    xvar(m + 1, 1): XPoly.var(t, one),
                    xvar(m, 2): XPoly.var(t, one) + XPoly.const(h2),
                }
            yield "second-kind wheel at the odd color", ident(assignment)


def check_wheel(F: ShuffleElement) -> bool:
    """True iff the numerator vanishes under every applicable wheel
    substitution (vacuously true when no pattern fits the grading)."""
    for _, assignment in _wheel_substitutions(F):
        if not substitute(F.numerator, assignment).is_zero():
            return False
    return True


def shift_map(F: ShuffleElement, l: int) -> ShuffleElement:
    """Multiply by prod_{r <= k_l} (1 - x_{l,r}^{-1}); quantum loop flavor only."""
    if F.flavor.kind != KIND_TRIG_A:
        raise FlavorMismatchError("the shift map is defined for the quantum loop flavor")
    if l not in F.flavor.colors:
        raise ValueError(f"color {l} out of range")
    one = F.flavor.one()
    num = F.numerator
    for r in range(1, F.grading[l - 1] + 1):
        num = num * (XPoly.const(one) - XPoly.var(xvar(l, r), one, -1))
    return ShuffleElement(F.flavor, F.grading, num)
