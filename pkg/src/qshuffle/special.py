"""Specialization maps and the closed-form factor products they produce.

A specialization plan collapses the x-variables of a shuffle element onto one
y-variable per root copy, with flavor-specific shifts.  On top of that sit
the reduced specialization (division by the scalar normalizer power and by
the linear factors forced by the wheel conditions) and the cross
specialization (a further collapse of the y-variables into geometric strings
of z-variables), both specific to the quantum loop flavor, which drive the
integrality certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ContractViolationError, ExactDivisionError, FlavorMismatchError
from .multipoly import VarId, XPoly, substitute, xp_divide_exact, xvar, yvar, zvar
from .pbwd import DegreeVector, Root, positive_roots, root_index
from .ring import ParamPoly
from .shuffle import (
    Flavor,
    KIND_TRIG_2P,
    KIND_TRIG_A,
    KIND_TRIG_SUPER,
    KIND_YANG_A,
    KIND_YANG_SUPER,
    ShuffleElement,
)


@dataclass(frozen=True)
class SpecPlan:
    """Degree vector plus (optional) explicit slot assignment and composition.

    assignment maps each root copy (in the canonical copy order) to its slot
    choice: a dict color -> slot index.  When omitted, slots are consumed in
    natural order.  t, when present, gives per root the composition of d_beta
    into positive group sizes used by the cross specialization.
    """

    d: DegreeVector
    assignment: Optional[Tuple[Tuple[Root, int, Tuple[Tuple[int, int], ...]], ...]] = None
    t: Optional[Tuple[Tuple[Root, Tuple[int, ...]], ...]] = None

    @classmethod
    def make(
        cls,
        d: DegreeVector,
        assignment=None,
        t: Optional[Dict[Root, Sequence[int]]] = None,
    ) -> "SpecPlan":
        a = None
        if assignment is not None:
            a = tuple(
                (root, s, tuple(sorted(slots.items()))) for (root, s), slots in assignment.items()
            )
            a = tuple(sorted(a, key=lambda e: (e[0], e[1])))
        tt = None
        if t is not None:
            for root, parts in t.items():
                if any(p <= 0 for p in parts):
                    raise ValueError("composition parts must be positive")
                if sum(parts) != d.multiplicity(root):
                    raise ValueError(
                        f"composition {parts} for {root} does not sum to d_beta = {d.multiplicity(root)}"
                    )
            tt = tuple(sorted((root, tuple(parts)) for root, parts in t.items()))
        return cls(d, a, tt)

    def copies(self) -> List[Tuple[Root, int]]:
        return [(root, s) for root, mult in self.d.entries for s in range(1, mult + 1)]

    def slot_assignment(self) -> Dict[Tuple[Root, int], Dict[int, int]]:
        if self.assignment is not None:
            return {(root, s): dict(slots) for root, s, slots in self.assignment}
        cursor: Dict[int, int] = {}
        out: Dict[Tuple[Root, int], Dict[int, int]] = {}
        for root, s in self.copies():
            chosen: Dict[int, int] = {}
            for c in root.colors():
                cursor[c] = cursor.get(c, 0) + 1
                chosen[c] = cursor[c]
            out[(root, s)] = chosen
        return out

    def compositions(self) -> Dict[Root, Tuple[int, ...]]:
        if self.t is None:
            raise ContractViolationError("plan carries no composition data")
        return dict(self.t)


def specialization_image(flavor: Flavor, color: int, target: VarId) -> XPoly:
    """Image of an x-variable of the given color at one root copy."""
    P = flavor.params
    one = ParamPoly.one(P)
    if flavor.kind == KIND_TRIG_A:
        return XPoly.var(target, ParamPoly.var(P, "v", -color))
    if flavor.kind == KIND_TRIG_2P:
        return XPoly.var(target, ParamPoly.monomial(P, {"u1": -color, "u2": color}))
    if flavor.kind == KIND_TRIG_SUPER:
        e = -color if color <= flavor.m else color - 2 * flavor.m
        return XPoly.var(target, ParamPoly.var(P, "v", e))
    h = ParamPoly.var(P, "h")
    if flavor.kind == KIND_YANG_A:
        return XPoly.var(target, one) + XPoly.const(h.scale(Fraction(-color, 2)))
    shift = -color if color <= flavor.m else color - 2 * flavor.m
    return XPoly.var(target, one) + XPoly.const(h.scale(Fraction(shift, 2)))


def _phi_assignment(flavor: Flavor, plan: SpecPlan) -> Dict[VarId, XPoly]:
    assignment: Dict[VarId, XPoly] = {}
    for (root, s), slots in plan.slot_assignment().items():
        idx = root_index(flavor, root)
        target = yvar(idx, s)
        for color, slot in slots.items():
            assignment[xvar(color, slot)] = specialization_image(flavor, color, target)
    return assignment


def phi(F: ShuffleElement, plan) -> XPoly:
    """Specialize the numerator of F along the plan's degree vector; the
    output lives in y-variables indexed by (root position, copy)."""
    if isinstance(plan, DegreeVector):
        plan = SpecPlan.make(plan)
    if plan.d.grading(F.flavor) != F.grading:
        raise ContractViolationError(
            f"degree vector grading {plan.d.grading(F.flavor)} != element grading {F.grading}"
        )
    return substitute(F.numerator, _phi_assignment(F.flavor, plan))


def phi_numerator(flavor: Flavor, numerator: XPoly, plan: SpecPlan) -> XPoly:
    """phi applied to a bare numerator (any coefficient ring)."""
    return substitute(numerator, _phi_assignment(flavor, plan))


# -- closed-form factors ---------------------------------------------------------


def _overlap(lo1: int, hi1: int, lo2: int, hi2: int) -> int:
    return max(0, min(hi1, hi2) - max(lo1, lo2) + 1)


def _nu_counts(flavor: Flavor, beta: Root, beta2: Root) -> Tuple[int, int]:
    """Exponents of the two shifted linear factors for an (ordered) root pair:
    counts of color coincidences a = b and shifts a = b + 1, split by the odd
    color in the super flavors."""
    if not flavor.is_super:
        nu_minus = _overlap(beta.j, beta.i, beta2.j, beta2.i)
        nu_plus = _overlap(beta.j, beta.i, beta2.j + 1, beta2.i + 1)
        return nu_minus, nu_plus
    m = flavor.m
    eq_lo = _overlap(beta.j, beta.i, beta2.j, beta2.i)
    nu_minus = (
        _overlap(beta.j, min(beta.i, m - 1), beta2.j, beta2.i)
        + _overlap(max(beta.j, m + 1), beta.i, beta2.j + 1, beta2.i + 1)
    )
    nu_plus = (
        _overlap(max(beta.j, m + 1), beta.i, beta2.j, beta2.i)
        + _overlap(beta.j, min(beta.i, m), beta2.j + 1, beta2.i + 1)
    )
    del eq_lo
    return nu_minus, nu_plus


def _pair_factor(flavor: Flavor, u: VarId, uprime: VarId, kind: str) -> XPoly:
    """Linear factor between two y/z-variables: kind is 'minus' for the
    v^-2-type shift, 'plus' for the v^2-type shift, 'equal' for the plain
    difference."""
    P = flavor.params
    one = ParamPoly.one(P)
    a = XPoly.var(u, one)
    b = XPoly.var(uprime, one)
    if kind == "equal":
        return a - b
    if flavor.is_yangian:
        h = ParamPoly.var(P, "h")
        return a - b + XPoly.const(h if kind == "minus" else -h)
    if flavor.kind == KIND_TRIG_2P:
        shift = ParamPoly.monomial(P, {"u1": -2, "u2": 2} if kind == "minus" else {"u1": 2, "u2": -2})
    else:
        shift = ParamPoly.var(P, "v", -2 if kind == "minus" else 2)
    return a - XPoly.var(uprime, shift)


def _delta_exponent(flavor: Flavor, beta: Root, beta2: Root) -> int:
    """Exponent of the plain difference for a cross-root pair beta < beta2."""
    out = 0
    if beta2.j > beta.j and beta2.contains(beta.i + 1):
        out += 1
    if flavor.is_super and beta.contains(flavor.m) and beta2.contains(flavor.m):
        out += 1
    return out


def g_factors(flavor: Flavor, d: DegreeVector) -> XPoly:
    """Product of the cross-root and in-root factors carried by every
    specialized basis monomial of degree d."""
    P = flavor.params
    one = ParamPoly.one(P)
    out = XPoly.const(one)
    roots = [root for root, _ in d.entries]
    dd = d.as_dict()
    # cross-root factors
    for a_idx in range(len(roots)):
        for b_idx in range(a_idx + 1, len(roots)):
            beta, beta2 = roots[a_idx], roots[b_idx]
            nu_minus, nu_plus = _nu_counts(flavor, beta, beta2)
            delta = _delta_exponent(flavor, beta, beta2)
            ib, ib2 = root_index(flavor, beta), root_index(flavor, beta2)
            for s in range(1, dd[beta] + 1):
                for s2 in range(1, dd[beta2] + 1):
                    u, up = yvar(ib, s), yvar(ib2, s2)
                    for _ in range(nu_minus):
                        out = out * _pair_factor(flavor, u, up, "minus")
                    for _ in range(nu_plus):
                        out = out * _pair_factor(flavor, u, up, "plus")
                    for _ in range(delta):
                        out = out * _pair_factor(flavor, u, up, "equal")
    # in-root factors
    for beta in roots:
        mult = dd[beta]
        span = beta.i - beta.j
        if span == 0:
            continue
        ib = root_index(flavor, beta)
        if flavor.is_yangian:
            scalar = ParamPoly.var(P, "h") ** (mult * span)
        elif flavor.kind == KIND_TRIG_2P:
            w2 = ParamPoly.monomial(P, {"u1": 2, "u2": -2})
            scalar = (one - w2) ** (mult * span)
        else:
            scalar = (one - ParamPoly.var(P, "v", 2)) ** (mult * span)
        out = out.scale(scalar)
        for s in range(1, mult + 1):
            for s2 in range(1, mult + 1):
                if s == s2:
                    continue
                for _ in range(span):
                    out = out * _pair_factor(flavor, yvar(ib, s), yvar(ib, s2), "plus")
        if not flavor.is_yangian:
            for s in range(1, mult + 1):
                out = out * XPoly.var(yvar(ib, s), one, span)
    return out


# -- reduced and cross specializations (quantum loop flavor) ----------------------


def factor_a(flavor: Flavor, grading: Sequence[int]) -> ParamPoly:
    return flavor.normalizer() ** sum(grading)


def factor_b_terms(
    flavor: Flavor, d: DegreeVector, printed_form: bool = False
) -> List[Tuple[XPoly, str]]:
    """The linear factors (with labels) dividing every specialization of an
    integral-candidate element.  printed_form reproduces the variant whose
    second factor repeats the v^-2 shift instead of using v^2."""
    factors: List[Tuple[XPoly, str]] = []
    copies = [(root, s) for root, mult in d.entries for s in range(1, mult + 1)]
    for a_idx in range(len(copies)):
        for b_idx in range(a_idx + 1, len(copies)):
            beta, s = copies[a_idx]
            beta2, s2 = copies[b_idx]
            nu_minus, nu_plus = _nu_counts(flavor, beta, beta2)
            if beta == beta2:
                nu_minus -= 1
            u = yvar(root_index(flavor, beta), s)
            up = yvar(root_index(flavor, beta2), s2)
            for _ in range(nu_minus):
                factors.append(
                    (_pair_factor(flavor, u, up, "minus"), f"({u.key()} - v^-2 {up.key()})")
                )
            second = "minus" if printed_form else "plus"
            for _ in range(nu_plus):
                factors.append(
                    (
                        _pair_factor(flavor, u, up, second),
                        f"({u.key()} - v^{'-' if printed_form else '+'}2 {up.key()})",
                    )
                )
    return factors


def reduced_phi(
    F: ShuffleElement, d: DegreeVector, printed_b_form: bool = False
) -> XPoly:
    """phi divided by the scalar normalizer power and the wheel-forced linear
    factors; defined for the quantum loop flavor on integral candidates."""
    if F.flavor.kind != KIND_TRIG_A:
        raise FlavorMismatchError("the reduced specialization is defined for the quantum loop flavor")
    value = phi(F, d)
    a = factor_a(F.flavor, F.grading)
    quotient = _divide_scalar(value, a, "normalizer power")
    for factor, label in factor_b_terms(F.flavor, d, printed_b_form):
        nxt = xp_divide_exact(quotient, factor)
        if nxt is None:
            raise ExactDivisionError(f"reduced specialization: division by {label} failed")
        quotient = nxt
    _check_block_symmetry(F.flavor, d, quotient)
    return quotient


def _divide_scalar(value: XPoly, scalar: ParamPoly, label: str) -> XPoly:
    try:
        return value.scale_exact(scalar)
    except ExactDivisionError as exc:
        raise ExactDivisionError(f"reduced specialization: division by the {label} failed") from exc


def _check_block_symmetry(flavor: Flavor, d: DegreeVector, value: XPoly):
    from .multipoly import VarId as _V

    for root, mult in d.entries:
        if mult < 2:
            continue
        idx = root_index(flavor, root)
        for s in range(1, mult):
            a, b = yvar(idx, s), yvar(idx, s + 1)
            if value.rename_variables({a: b, b: a}) != value:
                raise ExactDivisionError(
                    "reduced specialization is not symmetric within a root block"
                )


def vertical_specialize(
    flavor: Flavor, value: XPoly, d: DegreeVector, t: Dict[Root, Sequence[int]]
) -> XPoly:
    """Collapse each root's y-variables into geometric strings of z-variables:
    group i of size t_i maps slots to v^-2 z, v^-4 z, ..., v^-2t_i z."""
    P = flavor.params
    assignment: Dict[VarId, XPoly] = {}
    for root, mult in d.entries:
        parts = tuple(t.get(root, ()))
        if sum(parts) != mult:
            raise ContractViolationError(f"composition for {root} must sum to {mult}")
        idx = root_index(flavor, root)
        s = 0
        for gi, size in enumerate(parts, start=1):
            for pos in range(1, size + 1):
                s += 1
                assignment[yvar(idx, s)] = XPoly.var(
                    zvar(idx, gi), ParamPoly.var(P, "v", -2 * pos)
                )
    extra = value.variables() - set(assignment)
    if extra:
        raise ContractViolationError(f"vertical specialization misses {sorted(v.key() for v in extra)}")
    return substitute(value, assignment)


def cross_specialize(F: ShuffleElement, plan: SpecPlan, printed_b_form: bool = False) -> XPoly:
    """Reduced specialization followed by the vertical collapse into
    z-variables."""
    reduced = reduced_phi(F, plan.d, printed_b_form)
    return vertical_specialize(F.flavor, reduced, plan.d, plan.compositions())
