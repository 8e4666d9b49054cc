"""Root data, deformed commutators, and the PBWD basis machinery.

Positive roots of type A are the integer intervals [j; i].  A PBWD basis
element for a root is an iterated deformed bracket of single-variable
generators, evaluated inside the shuffle algebra.  Ordered products of such
elements, indexed by finitely supported multiplicity functions, are the
candidate basis monomials that the decomposition module works against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ContractViolationError, FlavorMismatchError
from .multipoly import XPoly, xvar
from .ring import ParamPoly
from .shuffle import (
    Flavor,
    KIND_TRIG_2P,
    KIND_TRIG_A,
    KIND_TRIG_SUPER,
    ShuffleElement,
    generator,
    shuffle_product,
    unit,
)


@dataclass(frozen=True, order=True)
class Root:
    """The interval [j; i] of simple roots, 1 <= j <= i."""

    j: int
    i: int

    def __post_init__(self):
        if not (1 <= self.j <= self.i):
            raise ValueError(f"invalid root interval [{self.j};{self.i}]")

    @property
    def length(self) -> int:
        return self.i - self.j + 1

    def colors(self) -> range:
        return range(self.j, self.i + 1)

    def contains(self, color: int) -> bool:
        return self.j <= color <= self.i

    def parity(self, flavor: Flavor) -> int:
        if flavor.is_super and self.contains(flavor.m):
            return 1
        return 0

    def key(self) -> str:
        return f"{self.j}:{self.i}"

    def __repr__(self) -> str:
        return f"Root({self.j},{self.i})"


def positive_roots(flavor: Flavor) -> List[Root]:
    """All intervals, in the total order (j ascending, then i ascending)."""
    n = flavor.num_colors
    return [Root(j, i) for j in range(1, n + 1) for i in range(j, n + 1)]


def root_index(flavor: Flavor, root: Root) -> int:
    """1-based position of the root in the canonical order (used as the color
    field of y- and z-variables)."""
    n = flavor.num_colors
    if not root.i <= n:
        raise ValueError(f"root {root} out of range for {flavor.describe()}")
    # number of intervals [j';i'] with j' < j, plus offset within the j-block
    before = sum(n - jj + 1 for jj in range(1, root.j))
    return before + (root.i - root.j + 1)


# -- deformed brackets ---------------------------------------------------------


def q_bracket(
    F: ShuffleElement,
    G: ShuffleElement,
    lam: ParamPoly,
    parities: Optional[Tuple[int, int]] = None,
) -> ShuffleElement:
    """[F, G]_lam = F*G - (-1)^{|F||G|} lam * (G*F).

    The sign is active only in the super flavors when both arguments are odd;
    parities default to the gradings' parities.
    """
    F._check_compatible(G)
    if parities is None:
        parities = (F.parity(), G.parity())
    fg = shuffle_product(F, G)
    gf = shuffle_product(G, F)
    scaled = gf.scale(lam)
    if parities[0] == 1 and parities[1] == 1:
        return fg + scaled
    return fg - scaled


# -- choices ------------------------------------------------------------------


@dataclass(frozen=True)
class RootChoice:
    """Bracketing data for one root: the simple-root sequence, the deformation
    parameters, and how the mode r is split across the factors."""

    colors: Tuple[int, ...]
    lambdas: Tuple[ParamPoly, ...]
    offsets: Tuple[int, ...]
    carry: int = 0  # index of the factor receiving r - sum(offsets)

    def __post_init__(self):
        if len(self.lambdas) != len(self.colors) - 1:
            raise ValueError("need one lambda per bracket")
        if len(self.offsets) != len(self.colors):
            raise ValueError("need one offset per factor")
        if not (0 <= self.carry < len(self.colors)):
            raise ValueError("carry index out of range")

    def mode_split(self, r: int) -> Tuple[int, ...]:
        rest = r - sum(self.offsets)
        return tuple(
            o + (rest if idx == self.carry else 0) for idx, o in enumerate(self.offsets)
        )


@dataclass(frozen=True)
class PbwdChoice:
    """A choice of bracketings, one per positive root."""

    flavor: Flavor
    per_root: Dict[Root, RootChoice] = field(default_factory=dict)

    def root_choice(self, root: Root) -> RootChoice:
        got = self.per_root.get(root)
        if got is not None:
            return got
        return default_root_choice(self.flavor, root)

    def __hash__(self):
        return hash((self.flavor, tuple(sorted(self.per_root.items(), key=lambda kv: kv[0]))))

    def __eq__(self, other):
        if not isinstance(other, PbwdChoice):
            return NotImplemented
        return self.flavor == other.flavor and self.per_root == other.per_root


def default_root_choice(flavor: Flavor, root: Root) -> RootChoice:
    """The distinguished bracketing: colors left to right, the whole mode on
    the first factor, and the flavor's preferred deformation parameters."""
    colors = tuple(root.colors())
    P = flavor.params
    if flavor.kind == KIND_TRIG_A:
        lambdas = tuple(ParamPoly.var(P, "v") for _ in colors[1:])
    elif flavor.kind == KIND_TRIG_2P:
        lambdas = tuple(ParamPoly.monomial(P, {"u1": 2}) for _ in colors[1:])
    elif flavor.kind == KIND_TRIG_SUPER:
        lambdas = tuple(ParamPoly.var(P, "v", flavor.sign_v(c)) for c in colors[1:])
    else:
        lambdas = tuple(ParamPoly.one(P) for _ in colors[1:])
    offsets = (0,) * len(colors)
    return RootChoice(colors, lambdas, offsets, carry=0)


def default_choice(flavor: Flavor) -> PbwdChoice:
    return PbwdChoice(flavor)


def pbwd_element(
    flavor: Flavor,
    root: Root,
    r: int,
    choice: Optional[PbwdChoice] = None,
) -> ShuffleElement:
    """Image of the basis element for (root, r): the iterated bracket
    [...[[e_{i1,r1}, e_{i2,r2}]_{lam_1}, ...]_{lam_{p-1}}]."""
    if root.i > flavor.num_colors:
        raise ValueError(f"root {root} out of range for {flavor.describe()}")
    rc = (choice or default_choice(flavor)).root_choice(root)
    if sorted(rc.colors) != list(root.colors()):
        raise ContractViolationError(
            f"choice for {root} uses colors {rc.colors}, expected a permutation of {list(root.colors())}"
        )
    modes = rc.mode_split(r)
    if flavor.is_yangian and any(mode < 0 for mode in modes):
        raise ValueError(f"mode split {modes} leaves the non-negative cone")
    out = generator(flavor, rc.colors[0], modes[0])
    for idx in range(1, len(rc.colors)):
        nxt = generator(flavor, rc.colors[idx], modes[idx])
        out = q_bracket(out, nxt, rc.lambdas[idx - 1])
    if out.is_zero():
        raise ContractViolationError(
            f"degenerate bracketing for {root}: the bracket vanishes in the shuffle algebra"
        )
    return out


def psi_word(
    flavor: Flavor, word: Sequence[Tuple[int, int]], guard: Optional[int] = None
) -> ShuffleElement:
    """Left-to-right product of generator images x_{i,1}^r."""
    out = unit(flavor)
    for (i, r) in word:
        out = shuffle_product(out, generator(flavor, i, r), guard=guard)
    return out


# -- ordered monomials ---------------------------------------------------------


ORDER_ASC = "asc"
ORDER_DESC = "desc"


@dataclass(frozen=True)
class PbwdMonomial:
    """Finitely supported multiplicity function on (root, mode) pairs, with a
    per-root total order on the modes (ascending by default)."""

    entries: Tuple[Tuple[Root, int, int], ...]  # (root, r, multiplicity), canonical order
    root_orders: Tuple[Tuple[Root, str], ...] = ()

    @classmethod
    def make(
        cls,
        support: Dict[Tuple[Root, int], int],
        root_orders: Optional[Dict[Root, str]] = None,
    ) -> "PbwdMonomial":
        orders = dict(root_orders or {})
        entries = []
        for root in sorted({root for root, _ in support}):
            reverse = orders.get(root, ORDER_ASC) == ORDER_DESC
            for r in sorted({r for rt, r in support if rt == root}, reverse=reverse):
                mult = support[(root, r)]
                if mult < 0:
                    raise ValueError("multiplicities must be non-negative")
                if mult:
                    entries.append((root, r, mult))
        return cls(tuple(entries), tuple(sorted(orders.items(), key=lambda kv: kv[0])))

    def support(self) -> Dict[Tuple[Root, int], int]:
        return {(root, r): mult for root, r, mult in self.entries}

    def is_empty(self) -> bool:
        return not self.entries

    def validate(self, flavor: Flavor):
        for root, r, mult in self.entries:
            if root.i > flavor.num_colors:
                raise ValueError(f"root {root} out of range")
            if flavor.is_yangian and r < 0:
                raise ValueError("rational flavors require modes r >= 0")
            if flavor.is_super and root.parity(flavor) == 1 and mult > 1:
                raise ValueError(f"odd root {root} admits multiplicity at most 1")

    def grading(self, flavor: Flavor) -> Tuple[int, ...]:
        k = [0] * flavor.num_colors
        for root, _, mult in self.entries:
            for c in root.colors():
                k[c - 1] += mult
        return tuple(k)

    def total_multiplicity(self) -> int:
        return sum(mult for _, _, mult in self.entries)

    def sort_key(self):
        return tuple((root.j, root.i, r, mult) for root, r, mult in self.entries)


def psi_monomial(
    flavor: Flavor,
    h: PbwdMonomial,
    choice: Optional[PbwdChoice] = None,
    guard: Optional[int] = None,
) -> ShuffleElement:
    """Ordered product of basis-element images, factors sorted by the root
    order and the per-root mode order."""
    h.validate(flavor)
    out = unit(flavor)
    for root, r, mult in h.entries:
        factor = pbwd_element(flavor, root, r, choice)
        for _ in range(mult):
            out = shuffle_product(out, factor, guard=guard)
    return out


def tilde_scale(flavor: Flavor, F: ShuffleElement, count: int) -> ShuffleElement:
    """Multiply by the flavor's integral normalizer to the given power."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return F
    return F.scale(flavor.normalizer() ** count)


# -- degree vectors -------------------------------------------------------------


@dataclass(frozen=True)
class DegreeVector:
    """Multiset of root multiplicities, compared by the inverted lexicographic
    rule: d < d' iff at the first root where they differ, d has the larger
    entry."""

    entries: Tuple[Tuple[Root, int], ...]

    @classmethod
    def make(cls, d: Dict[Root, int]) -> "DegreeVector":
        return cls(tuple(sorted((root, mult) for root, mult in d.items() if mult)))

    @classmethod
    def of_monomial(cls, h: PbwdMonomial) -> "DegreeVector":
        out: Dict[Root, int] = {}
        for root, _, mult in h.entries:
            out[root] = out.get(root, 0) + mult
        return cls.make(out)

    def as_dict(self) -> Dict[Root, int]:
        return dict(self.entries)

    def multiplicity(self, root: Root) -> int:
        return dict(self.entries).get(root, 0)

    def grading(self, flavor: Flavor) -> Tuple[int, ...]:
        k = [0] * flavor.num_colors
        for root, mult in self.entries:
            for c in root.colors():
                k[c - 1] += mult
        return tuple(k)

    def profile(self, flavor: Flavor) -> Tuple[int, ...]:
        """Plain multiplicity tuple over the canonical root list."""
        d = self.as_dict()
        return tuple(d.get(root, 0) for root in positive_roots(flavor))

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def paper_less(self, other: "DegreeVector", flavor: Flavor) -> bool:
        """The inverted-lex comparison used to order degree vectors."""
        a = self.profile(flavor)
        b = other.profile(flavor)
        for x, y in zip(a, b):
            if x != y:
                return x > y
        return False


def degree_vectors(flavor: Flavor, grading: Sequence[int]) -> List[DegreeVector]:
    """All degree vectors d with sum_beta d_beta [beta] equal to the grading,
    sorted from the maximal element down to the minimal (all-simple) one."""
    roots = positive_roots(flavor)
    results: List[DegreeVector] = []

    def recurse(idx: int, remaining: List[int], acc: Dict[Root, int]):
        if idx == len(roots):
            if all(x == 0 for x in remaining):
                results.append(DegreeVector.make(dict(acc)))
            return
        root = roots[idx]
        cap = min(remaining[c - 1] for c in root.colors())
        for mult in range(cap + 1):
            if mult:
                acc[root] = mult
                for c in root.colors():
                    remaining[c - 1] -= mult
            recurse(idx + 1, remaining, acc)
            if mult:
                for c in root.colors():
                    remaining[c - 1] += mult
        acc.pop(root, None)

    recurse(0, list(grading), {})
    # maximal first: the paper order inverts plain lex on the profile
    results.sort(key=lambda d: d.profile(flavor))
    return results
