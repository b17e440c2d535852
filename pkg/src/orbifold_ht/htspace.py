"""Orbifold polyvector-field spaces with both bigradings and the group action.

A basis label (g, kappa, B, Q) names the class on component kappa of the
fixed locus of g wedging the antiholomorphic covectors in B with the
polyvectors in Q, implicitly twisted by the determinant line of the normal
directions.  B and Q hold global frame indices inside the fixed index set
of g.  Total degree is |B| + |Q| + c_g; the age bigrading is
(|B| + age, |Q| + c_g - age), and the plain sheaf bigrading is
(|B| + c_g, |Q|).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactfield import Matrix
from .fixedloci import sector_data


class NotHomogeneousError(ValueError):
    pass


@dataclass(frozen=True)
class HTLabel:
    sector: int
    component: int
    forms: tuple
    polys: tuple


class FormalSum:
    """A finite linear combination of hashable labels with field coefficients."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        self.terms = {}
        if terms:
            for label, coeff in terms.items() if isinstance(terms, dict) else terms:
                c = field.coerce(coeff)
                if c:
                    prev = self.terms.get(label)
                    s = c if prev is None else prev + c
                    if s:
                        self.terms[label] = s
                    elif label in self.terms:
                        del self.terms[label]

    @classmethod
    def of(cls, field, label, coeff=1):
        return cls(field, [(label, coeff)])

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = type(self)(self.field)
        out.terms = dict(self.terms)
        for label, c in other.terms.items():
            prev = out.terms.get(label)
            s = c if prev is None else prev + c
            if s:
                out.terms[label] = s
            elif label in out.terms:
                del out.terms[label]
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = self.field.coerce(c)
        out = type(self)(self.field)
        if c:
            out.terms = {k: c * v for k, v in self.terms.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: _label_key(kv[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{l}" for l, c in self.items_sorted())


def _label_key(label):
    return tuple(getattr(label, f) for f in label.__dataclass_fields__)


class HTClass(FormalSum):
    pass


def sector_basis(scenario, g):
    """All basis labels of the g-sector, component-major, subsets by size."""
    sd = sector_data(scenario, g)
    subsets = []
    for size in range(sd.m + 1):
        subsets.extend(combinations(sd.fixed_indices, size))
    out = []
    for kappa in range(sd.components.order):
        for b in subsets:
            for q in subsets:
                out.append(HTLabel(sd.element_index, kappa, b, q))
    return out


def full_basis(scenario, max_degree=None):
    out = []
    for el in scenario.elements:
        for label in sector_basis(scenario, el.index):
            if max_degree is None or label_degree(scenario, label) <= max_degree:
                out.append(label)
    return out


def label_degree(scenario, label):
    sd = sector_data(scenario, label.sector)
    return len(label.forms) + len(label.polys) + sd.c


def label_bidegree(scenario, label, convention="new"):
    sd = sector_data(scenario, label.sector)
    if convention == "new":
        return (len(label.forms) + sd.age,
                len(label.polys) + sd.c - sd.age)
    if convention == "parenthesized":
        return (Fraction(len(label.forms) + sd.c), Fraction(len(label.polys)))
    raise ValueError(f"unknown bigrading convention {convention!r}")


def bigrade(scenario, x, convention="new"):
    """Bidegree of a homogeneous class; raises NotHomogeneousError otherwise."""
    degrees = {label_bidegree(scenario, label, convention) for label in x.terms}
    if len(degrees) != 1:
        raise NotHomogeneousError(
            f"class is not homogeneous in the {convention} bigrading: {sorted(degrees)}")
    return degrees.pop()


def unit_class(scenario):
    e = scenario.identity_index
    return HTClass.of(scenario.field, HTLabel(e, 0, (), ()))


def group_action(scenario, t, x):
    """Action of a group element on a polyvector class.

    Diagonal on the character frame: forms and polyvectors scale by the
    frame characters, the component index moves by the translation action,
    and the twist line contributes det(t on V/V^g) to the configured power.
    """
    ti = scenario.element(t).index
    sigma = scenario.options.omega_character_sign
    out = HTClass(scenario.field)
    for label, coeff in x.terms.items():
        sd = sector_data(scenario, label.sector)
        exp = Fraction(0)
        for j in label.forms:
            exp += scenario.char_exponent(j, ti)
        for j in label.polys:
            exp += scenario.char_exponent(j, ti)
        exp += sigma * sd.omega_exponent(scenario, ti)
        factor = scenario.field.zeta_fraction(exp % 1)
        kappa = sd.components.action(ti)[label.component]
        new_label = HTLabel(label.sector, kappa, label.forms, label.polys)
        out = out + HTClass.of(scenario.field, new_label, coeff * factor)
    return out


def _invariant_block(scenario, sector, forms, polys):
    """Averaging idempotent on one (sector, B, Q) block; returns basis columns."""
    field = scenario.field
    sd = sector_data(scenario, sector)
    sigma = scenario.options.omega_character_sign
    ncomp = sd.components.order
    order = scenario.order
    cols = [[field.zero] * ncomp for _ in range(ncomp)]
    for ti in range(order):
        exp = Fraction(0)
        for j in forms:
            exp += scenario.char_exponent(j, ti)
        for j in polys:
            exp += scenario.char_exponent(j, ti)
        exp += sigma * sd.omega_exponent(scenario, ti)
        factor = field.zeta_fraction(exp % 1)
        perm = sd.components.action(ti)
        for kappa in range(ncomp):
            cols[kappa][perm[kappa]] = cols[kappa][perm[kappa]] + factor
    inv_order = Fraction(1, order)
    mat = Matrix.from_columns(field, [[inv_order * e for e in col] for col in cols])
    red, pivots = mat.rref()
    return [mat.column(p) for p in pivots]


def invariant_basis(scenario):
    """Basis of the invariant subspace, as classes, in canonical block order."""
    out = []
    field = scenario.field
    for el in scenario.elements:
        sd = sector_data(scenario, el.index)
        subsets = []
        for size in range(sd.m + 1):
            subsets.extend(combinations(sd.fixed_indices, size))
        for b in subsets:
            for q in subsets:
                for col in _invariant_block(scenario, el.index, b, q):
                    cls = HTClass(field, {
                        HTLabel(el.index, kappa, b, q): c
                        for kappa, c in enumerate(col) if c})
                    out.append(cls)
    return out


def dimension_table(scenario, convention="new"):
    """Invariant dimensions per bidegree."""
    table = {}
    for cls in invariant_basis(scenario):
        key = bigrade(scenario, cls, convention)
        table[key] = table.get(key, 0) + 1
    return table


def degree_dimensions(scenario):
    """Invariant dimensions per total degree."""
    table = {}
    for cls in invariant_basis(scenario):
        label = next(iter(cls.terms))
        deg = label_degree(scenario, label)
        table[deg] = table.get(deg, 0) + 1
    return table
