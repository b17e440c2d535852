"""Chen-Ruan orbifold cohomology with the Fantechi-Goettsche product.

The A-side of the comparison: each sector carries the singular cohomology
of its fixed locus with the age degree shift, the product restricts both
factors to the double fixed locus, multiplies by the obstruction Euler
class ([k == 0] on a torus), and pushes forward; the Gysin map wedges the
full holomorphic-antiholomorphic block of dual normal covectors.  Unlike
the B-side there is no twist line, so the group acts on twisted sectors
without a determinant character.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactfield import Matrix, merge_sign
from .fixedloci import pair_data, sector_data
from .htspace import FormalSum, HTClass, dimension_table, full_basis
from .product import CheckOutcome, multiply


class NotHolomorphicSymplecticError(ValueError):
    pass


@dataclass(frozen=True)
class CRLabel:
    sector: int
    component: int
    hol: tuple
    antihol: tuple


class CRClass(FormalSum):
    pass


def cr_basis(scenario, g):
    """All Chen-Ruan basis labels of the g-sector."""
    sd = sector_data(scenario, g)
    subsets = []
    for size in range(sd.m + 1):
        subsets.extend(combinations(sd.fixed_indices, size))
    out = []
    for kappa in range(sd.components.order):
        for hol in subsets:
            for antihol in subsets:
                out.append(CRLabel(sd.element_index, kappa, hol, antihol))
    return out


def cr_full_basis(scenario):
    out = []
    for el in scenario.elements:
        out.extend(cr_basis(scenario, el.index))
    return out


def cr_degree(scenario, label):
    sd = sector_data(scenario, label.sector)
    return len(label.hol) + len(label.antihol) + 2 * sd.age


def cr_bidegree(scenario, label):
    sd = sector_data(scenario, label.sector)
    return (len(label.hol) + sd.age, len(label.antihol) + sd.age)


def cr_unit(scenario):
    return CRClass.of(scenario.field, CRLabel(scenario.identity_index, 0, (), ()))


def fg_product(scenario, a, b):
    """Fantechi-Goettsche product, bilinear over sectors and components."""
    out = CRClass(scenario.field)
    buckets_a, buckets_b = {}, {}
    for label, c in a.terms.items():
        buckets_a.setdefault(label.sector, []).append((label, c))
    for label, c in b.terms.items():
        buckets_b.setdefault(label.sector, []).append((label, c))
    for gi, items_a in sorted(buckets_a.items()):
        for hi, items_b in sorted(buckets_b.items()):
            pd = pair_data(scenario, gi, hi)
            if pd.k:
                continue
            t00 = set(pd.t00)
            for la, ca in items_a:
                if any(j not in t00 for j in la.hol) or any(j not in t00 for j in la.antihol):
                    continue
                for lb, cb in items_b:
                    if any(j not in t00 for j in lb.hol) or any(j not in t00 for j in lb.antihol):
                        continue
                    mus = pd.fibers.get((la.component, lb.component))
                    if not mus:
                        continue
                    hol, s_h = merge_sign(la.hol, lb.hol)
                    if hol is None:
                        continue
                    antihol, s_a = merge_sign(la.antihol, lb.antihol)
                    if antihol is None:
                        continue
                    sign = s_h * s_a
                    if (len(lb.hol) * len(la.antihol)) % 2:
                        sign = -sign
                    # Gysin block: new normal covectors on both slots
                    hol2, s_h2 = merge_sign(hol, pd.nprime)
                    antihol2, s_a2 = merge_sign(antihol, pd.nprime)
                    if hol2 is None or antihol2 is None:
                        continue
                    sign *= s_h2 * s_a2
                    if (pd.cprime * len(antihol)) % 2:
                        sign = -sign
                    coeff = ca * cb * sign
                    for mu in mus:
                        nu = pd.to_gh[mu]
                        out = out + CRClass.of(
                            scenario.field,
                            CRLabel(pd.gh_index, nu, hol2, antihol2), coeff)
    return out


def cr_group_action(scenario, t, x):
    """Group action on Chen-Ruan classes: no twist character on sectors."""
    ti = scenario.element(t).index
    out = CRClass(scenario.field)
    for label, coeff in x.terms.items():
        sd = sector_data(scenario, label.sector)
        exp = Fraction(0)
        for j in label.hol:
            exp -= scenario.char_exponent(j, ti)
        for j in label.antihol:
            exp += scenario.char_exponent(j, ti)
        factor = scenario.field.zeta_fraction(exp % 1)
        kappa = sd.components.action(ti)[label.component]
        out = out + CRClass.of(scenario.field,
                               CRLabel(label.sector, kappa, label.hol, label.antihol),
                               coeff * factor)
    return out


def _cr_invariant_block(scenario, sector, hol, antihol):
    field = scenario.field
    sd = sector_data(scenario, sector)
    ncomp = sd.components.order
    order = scenario.order
    cols = [[field.zero] * ncomp for _ in range(ncomp)]
    for ti in range(order):
        exp = Fraction(0)
        for j in hol:
            exp -= scenario.char_exponent(j, ti)
        for j in antihol:
            exp += scenario.char_exponent(j, ti)
        factor = field.zeta_fraction(exp % 1)
        perm = sd.components.action(ti)
        for kappa in range(ncomp):
            cols[kappa][perm[kappa]] = cols[kappa][perm[kappa]] + factor
    inv_order = Fraction(1, order)
    mat = Matrix.from_columns(field, [[inv_order * e for e in col] for col in cols])
    _, pivots = mat.rref()
    return [mat.column(p) for p in pivots]


def cr_invariant_basis(scenario):
    out = []
    field = scenario.field
    for el in scenario.elements:
        sd = sector_data(scenario, el.index)
        subsets = []
        for size in range(sd.m + 1):
            subsets.extend(combinations(sd.fixed_indices, size))
        for hol in subsets:
            for antihol in subsets:
                for col in _cr_invariant_block(scenario, el.index, hol, antihol):
                    out.append(CRClass(field, {
                        CRLabel(el.index, kappa, hol, antihol): c
                        for kappa, c in enumerate(col) if c}))
    return out


def orbifold_hodge_table(scenario):
    """Invariant dimensions per orbifold Hodge bidegree."""
    table = {}
    for cls in cr_invariant_basis(scenario):
        degrees = {cr_bidegree(scenario, label) for label in cls.terms}
        assert len(degrees) == 1
        key = degrees.pop()
        table[key] = table.get(key, 0) + 1
    return table


def cr_degree_dimensions(scenario):
    table = {}
    for cls in cr_invariant_basis(scenario):
        deg = cr_degree(scenario, next(iter(cls.terms)))
        table[deg] = table.get(deg, 0) + 1
    return table


def is_holomorphic_symplectic(scenario):
    """Every element acts with determinant one on the holomorphic tangent space."""
    for el in scenario.elements:
        total = Fraction(0)
        for j in range(scenario.n):
            total += scenario.char_exponent(j, el.index)
        if total % 1:
            return False
    return True


@dataclass
class SideComparison:
    scenario_name: str
    mode: str
    checks: list
    global_scalar: object = None

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def compare_sides(scenario, structure_constants=None):
    """Compare the polyvector side against the Chen-Ruan side.

    Always compares the bigraded invariant dimension tables.  When the
    scenario is holomorphic symplectic (or structure_constants=True is
    forced), also compares structure constants of the two products under
    the label identification forms <-> holomorphic covectors and
    polyvectors <-> antiholomorphic covectors, which aligns the bigradings
    because twice the age equals the codimension.  Reports the single
    global scalar relating the two sides.
    """
    checks = []
    hol_symp = is_holomorphic_symplectic(scenario)
    if structure_constants is None:
        structure_constants = hol_symp
    if structure_constants and not hol_symp:
        raise NotHolomorphicSymplecticError(
            f"scenario {scenario.name} has elements with nontrivial determinant")

    ht_table = dimension_table(scenario, "new")
    cr_table = orbifold_hodge_table(scenario)
    table_match = ht_table == cr_table
    witness = None
    if not table_match:
        keys = sorted(set(ht_table) | set(cr_table))
        witness = {"diff": [[str(k[0]), str(k[1]), ht_table.get(k, 0), cr_table.get(k, 0)]
                            for k in keys if ht_table.get(k, 0) != cr_table.get(k, 0)]}
    checks.append(CheckOutcome(
        "bigraded-dimensions", table_match,
        f"{len(set(ht_table) | set(cr_table))} bidegrees compared",
        len(set(ht_table) | set(cr_table)), witness))

    scalar = None
    if structure_constants:
        field = scenario.field
        mismatch = None
        n_pairs = 0
        ratios = set()
        labels = full_basis(scenario)
        for la in labels:
            for lb in labels:
                ht_prod = multiply(scenario,
                                   HTClass.of(field, la), HTClass.of(field, lb))
                cr_prod = fg_product(scenario,
                                     CRClass.of(field, _to_cr(la)),
                                     CRClass.of(field, _to_cr(lb)))
                n_pairs += 1
                ht_mapped = {_to_cr(l): c for l, c in ht_prod.terms.items()}
                if set(ht_mapped) != set(cr_prod.terms):
                    mismatch = {"a": str(la), "b": str(lb),
                                "ht": repr(ht_prod), "cr": repr(cr_prod)}
                    break
                for l, c in cr_prod.terms.items():
                    ratios.add(ht_mapped[l] / c)
                if len(ratios) > 1:
                    mismatch = {"a": str(la), "b": str(lb),
                                "ratios": [repr(r) for r in ratios]}
                    break
            if mismatch:
                break
        scalar = next(iter(ratios)) if len(ratios) == 1 else None
        checks.append(CheckOutcome(
            "structure-constants", mismatch is None,
            f"{n_pairs} label pairs, global scalar {scalar!r}", n_pairs, mismatch))

    mode = "structure-constants" if structure_constants else "dimensions-only"
    return SideComparison(scenario.name, mode, checks, scalar)


def _to_cr(label):
    return CRLabel(label.sector, label.component, label.forms, label.polys)
