"""The bigraded product on orbifold polyvector fields.

The product of a g-sector class and an h-sector class is the composition
of four arrows:

  1. restriction of both factors to the double fixed locus, keeping the
     polyvector parts as separate tensor slots;
  2. the determinant-line rewrite turning the two normal twists into the
     top excess wedge tensored with the twist of the double locus;
  3. the obstruction class, which on a torus is 1 when its rank k is zero
     and 0 otherwise;
  4. pushforward into the fixed locus of gh: new antiholomorphic normal
     covectors are wedged on, and all polyvector slots are transported by
     the averaging projection onto V^(gh).

Sign conventions ("standard" profile).  A sector class is ordered as
forms (x) polyvectors (x) twist; the middle term as forms (x) g-polys (x)
h-polys (x) excess (x) twist.  Every arrow shuffles odd factors with
Koszul signs relative to these orderings; the determinant-line rewrite
uses ascending-index wedge bases for all twist lines and moves the excess
block from the first factor to the front.  With this profile the product
is unital, graded commutative for the form+polyvector degree, associative
on every verified scenario, and additive for the age bigrading.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exactfield import merge_sign, merge_sign_many
from .fixedloci import NegativeKError, pair_data, sector_data
from .htspace import FormalSum, HTClass, HTLabel, label_bidegree

OMEGA_PRODUCT = "omega_g*omega_h"
OMEGA_PAIR = "omega_pair"


class SectorMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class MiddleLabel:
    g: int
    h: int
    component: int
    forms: tuple
    polys_g: tuple
    polys_h: tuple
    excess: tuple
    twist: str


class MiddleClass(FormalSum):
    pass


def _single_sector(x):
    sectors = {label.sector for label in x.terms}
    if len(sectors) != 1:
        raise SectorMismatchError("expected a single-sector class")
    return sectors.pop()


def restrict_to_double(scenario, a, b):
    """Arrow 1: restrict a (x) b to the double fixed locus.

    Classes supported on components not meeting both supports die, as do
    form covectors that restrict to zero.  The excess slot is filled with
    the full index set; the twist marker stays omega_g (x) omega_h.
    """
    gi = _single_sector(a)
    hi = _single_sector(b)
    pd = pair_data(scenario, gi, hi)
    sg = sector_data(scenario, gi)
    t00 = set(pd.t00)
    out = MiddleClass(scenario.field)
    for la, ca in a.terms.items():
        if any(j not in t00 for j in la.forms):
            continue
        for lb, cb in b.terms.items():
            if any(j not in t00 for j in lb.forms):
                continue
            forms, s_forms = merge_sign(la.forms, lb.forms)
            if forms is None:
                continue
            mus = pd.fibers.get((la.component, lb.component))
            if not mus:
                continue
            # Koszul shuffle into forms (x) polys_g (x) polys_h (x) twists
            sign = s_forms
            if (len(lb.forms) * (len(la.polys) + sg.c)) % 2:
                sign = -sign
            if (sg.c * len(lb.polys)) % 2:
                sign = -sign
            coeff = ca * cb * sign
            for mu in mus:
                label = MiddleLabel(gi, hi, mu, forms, la.polys, lb.polys,
                                    pd.tab, OMEGA_PRODUCT)
                out = out + MiddleClass.of(scenario.field, label, coeff)
    return out


def det_line_iso(scenario, m):
    """Arrow 2: rewrite omega_g (x) omega_h as top-excess (x) omega_{g,h}."""
    out = MiddleClass(scenario.field)
    for label, coeff in m.terms.items():
        if label.twist != OMEGA_PRODUCT:
            raise ValueError("twist marker already rewritten")
        pd = pair_data(scenario, label.g, label.h)
        new = MiddleLabel(label.g, label.h, label.component, label.forms,
                          label.polys_g, label.polys_h, label.excess, OMEGA_PAIR)
        out = out + MiddleClass.of(scenario.field, new, coeff * pd.det_sign)
    return out


def gamma_action(scenario, m):
    """Arrow 3: multiply by the obstruction class, [k == 0] on a torus."""
    out = MiddleClass(scenario.field)
    for label, coeff in m.terms.items():
        pd = pair_data(scenario, label.g, label.h)
        if pd.k < 0:
            raise NegativeKError(f"negative obstruction rank for {label}")
        if pd.k == 0:
            out = out + MiddleClass.of(scenario.field, label, coeff)
    return out


def pushforward_to_target(scenario, m):
    """Arrow 4: push the middle term into the gh-sector.

    Wedges the dual normal covectors of the double locus inside the fixed
    locus of gh onto the form block and transports every polyvector slot
    by the averaging projection, which on the character frame keeps
    exactly the indices fixed by gh.
    """
    out = HTClass(scenario.field)
    for label, coeff in m.terms.items():
        if label.twist != OMEGA_PAIR:
            raise ValueError("detLineIso must run before the pushforward")
        pd = pair_data(scenario, label.g, label.h)
        s_gh = set(pd.t00) | set(pd.nprime)
        polys, s_poly = merge_sign_many(label.polys_g, label.polys_h, label.excess)
        if polys is None or any(j not in s_gh for j in polys):
            continue
        forms, s_forms = merge_sign(label.forms, pd.nprime)
        if forms is None:
            continue
        sign = s_poly * s_forms * pd.omega_split_sign
        moved = pd.cprime * (len(label.polys_g) + len(label.polys_h) + len(label.excess))
        if moved % 2:
            sign = -sign
        nu = pd.to_gh[label.component]
        target = HTLabel(pd.gh_index, nu, forms, polys)
        out = out + HTClass.of(scenario.field, target, coeff * sign)
    return out


def multiply(scenario, a, b):
    """Bilinear product of polyvector classes, across sectors and components."""
    by_sector_a = _split_sectors(scenario, a)
    by_sector_b = _split_sectors(scenario, b)
    out = HTClass(scenario.field)
    for xa in by_sector_a:
        for xb in by_sector_b:
            mid = restrict_to_double(scenario, xa, xb)
            mid = det_line_iso(scenario, mid)
            mid = gamma_action(scenario, mid)
            out = out + pushforward_to_target(scenario, mid)
    return out


def _split_sectors(scenario, x):
    buckets = {}
    for label, coeff in x.terms.items():
        buckets.setdefault(label.sector, []).append((label, coeff))
    return [HTClass(scenario.field, items) for _, items in sorted(buckets.items())]


def middle_term_table(scenario, g, h, p, q, p2, q2):
    """Dimensions of the middle spaces per excess wedge degree i.

    Input degrees follow the plain sheaf convention: p and p2 carry the
    codimension shift, q and q2 are polyvector degrees.  Entry i is the
    dimension of forms of degree p + p2 - c_{g,h} - i against the two
    restricted polyvector slots, wedge-i of the excess bundle, and the
    twist.  The implemented product lands in i = r (the top wedge) when
    the obstruction rank vanishes.
    """
    pd = pair_data(scenario, g, h)
    sg = sector_data(scenario, pd.g_index)
    sh = sector_data(scenario, pd.h_index)
    m_pair = len(pd.t00)
    c_pair = scenario.n - m_pair
    ncomp = pd.components.order
    table = {}
    for i in range(pd.r + 1):
        form_deg = p + p2 - c_pair - i
        dim = (ncomp * comb(m_pair, form_deg) * comb(sg.m, q)
               * comb(sh.m, q2) * comb(pd.r, i)) if 0 <= form_deg <= m_pair else 0
        table[i] = dim
    return table


def product_image_excess_index(scenario, g, h):
    """The unique excess index allowed by bidegree additivity, r - k."""
    pd = pair_data(scenario, g, h)
    return pd.r - pd.k


# ---------------------------------------------------------------------------
# ring axiom verification
# ---------------------------------------------------------------------------

@dataclass
class CheckOutcome:
    check_id: str
    passed: bool
    detail: str
    count: int
    witness: dict | None = None


@dataclass
class AxiomVerification:
    scenario_name: str
    mode: str
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def _unshifted_degree(label):
    return len(label.forms) + len(label.polys)


def verify_ring_axioms(scenario, mode="exhaustive", seed=0, count=200,
                       max_degree=None):
    """Exact checks of the ring axioms on basis classes.

    Modes: "exhaustive" (all basis labels), "exhaustive-deg2" (labels of
    total degree at most two), "sampled" (pseudo-random triples drawn
    deterministically from the full basis).  Graded commutativity uses the
    form+polyvector degree; the twist shift is even on every holomorphic
    symplectic scenario and is excluded from the sign on purpose.
    """
    from .htspace import full_basis, group_action, invariant_basis, unit_class

    if mode == "exhaustive-deg2":
        labels = full_basis(scenario, max_degree=2)
    elif mode in ("exhaustive", "sampled"):
        labels = full_basis(scenario, max_degree=max_degree)
    else:
        raise ValueError(f"unknown verification mode {mode!r}")
    field = scenario.field
    classes = [HTClass.of(field, l) for l in labels]
    n_labels = len(labels)

    products = {}

    def prod(i, j):
        key = (i, j)
        val = products.get(key)
        if val is None:
            val = multiply(scenario, classes[i], classes[j])
            products[key] = val
        return val

    checks = []

    if mode == "sampled":
        import random
        rng = random.Random(seed)
        triples = [(rng.randrange(n_labels), rng.randrange(n_labels),
                    rng.randrange(n_labels)) for _ in range(count)]
        pairs = sorted({(i, j) for (i, j, _) in triples}
                       | {(j, k) for (_, j, k) in triples})
    else:
        triples = [(i, j, k) for i in range(n_labels)
                   for j in range(n_labels) for k in range(n_labels)]
        pairs = [(i, j) for i in range(n_labels) for j in range(n_labels)]

    # (i) associativity
    bad = None
    n_assoc = 0
    for (i, j, k) in triples:
        left = multiply(scenario, prod(i, j), classes[k])
        right = multiply(scenario, classes[i], prod(j, k))
        n_assoc += 1
        if left != right:
            bad = {"a": str(labels[i]), "b": str(labels[j]), "c": str(labels[k]),
                   "left": repr(left), "right": repr(right)}
            break
    checks.append(CheckOutcome("associativity", bad is None,
                               f"{n_assoc} basis triples", n_assoc, bad))

    # (ii) graded commutativity for the unshifted degree
    bad = None
    n_comm = 0
    for (i, j) in pairs:
        ab = prod(i, j)
        ba = prod(j, i)
        sign = (-1) ** (_unshifted_degree(labels[i]) * _unshifted_degree(labels[j]))
        n_comm += 1
        if ab != ba.scale(sign):
            bad = {"a": str(labels[i]), "b": str(labels[j]),
                   "ab": repr(ab), "ba": repr(ba)}
            break
    checks.append(CheckOutcome("graded-commutativity", bad is None,
                               f"{n_comm} basis pairs, form+polyvector grading",
                               n_comm, bad))

    # (iii) unit
    one = unit_class(scenario)
    bad = None
    for i, cls in enumerate(classes):
        if multiply(scenario, one, cls) != cls or multiply(scenario, cls, one) != cls:
            bad = {"a": str(labels[i])}
            break
    checks.append(CheckOutcome("unit", bad is None,
                               f"{n_labels} basis classes", n_labels, bad))

    # (iv) bidegree additivity in the age bigrading
    bad = None
    n_bideg = 0
    for (i, j) in pairs:
        ab = prod(i, j)
        n_bideg += 1
        if ab.is_zero():
            continue
        want = tuple(x + y for x, y in zip(label_bidegree(scenario, labels[i]),
                                           label_bidegree(scenario, labels[j])))
        for label in ab.terms:
            if label_bidegree(scenario, label) != want:
                bad = {"a": str(labels[i]), "b": str(labels[j]),
                       "label": str(label),
                       "expected": [str(w) for w in want]}
                break
        if bad:
            break
    checks.append(CheckOutcome("bidegree-additivity", bad is None,
                               f"{n_bideg} basis pairs", n_bideg, bad))

    # (v) invariance closure
    bad = None
    inv = invariant_basis(scenario)
    n_inv = 0
    for x in inv:
        for y in inv:
            xy = multiply(scenario, x, y)
            n_inv += 1
            fixed = all(group_action(scenario, gen.name, xy) == xy
                        for gen in scenario.generators)
            if not fixed:
                bad = {"x": repr(x), "y": repr(y)}
                break
        if bad:
            break
    checks.append(CheckOutcome("invariance-closure", bad is None,
                               f"{n_inv} invariant pairs", n_inv, bad))

    mode_desc = mode if mode != "sampled" else f"sampled(seed={seed},count={count})"
    return AxiomVerification(scenario.name, mode_desc, checks)
