"""Complex tori with finite abelian symmetry.

A scenario is a lattice Z^(2n), a rational complex structure J on it, and
a finite abelian group of integer lattice automorphisms commuting with J.
Validation enumerates the group, and the character frame diagonalises the
whole group at once on the holomorphic tangent space V, the J-eigenspace
inside the complexified lattice.  Ages and all sector combinatorics are
read off the frame characters.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as iter_product
from math import lcm

from .exactfield import (
    IntMatrix,
    Matrix,
    QQ,
    cyc_field,
    kernel_basis,
    sqrt_minus,
)


class ScenarioError(ValueError):
    """Base class for scenario validation failures."""


class BadComplexStructureError(ScenarioError):
    pass


class NotComplexLinearError(ScenarioError):
    pass


class NonCommutingError(ScenarioError):
    pass


class NonUnimodularError(ScenarioError):
    pass


class InfiniteClosureError(ScenarioError):
    pass


DEFAULT_CLOSURE_BOUND = 1024


@dataclass(frozen=True)
class ScenarioOptions:
    omega_character_sign: int = -1
    sign_convention: str = "standard"
    closure_bound: int = DEFAULT_CLOSURE_BOUND


@dataclass
class Generator:
    name: str
    matrix: IntMatrix
    order: int


@dataclass
class Element:
    index: int
    word: str
    matrix: IntMatrix
    order: int
    gen_exponents: tuple


@dataclass
class EigenData:
    """Eigenvalue exponents of one element on V, with eigenvectors.

    Exponents a_j lie in [0, 1) with eigenvalue zeta^(N a_j); the count of
    zero exponents is dim V^g.
    """

    word: str
    exponents: tuple
    eigenvectors: list


def _is_squarefree(d):
    if d <= 0:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


def _matrix_order(m, bound):
    ident = IntMatrix.identity(m.nrows)
    power = m
    for k in range(1, bound + 1):
        if power == ident:
            return k
        power = power * m
    raise InfiniteClosureError(
        f"element order exceeds the closure bound {bound}")


def _word_from_exponents(exps, names):
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "e"


class Scenario:
    """A validated torus orbifold: lattice, complex structure, group, frame."""

    def __init__(self, name, n, j_matrix, d, generators, elements, mult_table,
                 inverse_table, options, field, frame_vectors, gen_chars):
        self.name = name
        self.n = n
        self.rank = 2 * n
        self.j_matrix = j_matrix
        self.d = d
        self.generators = generators
        self.elements = elements
        self._mult = mult_table
        self._inv = inverse_table
        self.options = options
        self.field = field
        self.frame_vectors = frame_vectors
        self._gen_chars = gen_chars
        self._word_index = {el.word: el.index for el in elements}
        self._char_cache = {}
        self.sector_cache = {}
        self.pair_cache = {}
        self.component_cache = {}

    # -- group bookkeeping ---------------------------------------------------

    @property
    def order(self):
        return len(self.elements)

    @property
    def exponent(self):
        return lcm(*[el.order for el in self.elements])

    def element(self, key):
        if isinstance(key, Element):
            return key
        if isinstance(key, int):
            return self.elements[key]
        if key in self._word_index:
            return self.elements[self._word_index[key]]
        raise KeyError(f"unknown group element {key!r}")

    def mult(self, i, j):
        return self._mult[(i, j)]

    def inverse(self, i):
        return self._inv[i]

    @property
    def identity_index(self):
        return 0

    # -- characters ------------------------------------------------------------

    def char_exponent(self, j, elem_index):
        """Exponent a in [0,1) with element acting on frame vector j by zeta^(N a)."""
        key = (j, elem_index)
        val = self._char_cache.get(key)
        if val is None:
            exps = self.elements[elem_index].gen_exponents
            val = Fraction(0)
            for k, e in enumerate(exps):
                val += e * self._gen_chars[j][k]
            val %= 1
            self._char_cache[key] = val
        return val

    def char_value(self, j, elem_index):
        return self.field.zeta_fraction(self.char_exponent(j, elem_index))

    def fixed_frame_indices(self, elem_indices):
        """Frame indices of V^S for a set S of elements."""
        out = []
        for j in range(self.n):
            if all(self.char_exponent(j, gi) == 0 for gi in elem_indices):
                out.append(j)
        return tuple(out)

    def __repr__(self):
        return f"Scenario({self.name!r}, n={self.n}, |G|={self.order})"


def validate_scenario(name, n, j_rows, generator_specs, options=None):
    """Validate raw scenario data and build the full element table and frame.

    j_rows: 2n x 2n rational entries.  generator_specs: list of
    (name, integer 2n x 2n rows).  Raises a ScenarioError subclass on any
    violated invariant.
    """
    options = options or ScenarioOptions()
    rank = 2 * n
    if len(j_rows) != rank or any(len(r) != rank for r in j_rows):
        raise BadComplexStructureError(
            f"complex structure must be {rank}x{rank}")
    j_matrix = Matrix(QQ, j_rows)

    j_sq = j_matrix * j_matrix
    d = None
    for i in range(rank):
        for k in range(rank):
            want_diag = i == k
            v = j_sq.rows[i][k]
            if want_diag:
                if d is None:
                    d = -v
                elif -v != d:
                    raise BadComplexStructureError("J^2 is not scalar")
            elif v:
                raise BadComplexStructureError("J^2 is not scalar")
    if d is None or d <= 0 or d.denominator != 1 or not _is_squarefree(int(d)):
        raise BadComplexStructureError(
            f"J^2 = -({d})*I; need a positive squarefree integer")
    d = int(d)

    gens = []
    for gname, rows in generator_specs:
        if len(rows) != rank or any(len(r) != rank for r in rows):
            raise NonUnimodularError(f"generator {gname} must be {rank}x{rank}")
        gm = IntMatrix(rows)
        if abs(gm.det()) != 1:
            raise NonUnimodularError(f"generator {gname} has determinant {gm.det()}")
        gq = gm.to_matrix()
        if gq * j_matrix != j_matrix * gq:
            raise NotComplexLinearError(f"generator {gname} does not commute with J")
        order = _matrix_order(gm, options.closure_bound)
        gens.append(Generator(gname, gm, order))

    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            if gens[a].matrix * gens[b].matrix != gens[b].matrix * gens[a].matrix:
                raise NonCommutingError(
                    f"generators {gens[a].name} and {gens[b].name} do not commute")

    total = 1
    for g in gens:
        total *= g.order
    if total > options.closure_bound:
        raise InfiniteClosureError(
            f"group closure {total} exceeds bound {options.closure_bound}")

    # enumerate the abelian closure in lex order over exponent tuples
    names = [g.name for g in gens]
    seen = {}
    elements = []
    gen_powers = []
    for g in gens:
        powers = [IntMatrix.identity(rank)]
        for _ in range(g.order - 1):
            powers.append(powers[-1] * g.matrix)
        gen_powers.append(powers)
    for exps in iter_product(*[range(g.order) for g in gens]) if gens else [()]:
        m = IntMatrix.identity(rank)
        for powers, e in zip(gen_powers, exps):
            if e:
                m = m * powers[e]
        key = m.key()
        if key not in seen:
            idx = len(elements)
            seen[key] = idx
            elements.append(Element(idx, _word_from_exponents(exps, names),
                                    m, _matrix_order(m, options.closure_bound), exps))
    mult_table = {}
    inverse_table = {}
    for a in elements:
        for b in elements:
            mult_table[(a.index, b.index)] = seen[(a.matrix * b.matrix).key()]
    for a in elements:
        for b in elements:
            if mult_table[(a.index, b.index)] == 0:
                inverse_table[a.index] = b.index
                break

    exponent = lcm(*[el.order for el in elements]) if elements else 1
    conductor = lcm(4, exponent, d if d % 2 else 4 * d)
    field = cyc_field(conductor)

    # holomorphic tangent space: the sqrt(-d) eigenspace of J
    s = sqrt_minus(field, d)
    jk = j_matrix.to_field(field)
    eig = jk - Matrix.identity(field, rank).scale(s)
    v_basis = kernel_basis(eig)
    if len(v_basis) != n:
        raise BadComplexStructureError(
            f"J eigenspace has dimension {len(v_basis)}, expected {n}")

    frame_vectors, gen_chars = _character_frame(field, rank, v_basis, gens)

    return Scenario(name, n, j_matrix, d, gens, elements, mult_table,
                    inverse_table, options, field, frame_vectors, gen_chars)


def _character_frame(field, rank, v_basis, gens):
    """Split V into joint eigenlines of all generators.

    Returns frame vectors (columns in the ambient cyclotomic space) sorted
    by their tuple of generator exponents, and the exponent table.
    """
    blocks = [(v_basis, ())]
    for g in gens:
        gk = g.matrix.to_matrix(field)
        refined = []
        for vectors, chars in blocks:
            basis = Matrix.from_columns(field, vectors)
            images = Matrix.from_columns(field, [gk.apply(v) for v in vectors])
            action = basis.solve(images)
            for t in range(g.order):
                lam = field.zeta_fraction(Fraction(t, g.order))
                shifted = action - Matrix.identity(field, len(vectors)).scale(lam)
                for coeffs in kernel_basis(shifted):
                    vec = basis.apply(coeffs)
                    refined.append((vec, chars + (Fraction(t, g.order),)))
        assert len(refined) == sum(len(b[0]) for b in blocks)
        regrouped = {}
        for vec, chars in refined:
            regrouped.setdefault(chars, []).append(vec)
        blocks = sorted(regrouped.items(), key=lambda kv: kv[0])
        blocks = [(vectors, chars) for chars, vectors in blocks]
    frame = []
    chars_out = []
    for vectors, chars in blocks:
        for vec in vectors:
            frame.append(vec)
            chars_out.append(chars)
    return frame, chars_out


def eigen_data(scenario, g):
    """Eigen-exponents of g on V, ascending, with matching eigenvectors."""
    el = scenario.element(g)
    pairs = sorted(
        ((scenario.char_exponent(j, el.index), j) for j in range(scenario.n)))
    exponents = tuple(p[0] for p in pairs)
    vectors = [scenario.frame_vectors[p[1]] for p in pairs]
    return EigenData(el.word, exponents, vectors)


def age(scenario, g):
    """Sum of the rotation exponents of g on the holomorphic tangent space."""
    el = scenario.element(g)
    total = Fraction(0)
    for j in range(scenario.n):
        total += scenario.char_exponent(j, el.index)
    return total
