"""Exact linear algebra over the rationals and over cyclotomic fields.

Scalars are either `fractions.Fraction` or `CycScalar`, a residue in
Q[x]/(Phi_N) stored on the power basis of the N-th cyclotomic field.
Matrices are dense lists of lists.  Every elimination routine here uses a
fixed pivoting rule, so all downstream output is reproducible byte for
byte.  There is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ConductorMismatchError(ValueError):
    """Mixing cyclotomic scalars of different conductors without lifting."""


# ---------------------------------------------------------------------------
# integer polynomials, dense ascending coefficient lists
# ---------------------------------------------------------------------------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_divmod_monic(p, q):
    """Divide p by monic q over Z; returns (quotient, remainder)."""
    assert q[-1] == 1
    p = list(p)
    dq = len(q) - 1
    quo = [0] * max(len(p) - dq, 0)
    k = len(p) - 1
    while k >= dq:
        c = p[k]
        if c:
            quo[k - dq] = c
            for j in range(dq + 1):
                p[k - dq + j] -= c * q[j]
        k -= 1
    return quo, _poly_trim(p)


def _divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


_CYCLOTOMIC_CACHE = {1: [-1, 1]}


def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, ascending, as Python ints.

    >>> cyclotomic_polynomial(4)
    [1, 0, 1]
    """
    if n in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[n]
    p = [0] * (n + 1)
    p[0], p[n] = -1, 1
    for d in _divisors(n):
        if d < n:
            p, rem = _poly_divmod_monic(p, cyclotomic_polynomial(d))
            assert not rem
    _CYCLOTOMIC_CACHE[n] = p
    return p


# ---------------------------------------------------------------------------
# cyclotomic scalars
# ---------------------------------------------------------------------------

_FIELD_CACHE = {}


def cyc_field(conductor):
    """The field Q(zeta_N); instances are cached per conductor."""
    field = _FIELD_CACHE.get(conductor)
    if field is None:
        field = CycField(conductor)
        _FIELD_CACHE[conductor] = field
    return field


class CycField:
    """Q(zeta_N) on the power basis modulo Phi_N.

    Elements are canonical: degree below deg(Phi_N), Fractions in lowest
    terms, so equality is structural.
    """

    def __init__(self, conductor):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        mod = cyclotomic_polynomial(conductor)
        self.degree = len(mod) - 1
        self._mod = mod
        # reduction rows: x^(degree+k) mod Phi_N, extended on demand
        self._high = [tuple(-c for c in mod[:-1])]
        zero = (Fraction(0),) * self.degree
        self.zero = CycScalar(self, zero)
        one = (Fraction(1),) + (Fraction(0),) * (self.degree - 1)
        self.one = CycScalar(self, one)
        self._conj_basis = None

    @property
    def name(self):
        return "Q" if self.conductor == 1 else f"Q(z{self.conductor})"

    def element(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = self._reduce(coeffs)
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return CycScalar(self, tuple(coeffs))

    def from_rational(self, x):
        return self.element([Fraction(x)])

    def coerce(self, x):
        if isinstance(x, CycScalar):
            if x.field.conductor != self.conductor:
                raise ConductorMismatchError(
                    f"conductor {x.field.conductor} vs {self.conductor}")
            return x
        return self.from_rational(x)

    def zeta(self, power=1):
        """zeta_N^power as a canonical element."""
        power %= self.conductor
        coeffs = [Fraction(0)] * power + [Fraction(1)]
        return self.element(coeffs)

    def zeta_fraction(self, fr):
        """zeta_N^(N*fr); fr must have denominator dividing N."""
        k = fr * self.conductor
        if k.denominator != 1:
            raise ValueError(f"exponent {fr} not representable at conductor {self.conductor}")
        return self.zeta(int(k))

    def _high_row(self, k):
        # x^k mod Phi_N for k >= degree
        while len(self._high) <= k - self.degree:
            prev = self._high[-1]
            cur = [0] + list(prev)
            top = cur.pop()
            if top:
                cur = [a + top * b for a, b in zip(cur, self._high[0])]
            self._high.append(tuple(cur))
        return self._high[k - self.degree]

    def _reduce(self, coeffs):
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, self.degree - 1, -1):
            c = coeffs[k]
            if c:
                coeffs[k] = Fraction(0)
                for j, b in enumerate(self._high_row(k)):
                    if b:
                        coeffs[j] += c * b
        return coeffs[:self.degree]

    def _conjugate_basis(self):
        # images of the power basis under zeta -> zeta^(-1)
        if self._conj_basis is None:
            self._conj_basis = [self.zeta(-j) for j in range(self.degree)]
        return self._conj_basis


class CycScalar:
    """An element of Q(zeta_N) in reduced canonical form."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    # -- predicates -------------------------------------------------------

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, CycScalar):
            if other.field.conductor != self.field.conductor:
                raise ConductorMismatchError(
                    f"conductor {self.field.conductor} vs {other.field.conductor}; "
                    "lift explicitly first")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return CycScalar(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return CycScalar(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CycScalar(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return self.field.element(prod)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic scalar")
        # extended Euclid against Phi_N, which is irreducible over Q
        mod = [Fraction(c) for c in self.field._mod]
        r0, r1 = mod, list(self.coeffs)
        _poly_trim(r1)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            _poly_trim(r1)
            if len(r1) <= 1:
                break
            q, r = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, r
            s2 = _frac_poly_sub(s0, _frac_poly_mul(q, s1))
            s0, s1 = s1, s2
        c = r1[0]
        inv = [s / c for s in s1]
        return self.field.element(inv)

    def __truediv__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce_other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        """Image under the automorphism zeta -> zeta^(-1)."""
        basis = self.field._conjugate_basis()
        out = self.field.zero
        for c, b in zip(self.coeffs, basis):
            if c:
                out = out + c * b
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return (self.field.conductor == other.field.conductor
                    and self.coeffs == other.coeffs)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.conductor, self.coeffs))

    def __repr__(self):
        n = self.field.conductor
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                mono = f"z{n}" if j == 1 else f"z{n}^{j}"
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def _frac_poly_divmod(p, q):
    p = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quo = [Fraction(0)] * max(len(p) - dq, 1)
    k = len(p) - 1
    while k >= dq:
        c = p[k]
        if c:
            f = c / lead
            quo[k - dq] = f
            for j in range(dq + 1):
                p[k - dq + j] -= f * q[j]
        k -= 1
    _poly_trim(p)
    return quo, p


def _frac_poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return out


def _frac_poly_sub(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] -= b
    return _poly_trim(out) or [Fraction(0)]


def zeta(conductor, power=1):
    return cyc_field(conductor).zeta(power)


def lift_conductor(a, m):
    """Re-express a in Q(zeta_m); the conductor of a must divide m."""
    n = a.field.conductor
    if m % n:
        raise ConductorMismatchError(f"{n} does not divide {m}")
    target = cyc_field(m)
    step = m // n
    out = target.zero
    for j, c in enumerate(a.coeffs):
        if c:
            out = out + c * target.zeta(j * step)
    return out


def legendre_symbol(a, p):
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def sqrt_minus(field, d):
    """A canonical square root of -d in Q(zeta_N), built from Gauss sums.

    Requires d squarefree and positive, with N divisible by 4, by every odd
    prime factor of d, and by 8 when d is even.
    """
    n = field.conductor
    s = field.one
    m = d
    if m % 2 == 0:
        if n % 8:
            raise ValueError("conductor must be divisible by 8 for even d")
        s = s * (field.zeta(n // 8) + field.zeta(-n // 8))
        m //= 2
    p = 3
    while m > 1:
        if m % p == 0:
            if n % p:
                raise ValueError(f"conductor must be divisible by {p}")
            gauss = field.zero
            for a in range(1, p):
                gauss = gauss + legendre_symbol(a, p) * field.zeta(a * n // p)
            s = s * gauss
            m //= p
        p += 2
    i = field.zeta(n // 4)
    if s * s == -d:
        result = s
    else:
        result = s * i
    assert result * result == -d, "Gauss sum square root failed"
    return result


# ---------------------------------------------------------------------------
# matrices over an exact field
# ---------------------------------------------------------------------------

class RationalField:
    """Field adapter for `fractions.Fraction` entries."""

    zero = Fraction(0)
    one = Fraction(1)
    name = "Q"

    @staticmethod
    def coerce(x):
        if isinstance(x, CycScalar):
            return x.rational_value()
        return Fraction(x)


QQ = RationalField()


class Matrix:
    """Dense matrix over an exact field (QQ or a CycField)."""

    __slots__ = ("field", "rows", "_empty_ncols")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        self.rows = [[field.coerce(e) for e in row] for row in rows]
        width = {len(r) for r in self.rows}
        if len(width) > 1:
            raise ValueError("ragged rows")
        self._empty_ncols = ncols if ncols is not None else 0

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)]
                           for i in range(n)])

    @classmethod
    def zeros(cls, field, m, n):
        return cls(field, [[field.zero] * n for _ in range(m)], ncols=n)

    @classmethod
    def from_columns(cls, field, cols, nrows=None):
        if not cols:
            return cls(field, [[] for _ in range(nrows)] if nrows else [])
        return cls(field, [[cols[j][i] for j in range(len(cols))]
                           for i in range(len(cols[0]))])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else self._empty_ncols

    def copy(self):
        m = Matrix.__new__(Matrix)
        m.field = self.field
        m.rows = [row[:] for row in self.rows]
        m._empty_ncols = self._empty_ncols
        return m

    def column(self, j):
        return [row[j] for row in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, [list(col) for col in zip(*self.rows)] if self.rows else [])

    def map_entries(self, fn):
        return Matrix(self.field, [[fn(e) for e in row] for row in self.rows])

    def to_field(self, field):
        return Matrix(field, [[field.coerce(e) for e in row] for row in self.rows])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows)

    def __add__(self, other):
        return Matrix(self.field, [[a + b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix(self.field, [[a - b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.field, [[-a for a in row] for row in self.rows])

    def scale(self, c):
        c = self.field.coerce(c)
        return Matrix(self.field, [[c * a for a in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            if not self.rows:
                return Matrix(self.field, [], ncols=other.ncols)
            ot = list(zip(*other.rows)) if other.rows else [()] * 0
            if not ot:
                return Matrix(self.field, [[] for _ in self.rows], ncols=0)
            z = self.field.zero
            out = []
            for row in self.rows:
                new = []
                for col in ot:
                    acc = z
                    for a, b in zip(row, col):
                        if a and b:
                            acc = acc + a * b
                    new.append(acc)
                out.append(new)
            return Matrix(self.field, out)
        return NotImplemented

    def apply(self, vec):
        """Matrix times column vector (a plain list)."""
        z = self.field.zero
        out = []
        for row in self.rows:
            acc = z
            for a, b in zip(row, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column tuple).

        Pivot rule: leftmost column, first nonzero row from the top.
        """
        m = [row[:] for row in self.rows]
        nr, nc = len(m), self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            pivot_row = None
            for i in range(r, nr):
                if m[i][c]:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            inv = self.field.one / m[r][c]
            m[r] = [inv * e for e in m[r]]
            for i in range(nr):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        out = Matrix.__new__(Matrix)
        out.field = self.field
        out.rows = m
        out._empty_ncols = self._empty_ncols
        return out, tuple(pivots)

    def rank(self):
        return len(self.rref()[1])

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of non-square matrix")
        m = [row[:] for row in self.rows]
        n = self.nrows
        det = self.field.one
        for c in range(n):
            pivot_row = None
            for i in range(c, n):
                if m[i][c]:
                    pivot_row = i
                    break
            if pivot_row is None:
                return self.field.zero
            if pivot_row != c:
                m[c], m[pivot_row] = m[pivot_row], m[c]
                det = -det
            det = det * m[c][c]
            inv = self.field.one / m[c][c]
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det

    def solve(self, rhs):
        """Solve self * X = rhs; raises on inconsistency.

        Free variables (if any) are set to zero, so the solution is the
        deterministic particular one.
        """
        if isinstance(rhs, list):
            sol = self.solve(Matrix.from_columns(self.field, [rhs]))
            return sol.column(0)
        aug = Matrix(self.field, [r1 + r2 for r1, r2 in zip(self.rows, rhs.rows)])
        red, pivots = aug.rref()
        nc = self.ncols
        for p in pivots:
            if p >= nc:
                raise ValueError("inconsistent linear system")
        cols = []
        for k in range(rhs.ncols):
            x = [self.field.zero] * nc
            for i, p in enumerate(pivots):
                x[p] = red.rows[i][nc + k]
            cols.append(x)
        return Matrix.from_columns(self.field, cols)

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("inverse of non-square matrix")
        if self.rank() != self.nrows:
            raise ValueError("singular matrix")
        return self.solve(Matrix.identity(self.field, self.nrows))

    def __repr__(self):
        return f"Matrix({self.field.name}, {self.nrows}x{self.ncols})"


def hstack(a, b):
    return Matrix(a.field, [r1 + r2 for r1, r2 in zip(a.rows, b.rows)])


def vstack(a, b):
    return Matrix(a.field, a.rows + b.rows)


def kernel_basis(m):
    """Basis of the right kernel of m, one vector per free column.

    The vectors are independent, annihilated by m, and span the kernel;
    ordering follows ascending free-column index.
    """
    red, pivots = m.rref()
    nc = m.ncols
    pivot_set = set(pivots)
    basis = []
    for f in range(nc):
        if f in pivot_set:
            continue
        v = [m.field.zero] * nc
        v[f] = m.field.one
        for i, p in enumerate(pivots):
            v[p] = -red.rows[i][f]
        basis.append(v)
    return basis


def column_space_basis(m):
    """Pivot columns of m, in ascending column order."""
    _, pivots = m.rref()
    return [m.column(p) for p in pivots]


# ---------------------------------------------------------------------------
# integer matrices, Smith reduction, congruence superlattices
# ---------------------------------------------------------------------------

class IntMatrix:
    """Dense integer matrix (lattice maps such as g - 1)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[int(e) for e in row] for row in rows]
        width = {len(r) for r in self.rows}
        if len(width) > 1:
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    def key(self):
        return tuple(tuple(r) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            ot = list(zip(*other.rows))
            return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                              for row in self.rows])
        return NotImplemented

    def __sub__(self, other):
        return IntMatrix([[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.rows, other.rows)])

    def __pow__(self, n):
        out = IntMatrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def apply(self, vec):
        return [sum(a * b for a, b in zip(row, vec)) for row in self.rows]

    def to_matrix(self, field=QQ):
        return Matrix(field, self.rows)

    def det(self):
        d = self.to_matrix().det()
        assert d.denominator == 1
        return int(d)

    def transpose(self):
        return IntMatrix([list(col) for col in zip(*self.rows)] if self.rows else [])

    def __repr__(self):
        return f"IntMatrix({self.rows})"


def int_vstack(mats):
    rows = []
    for m in mats:
        rows.extend(m.rows)
    return IntMatrix(rows)


def _snf_min_pivot(a, t):
    # minimal absolute value; ties broken by lowest row, then lowest column
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            v = a[i][j]
            if v:
                if best is None or abs(v) < best[0]:
                    best = (abs(v), i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(m):
    """Smith normal form: returns (U, D, V) with U*M*V = D.

    U and V are unimodular, D is diagonal with non-negative entries and
    d_i | d_{i+1}.  Pivots are chosen by minimal absolute value with a
    lowest-row, lowest-column tie break.
    """
    a = [row[:] for row in m.rows]
    nr, nc = m.nrows, m.ncols
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
    t = 0
    limit = min(nr, nc)
    while t < limit:
        piv = _snf_min_pivot(a, t)
        if piv is None:
            break
        i, j = piv
        if i != t:
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            for row in v:
                row[t], row[j] = row[j], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        p = a[t][t]
        changed = False
        for i in range(t + 1, nr):
            if a[i][t]:
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    changed = True
        for j in range(t + 1, nc):
            if a[t][j]:
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                if a[t][j]:
                    changed = True
        if changed:
            continue
        # divisibility sweep for the d_i | d_{i+1} chain
        fix = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % p:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            a[t] = [x + y for x, y in zip(a[t], a[fix])]
            u[t] = [x + y for x, y in zip(u[t], u[fix])]
            continue
        t += 1
    d = [[a[i][j] if i == j else 0 for j in range(nc)] for i in range(nr)]
    return IntMatrix(u), IntMatrix(d), IntMatrix(v)


def invariant_factors(m):
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    out = []
    for i in range(min(d.nrows, d.ncols)):
        if d.rows[i][i]:
            out.append(d.rows[i][i])
    return tuple(out)


@dataclass
class SuperlatticeBasis:
    """Basis of {x in Q^n : A x integral}: scaled lattice vectors first,
    then a basis of the rational kernel of A."""

    vectors: list
    lattice_count: int
    kernel_count: int


def congruence_superlattice(a):
    """Solve the integrality congruence A x in Z^m for x in Q^n.

    Returns generators of the solution group: `lattice_count` vectors
    spanning a finite-index superlattice of Z^n transverse to ker(A), and
    `kernel_count` vectors spanning the rational kernel.  Z^n is contained
    in the group generated by all of them.
    """
    u_mat, d_mat, v_mat = smith_normal_form(a)
    nc = a.ncols
    vectors = []
    lattice = []
    kernel = []
    for j in range(nc):
        col = [Fraction(v_mat.rows[i][j]) for i in range(nc)]
        dj = d_mat.rows[j][j] if j < min(d_mat.nrows, d_mat.ncols) else 0
        if dj:
            lattice.append([c / dj for c in col])
        else:
            kernel.append(col)
    vectors = lattice + kernel
    return SuperlatticeBasis(vectors, len(lattice), len(kernel))


# ---------------------------------------------------------------------------
# small combinatorial helpers shared by the label calculus
# ---------------------------------------------------------------------------

def merge_sign(a, b):
    """Merge two strictly increasing tuples; returns (merged, sign).

    The sign is the parity of the shuffle putting the concatenation of a
    and b into ascending order; returns (None, 0) when they intersect.
    """
    inv = 0
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None, 0
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
            inv += len(a) - i
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), (-1) ** inv


def merge_sign_many(*parts):
    acc = ()
    sign = 1
    for p in parts:
        acc, s = merge_sign(acc, tuple(p))
        if acc is None:
            return None, 0
        sign *= s
    return acc, sign
