"""Independent oracles for the test suite.

Nothing here imports the package's linear algebra: ranks come from a
self-contained fraction-free elimination, wedge signs from a separate
inversion count, fixed point counts from direct torsion enumeration.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iter_product


def rank_oracle(rows):
    """Rank of a matrix of Fractions by plain Gaussian elimination."""
    m = [[Fraction(e) for e in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for i in range(row, len(m)):
            if m[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank


def wedge_sign_oracle(a, b):
    """Sign of sorting the concatenation of two disjoint ascending tuples.

    Counts inversions directly; returns 0 on a repeated index.
    """
    combined = list(a) + list(b)
    if len(set(combined)) != len(combined):
        return 0
    inversions = 0
    for i in range(len(combined)):
        for j in range(i + 1, len(combined)):
            if combined[i] > combined[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def classical_wedge_oracle(label_a, label_b):
    """Product of (B,Q) labels in the exterior algebra on forms and polyvectors.

    Returns (B, Q, sign) or None.  Convention: a label is the ordered word
    of its form covectors followed by its polyvectors; the product shuffles
    the second label's forms past the first label's polyvectors.
    """
    b1, q1 = label_a
    b2, q2 = label_b
    sb = wedge_sign_oracle(b1, b2)
    sq = wedge_sign_oracle(q1, q2)
    if sb == 0 or sq == 0:
        return None
    sign = sb * sq * (-1) ** (len(b2) * len(q1))
    return tuple(sorted(b1 + b2)), tuple(sorted(q1 + q2)), sign


def count_torsion_fixed_points(g_rows, denominator):
    """Number of x in ((1/m)Z/Z)^n with (g-1)x integral."""
    n = len(g_rows)
    gm1 = [[g_rows[i][j] - (1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    m = denominator
    count = 0
    for combo in iter_product(range(m), repeat=n):
        if all(sum(a * c for a, c in zip(row, combo)) % m == 0 for row in gm1):
            count += 1
    return count


def quotient_dimension_oracle(g_rows, h_rows):
    """dim of V^4 modulo (v,v,v,v), (v,gv,0,0), (0,0,v,hv) by rank count."""
    d = len(g_rows)
    rows = []
    for i in range(d):
        e = [Fraction(1) if j == i else Fraction(0) for j in range(d)]
        gcol = [Fraction(g_rows[k][i]) for k in range(d)]
        hcol = [Fraction(h_rows[k][i]) for k in range(d)]
        zero = [Fraction(0)] * d
        rows.append(e + e + e + e)
        rows.append(e + gcol + zero + zero)
        rows.append(zero + zero + e + hcol)
    # relations interleaved above; rank is order-independent
    return 4 * d - rank_oracle(rows)

