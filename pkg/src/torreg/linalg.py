"""Exact integer/rational linear algebra used throughout the package.

Vectors handed to :func:`rank` are sparse dicts ``{index: value}`` with int or
Fraction values; everything else works on small dense integer matrices given
as lists of rows.
"""

from fractions import Fraction
from math import gcd


def _integral(vec):
    """Scale a sparse rational vector to a primitive integer vector."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // gcd(den, v.denominator)
    out = {}
    g = 0
    for k, v in vec.items():
        iv = int(v * den)
        if iv:
            out[k] = iv
            g = gcd(g, iv)
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def rank(vectors, p=None):
    """Dimension of the span of sparse vectors over Q, or over F_p if ``p``."""
    pivots = {}
    for vec in vectors:
        if p is None:
            row = _integral(vec)
        else:
            row = {k: int(v % p) if not isinstance(v, Fraction)
                   else (v.numerator * pow(v.denominator, -1, p)) % p
                   for k, v in vec.items()}
            row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                if p is not None:
                    inv = pow(row[c], -1, p)
                    row = {k: (v * inv) % p for k, v in row.items()}
                pivots[c] = row
                break
            a, b = piv[c], row[c]
            if p is None:
                new = {k: v * a for k, v in row.items()}
                for k, v in piv.items():
                    nv = new.get(k, 0) - v * b
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = _integral(new) if new else new
            else:
                new = dict(row)
                for k, v in piv.items():
                    nv = (new.get(k, 0) - v * b) % p
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = new
    return len(pivots)


def dense_rank(matrix, p=None):
    """Rank of a dense matrix (list of rows)."""
    return rank(({j: v for j, v in enumerate(row) if v} for row in matrix), p)


def determinant(matrix):
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _xgcd(a, b):
    if a and b % a == 0:
        return abs(a), (1 if a > 0 else -1), 0
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(matrix):
    """Return ``(U, D, V)`` with ``U * A * V == D`` diagonal, U and V unimodular.

    The diagonal entries satisfy the usual divisibility chain and are
    nonnegative.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    a = [list(map(int, row)) for row in matrix]
    u = identity(m)
    v = identity(n)

    def row_combine(i, j, p, q, r, s):
        # rows (i, j) <- (p*row_i + q*row_j, r*row_i + s*row_j), det = +-1
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [p * x + q * y for x, y in zip(ri, rj)]
            mat[j] = [r * x + s * y for x, y in zip(ri, rj)]

    def col_combine(i, j, p, q, r, s):
        for mat in (a, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = p * x + q * y
                row[j] = r * x + s * y

    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        u[t], u[pi] = u[pi], u[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        for row in v:
            row[t], row[pj] = row[pj], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    g, x, y = _xgcd(a[t][t], a[i][t])
                    p_, q_ = a[t][t] // g, a[i][t] // g
                    row_combine(t, i, x, y, -q_, p_)
            for j in range(t + 1, n):
                if a[t][j]:
                    g, x, y = _xgcd(a[t][t], a[t][j])
                    p_, q_ = a[t][t] // g, a[t][j] // g
                    col_combine(t, j, x, y, -q_, p_)
                    done = False
            if done:
                piv = a[t][t]
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                       if a[i][j] % piv]
                if bad:
                    i, _ = bad[0]
                    # fold the offending row into row t and restart the sweep
                    row_combine(t, i, 1, 1, 0, 1)
                    done = False
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def inverse_unimodular(matrix):
    """Inverse of a square integer matrix with determinant +-1."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def solve_rational(matrix, rhs):
    """Solve a square system exactly; returns None when singular."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n] for row in aug]


def primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)


def kernel_vector(rows, dim):
    """Integer generator of the kernel of a (dim-1) x dim matrix of full rank.

    Uses signed maximal minors (generalized cross product); returns the zero
    vector when the rows are dependent.
    """
    out = []
    for k in range(dim):
        minor = [[row[j] for j in range(dim) if j != k] for row in rows]
        out.append((-1) ** k * determinant(minor))
    return primitive(out)


def orthogonal_complement(vectors, dim):
    """Integer basis of the orthogonal complement of the span of ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    # Gaussian elimination to reduced row echelon form over Q.
    mat = [[Fraction(x) for x in row] for row in rows]
    pivcols = []
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivcols.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivcols]
    for fcol in free:
        vec = [Fraction(0)] * dim
        vec[fcol] = Fraction(1)
        for i, pc in enumerate(pivcols):
            vec[pc] = -mat[i][fcol]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in vec]))
    return basis


def span_dimension(vectors):
    return dense_rank([list(v) for v in vectors])
