"""Exact Smith normal form over the integers, with unimodular transforms."""

from __future__ import annotations


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix):
    """Diagonalise an integer matrix A.

    Returns ``(d, u, uinv, v)`` with ``u @ A @ v == d``, where ``u`` and
    ``v`` are unimodular, ``uinv`` is the exact inverse of ``u``, and the
    diagonal of ``d`` is a nonnegative divisibility chain
    ``d[0][0] | d[1][1] | ...``.
    """
    a = [list(map(int, row)) for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    for row in a:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    u = _identity(nrows)
    uinv = _identity(nrows)
    v = _identity(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in uinv:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, c):
        # row_i += c * row_j
        ai, aj = a[i], a[j]
        for k in range(ncols):
            ai[k] += c * aj[k]
        ui, uj = u[i], u[j]
        for k in range(nrows):
            ui[k] += c * uj[k]
        for r in uinv:
            r[j] -= c * r[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in uinv:
            r[i] = -r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_col(i, j, c):
        # col_i += c * col_j
        for r in a:
            r[i] += c * r[j]
        for r in v:
            r[i] += c * r[j]

    def negate_col(i):
        for r in a:
            r[i] = -r[i]
        for r in v:
            r[i] = -r[i]

    def pivot_at(t):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(nrows, ncols):
        pos = pivot_at(t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        if a[t][t] < 0:
            negate_row(t)
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry
            culprit = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t]:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            add_row(t, culprit, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    d = [row[:] for row in a]
    return d, u, uinv, v


def diagonal_invariants(d):
    """Nontrivial diagonal entries (> 1) of a Smith form, in chain order."""
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i] not in (0, 1):
            out.append(d[i][i])
    return out


def solve_homogeneous_mod_p(rows, p):
    """Basis of the nullspace of an integer matrix over the field Z/p.

    ``rows`` is a list of equation coefficient rows; returns a list of basis
    vectors (tuples of residues) of the solution space.
    """
    if not rows:
        return []
    m = [[x % p for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0])
    pivots = {}
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for c, row in pivots.items():
            vec[c] = (-m[row][f]) % p
        basis.append(tuple(vec))
    return basis
