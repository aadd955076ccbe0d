"""Reference computations that do not touch ringforge.

Elements of the order are handled as polynomials in a root ``zeta`` of
``f(zeta) = sum a_k zeta^(n+1-k)`` with Fraction coefficients (lowest degree
first), reduced modulo ``f``.  ``phi_j = sum_{k<=j} a_k zeta^(j+1-k)``.
"""

from __future__ import annotations

from fractions import Fraction


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def modulus(a):
    """``f`` low-first."""
    return [Fraction(c) for c in reversed(a)]


def reduce_mod(g, f):
    g = [Fraction(c) for c in g]
    n = len(f) - 1
    lead = f[-1]
    for deg in range(len(g) - 1, n - 1, -1):
        c = g[deg]
        if c:
            q = c / lead
            for k in range(n + 1):
                g[deg - n + k] -= q * f[k]
    return (g + [Fraction(0)] * n)[:n]


def pmul(u, v):
    out = [Fraction(0)] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                out[i + j] += x * y
    return out


def phi(a, j):
    """``phi_j`` as a zeta polynomial (``phi_0 = 1``)."""
    n = len(a) - 1
    out = [Fraction(0)] * n
    if j == 0:
        out[0] = Fraction(1)
        return out
    for k in range(1, j + 1):
        out[j + 1 - k] += a[k - 1]
    return out


def to_zeta(a, coords):
    n = len(a) - 1
    out = [Fraction(0)] * n
    for j, x in enumerate(coords):
        for k, c in enumerate(phi(a, j)):
            out[k] += x * c
    return out


def from_zeta(a, g):
    """Coordinates in the ``phi`` basis; the change of basis is upper triangular."""
    n = len(a) - 1
    g = list(g)
    coords = [Fraction(0)] * n
    for j in range(n - 1, -1, -1):
        ph = phi(a, j)
        c = g[j] / ph[j]
        coords[j] = c
        for k in range(n):
            g[k] -= c * ph[k]
    assert not any(g)
    return coords


def product(a, u, v):
    f = modulus(a)
    return from_zeta(a, reduce_mod(pmul(to_zeta(a, u), to_zeta(a, v)), f))


def multiplication_matrix(a, coords):
    """Multiplication by the element in the power basis ``1, zeta, ...``."""
    n = len(a) - 1
    f = modulus(a)
    alpha = to_zeta(a, coords)
    cols = []
    for k in range(n):
        e = [Fraction(0)] * n
        e[k] = Fraction(1)
        cols.append(reduce_mod(pmul(alpha, e), f))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def det(M):
    M = [list(map(Fraction, r)) for r in M]
    n = len(M)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        out *= M[c][c]
        for r in range(c + 1, n):
            q = M[r][c] / M[c][c]
            for k in range(c, n):
                M[r][k] -= q * M[c][k]
    return sign * out


def norm(a, coords):
    return det(multiplication_matrix(a, coords))


def trace(a, coords):
    M = multiplication_matrix(a, coords)
    return sum(M[i][i] for i in range(len(M)))


def compose(a, p, q, r, s):
    """Coefficients of ``B(p x + q y, r x + s y)`` by direct expansion."""
    n = len(a) - 1
    out = [0] * (n + 1)
    for k, c in enumerate(a):
        # c * (p x + q y)^(n-k) * (r x + s y)^k, coefficient lists in powers of y
        poly = [c]
        for _ in range(n - k):
            poly = _mul_lin(poly, p, q)
        for _ in range(k):
            poly = _mul_lin(poly, r, s)
        for i, x in enumerate(poly):
            out[i] += x
    return out


def _mul_lin(poly, u, v):
    """Multiply a y-power coefficient list by ``u x + v y``."""
    out = [0] * (len(poly) + 1)
    for i, x in enumerate(poly):
        out[i] += x * u
        out[i + 1] += x * v
    return out
