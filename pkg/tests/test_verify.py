import json

import pytest
import sympy

import golden as G
from ringforge.exactalg import PolyMatrix
from ringforge.forms import BinaryForm
from ringforge.verify import (
    evaluation_precheck,
    identity_sides,
    qbt_inverse,
    quartic_covariants,
    special_matrix,
    special_matrix_from_arithmetic,
    syzygy_check,
    verify_identity,
    verify_range,
)

# term counts of either side, measured once and frozen
TERMS = {3: 48, 4: 194, 5: 646, 6: 1826}


def sympy_sides(n):
    """Both sides of the identity built straight from the definitions with sympy."""
    a = sympy.symbols(f"a1:{n + 2}")
    p, q, r, s, x, z = sympy.symbols("p q r s x z")
    m = p * s - q * r

    def toeplitz(c):
        M = sympy.zeros(n, n)
        M[0, 0] = 1
        for i in range(1, n):
            for j in range(i, n):
                M[i, j] = c[j - i]
        return M

    A = toeplitz(a)
    Bpoly = sympy.expand(sum(a[k] * (p + q * x) ** (n - k) * (r + s * x) ** k for k in range(n + 1)))
    B = toeplitz([Bpoly.coeff(x, k) for k in range(n + 1)])
    Q = sympy.Matrix(n, n, lambda i, j: sympy.expand((p - r * z) ** (n - 1 - j) * (s * z - q) ** j).coeff(z, i))
    gen = sympy.expand(-q * sum(a[k] * (p + q * x) ** (n - 1 - k) * (r + s * x) ** k for k in range(n))
                       - a[n] * s * (r + s * x) ** (n - 1))
    T = sympy.zeros(n, n)
    T[0, 0] = 1
    for j in range(1, n):
        T[0, j] = gen.coeff(x, j - 1)
    for i in range(1, n):
        row = sympy.expand((p + q * x) ** (n - 1 - i) * (r + s * x) ** (i - 1))
        for j in range(1, n):
            T[i, j] = m * row.coeff(x, j - 1)
    N = sympy.zeros(n, n)
    N[0, 0] = p * a[0]
    N[0, n - 1] = r * a[0] * a[n]
    N[1, 0] = -r
    N[1, 1] = p * a[0] + r * a[1]
    for j in range(2, n):
        N[1, j] = r * a[j]
    for k in range(2, n):
        N[k, k] = p * a[0]
        N[k, k - 1] = -r * a[0]
    lhs = (a[0] ** (n - 1) * A.inv()) * Q * B
    rhs = N ** (n - 1) * T
    return lhs.applyfunc(sympy.expand), rhs.applyfunc(sympy.expand)


@pytest.mark.parametrize("n", [3, 4])
def test_identity_against_sympy(n):
    lhs, rhs = sympy_sides(n)
    assert (lhs - rhs).applyfunc(sympy.expand) == sympy.zeros(n, n)
    sides = identity_sides(n)
    got = sympy.Matrix(n, n, lambda i, j: sympy.sympify(str(sides.lhs[i, j]).replace("^", "**")))
    assert (got - lhs).applyfunc(sympy.expand) == sympy.zeros(n, n)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_verify_identity(n):
    cert = verify_identity(n)
    assert cert.verified
    assert cert.lhs_terms == cert.rhs_terms == TERMS[n]
    assert cert.lhs_digest == cert.rhs_digest


def test_special_matrix_n3_and_dual_construction():
    sides = identity_sides(3)
    ring = sides.system.ring
    assert special_matrix(3, ring) == G.latex_matrix(ring, G.N3_SPECIAL)
    for n in range(3, 11):
        assert special_matrix(n) == special_matrix_from_arithmetic(n)


def test_n3_intermediates():
    sides = identity_sides(3)
    S, ring = sides.system, sides.system.ring
    assert S.A == G.latex_matrix(ring, G.N3_A)
    assert S.Q == G.latex_matrix(ring, G.N3_Q)
    assert S.B == G.latex_matrix(ring, G.N3_B)
    assert S.T[0, 1] == G.latex_poly(ring, G.N3_T12)
    assert S.T[0, 2] == G.latex_poly(ring, G.N3_T13)
    assert sides.N_power == G.latex_matrix(ring, G.N3_SPECIAL_SQ)
    assert sides.scaled_A_inverse == G.latex_matrix(ring, G.N3_SCALED_A_INV)
    printed = G.latex_matrix(ring, G.N3_QBT_INV)
    assert qbt_inverse(3, sides) == printed
    assert printed @ S.T == S.Q @ S.B


def test_n3_printed_T_inverse_holds_when_m_squared_is_one():
    sides = identity_sides(3)
    S, ring = sides.system, sides.system.ring
    Tinv = G.latex_matrix(ring, G.fill(G.N3_T_INV, u12=G.N3_U12, u13=G.N3_U13))
    defect = S.T @ Tinv - PolyMatrix.identity(ring, 3)
    assert not defect.is_zero()
    m = S.m
    assert all((m * m - 1).divides(defect[i, j]) for i in range(3) for j in range(3))


def test_n4_intermediates():
    sides = identity_sides(4)
    S, ring = sides.system, sides.system.ring
    assert sides.scaled_A_inverse == G.latex_matrix(ring, G.N4_SCALED_A_INV)
    assert S.Q == G.latex_matrix(ring, G.N4_Q)
    printed = G.latex_matrix(ring, G.N4_QBT_INV)
    assert qbt_inverse(4, sides) == printed
    assert printed @ S.T == S.Q @ S.B


def test_n5_blocks():
    sides = identity_sides(5)
    ring = sides.system.ring
    printed = G.hstack(G.latex_matrix(ring, G.N5_Z1), G.latex_matrix(ring, G.N5_Z2))
    assert qbt_inverse(5, sides) == printed
    assert printed @ sides.system.T == sides.system.Q @ sides.system.B


def test_n6_blocks():
    sides = identity_sides(6)
    ring = sides.system.ring
    printed = G.hstack(G.latex_matrix(ring, G.N6_Z1), G.latex_matrix(ring, G.N6_Z2),
                       G.latex_matrix(ring, G.N6_Z3))
    assert qbt_inverse(6, sides) == printed


def test_precheck_and_range():
    assert evaluation_precheck(5, points=20) == []
    certs = verify_range([3, 4], workers=1)
    assert [c.n for c in certs] == [3, 4] and all(c.verified for c in certs)


def test_certificate_json_is_deterministic():
    a = json.dumps(verify_identity(4).to_json())
    b = json.dumps(verify_identity(4).to_json())
    assert a == b
    assert "meta" not in json.loads(a)
    assert "millis" in verify_identity(3).to_json(timing=True)["meta"]


def test_symbolic_covariants_and_syzygy():
    cov = quartic_covariants()
    ring = cov.ring
    x, y, z = ring.gens("x", "y", "z")
    expected_G = sum((G.latex_poly(ring, c) * ring.parse(mono) for mono, c in G.QUARTIC_G_TERMS.items()),
                     ring.zero())
    assert cov.G == expected_G
    assert cov.I == G.latex_poly(ring, G.QUARTIC_I)
    assert cov.J == G.latex_poly(ring, G.QUARTIC_J)
    assert syzygy_check(cov=cov).holds


def test_covariant_norm_equation_against_sympy():
    coeffs = (2, -1, 3, 0, 5)
    cov = quartic_covariants(BinaryForm(coeffs))
    t, x, y, z = sympy.symbols("t x y z")
    zeta = sympy.symbols("zeta")
    f = sum(c * zeta ** (4 - k) for k, c in enumerate(coeffs))
    a, b, c = coeffs[:3]
    element = (x * a * zeta + y * (a * zeta ** 2 + b * zeta) + z * (a * zeta ** 3 + b * zeta ** 2 + c * zeta))
    # multiplication by the element on QQ[zeta]/(f) in the power basis
    fpoly = sympy.Poly(f, zeta, domain="QQ[x,y,z]")
    cols = [sympy.Poly(sympy.expand(element * zeta ** k), zeta, domain="QQ[x,y,z]").rem(fpoly) for k in range(4)]
    M = sympy.Matrix(4, 4, lambda i, j: cols[j].coeff_monomial(zeta ** i))
    tr = M.trace()
    # 4 u = t - trace of the non-unit part, and the matrix is linear in the coordinates
    expected = sympy.expand((4 * M + (t - tr) * sympy.eye(4)).det())
    got = sympy.sympify(str(cov.norm_equation).replace("^", "**"))
    assert sympy.expand(got - expected) == 0


def test_frozen_covariants_of_x4_plus_y4():
    cov = quartic_covariants(BinaryForm([1, 0, 0, 0, 1]))
    ring = cov.ring
    assert cov.H == ring.parse("32 x^2 y - 32 y z^2")
    assert cov.F == ring.parse("256 x^4 + 512 x^2 z^2 - 1024 x y^2 z + 256 y^4 + 256 z^4")
    assert cov.G == ring.parse("-32 x z - 16 y^2")
    assert (cov.I, cov.J) == (12, 0)
    assert syzygy_check(BinaryForm([1, 0, 0, 0, 1]), cov).holds
