"""Change of basis between the orders of ``B`` and ``B o M``.

All builders accept the matrix ``M`` either as a :class:`UnimodularMatrix`
(integer output in the constant ring) or as four polynomials ``(p, q, r, s)``
of some ring, in which case everything is built symbolically.  Form
coefficients follow the same rule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .arithmat import ZZ, OrderContext, multiply_coords
from .exactalg import (
    PolyMatrix,
    PolyRing,
    Polynomial,
    Scalar,
    upoly_add,
    upoly_coeff,
    upoly_mul,
    upoly_pow,
    upoly_scale,
)
from .forms import BinaryForm, UnimodularMatrix, compose_coeffs


def standard_ring(n: int, extra: Sequence[str] = ()) -> PolyRing:
    """``ZZ[a1..a{n+1}, p, q, r, s, *extra]`` in the canonical variable order."""
    names = [f"a{k}" for k in range(1, n + 2)] + ["p", "q", "r", "s"]
    return PolyRing(names + [e for e in extra if e not in names])


def _matrix_scalars(M, ring: PolyRing | None) -> tuple[PolyRing, tuple[Polynomial, ...]]:
    if isinstance(M, UnimodularMatrix):
        ring = ring or ZZ
        return ring, tuple(ring(v) for v in M.as_tuple())
    p, q, r, s = M
    if ring is None:
        ring = next((v.ring for v in (p, q, r, s) if isinstance(v, Polynomial)), ZZ)
    return ring, tuple(ring(v) for v in (p, q, r, s))


def _form_scalars(form, ring: PolyRing) -> tuple[Polynomial, ...]:
    coeffs = form.coeffs if isinstance(form, (BinaryForm, OrderContext)) else form
    return tuple(ring(c) for c in coeffs)


def build_P(n: int, M, ring: PolyRing | None = None) -> PolyMatrix:
    """Entry (i, j) is the coefficient of x^(j-1) in (p + q x)^(n-1-i) (r + s x)^(i-1)."""
    if n < 3:
        raise ValueError("build_P needs n >= 3")
    ring, (p, q, r, s) = _matrix_scalars(M, ring)
    rows = []
    for i in range(1, n):
        poly = upoly_mul(upoly_pow([p, q], n - 1 - i), upoly_pow([r, s], i - 1))
        rows.append([upoly_coeff(poly, j) for j in range(n - 1)])
    return PolyMatrix.from_rows(ring, rows)


def build_Q(n: int, M, ring: PolyRing | None = None) -> PolyMatrix:
    """Entry (i, j) is the coefficient of z^(i-1) in (p - r z)^(n-j) (s z - q)^(j-1)."""
    if n < 3:
        raise ValueError("build_Q needs n >= 3")
    ring, (p, q, r, s) = _matrix_scalars(M, ring)
    cols = []
    for j in range(1, n + 1):
        poly = upoly_mul(upoly_pow([p, -r], n - j), upoly_pow([-q, s], j - 1))
        cols.append([upoly_coeff(poly, i) for i in range(n)])
    return PolyMatrix.from_rows(ring, [[cols[j][i] for j in range(n)] for i in range(n)])


def build_B_coeffs(form, M, ring: PolyRing | None = None) -> list[Polynomial]:
    """``b_1..b_{n+1}`` with ``sum b_i x^(i-1) = B(p + q x, r + s x)``."""
    ring, pqrs = _matrix_scalars(M, ring)
    return [ring(b) for b in compose_coeffs(_form_scalars(form, ring), *pqrs)]


def toeplitz_block(first: Sequence[Scalar], n: int, ring: PolyRing) -> PolyMatrix:
    """``[[1, 0...], [0, c1, c2, ...], [0, 0, c1, ...], ...]`` from ``first = (c1, c2, ...)``."""
    rows = [[1] + [0] * (n - 1)]
    for i in range(1, n):
        rows.append([0] * i + [first[j - i] for j in range(i, n)])
    return PolyMatrix.from_rows(ring, rows)


def build_A(form, ring: PolyRing | None = None) -> PolyMatrix:
    ring = ring or ZZ
    a = _form_scalars(form, ring)
    return toeplitz_block(a, len(a) - 1, ring)


def build_B(form, M, ring: PolyRing | None = None) -> PolyMatrix:
    ring, pqrs = _matrix_scalars(M, ring)
    b = build_B_coeffs(form, pqrs, ring)
    return toeplitz_block(b, len(b) - 1, ring)


def first_row_generator(form, M, ring: PolyRing | None = None) -> list[Polynomial]:
    """Coefficients of ``-q B_{n-1}(p + q x, r + s x) - a_{n+1} s (r + s x)^(n-1)``.

    ``B_{n-1}`` is the degree n-1 form with coefficients ``a_1..a_n``.  The
    list has ``n`` entries, ``t_{12}, ..., t_{1,n+1}``.
    """
    ring, (p, q, r, s) = _matrix_scalars(M, ring)
    a = _form_scalars(form, ring)
    n = len(a) - 1
    truncated = compose_coeffs(a[:n], p, q, r, s)
    gen = upoly_add(upoly_scale(truncated, -q), upoly_scale(upoly_pow([r, s], n - 1), -a[n] * s))
    return [ring(upoly_coeff(gen, k)) for k in range(n)]


def build_T(form, M, ring: PolyRing | None = None) -> PolyMatrix:
    """``T = [[1, t_12 .. t_1n], [0, m P]]`` with ``m = ps - qr``."""
    ring, (p, q, r, s) = _matrix_scalars(M, ring)
    a = _form_scalars(form, ring)
    n = len(a) - 1
    if n < 3:
        raise ValueError("build_T needs n >= 3")
    m = p * s - q * r
    first = first_row_generator(a, (p, q, r, s), ring)[: n - 1]  # t_{1,n+1} is dropped
    P = build_P(n, (p, q, r, s), ring)
    rows = [[ring.one()] + first]
    for i in range(n - 1):
        rows.append([ring.zero()] + [m * P[i, j] for j in range(n - 1)])
    return PolyMatrix.from_rows(ring, rows)


@dataclass
class ParamSystem:
    """All matrices attached to ``(B, M)``."""

    n: int
    ring: PolyRing
    a: tuple
    pqrs: tuple
    A: PolyMatrix = field(repr=False)
    B: PolyMatrix = field(repr=False)
    Q: PolyMatrix = field(repr=False)
    P: PolyMatrix = field(repr=False)
    T: PolyMatrix = field(repr=False)
    b: tuple = field(repr=False)

    @property
    def m(self) -> Polynomial:
        p, q, r, s = self.pqrs
        return p * s - q * r

    @classmethod
    def build(cls, form, M, ring: PolyRing | None = None) -> ParamSystem:
        ring, pqrs = _matrix_scalars(M, ring)
        a = _form_scalars(form, ring)
        n = len(a) - 1
        b = tuple(build_B_coeffs(a, pqrs, ring))
        return cls(
            n=n,
            ring=ring,
            a=a,
            pqrs=pqrs,
            A=toeplitz_block(a, n, ring),
            B=toeplitz_block(b, n, ring),
            Q=build_Q(n, pqrs, ring),
            P=build_P(n, pqrs, ring),
            T=build_T(a, pqrs, ring),
            b=b,
        )

    @classmethod
    def symbolic(cls, n: int, extra: Sequence[str] = ()) -> ParamSystem:
        ring = standard_ring(n, extra)
        a = ring.gens(*[f"a{k}" for k in range(1, n + 2)])
        return cls.build(a, ring.gens("p", "q", "r", "s"), ring)


def _t_rows(form: BinaryForm, M: UnimodularMatrix) -> list[list[int]]:
    T = build_T(form, M)
    return [[int(e) for e in T.row(i)] for i in range(T.rows)]


def transport_element(form: BinaryForm, M: UnimodularMatrix, coords: Sequence[int]) -> list[int]:
    """Image under the isomorphism from the order of ``B o M`` to the order of ``B``: ``T @ coords``."""
    if len(coords) != form.degree:
        raise ValueError(f"expected {form.degree} coordinates")
    T = _t_rows(form, M)
    return [sum(t * c for t, c in zip(row, coords)) for row in T]


def transport_coords_symbolic(T: PolyMatrix, coords: Sequence[Polynomial]) -> list[Polynomial]:
    return [sum((T[i, j] * coords[j] for j in range(T.cols) if T[i, j]), T.ring.zero())
            for i in range(T.rows)]


@dataclass
class IsomorphismReport:
    form: BinaryForm
    matrix: UnimodularMatrix
    trials: int
    passed: int
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.passed == self.trials and self.counterexample is None

    def to_json(self) -> dict:
        return {
            "form": self.form.to_json(),
            "matrix": self.matrix.to_json(),
            "trials": self.trials,
            "passed": self.passed,
            "status": "pass" if self.ok else "fail",
            "counterexample": self.counterexample,
        }


def isomorphism_check(form: BinaryForm, M: UnimodularMatrix, trials: int = 100,
                      seed: int = 0, bound: int = 10 ** 6) -> IsomorphismReport:
    """Check that ``lambda = T @`` is additive and multiplicative on random elements."""
    if M.det not in (1, -1):
        raise ValueError("M must have determinant +-1")
    form.require_nondegenerate()
    image = _composed_form(form, M)
    if not image.is_nondegenerate():
        raise ValueError(
            f"B o M = {list(image.coeffs)} has a vanishing end coefficient; choose a different M"
        )
    T = _t_rows(form, M)
    n = form.degree

    def lam(v):
        return [sum(t * c for t, c in zip(row, v)) for row in T]

    rng = random.Random(seed)
    passed = 0
    for trial in range(trials):
        alpha = [rng.randint(-bound, bound) for _ in range(n)]
        beta = [rng.randint(-bound, bound) for _ in range(n)]
        la, lb = lam(alpha), lam(beta)
        added = lam([x + y for x, y in zip(alpha, beta)])
        prod = lam(multiply_coords(image.coeffs, alpha, beta))
        expect = multiply_coords(form.coeffs, la, lb)
        if added != [x + y for x, y in zip(la, lb)] or prod != expect:
            return IsomorphismReport(form, M, trials, passed, {
                "trial": trial, "alpha": alpha, "beta": beta,
                "lambda_of_product": prod, "product_of_lambdas": expect,
            })
        passed += 1
    return IsomorphismReport(form, M, trials, passed)


def _composed_form(form: BinaryForm, M: UnimodularMatrix) -> BinaryForm:
    return BinaryForm([int(b) for b in compose_coeffs(form.coeffs, *M.as_tuple())])


def symbolic_homomorphism_defect(n: int) -> list[Polynomial]:
    """``lambda(alpha beta) - lambda(alpha) lambda(beta)`` with everything symbolic.

    Coordinates are ``x0..x{n-1}`` and ``y0..y{n-1}``; the form and ``M`` are
    generic.  An all-zero result proves multiplicativity for that ``n``.
    """
    xs = [f"x{i}" for i in range(n)]
    ys = [f"y{i}" for i in range(n)]
    system = ParamSystem.symbolic(n, extra=xs + ys)
    ring = system.ring
    alpha = ring.gens(*xs)
    beta = ring.gens(*ys)
    T = system.T
    product_in_image = multiply_coords(system.b, alpha, beta)
    lhs = transport_coords_symbolic(T, [ring(c) for c in product_in_image])
    la = transport_coords_symbolic(T, alpha)
    lb = transport_coords_symbolic(T, beta)
    rhs = multiply_coords(system.a, la, lb)
    return [ring(l) - ring(r) for l, r in zip(lhs, rhs)]
