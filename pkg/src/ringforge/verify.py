"""Symbolic verification of the parametrisation identity and the quartic
covariant relations.

The identity checked for each ``n`` is

    a1^(n-1) A^-1 Q B  ==  N^(n-1) T,

with ``N`` the arithmetic matrix of ``a1 p - r phi_1``.  ``a1^(n-1) A^-1`` is
computed exactly by triangular back substitution and ``T`` is multiplied on
the right instead of inverted, so every entry stays in
``ZZ[a1..a{n+1}, p, q, r, s]``.
"""

from __future__ import annotations

import hashlib
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arithmat import OrderContext, arithmetic_matrix, arithmetic_matrix_entries
from .exactalg import (
    PolyMatrix,
    PolyRing,
    Polynomial,
    Scalar,
    det_fraction_free,
    matrix_mul,
    matrix_power,
    triangular_scaled_inverse,
)
from .forms import BinaryForm
from .param import ParamSystem, standard_ring


def special_matrix(n: int, ring: PolyRing | None = None) -> PolyMatrix:
    """Arithmetic matrix of ``a1 p - r phi_1``, written out directly."""
    if n < 3:
        raise ValueError("special_matrix needs n >= 3")
    ring = ring or standard_ring(n)
    a = ring.gens(*[f"a{k}" for k in range(1, n + 2)])
    p, r = ring.gens("p", "r")
    rows = [[ring.zero()] * n for _ in range(n)]
    rows[0][0] = p * a[0]
    rows[0][n - 1] = r * a[0] * a[n]
    rows[1][0] = -r
    rows[1][1] = p * a[0] + r * a[1]
    for j in range(2, n):
        rows[1][j] = r * a[j]
    for k in range(2, n):
        rows[k][k] = p * a[0]
        rows[k][k - 1] = -r * a[0]
    return PolyMatrix.from_rows(ring, rows)


def special_matrix_from_arithmetic(n: int, ring: PolyRing | None = None) -> PolyMatrix:
    """The same matrix through the general arithmetic-matrix formulas."""
    ring = ring or standard_ring(n)
    ctx = OrderContext.symbolic(n, ring=ring)
    p, r = ring.gens("p", "r")
    coords = [ctx.coeffs[0] * p, -r] + [ring.zero()] * (n - 2)
    return arithmetic_matrix(ctx, coords)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class Certificate:
    n: int
    status: str
    lhs_terms: int
    rhs_terms: int
    digest: str
    lhs_digest: str
    rhs_digest: str
    millis: float = field(default=0.0, compare=False)
    failure: dict | None = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "n": self.n,
            "status": self.status,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "digest": self.digest,
            "lhs_digest": self.lhs_digest,
            "rhs_digest": self.rhs_digest,
        }
        if self.failure is not None:
            out["failure"] = self.failure
        if timing:
            out["meta"] = {"millis": round(self.millis, 3)}
        return out


@dataclass
class IdentitySides:
    system: ParamSystem
    scaled_A_inverse: PolyMatrix
    N: PolyMatrix
    N_power: PolyMatrix
    lhs: PolyMatrix
    rhs: PolyMatrix


def identity_sides(n: int) -> IdentitySides:
    """Both sides of the cross-multiplied identity, fully symbolic."""
    if n < 3:
        raise ValueError("the identity is only defined for n >= 3")
    system = ParamSystem.symbolic(n)
    ring = system.ring
    a1 = system.a[0]
    scaled = triangular_scaled_inverse(system.A, a1 ** (n - 1))
    lhs = matrix_mul(scaled, matrix_mul(system.Q, system.B))
    N = special_matrix(n, ring)
    Npow = matrix_power(N, n - 1)
    rhs = matrix_mul(Npow, system.T)
    return IdentitySides(system, scaled, N, Npow, lhs, rhs)


def qbt_inverse(n: int, sides: IdentitySides | None = None) -> PolyMatrix:
    """``Q B T^-1``, obtained exactly as ``A N^(n-1) / a1^(n-1)``."""
    sides = sides or identity_sides(n)
    system = sides.system
    a1pow = system.a[0] ** (n - 1)
    return matrix_mul(system.A, sides.N_power).map(lambda e: e.exact_div(a1pow))


def verify_identity(n: int) -> Certificate:
    """Certify the identity for one ``n``; a failure carries the first nonzero difference."""
    start = time.perf_counter()
    sides = identity_sides(n)
    lhs, rhs = sides.lhs, sides.rhs
    failure = None
    for i in range(n):
        for j in range(n):
            diff = lhs[i, j] - rhs[i, j]
            if diff:
                failure = {"row": i + 1, "col": j + 1, "difference": str(diff)}
                break
        if failure:
            break
    lser, rser = lhs.serialize(), rhs.serialize()
    millis = (time.perf_counter() - start) * 1000.0
    return Certificate(
        n=n,
        status="failed" if failure else "verified",
        lhs_terms=lhs.term_count(),
        rhs_terms=rhs.term_count(),
        digest=_digest(lser + "\n==\n" + rser),
        lhs_digest=_digest(lser),
        rhs_digest=_digest(rser),
        millis=millis,
        failure=failure,
    )


def _numeric_sides(n: int, a: Sequence[int], pqrs: Sequence[int]) -> tuple[list[list[int]], list[list[int]]]:
    system = ParamSystem.build(list(a), tuple(pqrs))
    scaled = triangular_scaled_inverse(system.A, a[0] ** (n - 1))
    lhs = matrix_mul(scaled, matrix_mul(system.Q, system.B))
    ctx_rows = arithmetic_matrix_entries(list(a), [a[0] * pqrs[0], -pqrs[2]] + [0] * (n - 2))
    N = PolyMatrix.from_rows(system.ring, ctx_rows)
    rhs = matrix_mul(matrix_power(N, n - 1), system.T)
    return lhs.evaluate({}), rhs.evaluate({})


def evaluation_precheck(n: int, points: int = 50, seed: int = 0, bound: int = 50) -> list[dict]:
    """Evaluate both sides at random integer points; return the points where they differ.

    Evaluation is a ring homomorphism, so any mismatch refutes the identity and
    agreement at many points is strong (not conclusive) evidence for it.
    ``a1`` is drawn nonzero because the left side divides by it.
    """
    rng = random.Random(seed)
    bad = []
    for _ in range(points):
        a = [rng.randint(-bound, bound) for _ in range(n + 1)]
        while a[0] == 0:
            a[0] = rng.randint(-bound, bound)
        pqrs = [rng.randint(-bound, bound) for _ in range(4)]
        lhs, rhs = _numeric_sides(n, a, pqrs)
        if lhs != rhs:
            bad.append({"a": a, "pqrs": pqrs})
    return bad


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RINGFORGE_THREADS", "1")))
    except ValueError:
        return 1


def verify_range(ns: Iterable[int], workers: int | None = None) -> list[Certificate]:
    """Certificates for several ``n``, optionally in worker processes (``RINGFORGE_THREADS``)."""
    ns = list(ns)
    workers = _threads() if workers is None else workers
    if workers <= 1 or len(ns) <= 1:
        return [verify_identity(n) for n in ns]
    with ProcessPoolExecutor(max_workers=min(workers, len(ns))) as pool:
        return list(pool.map(verify_identity, ns))


# -- quartic covariants ------------------------------------------------------

QUARTIC_NAMES = ("a", "b", "c", "d", "e")


class CovariantDerivationError(AssertionError):
    pass


@dataclass
class QuarticCovariants:
    ring: PolyRing
    I: Polynomial
    J: Polynomial
    G: Polynomial
    H: Polynomial
    F: Polynomial
    norm_equation: Polynomial = field(repr=False)

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("I", "J", "G", "H", "F")}


def _quartic_coeffs(form: BinaryForm | None) -> tuple[PolyRing, tuple[Polynomial, ...]]:
    if form is None:
        ring = PolyRing(QUARTIC_NAMES + ("t", "x", "y", "z"))
        return ring, ring.gens(*QUARTIC_NAMES)
    if form.degree != 4:
        raise ValueError("quartic covariants need a degree 4 form")
    ring = PolyRing(("t", "x", "y", "z"))
    return ring, tuple(ring(c) for c in form.coeffs)


def invariants_IJ(coeffs: Sequence[Scalar]) -> tuple[Scalar, Scalar]:
    a, b, c, d, e = coeffs
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c ** 3
    return I, J


def printed_G(coeffs: Sequence[Polynomial], x, y, z) -> Polynomial:
    a, b, c, d, e = coeffs
    return ((3 * b ** 2 - 8 * a * c) * x ** 2 + (4 * b * c - 24 * a * d) * x * y
            + (4 * c ** 2 - 8 * b * d - 16 * a * e) * y ** 2 + (2 * b * d - 32 * a * e) * x * z
            + (4 * c * d - 24 * b * e) * y * z + (3 * d ** 2 - 8 * c * e) * z ** 2)


def quartic_covariants(form: BinaryForm | None = None) -> QuarticCovariants:
    """I, J and the ternary forms G, H, F of the quartic norm equation.

    ``256 * norm(u + x phi_1 + y phi_2 + z phi_3)`` is rewritten in terms of
    the trace ``t`` and matched against ``t^4 - 2 G t^2 - 8 H t + F``.  With
    ``form=None`` everything is symbolic in ``a..e``.
    """
    ring, coeffs = _quartic_coeffs(form)
    t, x, y, z = ring.gens("t", "x", "y", "z")
    ctx = OrderContext.from_coeffs(coeffs, ring)
    # 4u = t - trace(N(0, x, y, z)); N is linear in the coordinates, so N(4u, 4x, 4y, 4z) = 4 N
    rest = arithmetic_matrix(ctx, [ring.zero(), x, y, z]).trace()
    four_u = t - rest
    N4 = arithmetic_matrix(ctx, [four_u, 4 * x, 4 * y, 4 * z])
    norm256 = det_fraction_free(N4, method="cofactor")
    by_t = norm256.coefficients_in("t")
    if by_t.get(4) != 1:
        raise CovariantDerivationError(f"t^4 coefficient is {by_t.get(4)}, expected 1")
    if by_t.get(3, ring.zero()):
        raise CovariantDerivationError("t^3 coefficient does not vanish")
    G = (-by_t.get(2, ring.zero())).exact_div(2)
    H = (-by_t.get(1, ring.zero())).exact_div(8)
    F = by_t.get(0, ring.zero())
    expected = printed_G(coeffs, x, y, z)
    if G != expected:
        raise CovariantDerivationError(f"derived G = {G} differs from the known form {expected}")
    I, J = invariants_IJ(coeffs)
    return QuarticCovariants(ring, ring(I), ring(J), G, H, F, norm256)


@dataclass
class SyzygyResult:
    holds: bool
    difference: Polynomial

    def to_json(self) -> dict:
        return {"status": "holds" if self.holds else "fails", "difference": str(self.difference)}


def syzygy_check(form: BinaryForm | None = None, cov: QuarticCovariants | None = None) -> SyzygyResult:
    """Check ``g4^3 - 48 g4 I v^2 - 64 J v^3 == 27 g6^2`` in ``ZZ[a..e][x]``.

    ``g4 = G(x^2, x, 1)``, ``g6 = H(x^2, x, 1)`` and ``v = V(x, 1)``.
    """
    cov = cov or quartic_covariants(form)
    ring = cov.ring
    x = ring.gen("x")
    sub = {"x": x ** 2, "y": x, "z": 1}
    g4 = cov.G.substitute(sub)
    g6 = cov.H.substitute(sub)
    coeffs = ring.gens(*QUARTIC_NAMES) if form is None else tuple(ring(c) for c in form.coeffs)
    v = sum((c * x ** (4 - k) for k, c in enumerate(coeffs)), ring.zero())
    lhs = g4 ** 3 - 48 * g4 * cov.I * v ** 2 - 64 * cov.J * v ** 3
    rhs = 27 * g6 ** 2
    diff = lhs - rhs
    return SyzygyResult(not diff, diff)
