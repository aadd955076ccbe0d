"""Arithmetic matrices for the order attached to a binary form.

For ``B = (a_1, ..., a_{n+1})`` with root ``zeta`` of ``B(x, 1)`` the order
has basis ``1, phi_1, ..., phi_{n-1}`` where
``phi_j = a_1 zeta^j + a_2 zeta^(j-1) + ... + a_j zeta``.  The arithmetic
matrix of ``alpha = x_0 + x_1 phi_1 + ...`` is the matrix of multiplication
by ``alpha`` in that basis; its first column is the coordinate vector of
``alpha`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple, Sequence

from .exactalg import PolyMatrix, PolyRing, Polynomial, Scalar, det_fraction_free
from .forms import BinaryForm

ZZ = PolyRing(())


class OrderContext:
    """The order of a binary form, numeric or with symbolic coefficients.

    ``coeffs`` holds ``a_1..a_{n+1}`` as ints (numeric context) or as
    polynomials of ``ring`` (symbolic context).
    """

    def __init__(self, form: BinaryForm | Sequence[int]):
        if not isinstance(form, BinaryForm):
            form = BinaryForm(form)
        form.require_nondegenerate()
        self.form = form
        self.coeffs: tuple[Scalar, ...] = form.coeffs
        self.ring = ZZ

    @classmethod
    def symbolic(cls, n: int, names: Sequence[str] | None = None,
                 extra: Sequence[str] = (), ring: PolyRing | None = None) -> OrderContext:
        """Context whose coefficients are indeterminates (default ``a1..a{n+1}``).

        ``extra`` names are appended to the ring, e.g. coordinate variables.
        """
        if n < 2:
            raise ValueError("rank must be at least 2")
        if names is None:
            names = [f"a{k}" for k in range(1, n + 2)]
        if len(names) != n + 1:
            raise ValueError(f"need {n + 1} coefficient names")
        if ring is None:
            ring = PolyRing(list(names) + [e for e in extra if e not in names])
        ctx = cls.__new__(cls)
        ctx.form = None
        ctx.ring = ring
        ctx.coeffs = tuple(ring.gen(name) for name in names)
        return ctx

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Scalar], ring: PolyRing) -> OrderContext:
        """Context over arbitrary polynomial coefficients (e.g. those of ``B o M``)."""
        coeffs = tuple(ring(c) for c in coeffs)
        if not coeffs[0] or not coeffs[-1]:
            raise ValueError("a_1 * a_{n+1} must be nonzero")
        ctx = cls.__new__(cls)
        ctx.form = None
        ctx.ring = ring
        ctx.coeffs = coeffs
        return ctx

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_numeric(self) -> bool:
        return self.form is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderContext):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def __repr__(self) -> str:
        return f"OrderContext({[str(c) for c in self.coeffs]})"

    def element(self, coords: Sequence[int]) -> RingElement:
        return RingElement(self, coords)

    def one(self) -> RingElement:
        return RingElement(self, [1] + [0] * (self.n - 1))

    def basis(self, j: int) -> RingElement:
        """``phi_j`` (``phi_0 = 1``)."""
        coords = [0] * self.n
        coords[j] = 1
        return RingElement(self, coords)


@dataclass(frozen=True, eq=False)
class RingElement:
    ctx: OrderContext
    coords: tuple[int, ...]

    def __init__(self, ctx: OrderContext, coords: Sequence[int]):
        coords = tuple(coords)
        if len(coords) != ctx.n:
            raise ValueError(f"expected {ctx.n} coordinates, got {len(coords)}")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coords", coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ctx == other.ctx and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.ctx, self.coords))

    def __add__(self, other: RingElement) -> RingElement:
        return element_add(self, other)

    def __mul__(self, other: RingElement) -> RingElement:
        return element_mul(self, other)

    def to_json(self) -> dict:
        return {"coords": [int(c) for c in self.coords]}


def _sum(terms) -> Scalar:
    total: Scalar = 0
    for t in terms:
        if t:
            total = total + t
    return total


def arithmetic_matrix_entries(a: Sequence[Scalar], x: Sequence[Scalar]) -> list[list[Scalar]]:
    """Entries of the arithmetic matrix as nested lists of scalars.

    ``a`` is ``(a_1, ..., a_{n+1})`` and ``x`` is ``(x_0, ..., x_{n-1})``.
    Subscripts falling outside those ranges contribute zero.
    """
    n = len(a) - 1
    if len(x) != n:
        raise ValueError(f"expected {n} coordinates, got {len(x)}")

    def X(t: int) -> Scalar:
        return x[t] if 0 <= t < n else 0

    def A(k: int) -> Scalar:
        return a[k - 1] if 1 <= k <= n + 1 else 0

    rows: list[list[Scalar]] = []
    for i in range(1, n + 1):
        row: list[Scalar] = []
        for j in range(1, n + 1):
            if j == 1:
                row.append(x[i - 1])
            elif i == 1:
                s = _sum(A(k) * X(k + n - j) for k in range(1, j))
                row.append(-A(n + 1) * s if s else 0)
            elif i > j:
                row.append(_sum(A(k) * X(k + i - j - 1) for k in range(1, j)))
            else:
                top = min(n - i + j, n + 1)
                s = _sum(A(k) * X(k + i - j - 1) for k in range(j, top + 1))
                row.append((x[0] if i == j else 0) - s)
        rows.append(row)
    return rows


def arithmetic_matrix(ctx: OrderContext, elem: RingElement | Sequence[Scalar]) -> PolyMatrix:
    """The n x n arithmetic matrix of ``elem``.

    ``elem`` may be a :class:`RingElement` or any coordinate sequence, including
    polynomials of ``ctx.ring`` for the fully symbolic matrix.
    """
    coords = elem.coords if isinstance(elem, RingElement) else tuple(elem)
    if isinstance(elem, RingElement) and elem.ctx != ctx:
        raise ValueError("element belongs to a different order")
    return PolyMatrix.from_rows(ctx.ring, arithmetic_matrix_entries(ctx.coeffs, coords))


def _same_ctx(alpha: RingElement, beta: RingElement) -> OrderContext:
    if alpha.ctx != beta.ctx:
        raise ValueError("elements belong to different orders")
    return alpha.ctx


def element_add(alpha: RingElement, beta: RingElement) -> RingElement:
    ctx = _same_ctx(alpha, beta)
    return RingElement(ctx, [u + v for u, v in zip(alpha.coords, beta.coords)])


def mat_vec(rows: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    return [_sum(r * c for r, c in zip(row, v) if r and c) for row in rows]


def multiply_coords(a: Sequence[Scalar], u: Sequence[Scalar], v: Sequence[Scalar]) -> list[Scalar]:
    """Coordinates of ``u * v`` in the order of ``a``: the arithmetic matrix of ``u`` applied to ``v``."""
    return mat_vec(arithmetic_matrix_entries(a, u), v)


def element_mul(alpha: RingElement, beta: RingElement) -> RingElement:
    ctx = _same_ctx(alpha, beta)
    return RingElement(ctx, multiply_coords(ctx.coeffs, alpha.coords, beta.coords))


def trace(alpha: RingElement) -> int:
    rows = arithmetic_matrix_entries(alpha.ctx.coeffs, alpha.coords)
    return _sum(rows[i][i] for i in range(len(rows)))


def norm(alpha: RingElement) -> int:
    """Determinant of the arithmetic matrix, by fraction-free elimination."""
    det = det_fraction_free(arithmetic_matrix(alpha.ctx, alpha), method="bareiss")
    return int(det) if alpha.ctx.is_numeric else det


class InverseElement(NamedTuple):
    """``1/alpha = (c_0 + c_1 phi_1 + ...) / denom`` with ``denom > 0`` and gcd 1."""

    coords: tuple[int, ...]
    denom: int


def element_inverse(alpha: RingElement) -> InverseElement:
    """``1/alpha`` as first adjugate column over the determinant, reduced."""
    N = arithmetic_matrix(alpha.ctx, alpha)
    det = int(det_fraction_free(N, method="bareiss"))
    if det == 0:
        raise ZeroDivisionError("element has norm zero and is not invertible")
    n = N.rows
    col = []
    for i in range(n):
        minor = int(det_fraction_free(N.minor_matrix(0, i), method="bareiss"))
        col.append(minor if i % 2 == 0 else -minor)
    g = det
    for c in col:
        g = gcd(g, c)
    g = abs(g)
    if det < 0:
        g = -g
    return InverseElement(tuple(c // g for c in col), det // g)


# -- structure constants -----------------------------------------------------


@dataclass(frozen=True)
class StructureConstants:
    """Multiplication table of a rank-n ring with basis ``e_0 = 1, e_1, ..., e_{n-1}``.

    ``table[(i, j)]`` for ``1 <= i <= j <= n-1`` is the coordinate vector of
    ``e_i e_j``.
    """

    n: int
    table: dict

    def product(self, i: int, j: int) -> tuple[Scalar, ...]:
        if i == 0 or j == 0:
            k = j if i == 0 else i
            return tuple(1 if t == k else 0 for t in range(self.n))
        return self.table[(i, j) if i <= j else (j, i)]

    def multiply(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> list[Scalar]:
        out: list[Scalar] = [0] * self.n
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                for k, w in enumerate(self.product(i, j)):
                    if w:
                        out[k] = out[k] + c * w
        return out

    def unit(self, k: int) -> list[int]:
        return [1 if t == k else 0 for t in range(self.n)]

    def is_symmetric(self) -> bool:
        return all((min(i, j), max(i, j)) in self.table for (i, j) in self.table)

    def associativity_defects(self) -> list[tuple[int, int, int]]:
        bad = []
        for i in range(1, self.n):
            for j in range(1, self.n):
                for k in range(1, self.n):
                    left = self.multiply(self.product(i, j), self.unit(k))
                    right = self.multiply(self.unit(i), self.product(j, k))
                    if any(l - r for l, r in zip(left, right)):
                        bad.append((i, j, k))
        return bad

    def is_associative(self) -> bool:
        return not self.associativity_defects()

    def translate(self, shifts: Sequence[Scalar]) -> StructureConstants:
        """Table in the basis ``e_i' = e_i + shifts[i-1]`` for ``i >= 1``."""
        if len(shifts) != self.n - 1:
            raise ValueError("need one shift per non-unit basis element")
        s = [0] + list(shifts)
        new = {}
        for i in range(1, self.n):
            for j in range(i, self.n):
                v = list(self.product(i, j))
                v[j] = v[j] + s[i]
                v[i] = v[i] + s[j]
                v[0] = v[0] + s[i] * s[j]
                # rewrite e_k = e_k' - s_k
                v[0] = v[0] - _sum(v[k] * s[k] for k in range(1, self.n))
                new[(i, j)] = tuple(v)
        return StructureConstants(self.n, new)

    def to_json(self) -> dict:
        rows = []
        for i in range(1, self.n):
            rows.append([[_jsonable(c) for c in self.product(i, j)] for j in range(1, self.n)])
        return {"n": self.n, "table": rows}

    @classmethod
    def from_json(cls, obj: dict) -> StructureConstants:
        n = obj["n"]
        rows = obj["table"]
        if len(rows) != n - 1 or any(len(r) != n - 1 for r in rows):
            raise ValueError("table must be (n-1) x (n-1)")
        table = {}
        for i in range(1, n):
            for j in range(1, n):
                vec = tuple(int(c) for c in rows[i - 1][j - 1])
                if len(vec) != n:
                    raise ValueError("coordinate vectors must have length n")
                if i <= j:
                    table[(i, j)] = vec
                elif table[(j, i)] != vec:
                    raise ValueError(f"table is not symmetric at ({j}, {i})")
        return cls(n, table)


def _jsonable(c: Scalar):
    if isinstance(c, Polynomial):
        return int(c) if c.is_constant() else str(c)
    return int(c)


def multiplication_table(ctx: OrderContext) -> StructureConstants:
    """Products ``phi_i phi_j`` read off the arithmetic matrix of ``phi_i``."""
    n = ctx.n
    table = {}
    for i in range(1, n):
        rows = arithmetic_matrix_entries(ctx.coeffs, [1 if t == i else 0 for t in range(n)])
        for j in range(i, n):
            table[(i, j)] = tuple(rows[k][j] for k in range(n))
    return StructureConstants(n, table)


def normalized_cubic_table(ctx: OrderContext) -> StructureConstants:
    """Cubic table in the basis ``1, phi_1, phi_2 + c`` where ``phi * psi`` is an integer."""
    if ctx.n != 3:
        raise ValueError("normalized_cubic_table needs a cubic form")
    return multiplication_table(ctx).translate([0, ctx.coeffs[2]])


class NotACubicRing(ValueError):
    pass


def cubic_form_coeffs_from_table(table: StructureConstants) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    """Coefficients ``(a, b, c, d)`` of a cubic form parametrising the ring.

    The basis is first shifted by integers so that ``omega * theta`` has no
    ``omega`` or ``theta`` component; the form is then read from the squares.
    """
    if table.n != 3:
        raise ValueError("cubic_form_from_order needs a rank 3 table")
    c0, c1, c2 = table.product(1, 2)
    shifted = table.translate([-c2, -c1])
    w11, w12, w13 = shifted.product(1, 1)
    w21, _, _ = shifted.product(1, 2)
    w31, w32, w33 = shifted.product(2, 2)
    a, b, c, d = w13, -w12, w33, -w32
    checks = [("w11 = -ac", w11 + a * c), ("w21 = -ad", w21 + a * d), ("w31 = -bd", w31 + b * d)]
    failed = [name for name, diff in checks if diff]
    if failed:
        raise NotACubicRing(f"consistency identities violated: {', '.join(failed)}")
    if not table.is_associative():
        raise NotACubicRing("multiplication table is not associative")
    return a, b, c, d


def cubic_form_from_order(table: StructureConstants) -> BinaryForm:
    return BinaryForm([int(c) for c in cubic_form_coeffs_from_table(table)])
