"""Exact arithmetic kernel.

Sparse multivariate polynomials over the integers, dense matrices whose
entries are such polynomials, fraction-free determinants and exact scaled
inversion of upper triangular matrices.

Monomials are packed into a single Python int: variable ``i`` of the ring
owns bits ``[16*i, 16*i + 16)``.  The top bit of every field is a guard bit
which must stay clear, so exponents are limited to ``MAX_EXPONENT``.  Monomial
multiplication is then a single integer addition and divisibility is one
subtraction (the usual SWAR borrow trick).
"""

from __future__ import annotations

import heapq
import re
from typing import Callable, Iterable, Mapping, Sequence, Union

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
_FIELD_MASK = (1 << FIELD_BITS) - 1

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class InexactDivisionError(ArithmeticError):
    """Raised when a division that was required to be exact leaves a remainder."""


class ExponentOverflowError(OverflowError):
    pass


class PolyRing:
    """The ring ZZ[v_1, ..., v_k] over a fixed, ordered tuple of variable names.

    Two rings with the same names are interchangeable.  The variable order is
    the order given here and fixes the canonical text form.
    """

    __slots__ = ("names", "index", "guard")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not _IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.index = {name: i for i, name in enumerate(names)}
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(len(names)))

    def __repr__(self) -> str:
        return f"PolyRing({list(self.names)!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise ValueError("exponent vector has wrong length")
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise ExponentOverflowError(f"exponent {e} out of range")
            key |= e << (FIELD_BITS * i)
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> (FIELD_BITS * i)) & _FIELD_MASK for i in range(len(self.names)))

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return Polynomial(self, {0: 1})

    def const(self, c: int) -> Polynomial:
        c = int(c)
        return Polynomial(self, {0: c} if c else {})

    def gen(self, name: str) -> Polynomial:
        try:
            i = self.index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r} in {self!r}") from None
        return Polynomial(self, {1 << (FIELD_BITS * i): 1})

    def gens(self, *names: str) -> tuple[Polynomial, ...]:
        if not names:
            names = self.names
        return tuple(self.gen(n) for n in names)

    def monomial(self, exps: Mapping[str, int] | Sequence[int], coeff: int = 1) -> Polynomial:
        if isinstance(exps, Mapping):
            vec = [0] * len(self.names)
            for name, e in exps.items():
                vec[self.index[name]] += e
            exps = vec
        if not coeff:
            return self.zero()
        return Polynomial(self, {self.pack(exps): int(coeff)})

    def __call__(self, value: Union[int, "Polynomial", str]) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            return value.to_ring(self)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def extend(self, names: Iterable[str]) -> PolyRing:
        """A ring with ``names`` appended (names already present are skipped)."""
        extra = [n for n in names if n not in self.index]
        return PolyRing(self.names + tuple(extra))

    def parse(self, text: str) -> Polynomial:
        """Parse polynomial text such as ``"-d*(a*x + b y) + 3 p^2"``.

        Juxtaposition means multiplication, ``**`` is accepted for ``^``.
        """
        return _Parser(self, text).parse()


class Polynomial:
    """An immutable sparse polynomial with integer coefficients.

    ``terms`` maps packed exponent vectors to nonzero ints.  Instances are
    built through :class:`PolyRing`; the constructor trusts its input.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict[int, int]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise ValueError(f"cannot mix polynomials from {self.ring!r} and {other.ring!r}")
        if isinstance(other, int):
            return self.ring.const(other)
        return None

    def to_ring(self, ring: PolyRing) -> Polynomial:
        """Re-express this polynomial in ``ring``, which must contain every variable used."""
        if ring == self.ring:
            return self
        targets = []
        for i, name in enumerate(self.ring.names):
            targets.append(ring.index.get(name))
        out = {}
        for key, c in self.terms.items():
            new = 0
            for i, target in enumerate(targets):
                e = (key >> (FIELD_BITS * i)) & _FIELD_MASK
                if e:
                    if target is None:
                        raise ValueError(f"variable {self.ring.names[i]!r} missing from {ring!r}")
                    new |= e << (FIELD_BITS * target)
            out[new] = c
        return Polynomial(ring, out)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for k, c in small.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.ring, {k: -c for k, c in self.terms.items()})

    def __pos__(self) -> Polynomial:
        return self

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) - c
            if v:
                out[k] = v
            else:
                del out[k]
        return Polynomial(self.ring, out)

    def __rsub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        t1, t2 = self.terms, other.terms
        if not t1 or not t2:
            return Polynomial(self.ring, {})
        if len(t1) > len(t2):
            t1, t2 = t2, t1
        if len(t1) == 1:
            ((k1, c1),) = t1.items()
            if k1 == 0:
                if c1 == 1:
                    return Polynomial(self.ring, t2) if t2 is not self.terms else self
                return Polynomial(self.ring, {k: c * c1 for k, c in t2.items()})
            out = {k + k1: c * c1 for k, c in t2.items()}
        else:
            out = {}
            get = out.get
            items2 = list(t2.items())
            for k1, c1 in t1.items():
                for k2, c2 in items2:
                    k = k1 + k2
                    out[k] = get(k, 0) + c1 * c2
            out = {k: c for k, c in out.items() if c}
        guard = self.ring.guard
        if guard and any(k & guard for k in out):
            raise ExponentOverflowError(f"exponent exceeds {MAX_EXPONENT}")
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial exponent must be a non-negative int")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, divisor) -> Polynomial:
        """Return ``q`` with ``q * divisor == self``; raise :class:`InexactDivisionError` otherwise."""
        divisor = self._coerce(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("polynomial division by zero")
        guard = self.ring.guard
        if len(divisor.terms) == 1:
            ((dk, dc),) = divisor.terms.items()
            out = {}
            for k, c in self.terms.items():
                d = (k | guard) - dk
                if d & guard != guard:
                    raise InexactDivisionError(f"{self} is not divisible by {divisor}")
                q, r = divmod(c, dc)
                if r:
                    raise InexactDivisionError(f"{self} is not divisible by {divisor}")
                out[d ^ guard] = q
            return Polynomial(self.ring, out)

        lead = max(divisor.terms)
        lead_c = divisor.terms[lead]
        rest = [(k, c) for k, c in divisor.terms.items() if k != lead]
        rem = dict(self.terms)
        heap = [-k for k in rem]
        heapq.heapify(heap)
        quot = {}
        while heap:
            k = -heapq.heappop(heap)
            c = rem.pop(k, 0)
            if not c:
                continue
            d = (k | guard) - lead
            if d & guard != guard:
                raise InexactDivisionError(f"{self} is not divisible by {divisor}")
            qc, r = divmod(c, lead_c)
            if r:
                raise InexactDivisionError(f"{self} is not divisible by {divisor}")
            mono = d ^ guard
            quot[mono] = qc
            for k2, c2 in rest:
                kk = mono + k2
                if kk in rem:
                    v = rem[kk] - qc * c2
                    if v:
                        rem[kk] = v
                    else:
                        del rem[kk]
                else:
                    rem[kk] = -qc * c2
                    heapq.heappush(heap, -kk)
        return Polynomial(self.ring, quot)

    def divides(self, other) -> bool:
        try:
            self._coerce(other).exact_div(self)
        except InexactDivisionError:
            return False
        return True

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            return self.terms == {0: other}
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.terms.get(0, 0))
            else:
                self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- inspection -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def __int__(self) -> int:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not a constant")
        return self.terms.get(0, 0)

    __index__ = __int__

    def variables(self) -> tuple[str, ...]:
        used = 0
        for k in self.terms:
            used |= k
        return tuple(
            name for i, name in enumerate(self.ring.names) if (used >> (FIELD_BITS * i)) & _FIELD_MASK
        )

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in ``var``.  The zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(self.ring.unpack(k)) for k in self.terms)
        shift = FIELD_BITS * self.ring.index[var]
        return max((k >> shift) & _FIELD_MASK for k in self.terms)

    def coefficients_in(self, var: str) -> dict[int, Polynomial]:
        """Split as ``sum(c_e * var**e)``; returns ``{e: c_e}`` with ``var`` removed from each ``c_e``."""
        shift = FIELD_BITS * self.ring.index[var]
        mask = _FIELD_MASK << shift
        parts: dict[int, dict[int, int]] = {}
        for k, c in self.terms.items():
            parts.setdefault((k & mask) >> shift, {})[k & ~mask] = c
        return {e: Polynomial(self.ring, t) for e, t in sorted(parts.items())}

    def coeff(self, exps: Mapping[str, int]) -> int:
        """Coefficient of one monomial, given as ``{name: exponent}``."""
        vec = [0] * self.ring.nvars
        for name, e in exps.items():
            vec[self.ring.index[name]] = e
        return self.terms.get(self.ring.pack(vec), 0)

    def evaluate(self, values: Mapping[str, int] | Sequence[int]) -> int:
        """Evaluate at integer values; a mapping may omit variables that do not occur."""
        if isinstance(values, Mapping):
            vec = [values.get(name, 0) for name in self.ring.names]
            for name in self.variables():
                if name not in values:
                    raise ValueError(f"no value for variable {name!r}")
        else:
            vec = list(values)
            if len(vec) != self.ring.nvars:
                raise ValueError("wrong number of values")
        total = 0
        nv = len(vec)
        for k, c in self.terms.items():
            term = c
            i = 0
            while k and i < nv:
                e = k & _FIELD_MASK
                if e:
                    term *= vec[i] ** e
                k >>= FIELD_BITS
                i += 1
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "Polynomial | int"]) -> Polynomial:
        """Replace variables by polynomials of the same ring (or ints)."""
        ring = self.ring
        subs = {ring.index[name]: ring(val) for name, val in mapping.items()}
        keep_mask = 0
        for i in range(ring.nvars):
            if i not in subs:
                keep_mask |= _FIELD_MASK << (FIELD_BITS * i)
        powers: dict[tuple[int, int], Polynomial] = {}
        result = ring.zero()
        for k, c in self.terms.items():
            term = Polynomial(ring, {k & keep_mask: c})
            for i, val in subs.items():
                e = (k >> (FIELD_BITS * i)) & _FIELD_MASK
                if e:
                    pw = powers.get((i, e))
                    if pw is None:
                        pw = powers[(i, e)] = val ** e
                    term = term * pw
            result = result + term
        return result

    def content(self) -> int:
        from math import gcd

        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    # -- text -------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded lexicographic order, largest first."""
        unpack = self.ring.unpack
        items = [(unpack(k), c) for k, c in self.terms.items()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        pieces = []
        for exps, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


Scalar = Union[int, Polynomial]


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse {self.text!r} at offset {pos}")
            num, ident, op = m.groups()
            if num is not None:
                self.tokens.append(("int", num))
            elif ident is not None:
                self.tokens.append(("id", ident))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ValueError("empty polynomial text")
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input in {self.text!r}")
        return value

    def expr(self) -> Polynomial:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> Polynomial:
        value = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
            elif not (kind in ("int", "id") or (kind == "op" and val == "(")):
                return value
            value = value * self.factor()

    def factor(self) -> Polynomial:
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.factor()
            return -inner if val == "-" else inner
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, num = self.take()
            if kind != "int":
                raise ValueError(f"expected integer exponent in {self.text!r}")
            return base ** int(num)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "int":
            return self.ring.const(int(val))
        if kind == "id":
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError(f"unbalanced parentheses in {self.text!r}")
            return inner
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")


# -- univariate helpers ------------------------------------------------------
# Polynomials in an auxiliary variable, stored as coefficient lists (lowest
# degree first) whose entries are ints or Polynomials.


def upoly_mul(f: Sequence[Scalar], g: Sequence[Scalar]) -> list[Scalar]:
    if not f or not g:
        return []
    out: list[Scalar] = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if not fi:
            continue
        for j, gj in enumerate(g):
            if gj:
                out[i + j] = out[i + j] + fi * gj
    return out


def upoly_pow(f: Sequence[Scalar], e: int) -> list[Scalar]:
    result: list[Scalar] = [1]
    for _ in range(e):
        result = upoly_mul(result, f)
    return result


def upoly_add(f: Sequence[Scalar], g: Sequence[Scalar]) -> list[Scalar]:
    out = list(f) + [0] * max(0, len(g) - len(f))
    for i, gi in enumerate(g):
        out[i] = out[i] + gi
    return out


def upoly_scale(f: Sequence[Scalar], c: Scalar) -> list[Scalar]:
    return [c * fi for fi in f]


def upoly_coeff(f: Sequence[Scalar], i: int) -> Scalar:
    return f[i] if 0 <= i < len(f) else 0


# -- matrices ----------------------------------------------------------------


class PolyMatrix:
    """Dense ``rows x cols`` matrix of polynomials from a single ring, row-major."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: PolyRing, rows: int, cols: int, entries: Sequence[Scalar]):
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = tuple(ring(e) for e in entries)

    @classmethod
    def from_rows(cls, ring: PolyRing, rows: Sequence[Sequence[Scalar | str]]) -> PolyMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(ring, nrows, ncols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, ring: PolyRing, n: int) -> PolyMatrix:
        return cls(ring, n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, ring: PolyRing, rows: int, cols: int | None = None) -> PolyMatrix:
        cols = rows if cols is None else cols
        return cls(ring, rows, cols, [0] * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Polynomial, ...]:
        return self.entries[j::self.cols]

    def to_lists(self) -> list[list[Polynomial]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def map(self, fn: Callable[[Polynomial], Scalar]) -> PolyMatrix:
        return PolyMatrix(self.ring, self.rows, self.cols, [fn(e) for e in self.entries])

    def to_ring(self, ring: PolyRing) -> PolyMatrix:
        return PolyMatrix(ring, self.rows, self.cols, [e.to_ring(ring) for e in self.entries])

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.ring, self.cols, self.rows,
                          [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> PolyMatrix:
        return PolyMatrix(self.ring, len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def minor_matrix(self, i: int, j: int) -> PolyMatrix:
        return self.submatrix([r for r in range(self.rows) if r != i],
                              [c for c in range(self.cols) if c != j])

    def _check_same_shape(self, other: PolyMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_same_shape(other)
        return PolyMatrix(self.ring, self.rows, self.cols,
                          [x + y for x, y in zip(self.entries, other.entries)])

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_same_shape(other)
        return PolyMatrix(self.ring, self.rows, self.cols,
                          [x - y for x, y in zip(self.entries, other.entries)])

    def __neg__(self) -> PolyMatrix:
        return self.map(lambda e: -e)

    def scale(self, c: Scalar) -> PolyMatrix:
        c = self.ring(c)
        return self.map(lambda e: e * c)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return matrix_mul(self, other)

    def __pow__(self, e: int) -> PolyMatrix:
        return matrix_power(self, e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.ring == other.ring and self.entries == other.entries

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_upper_triangular(self) -> bool:
        return all(not self[i, j] for i in range(self.rows) for j in range(min(i, self.cols)))

    def trace(self) -> Polynomial:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        total = self.ring.zero()
        for i in range(self.rows):
            total = total + self[i, i]
        return total

    def term_count(self) -> int:
        return sum(len(e) for e in self.entries)

    def evaluate(self, values) -> list[list[int]]:
        return [[e.evaluate(values) for e in self.row(i)] for i in range(self.rows)]

    def to_text(self) -> list[list[str]]:
        return [[str(e) for e in self.row(i)] for i in range(self.rows)]

    def serialize(self) -> str:
        """Canonical text: one line per entry, ``i,j: poly``, row-major."""
        return "\n".join(f"{i},{j}: {self[i, j]}" for i in range(self.rows) for j in range(self.cols))

    def __repr__(self) -> str:
        return f"PolyMatrix({self.to_text()!r})"


def matrix_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    """Exact product ``A @ B``."""
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    if A.ring != B.ring:
        raise ValueError("matrices come from different rings")
    ring = A.ring
    bcols = [B.col(j) for j in range(B.cols)]
    out = []
    for i in range(A.rows):
        arow = A.row(i)
        nz = [(k, x) for k, x in enumerate(arow) if x]
        for col in bcols:
            acc = ring.zero()
            for k, x in nz:
                y = col[k]
                if y:
                    acc = acc + x * y
            out.append(acc)
    return PolyMatrix(ring, A.rows, B.cols, out)


def matrix_power(M: PolyMatrix, e: int) -> PolyMatrix:
    """``M**e`` by repeated squaring."""
    if not M.is_square():
        raise ValueError("power of a non-square matrix")
    if e < 0:
        raise ValueError("negative matrix power")
    result = PolyMatrix.identity(M.ring, M.rows)
    base = M
    first = True
    while e:
        if e & 1:
            result = base if first else matrix_mul(result, base)
            first = False
        e >>= 1
        if e:
            base = matrix_mul(base, base)
    return result


def det_cofactor(M: PolyMatrix) -> Polynomial:
    """Laplace expansion along the first row, memoised on column subsets."""
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    ring = M.ring
    if n == 0:
        return ring.one()
    memo: dict[tuple[int, ...], Polynomial] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Polynomial:
        if len(cols) == 1:
            return M[row, cols[0]]
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total = ring.zero()
        for idx, c in enumerate(cols):
            x = M[row, c]
            if not x:
                continue
            sub = minor(row + 1, cols[:idx] + cols[idx + 1:])
            total = total + x * sub if idx % 2 == 0 else total - x * sub
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


def det_bareiss(M: PolyMatrix) -> Polynomial:
    """Fraction-free Gaussian elimination; every division is exact."""
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    ring = M.ring
    if n == 0:
        return ring.one()
    a = M.to_lists()
    sign = 1
    prev: Polynomial = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * pivot - aik * a[k][j]
                try:
                    a[i][j] = num.exact_div(prev)
                except InexactDivisionError as exc:  # pragma: no cover - Sylvester identity
                    raise AssertionError(f"Bareiss step ({k},{i},{j}) not exact") from exc
        prev = pivot
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def det_fraction_free(M: PolyMatrix, method: str = "auto") -> Polynomial:
    """Exact determinant.

    ``method`` is ``"bareiss"``, ``"cofactor"`` or ``"auto"`` (cofactor
    expansion up to 4x4, Bareiss beyond).
    """
    if method == "auto":
        method = "cofactor" if M.rows <= 4 else "bareiss"
    if method == "bareiss":
        return det_bareiss(M)
    if method == "cofactor":
        return det_cofactor(M)
    raise ValueError(f"unknown determinant method {method!r}")


def adjugate(M: PolyMatrix) -> PolyMatrix:
    """Classical adjoint, so that ``M @ adjugate(M) == det(M) * I``."""
    if not M.is_square():
        raise ValueError("adjugate of a non-square matrix")
    n = M.rows
    if n == 1:
        return PolyMatrix.identity(M.ring, 1)
    entries = []
    for i in range(n):
        for j in range(n):
            cof = det_fraction_free(M.minor_matrix(j, i))
            entries.append(cof if (i + j) % 2 == 0 else -cof)
    return PolyMatrix(M.ring, n, n, entries)


def triangular_scaled_inverse(A: PolyMatrix, scale: Scalar) -> PolyMatrix:
    """Return ``S`` with ``A @ S == scale * I`` for upper triangular ``A``.

    Back substitution column by column; every division must be exact.
    """
    if not A.is_square():
        raise ValueError("triangular_scaled_inverse needs a square matrix")
    if not A.is_upper_triangular():
        raise ValueError("matrix is not upper triangular")
    ring = A.ring
    scale = ring(scale)
    n = A.rows
    S = [[ring.zero() for _ in range(n)] for _ in range(n)]

    def divide(num: Polynomial, den: Polynomial, i: int, j: int) -> Polynomial:
        if not den:
            raise ZeroDivisionError(f"zero diagonal entry at ({i},{i})")
        try:
            return num.exact_div(den)
        except InexactDivisionError:
            raise InexactDivisionError(
                f"entry ({i},{j}): {num} is not divisible by diagonal entry {den}"
            ) from None

    for j in range(n):
        S[j][j] = divide(scale, A[j, j], j, j)
        for i in range(j - 1, -1, -1):
            acc = ring.zero()
            for k in range(i + 1, j + 1):
                x = A[i, k]
                if x and S[k][j]:
                    acc = acc + x * S[k][j]
            S[i][j] = divide(-acc, A[i, i], i, j)
    return PolyMatrix.from_rows(ring, S)
