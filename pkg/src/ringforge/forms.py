"""Binary forms, the GL2(Z) substitution action, discriminants and
irreducibility certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from math import isqrt
from typing import Sequence

from .exactalg import PolyMatrix, PolyRing, Scalar, det_bareiss, upoly_add, upoly_mul, upoly_pow, upoly_scale

MAX_DEGREE = 64


@dataclass(frozen=True)
class BinaryForm:
    """``B(x, y) = sum_k a_k x^(n+1-k) y^(k-1)`` with ``coeffs = (a_1, ..., a_{n+1})``."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) < 3:
            raise ValueError("a binary form needs degree at least 2")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise ValueError(f"degree above {MAX_DEGREE} is not supported")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[0]

    @property
    def trailing(self) -> int:
        return self.coeffs[-1]

    def is_nondegenerate(self) -> bool:
        return self.coeffs[0] != 0 and self.coeffs[-1] != 0

    def require_nondegenerate(self) -> None:
        if not self.is_nondegenerate():
            raise ValueError(
                f"form {list(self.coeffs)} has a_1 * a_{self.degree + 1} = 0; it does not define a ring"
            )

    def __call__(self, x: int, y: int) -> int:
        n = self.degree
        return sum(a * x ** (n - k) * y ** k for k, a in enumerate(self.coeffs))

    def dehomogenized(self) -> list[int]:
        """Coefficients of ``f(x) = B(x, 1)``, lowest degree first."""
        return list(reversed(self.coeffs))

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> BinaryForm:
        form = cls(obj["coeffs"])
        if "degree" in obj and obj["degree"] != form.degree:
            raise ValueError("degree does not match coefficient count")
        return form


@dataclass(frozen=True)
class UnimodularMatrix:
    """``M = [[p, q], [r, s]]`` with ``ps - qr = +-1``."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"matrix {self.as_tuple()} has determinant {self.det}, not +-1")

    @property
    def det(self) -> int:
        return self.p * self.s - self.q * self.r

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.p, self.q, self.r, self.s)

    def __matmul__(self, other: UnimodularMatrix) -> UnimodularMatrix:
        return UnimodularMatrix(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )

    def inverse(self) -> UnimodularMatrix:
        m = self.det
        return UnimodularMatrix(m * self.s, -m * self.q, -m * self.r, m * self.p)

    @classmethod
    def identity(cls) -> UnimodularMatrix:
        return cls(1, 0, 0, 1)

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r, "s": self.s}

    @classmethod
    def from_json(cls, obj: dict) -> UnimodularMatrix:
        return cls(obj["p"], obj["q"], obj["r"], obj["s"])


def compose_coeffs(coeffs: Sequence[Scalar], p: Scalar, q: Scalar, r: Scalar, s: Scalar) -> list[Scalar]:
    """Coefficients ``b_1..b_{n+1}`` of ``B(p + q x, r + s x) = sum b_i x^(i-1)``.

    Works for ints and for polynomials alike.
    """
    n = len(coeffs) - 1
    first = [p, q]
    second = [r, s]
    total: list[Scalar] = []
    for k, a in enumerate(coeffs):
        if not a:
            continue
        term = upoly_mul(upoly_pow(first, n - k), upoly_pow(second, k))
        total = upoly_add(total, upoly_scale(term, a))
    total = list(total) + [0] * (n + 1 - len(total))
    return total[: n + 1]


def act(form: BinaryForm, M: UnimodularMatrix) -> BinaryForm:
    """``B o M``: substitute ``x -> p x + q y``, ``y -> r x + s y``."""
    return BinaryForm([int(b) for b in compose_coeffs(form.coeffs, *M.as_tuple())])


def _sylvester(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    # f, g highest degree first
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return rows


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of two integer polynomials given highest degree first."""
    ring = PolyRing(())
    rows = _sylvester(f, g)
    if not rows:
        return 1
    return int(det_bareiss(PolyMatrix.from_rows(ring, rows)))


def discriminant(form: BinaryForm) -> int:
    """``(-1)^(n(n-1)/2) Res(f, f') / a_1`` for ``f(x) = B(x, 1)``."""
    a1 = form.leading
    if a1 == 0:
        raise ValueError("discriminant needs a nonzero leading coefficient")
    n = form.degree
    f = list(form.coeffs)
    df = [(n - k) * a for k, a in enumerate(form.coeffs[:-1])]
    res = resultant(f, df)
    q, r = divmod(res, a1)
    assert r == 0
    return -q if (n * (n - 1) // 2) % 2 else q


# -- irreducibility certificates --------------------------------------------


@dataclass(frozen=True)
class Irreducible:
    witness: int


@dataclass(frozen=True)
class RationalRoot:
    root: Fraction


@dataclass(frozen=True)
class Unknown:
    primes_tried: int


def _primes():
    found: list[int] = []
    for c in count(2):
        if all(c % p for p in found if p * p <= c):
            found.append(c)
            yield c


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coeffs: Sequence[int]) -> list[Fraction]:
    """Rational roots of ``B(x, 1)`` (coefficients highest degree first)."""
    coeffs = list(coeffs)
    roots = []
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(coeffs) <= 1:
        return roots
    lead, const = coeffs[0], coeffs[-1]
    for num in _divisors(const):
        for den in _divisors(lead):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand in roots:
                    continue
                val = Fraction(0)
                for c in coeffs:
                    val = val * cand + c
                if val == 0:
                    roots.append(cand)
    return sorted(roots)


# polynomials mod p as lists, lowest degree first, trimmed

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: list[int], g: list[int], p: int) -> list[int]:
    f = [c % p for c in f]
    _trim(f)
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def _pmulmod(f: list[int], g: list[int], mod: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _pmod(out, mod, p)


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, mod, p)
    return result


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def irreducible_mod_p(coeffs_low_first: Sequence[int], p: int) -> bool:
    """Rabin's test for a polynomial over F_p whose leading coefficient is a unit."""
    f = _trim([c % p for c in coeffs_low_first])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for q in _prime_factors(n):
        h = _ppowmod(x, p ** (n // q), f, p)
        diff = _trim(_padd(h, [0, -1], p))
        if len(_pgcd(f, diff, p)) > 1:
            return False
    h = _ppowmod(x, p ** n, f, p)
    return not _trim(_padd(h, [0, -1], p))


def _padd(f: list[int], g: list[int], p: int) -> list[int]:
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return [c % p for c in out]


def irreducibility_certificate(form: BinaryForm, budget: int = 50):
    """Try to certify that ``B(x, y)`` is irreducible over Q.

    Returns :class:`RationalRoot` when ``B(x, 1)`` has a rational root,
    :class:`Irreducible` with the first prime among the first ``budget``
    primes modulo which ``B(x, 1)`` stays irreducible of full degree, and
    :class:`Unknown` otherwise.  Mod-p irreducibility is only sufficient, so
    ``Unknown`` does not mean reducible.
    """
    if form.leading == 0:
        raise ValueError("irreducibility_certificate needs a_1 != 0")
    roots = rational_roots(form.coeffs)
    if roots:
        return RationalRoot(min(roots, key=lambda r: (abs(r), r)))
    low_first = form.dehomogenized()
    for tried, p in enumerate(_primes(), start=1):
        if tried > budget:
            return Unknown(budget)
        if form.leading % p == 0:
            continue
        if irreducible_mod_p(low_first, p):
            return Irreducible(p)
