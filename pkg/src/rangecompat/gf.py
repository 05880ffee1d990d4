"""Arithmetic in small finite fields GF(p^k).

Elements are integer codes in ``[0, q)``: the base-p digits of a code,
little-endian, are the coefficients of the element in the polynomial basis
``(1, t, ..., t^(k-1))``.  Addition is digitwise mod p; multiplication is
polynomial multiplication modulo a fixed irreducible reduction polynomial.

Reduction polynomials (little-endian coefficients, monic leading 1 implicit):
    GF(4)  : t^2 + t + 1          -> (1, 1)
    GF(8)  : t^3 + t + 1          -> (1, 1, 0)
    GF(9)  : t^2 + 2t + 2         -> (2, 2)
    GF(16) : t^4 + t + 1          -> (1, 1, 0, 0)

All tables are precomputed at construction; fields beyond ``max_order``
elements are refused.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import modp
from .errors import FieldError

DEFAULT_MAX_ORDER = 16

FIXED_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (3, 2): (2, 2),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _poly_mod(p: int, poly: list[int], mod: list[int]) -> list[int]:
    """Remainder of poly by monic mod (both little-endian coefficient lists)."""
    poly = [c % p for c in poly]
    deg_m = len(mod) - 1
    for i in range(len(poly) - 1, deg_m - 1, -1):
        c = poly[i]
        if c:
            for j, m in enumerate(mod):
                poly[i - deg_m + j] = (poly[i - deg_m + j] - c * m) % p
    return poly[:deg_m]


def _is_irreducible(p: int, coeffs: tuple[int, ...]) -> bool:
    """Check irreducibility of t^k + sum(coeffs[i] t^i) over GF(p) by trial division."""
    k = len(coeffs)
    mod = list(coeffs) + [1]
    for deg in range(1, k // 2 + 1):
        for code in range(p**deg):
            div = []
            c = code
            for _ in range(deg):
                div.append(c % p)
                c //= p
            div.append(1)  # monic divisor of degree deg
            if not any(_poly_mod(p, mod[:], div)):
                return False
    return True


class Field:
    """The finite field GF(p^k) with fixed reduction polynomial.

    Two instances are equal iff they have the same ``(p, k)`` (the reduction
    polynomial is determined by ``FIXED_POLYS``).
    """

    def __init__(self, p: int, k: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> None:
        if not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if k < 1:
            raise FieldError(f"k={k} must be >= 1")
        q = p**k
        if q > max_order:
            raise FieldError(f"field order {q} exceeds max_order={max_order}")
        if k == 1:
            poly: tuple[int, ...] = (0,)
        else:
            if (p, k) not in FIXED_POLYS:
                raise FieldError(f"no fixed reduction polynomial for GF({p}^{k})")
            poly = FIXED_POLYS[(p, k)]
            if not _is_irreducible(p, poly):  # pragma: no cover - fixed data
                raise FieldError(f"reduction polynomial for GF({p}^{k}) is reducible")
        self.p = p
        self.k = k
        self.q = q
        self.poly = poly
        self.char = p

        # digit tables
        self._digits: list[tuple[int, ...]] = []
        for code in range(q):
            d, c = [], code
            for _ in range(k):
                d.append(c % p)
                c //= p
            self._digits.append(tuple(d))

        # addition: digitwise mod p
        self.add_table = [
            [self.from_digits([(a + b) % p for a, b in zip(self._digits[x], self._digits[y])])
             for y in range(q)]
            for x in range(q)
        ]
        self.neg_table = [self.from_digits([(-a) % p for a in self._digits[x]]) for x in range(q)]

        # multiplication: polynomial product mod reduction polynomial
        mod = list(poly) + [1] if k > 1 else None
        mul = [[0] * q for _ in range(q)]
        for x in range(q):
            dx = self._digits[x]
            for y in range(x, q):
                dy = self._digits[y]
                prod = [0] * (2 * k - 1)
                for i, a in enumerate(dx):
                    if a:
                        for j, b in enumerate(dy):
                            prod[i + j] = (prod[i + j] + a * b) % p
                if k > 1:
                    prod = _poly_mod(p, prod, mod)  # type: ignore[arg-type]
                code = self.from_digits(prod[:k])
                mul[x][y] = code
                mul[y][x] = code
        self.mul_table = mul

        self.inv_table = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if mul[x][y] == 1:
                    self.inv_table[x] = y
                    break
            else:  # pragma: no cover - impossible for a field
                raise FieldError(f"element {x} has no inverse; polynomial not irreducible?")

    # -- basic operations ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul_table[out][a]
            a = self.mul_table[a][a]
            e >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # -- digit coordinates ------------------------------------------------

    def digits(self, code: int) -> tuple[int, ...]:
        """GF(p) coordinates of *code* in the basis (1, t, ..., t^(k-1))."""
        return self._digits[code]

    def from_digits(self, digits) -> int:
        code = 0
        for d in reversed(list(digits)):
            code = code * self.p + (d % self.p)
        return code

    def scalar(self, c: int) -> int:
        """Embed the prime-field element c (an int mod p) into the field."""
        return self.from_digits([c % self.p] + [0] * (self.k - 1))

    @property
    def gen(self) -> int:
        """The code of t (equals p); over a prime field this is 1."""
        return self.p if self.k > 1 else 1

    # -- structure maps ---------------------------------------------------

    def mul_matrix(self, a: int) -> tuple[tuple[int, ...], ...]:
        """k x k GF(p) matrix of multiplication by *a*; column j = digits(a * t^j)."""
        cols = [self._digits[self.mul_table[a][self.from_digits([0] * j + [1] + [0] * (self.k - 1 - j))]]
                for j in range(self.k)]
        return tuple(tuple(cols[j][i] for j in range(self.k)) for i in range(self.k))

    def frobenius(self, a: int, s: int = 1) -> int:
        """a ** (p**s)."""
        return self.pow(a, self.p ** (s % self.k) if self.k > 1 else self.p**s)

    def char2_sqrt(self, a: int) -> int:
        """The unique square root in characteristic 2: a ** (2**(k-1))."""
        if self.p != 2:
            raise FieldError("char2_sqrt requires characteristic 2")
        return self.pow(a, 2 ** (self.k - 1))

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((Field, self.p, self.k))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> Field:
    """Construct (and cache) GF(p^k)."""
    return Field(p, k, max_order)


@dataclass(frozen=True)
class AdditiveEndo:
    """An additive endomorphism of a field, stored as a k x k matrix over GF(p).

    Column j holds the digits of the image of the basis element t^j.
    """

    field: Field
    matrix: tuple[tuple[int, ...], ...]

    def apply(self, a: int) -> int:
        F = self.field
        d = F.digits(a)
        out = [sum(self.matrix[i][j] * d[j] for j in range(F.k)) % F.p for i in range(F.k)]
        return F.from_digits(out)

    def is_linear(self) -> bool:
        """True iff the map is K-linear, i.e. multiplication by some element."""
        F = self.field
        c = self.apply(1)
        return all(self.apply(x) == F.mul(c, x) for x in F.elements())

    def is_rootlinear(self) -> bool:
        """True iff additive with f(lam^2 * x) = lam * f(x) for all lam, x."""
        F = self.field
        return all(
            self.apply(F.mul(F.mul(lam, lam), x)) == F.mul(lam, self.apply(x))
            for lam in F.elements()
            for x in F.elements()
        )

    def __call__(self, a: int) -> int:
        return self.apply(a)


def endo_from_images(field: Field, images) -> AdditiveEndo:
    """Build an additive endomorphism from the images of (1, t, ..., t^(k-1))."""
    cols = [field.digits(im) for im in images]
    mat = tuple(tuple(cols[j][i] for j in range(field.k)) for i in range(field.k))
    return AdditiveEndo(field, mat)


def mul_endo(field: Field, c: int) -> AdditiveEndo:
    """Multiplication by c as an additive endomorphism."""
    return AdditiveEndo(field, field.mul_matrix(c))


def sqrt_endo(field: Field) -> AdditiveEndo:
    """The square-root map in characteristic 2 (the canonical root-linear map)."""
    images = [field.char2_sqrt(field.from_digits([0] * j + [1] + [0] * (field.k - 1 - j)))
              for j in range(field.k)]
    return endo_from_images(field, images)


def endo_space(field: Field, kind: str) -> list[AdditiveEndo]:
    """GF(p)-basis of a space of additive endomorphisms of the field.

    kind:
      - "additive":   all additive maps (dimension k^2 over GF(p));
      - "linear":     multiplications by field elements (dimension k);
      - "rootlinear": additive maps with f(lam^2 x) = lam f(x) for all
                      lam, x (dimension k in characteristic 2, where these
                      are the scalar multiples of the square-root map; the
                      zero space in odd characteristic).
    """
    p, k = field.p, field.k
    if kind == "additive":
        out = []
        for i in range(k):
            for j in range(k):
                mat = tuple(tuple(1 if (r, c) == (i, j) else 0 for c in range(k)) for r in range(k))
                out.append(AdditiveEndo(field, mat))
        return out
    if kind == "linear":
        return [mul_endo(field, field.from_digits([0] * j + [1] + [0] * (k - 1 - j)))
                for j in range(k)]
    if kind == "rootlinear":
        # Solve A . R(lam^2) = R(lam) . A over GF(p) for all lam.
        width = k * k
        rows: list[list[int]] = []
        for lam in field.elements():
            r_sq = field.mul_matrix(field.mul(lam, lam))
            r_lam = field.mul_matrix(lam)
            for i in range(k):
                for j in range(k):
                    # entry (i, j) of A R(lam^2) - R(lam) A
                    row = [0] * width
                    for m in range(k):
                        row[i * k + m] = (row[i * k + m] + r_sq[m][j]) % p
                        row[m * k + j] = (row[m * k + j] - r_lam[i][m]) % p
                    rows.append(row)
        basis = modp.nullspace(p, rows, width)
        out = []
        for v in basis:
            mat = tuple(tuple(v[i * k + j] for j in range(k)) for i in range(k))
            out.append(AdditiveEndo(field, mat))
        return out
    raise ValueError(f"unknown endomorphism kind {kind!r}")
