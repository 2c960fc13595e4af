"""Finite fields F_{p^k}, their additive characters, and the cyclotomic field Q(zeta_p).

Field elements are encoded as integers in ``range(q)``.  For an extension
``E = B[x]/(m)`` of a base field ``B`` of order ``r``, the element
``c_0 + c_1 x + ... + c_{d-1} x^{d-1}`` is stored as ``sum(c_i * r**i)``.
Because ``r`` is a power of ``p`` the encoding is also the base-``p`` digit
vector of the element over the prime field, so addition is always digitwise
mod ``p`` and every subfield in a tower embeds as ``range(r)``.

Polynomials over a field are tuples of encoded coefficients, lowest degree
first, with no trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

MAX_ORDER = 1 << 16


class FieldError(ValueError):
    """Raised for invalid field constructions or cross-field operations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
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


class Field:
    """A finite field, either prime or a simple extension of another Field.

    Arithmetic methods act on encoded integers; use :meth:`elem` to get an
    operator-friendly :class:`FqElem`.
    """

    def __init__(self, p: int, base: "Field | None" = None, modulus: tuple[int, ...] | None = None):
        self.p = p
        self.base = base
        if base is None:
            self.modulus = None
            self.degree = 1
            self.abs_degree = 1
            self.order = p
        else:
            if modulus is None or len(modulus) < 2 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree >= 1")
            self.modulus = tuple(modulus)
            self.degree = len(modulus) - 1
            self.abs_degree = base.abs_degree * self.degree
            self.order = base.order**self.degree
        if self.order > MAX_ORDER:
            raise FieldError(f"field order {self.order} exceeds cap {MAX_ORDER}")
        self._add_table = None
        self._exp: list[int] = []
        self._log: list[int] = []
        if base is not None:
            self._build_tables()
        if self.order <= 256:
            self._add_table = [[self._digit_add(a, b) for b in range(self.order)] for a in range(self.order)]

    # -- construction helpers -------------------------------------------------

    def _to_base_coeffs(self, a: int) -> list[int]:
        r = self.base.order
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, r)
            out.append(c)
        return out

    def _from_base_coeffs(self, cs) -> int:
        r = self.base.order
        v = 0
        for c in reversed(cs):
            v = v * r + c
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        B = self.base
        prod = poly_mul(B, poly_trim(self._to_base_coeffs(a)), poly_trim(self._to_base_coeffs(b)))
        rem = poly_mod(B, prod, self.modulus)
        return self._from_base_coeffs(list(rem) + [0] * (self.degree - len(rem)))

    def _slow_pow(self, a: int, e: int) -> int:
        acc, x = 1, a
        while e:
            if e & 1:
                acc = self._slow_mul(acc, x)
            x = self._slow_mul(x, x)
            e >>= 1
        return acc

    def _build_tables(self) -> None:
        n = self.order - 1
        ps = prime_factors(n)
        gen = None
        for g in range(2 if self.order > 2 else 1, self.order):
            if all(self._slow_pow(g, n // r) != 1 for r in ps):
                gen = g
                break
        if gen is None:
            raise FieldError("modulus is not irreducible (no primitive element)")
        exp = [0] * (2 * n)
        x = 1
        for i in range(n):
            exp[i] = x
            x = self._slow_mul(x, gen)
        if x != 1 or len(set(exp[:n])) != n:
            raise FieldError("modulus is not irreducible")
        exp[n:] = exp[:n]
        log = [0] * self.order
        for i in range(n):
            log[exp[i]] = i
        self._exp, self._log = exp, log
        self.generator = gen

    # -- arithmetic on encodings ---------------------------------------------

    def _digit_add(self, a: int, b: int, sign: int = 1) -> int:
        p = self.p
        if self.abs_degree == 1:
            return (a + sign * b) % p
        if p == 2:
            return a ^ b
        v, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            v += ((da + sign * db) % p) * scale
            scale *= p
        return v

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._digit_add(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.abs_degree == 1:
            return (-a) % self.p
        return self._digit_add(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.base is None:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if self.base is None:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.p)
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 ** non-positive")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> this field."""
        return n % self.p

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an int in range(p)."""
        acc, x = 0, a
        for _ in range(self.abs_degree):
            acc = self.add(acc, x)
            x = self.frobenius(x)
        return acc

    def relative_trace(self, a: int) -> int:
        """Trace to the base field (an encoding in ``range(base.order)``)."""
        if self.base is None:
            return a
        r = self.base.order
        acc, x = 0, a
        for _ in range(self.degree):
            acc = self.add(acc, x)
            x = self.pow(x, r)
        return acc

    def base_digits(self, a: int) -> list[int]:
        """Coordinates over the base field in the basis 1, x, ..., x^(degree-1)."""
        if self.base is None:
            return [a]
        return self._to_base_coeffs(a)

    def from_base_digits(self, cs) -> int:
        if self.base is None:
            return cs[0]
        return self._from_base_coeffs(cs)

    # -- conveniences --------------------------------------------------------

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def elem(self, v) -> "FqElem":
        if isinstance(v, FqElem):
            if v.field is not self:
                raise FieldError("element belongs to a different field")
            return v
        if not 0 <= v < self.order:
            raise FieldError(f"encoding {v} out of range for F_{self.order}")
        return FqElem(self, v)

    def elements(self):
        return [FqElem(self, v) for v in range(self.order)]

    def coordinates(self, a: int) -> list[int]:
        """Base-p digit vector (F_p-coordinates) of an encoded element."""
        out = []
        for _ in range(self.abs_degree):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_coordinates(self, ds) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + d % self.p
        return v

    def extension(self, modulus) -> "Field":
        """Simple extension ``self[x]/(modulus)``; modulus must be monic irreducible."""
        return make_extension(self, tuple(modulus))

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.order}; {self.modulus} over {self.base!r})"


@dataclass(frozen=True)
class FqElem:
    field: Field
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field is not self.field:
                raise FieldError("cannot mix elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        if isinstance(other, FqElem):
            return self.field is other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __bool__(self):
        return self.value != 0

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.value))

    def trace(self) -> int:
        return self.field.trace(self.value)

    def frobenius(self) -> "FqElem":
        return FqElem(self.field, self.field.frobenius(self.value))

    def __repr__(self):
        return f"F{self.field.order}({self.value})"


# -- polynomials over a Field ---------------------------------------------------


def poly_trim(a) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_add(F: Field, a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return poly_trim(F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def poly_neg(F: Field, a) -> tuple[int, ...]:
    return tuple(F.neg(c) for c in a)


def poly_sub(F: Field, a, b) -> tuple[int, ...]:
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F: Field, a, c: int) -> tuple[int, ...]:
    if c == 0:
        return ()
    return tuple(F.mul(x, c) for x in a)


def poly_mul(F: Field, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_pow(F: Field, a, e: int) -> tuple[int, ...]:
    acc, x = (1,), tuple(a)
    while e:
        if e & 1:
            acc = poly_mul(F, acc, x)
        x = poly_mul(F, x, x)
        e >>= 1
    return acc


def poly_divmod(F: Field, a, b):
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quo = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        f = F.mul(c, inv_lead)
        quo[k - db] = f
        for j in range(db + 1):
            rem[k - db + j] = F.sub(rem[k - db + j], F.mul(f, b[j]))
    return poly_trim(quo), poly_trim(rem)


def poly_mod(F: Field, a, b) -> tuple[int, ...]:
    return poly_divmod(F, a, b)[1]


def poly_monic(F: Field, a) -> tuple[int, ...]:
    a = poly_trim(a)
    if not a:
        return a
    return poly_scale(F, a, F.inv(a[-1]))


def poly_gcd(F: Field, a, b) -> tuple[int, ...]:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_eval(F: Field, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_deriv(F: Field, a) -> tuple[int, ...]:
    return poly_trim(F.mul(F.from_int(i), a[i]) for i in range(1, len(a)))


def poly_powmod(F: Field, a, e: int, m) -> tuple[int, ...]:
    acc, x = (1,), poly_mod(F, a, m)
    while e:
        if e & 1:
            acc = poly_mod(F, poly_mul(F, acc, x), m)
        x = poly_mod(F, poly_mul(F, x, x), m)
        e >>= 1
    return acc


def poly_compose(F: Field, a, b) -> tuple[int, ...]:
    """a(b(x))."""
    acc: tuple[int, ...] = ()
    for c in reversed(a):
        acc = poly_add(F, poly_mul(F, acc, b), (c,) if c else ())
    return acc


def is_irreducible(F: Field, f) -> bool:
    """Rabin's test over F."""
    f = poly_trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    f = poly_monic(F, f)
    q = F.order
    x = (0, 1)
    if poly_sub(F, poly_powmod(F, x, q**n, f), x):
        return False
    for r in prime_factors(n):
        h = poly_sub(F, poly_powmod(F, x, q ** (n // r), f), x)
        if len(poly_gcd(F, f, h)) > 1:
            return False
    return True


def monic_polys(F: Field, d: int):
    """Monic polynomials of degree d, ordered by their integer encoding."""
    for lows in product(range(F.order), repeat=d):
        yield tuple(lows[::-1]) + (1,)


def monic_irreducibles(F: Field, d: int) -> list[tuple[int, ...]]:
    return [f for f in monic_polys(F, d) if is_irreducible(F, f)]


def default_modulus(F: Field, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k, comparing c_{k-1}, ..., c_0 as base-|F| digits."""
    for f in monic_polys(F, k):
        if is_irreducible(F, f):
            return f
    raise FieldError(f"no irreducible of degree {k}")  # unreachable


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    return Field(p)


_EXTENSIONS: dict[tuple[int, tuple[int, ...]], Field] = {}


def make_extension(base: Field, modulus: tuple[int, ...]) -> Field:
    key = (id(base), tuple(modulus))
    if key not in _EXTENSIONS:
        if not is_irreducible(base, modulus):
            raise FieldError(f"modulus {modulus} is reducible over {base!r}")
        _EXTENSIONS[key] = Field(base.p, base, tuple(modulus))
    return _EXTENSIONS[key]


def make_field(p: int, k: int = 1, modulus=None) -> Field:
    """Construct F_{p^k}.  Without a modulus the default irreducible is used.

    >>> F = make_field(2, 2); a = F.elem(2)   # a = x, x^2 = x + 1
    >>> a.trace()
    1
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not isinstance(k, int) or k < 1:
        raise FieldError("k must be a positive integer")
    Fp = prime_field(p)
    if modulus is not None:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) - 1 != k:
            raise FieldError(f"modulus degree {len(modulus) - 1} does not match k={k}")
        if modulus[-1] != 1:
            raise FieldError("modulus must be monic")
    if k == 1 and modulus is None:
        return Fp
    if p**k > MAX_ORDER:
        raise FieldError(f"q = {p}^{k} exceeds cap {MAX_ORDER}")
    if modulus is None:
        modulus = _default_modulus_cached(p, k)
    return make_extension(Fp, modulus)


@lru_cache(maxsize=None)
def _default_modulus_cached(p: int, k: int) -> tuple[int, ...]:
    return default_modulus(prime_field(p), k)


def field_of_order(q: int) -> Field:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                raise FieldError(f"{q} is not a prime power")
            return make_field(p, k)
    raise FieldError(f"{q} is not a prime power")


# -- Q(zeta_p) ----------------------------------------------------------------


class CycloValue:
    """Exact element of Q(zeta_p) in the power basis 1, zeta, ..., zeta^(p-2)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        n = max(p - 1, 1)
        if len(coeffs) == p and p > 2:
            top = coeffs[-1]
            coeffs = tuple(c - top for c in coeffs[:-1])
        elif len(coeffs) == 2 and p == 2:
            coeffs = (coeffs[0] - coeffs[1],)
        if len(coeffs) != n:
            raise ValueError(f"expected {n} coefficients for p={p}, got {len(coeffs)}")
        self.p = p
        self.coeffs = coeffs

    @classmethod
    def from_int(cls, p: int, n) -> "CycloValue":
        return cls(p, (Fraction(n),) + (0,) * (max(p - 1, 1) - 1))

    @classmethod
    def zeta_power(cls, p: int, e: int) -> "CycloValue":
        return cls.from_redundant(p, [1 if i == e % p else 0 for i in range(p)])

    @classmethod
    def from_redundant(cls, p: int, vec) -> "CycloValue":
        """From coefficients of 1, zeta, ..., zeta^(p-1) (length p)."""
        vec = [Fraction(v) for v in vec]
        if p == 2:
            return cls(2, (vec[0] - vec[1],))
        top = vec[p - 1]
        return cls(p, [v - top for v in vec[: p - 1]])

    def redundant(self) -> list[Fraction]:
        if self.p == 2:
            return [self.coeffs[0], Fraction(0)]
        return list(self.coeffs) + [Fraction(0)]

    def _check(self, other) -> "CycloValue":
        if isinstance(other, (int, Fraction)):
            return CycloValue.from_int(self.p, other)
        if not isinstance(other, CycloValue):
            return NotImplemented
        if other.p != self.p:
            raise FieldError(f"cannot mix Q(zeta_{self.p}) with Q(zeta_{other.p})")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return CycloValue(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloValue(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        p = self.p
        a, b = self.redundant(), o.redundant()
        out = [Fraction(0)] * p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[(i + j) % p] += x * y
        return CycloValue.from_redundant(p, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloValue.from_int(self.p, other)
        if not isinstance(other, CycloValue):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_json(self) -> list:
        return [str(c) if c.denominator != 1 else c.numerator for c in self.coeffs]

    def __repr__(self):
        if self.is_rational():
            return f"Cyclo{self.p}({self.coeffs[0]})"
        return f"Cyclo{self.p}({', '.join(str(c) for c in self.coeffs)})"


def additive_character(x: FqElem) -> CycloValue:
    """psi(x) = zeta_p ** Tr(x)."""
    return CycloValue.zeta_power(x.field.p, x.field.trace(x.value))


# -- linear algebra over a Field ------------------------------------------------


def rref(F: Field, rows) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(x, inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(F: Field, rows) -> int:
    return len(rref(F, rows)[0])


def nullspace(F: Field, rows, ncols: int | None = None) -> list[list[int]]:
    """Basis of {x : A x = 0} for A given by its rows."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, piv = rref(F, rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in zip(red, piv):
            v[pc] = F.neg(r[fc])
        basis.append(v)
    return basis


def span_contains(F: Field, basis, vec) -> bool:
    return rank(F, list(basis) + [list(vec)]) == rank(F, basis)


def span_equal(F: Field, a, b) -> bool:
    ra, rb = rank(F, a), rank(F, b)
    return ra == rb == rank(F, list(a) + list(b))


def intersection_dim(F: Field, a, b) -> int:
    return rank(F, a) + rank(F, b) - rank(F, list(a) + list(b))
