"""Exact arithmetic in class-number-one imaginary quadratic fields.

Elements, ideals in canonical Hermite basis form, prime factorization, ray
class groups, primary generators, infinity types, and algebraic Hecke
characters with values in the ring of integers.  Everything is integer
exact; the nine fields with class number one are hard-coded and nothing
here attempts general class-group computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from . import intlinalg as la
from .errors import (
    CMError,
    InternalInconsistency,
    NoPrimaryGenerator,
    NotCoprime,
    NotPrime,
)

CLASS_NUMBER_ONE = (-1, -2, -3, -7, -11, -19, -43, -67, -163)


def is_rational_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(d)) for squarefree d < 0 with class number one.

    The ring of integers is Z[omega] with omega = sqrt(d) or (1+sqrt(d))/2
    depending on d mod 4; omega satisfies omega^2 = s*omega + t.
    """

    d: int

    def __post_init__(self):
        if self.d not in CLASS_NUMBER_ONE:
            raise CMError(f"d={self.d} is not a whitelisted class-number-one field")

    @property
    def uses_half_generator(self) -> bool:
        return self.d % 4 == 1

    @property
    def discriminant(self) -> int:
        return self.d if self.uses_half_generator else 4 * self.d

    @property
    def omega_relation(self) -> tuple[int, int]:
        """(s, t) with omega^2 = s*omega + t."""
        if self.uses_half_generator:
            return (1, -(1 - self.d) // 4)
        return (0, self.d)

    def element(self, a: int, b: int = 0) -> "QuadInt":
        return QuadInt(self, a, b)

    @property
    def one(self) -> "QuadInt":
        return self.element(1)

    @cached_property
    def units(self) -> tuple["QuadInt", ...]:
        if self.d == -1:
            return tuple(self.element(a, b) for a, b in ((1, 0), (0, 1), (-1, 0), (0, -1)))
        if self.d == -3:
            # powers of the primitive sixth root of unity omega
            out = [self.one]
            for _ in range(5):
                out.append(out[-1] * self.element(0, 1))
            return tuple(out)
        return (self.element(1), self.element(-1))

    @cached_property
    def unit_root(self) -> "QuadInt":
        """A generator of the unit group."""
        if self.d == -1:
            return self.element(0, 1)
        if self.d == -3:
            return self.element(0, 1)
        return self.element(-1)

    def omega_str(self) -> str:
        return "(1+sqrt(d))/2" if self.uses_half_generator else "sqrt(d)"


@dataclass(frozen=True)
class QuadInt:
    """Ring integer a + b*omega."""

    field: QuadField
    a: int
    b: int

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._match(other)
        return QuadInt(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._match(other)
        return QuadInt(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.field, -self.a, -self.b)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        self._match(other)
        s, t = self.field.omega_relation
        # (a1 + b1 w)(a2 + b2 w) with w^2 = s w + t
        a = self.a * other.a + self.b * other.b * t
        b = self.a * other.b + self.b * other.a + self.b * other.b * s
        return QuadInt(self.field, a, b)

    def __pow__(self, k: int) -> "QuadInt":
        if k < 0:
            raise ValueError("negative powers leave the ring of integers")
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _match(self, other: "QuadInt") -> None:
        if self.field != other.field:
            raise CMError("elements of different fields")

    def conj(self) -> "QuadInt":
        s, _ = self.field.omega_relation
        # conjugate of omega is s - omega
        return QuadInt(self.field, self.a + self.b * s, -self.b)

    def norm(self) -> int:
        s, t = self.field.omega_relation
        return self.a * self.a + s * self.a * self.b - t * self.b * self.b

    def trace(self) -> int:
        s, _ = self.field.omega_relation
        return 2 * self.a + s * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divides(self, other: "QuadInt") -> bool:
        return other.exact_div(self) is not None

    def exact_div(self, divisor: "QuadInt"):
        """self / divisor when it lies in the ring, else None."""
        self._match(divisor)
        n = divisor.norm()
        if n == 0:
            return None
        num = self * divisor.conj()
        if num.a % n or num.b % n:
            return None
        return QuadInt(self.field, num.a // n, num.b // n)

    def __str__(self) -> str:
        return f"{self.a}{self.b:+}w"


@dataclass(frozen=True)
class QuadIdeal:
    """Nonzero ideal in canonical Hermite basis form Z*n + Z*(c + d*omega).

    Canonical means n > 0, d > 0, 0 <= c < n, d | n, d | c, and the basis
    spans an ideal (closed under multiplication by omega); the norm is n*d.
    """

    field: QuadField
    n: int
    c: int
    d: int

    def __post_init__(self):
        if self.n <= 0 or self.d <= 0 or not 0 <= self.c < max(self.n, 1):
            raise CMError("ideal basis is not in canonical form")
        if self.n % self.d or self.c % self.d:
            raise CMError("ideal basis is not in canonical form")
        w1 = self.field.element(self.n, 0) * self.field.element(0, 1)
        w2 = self.field.element(self.c, self.d) * self.field.element(0, 1)
        for x in (w1, w2):
            if not self._lattice_contains(x):
                raise CMError("basis does not span an ideal")

    def _lattice_contains(self, x: QuadInt) -> bool:
        if x.b % self.d:
            return False
        q = x.b // self.d
        rem = x.a - q * self.c
        return rem % self.n == 0

    def __contains__(self, x: QuadInt) -> bool:
        return self._lattice_contains(x)

    @property
    def norm(self) -> int:
        return self.n * self.d

    def basis_elements(self) -> tuple[QuadInt, QuadInt]:
        return (self.field.element(self.n, 0), self.field.element(self.c, self.d))

    def conj(self) -> "QuadIdeal":
        return ideal_from_elements(self.field, [x.conj() for x in self.basis_elements()])

    def __mul__(self, other: "QuadIdeal") -> "QuadIdeal":
        if self.field != other.field:
            raise CMError("ideals of different fields")
        products = [
            x * y for x in self.basis_elements() for y in other.basis_elements()
        ]
        return ideal_from_elements(self.field, products)

    def __pow__(self, k: int) -> "QuadIdeal":
        if k < 0:
            raise ValueError("negative ideal powers are not supported")
        out = unit_ideal(self.field)
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: "QuadIdeal") -> "QuadIdeal":
        if self.field != other.field:
            raise CMError("ideals of different fields")
        return ideal_from_elements(
            self.field, list(self.basis_elements()) + list(other.basis_elements())
        )

    def is_coprime(self, other: "QuadIdeal") -> bool:
        return (self + other).norm == 1

    def divides_element(self, x: QuadInt) -> bool:
        return x in self

    def congruent(self, x: QuadInt, y: QuadInt) -> bool:
        return (x - y) in self

    def to_json(self) -> dict:
        return {"n": self.n, "c": self.c, "d": self.d}


def ideal_from_elements(field: QuadField, elements) -> QuadIdeal:
    """The ideal generated (as a module) by ring multiples of the elements."""
    rows = []
    for x in elements:
        rows.append((x.a, x.b))
        xw = x * field.element(0, 1)
        rows.append((xw.a, xw.b))
    # row HNF over coordinates (omega part, rational part) puts the pure
    # integer generator second and the omega generator first
    swapped = la.freeze([(b, a) for a, b in rows])
    basis = la.hnf_basis(swapped)
    if len(basis) != 2:
        raise CMError("elements do not generate a nonzero ideal")
    d, c = basis[0]
    z, n = basis[1]
    if z != 0:
        raise InternalInconsistency("ideal basis is not triangular")
    return QuadIdeal(field=field, n=n, c=c % n, d=d)


def ideal_from_generator(x: QuadInt) -> QuadIdeal:
    if x.is_zero():
        raise CMError("zero generates the zero ideal")
    return ideal_from_elements(x.field, [x])


def unit_ideal(field: QuadField) -> QuadIdeal:
    return QuadIdeal(field=field, n=1, c=0, d=1)


def _norm_form_solutions(field: QuadField, n: int):
    """All ring elements of norm n (positive definite search)."""
    if n < 0:
        return
    s, t = field.omega_relation
    # N(a, b) = a^2 + s a b - t b^2 = (a + s b/2)^2 + |disc| b^2 / 4
    absd = -field.discriminant
    bmax = math.isqrt(4 * n // absd) + 1
    for b in range(-bmax, bmax + 1):
        # solve a^2 + (s b) a - (t b^2 + n) = 0 over the integers
        disc = s * s * b * b + 4 * (t * b * b + n)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for sign in (1, -1):
            num = -s * b + sign * r
            if num % 2 == 0:
                x = field.element(num // 2, b)
                if x.norm() == n:
                    yield x


def find_generator(ideal: QuadIdeal) -> QuadInt:
    """Some generator of the ideal (exists: class number one)."""
    target = ideal.norm
    for x in _norm_form_solutions(ideal.field, target):
        if x in ideal:
            return x
    raise InternalInconsistency("principal generator not found")


@lru_cache(maxsize=None)
def canonical_conductor(field: QuadField) -> QuadIdeal:
    """Modulus fixing the primary-generator convention for this field.

    For d = -1 this is (1+i)^3 and for d = -3 it is (3): in both cases the
    units map bijectively onto the residue units and the modulus is its own
    conjugate, so every coprime ideal has a unique generator congruent to 1
    and conjugation preserves primarity.  No other whitelisted field admits
    a self-conjugate modulus with both properties, so pass an explicit
    conductor to primary_generator for those.
    """
    if field.d == -1:
        return ideal_from_generator(field.element(1, 1)) ** 3
    if field.d == -3:
        return ideal_from_generator(field.element(3, 0))
    raise CMError(
        f"no built-in primary convention for d={field.d}; "
        "supply a conductor explicitly"
    )


def _reduce_mod(field: QuadField, modulus: QuadIdeal, x: QuadInt) -> tuple[int, int]:
    q, r = divmod(x.b, modulus.d)
    a = x.a - q * modulus.c
    return (a % modulus.n, r)


def _residues(field: QuadField, modulus: QuadIdeal):
    for b in range(modulus.d):
        for a in range(modulus.n):
            yield field.element(a, b)


def _is_coprime_residue(field: QuadField, modulus: QuadIdeal, x: QuadInt) -> bool:
    if x.is_zero():
        return modulus.norm == 1
    return (ideal_from_generator(x) + modulus).norm == 1


def _unit_residues(field: QuadField, modulus: QuadIdeal) -> list[tuple[int, int]]:
    return [
        _reduce_mod(field, modulus, x)
        for x in _residues(field, modulus)
        if _is_coprime_residue(field, modulus, x)
    ]


def primary_generator(ideal: QuadIdeal, conductor: QuadIdeal | None = None) -> QuadInt:
    """The unique generator congruent to 1 modulo the convention conductor.

    Raises NotCoprime when the ideal meets the conductor and
    NoPrimaryGenerator when no unique associate is congruent to 1 (the
    convention is then invalid for this modulus).
    """
    field = ideal.field
    if conductor is None:
        conductor = canonical_conductor(field)
    if not ideal.is_coprime(conductor):
        raise NotCoprime("ideal is not coprime to the convention conductor")
    g = find_generator(ideal)
    matches = [
        u * g for u in field.units if conductor.divides_element(u * g - field.one)
    ]
    if len(matches) != 1:
        raise NoPrimaryGenerator(
            f"{len(matches)} associates congruent to 1 modulo the conductor"
        )
    return matches[0]


@dataclass(frozen=True)
class PrimeFactorization:
    """Decomposition of a rational prime: split, inert, or ramified."""

    p: int
    kind: str
    primes: tuple[QuadIdeal, ...]
    residue_degrees: tuple[int, ...]


def factor_rational_prime(field: QuadField, p: int) -> PrimeFactorization:
    """Split/inert/ramified decision by the discriminant symbol, with
    explicit prime ideals (class number one makes them principal)."""
    if not is_rational_prime(p):
        raise NotPrime(f"{p} is not a rational prime")
    disc = field.discriminant
    if p == 2:
        symbol = 0 if disc % 2 == 0 else (1 if disc % 8 == 1 else -1)
    else:
        symbol = legendre(disc, p)
    if symbol == -1:
        return PrimeFactorization(
            p=p,
            kind="inert",
            primes=(ideal_from_generator(field.element(p)),),
            residue_degrees=(2,),
        )
    gen = next(
        (x for x in _norm_form_solutions(field, p)), None
    )
    if gen is None:
        raise InternalInconsistency(f"no element of norm {p} in a split case")
    first = ideal_from_generator(gen)
    second = first.conj()
    if symbol == 0:
        if first != second:
            raise InternalInconsistency("ramified prime with distinct factors")
        return PrimeFactorization(
            p=p, kind="ramified", primes=(first,), residue_degrees=(1,)
        )
    if first == second:
        raise InternalInconsistency("split prime with equal factors")
    first, second = _orient_split_pair(first, second)
    return PrimeFactorization(
        p=p, kind="split", primes=(first, second), residue_degrees=(1, 1)
    )


def _orient_split_pair(first: QuadIdeal, second: QuadIdeal) -> tuple[QuadIdeal, QuadIdeal]:
    """Deterministic order on a conjugate pair: positive omega part of the
    primary generator when available, else lexicographic basis order."""
    try:
        g1 = primary_generator(first)
        return (first, second) if g1.b > 0 else (second, first)
    except CMError:
        k1 = (first.n, first.c, first.d)
        k2 = (second.n, second.c, second.d)
        return (first, second) if k1 <= k2 else (second, first)


@dataclass(frozen=True)
class RayClassGroup:
    """Residue units modulo the image of the global units, with modulus.

    ``structure`` lists invariant factors > 1; ``dlog`` sends a coprime
    residue to its coordinate tuple.
    """

    modulus: QuadIdeal
    structure: tuple[int, ...]
    _dlog: dict = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        n = 1
        for d in self.structure:
            n *= d
        return n

    def dlog(self, x: QuadInt) -> tuple[int, ...]:
        field = self.modulus.field
        key = _reduce_mod(field, self.modulus, x)
        if key not in self._dlog:
            raise NotCoprime("element is not coprime to the modulus")
        return self._dlog[key]

    def class_of_ideal(self, ideal: QuadIdeal) -> tuple[int, ...]:
        """Ray class of an ideal coprime to the modulus (via any generator)."""
        if not ideal.is_coprime(self.modulus):
            raise NotCoprime("ideal is not coprime to the modulus")
        return self.dlog(find_generator(ideal))

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.structure)

    def add(self, u, v) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(u, v, self.structure))


def ray_class_group(field: QuadField, modulus: QuadIdeal) -> RayClassGroup:
    """(O/m)^x modulo global units, in invariant-factor form.

    Class number one makes every ideal principal, so this quotient is the
    full ray class group of the modulus.
    """
    keys = sorted(set(_unit_residues(field, modulus)))
    index = {k: i for i, k in enumerate(keys)}

    def mul_key(k1, k2):
        x = field.element(*k1) * field.element(*k2)
        return _reduce_mod(field, modulus, x)

    n = len(keys)
    rows = []
    for i in range(n):
        for j in range(i, n):
            k = index[mul_key(keys[i], keys[j])]
            row = [0] * n
            row[i] += 1
            row[j] += 1
            row[k] -= 1
            rows.append(tuple(row))
    for u in field.units:
        row = [0] * n
        row[index[_reduce_mod(field, modulus, u)]] += 1
        rows.append(tuple(row))
    dmat, _, v = la.smith_normal_form(la.freeze(rows))
    diag = [dmat[i][i] for i in range(min(len(rows), n))]
    if len(diag) < n or any(x == 0 for x in diag):
        raise InternalInconsistency("ray class group must be finite")
    kept = [i for i in range(n) if diag[i] > 1]
    structure = tuple(diag[i] for i in kept)
    dlog = {}
    for key in keys:
        q = index[key]
        dlog[key] = tuple(v[q][i] % diag[i] for i in kept)
    rcg = RayClassGroup(modulus=modulus, structure=structure, _dlog=dlog)
    for i in range(n):  # multiplicativity audit of the table
        for j in range(n):
            lhs = rcg.add(dlog[keys[i]], dlog[keys[j]])
            if lhs != dlog[mul_key(keys[i], keys[j])]:
                raise InternalInconsistency("discrete log is not multiplicative")
    return rcg


def infinity_type_lattice(field: QuadField):
    """Exponent vectors (n_id, n_conj) of algebraic characters: all of Z^2.

    The constancy condition on conjugate pairs is vacuous with one pair, so
    the lattice is full; the ambient action swaps the two coordinates.  The
    result agrees with the Serre sublattice of the order-2 context.
    """
    from .cmtypes import CMFieldHandle
    from .groups import cyclic_group
    from .serre import full_character_lattice

    g = cyclic_group(2)
    handle = CMFieldHandle(group=g, iota=1, fixer=g.trivial_subgroup())
    return full_character_lattice(handle)


@dataclass(frozen=True)
class HeckeCharacterSpec:
    """An algebraic character of ideals: finite twist times a power of the
    primary generator and its conjugate.

    ``infinity_type`` = (n_id, n_conj) with nonnegative entries (values stay
    in the ring of integers).  ``twist_exponents`` are taken against the
    invariant factors of the conductor's ray class group; each twisted
    factor must have order dividing the unit group so that values stay
    exact.  The evaluation is multiplicative because the primary convention
    has trivial ray class group.
    """

    field: QuadField
    conductor: QuadIdeal
    infinity_type: tuple[int, int]
    twist_exponents: tuple[int, ...] = ()

    def __post_init__(self):
        n1, n2 = self.infinity_type
        if n1 < 0 or n2 < 0:
            raise CMError("infinity type must be nonnegative for ring values")
        if self.conductor.field != self.field:
            raise CMError("conductor belongs to a different field")
        if any(self.twist_exponents):
            rcg = self.ray_class_group
            if len(self.twist_exponents) != len(rcg.structure):
                raise CMError("twist exponent count does not match the group")
            n_units = len(self.field.units)
            for e, d in zip(self.twist_exponents, rcg.structure):
                order = d // math.gcd(e, d)
                if n_units % order:
                    raise CMError(
                        f"twist component of order {order} has no unit value"
                    )

    @cached_property
    def ray_class_group(self) -> RayClassGroup:
        return ray_class_group(self.field, self.conductor)

    def twist_value(self, alpha: QuadInt) -> QuadInt:
        if not any(self.twist_exponents):
            return self.field.one
        rcg = self.ray_class_group
        coords = rcg.dlog(alpha)
        n_units = len(self.field.units)
        exponent = 0
        for e, x, d in zip(self.twist_exponents, coords, rcg.structure):
            if e % d == 0:
                continue
            # component character of order o = d / gcd(e, d) valued in the
            # o-th roots inside the unit group
            g = math.gcd(e, d)
            o = d // g
            exponent += (n_units // o) * (((e * x) % d) // g)
        return self.field.unit_root ** (exponent % n_units)

    def to_json(self) -> dict:
        return {
            "d": self.field.d,
            "conductor": self.conductor.to_json(),
            "infinity_type": list(self.infinity_type),
            "twist_exponents": list(self.twist_exponents),
        }


def hecke_eval(spec: HeckeCharacterSpec, ideal: QuadIdeal) -> QuadInt:
    """chi(ideal) = twist * alpha^n1 * conj(alpha)^n2, alpha primary.

    Exact ring value; multiplicative in the ideal argument.
    """
    field = spec.field
    if ideal.field != field:
        raise CMError("ideal belongs to a different field")
    if not ideal.is_coprime(spec.conductor):
        raise NotCoprime("ideal is not coprime to the conductor")
    alpha = primary_generator(ideal)
    n1, n2 = spec.infinity_type
    value = alpha**n1 * alpha.conj() ** n2
    return spec.twist_value(alpha) * value


def canonical_weight_one_spec(field: QuadField) -> HeckeCharacterSpec:
    """The weight-one character with the field's primary convention as
    conductor, infinity type (1, 0), and no finite twist."""
    return HeckeCharacterSpec(
        field=field,
        conductor=canonical_conductor(field),
        infinity_type=(1, 0),
        twist_exponents=(),
    )


def parse_ideal(field: QuadField, data) -> QuadIdeal:
    """Ideal from serialized form: {"n","c","d"}, {"gen": [a, b]}, or a
    CLI string 'gen:a,b' / 'gen:a,b^k' / 'hnf:n,c,d'."""
    if isinstance(data, str):
        if data.startswith("gen:"):
            body = data[4:]
            power = 1
            if "^" in body:
                body, exp = body.split("^", 1)
                power = int(exp)
            a, b = (int(x) for x in body.split(","))
            return ideal_from_generator(field.element(a, b)) ** power
        if data.startswith("hnf:"):
            n, c, d = (int(x) for x in data[4:].split(","))
            return QuadIdeal(field=field, n=n, c=c, d=d)
        raise CMError(f"unrecognized ideal spec {data!r}")
    if "gen" in data:
        a, b = data["gen"]
        return ideal_from_generator(field.element(int(a), int(b)))
    return QuadIdeal(
        field=field, n=int(data["n"]), c=int(data["c"]), d=int(data["d"])
    )
