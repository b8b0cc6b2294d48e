"""Exact scalar arithmetic and exact linear algebra.

Fields are either cyclotomic Q(zeta_N), represented on the power basis of a
primitive N-th root `z` reduced modulo the N-th cyclotomic polynomial, or
prime fields GF(p).  All arithmetic is exact; equality is equality of
canonical coefficient vectors.  On top of the fields sit exact matrices,
associative algebras given by structure constants, and a Wedderburn
decomposition used everywhere a 2-condensation monad gets split.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class NotSplitOverField(Exception):
    """The working field is too small: a minimal polynomial stayed irreducible."""

    def __init__(self, minimal_poly_repr: str):
        super().__init__(
            f"center element has irreducible minimal polynomial {minimal_poly_repr}; "
            "enlarging the conductor may split it")
        self.minimal_poly_repr = minimal_poly_repr


class NotSemisimple(Exception):
    """A radical (or missing unit) was detected during decomposition."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, isqrt(p) + 1):
        if p % q == 0:
            return False
    return True


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, ascending."""
    # x^n - 1 divided by the product of all proper cyclotomic divisors
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    num = [Fraction(c) for c in num]
    for d in range(1, n):
        if n % d == 0:
            den = [Fraction(c) for c in cyclotomic_poly(d)]
            num = _frac_poly_div(num, den)
    assert all(c.denominator == 1 for c in num)
    return tuple(int(c) for c in num)


def _frac_poly_div(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert all(c == 0 for c in num[:len(den) - 1]) and all(c == 0 for c in num[len(den) - 1:])
    return out


class FieldSpec:
    """Ground field: kind 'cyclotomic' with conductor N, or 'prime' with p."""

    def __init__(self, kind: str, conductor: int):
        if kind not in ("cyclotomic", "prime"):
            raise ValueError(f"unknown field kind {kind!r}")
        if kind == "cyclotomic" and conductor < 1:
            raise ValueError("conductor must be >= 1")
        if kind == "prime" and not _is_prime(conductor):
            raise ValueError(f"{conductor} is not prime")
        self.kind = kind
        self.conductor = conductor
        self._zero_el = None
        self._one_el = None
        self._hash = hash((kind, conductor))
        if kind == "cyclotomic":
            self.degree = euler_phi(conductor)
            self._phi = cyclotomic_poly(conductor)
            # reduction vectors for z^k, for k from degree up to
            # max(2*degree-2, conductor-1): products and raw power-basis input
            top_power = max(2 * self.degree - 2, conductor - 1)
            self._red: list[tuple[Fraction, ...]] = []
            # z^degree = -(phi without leading term)
            base = [-Fraction(c) for c in self._phi[:-1]]
            self._red.append(tuple(base))
            for _ in range(top_power - self.degree):
                nxt = list((Fraction(0),) + self._red[-1][:-1])
                top = self._red[-1][-1]
                if top:
                    for i in range(self.degree):
                        nxt[i] += top * base[i]
                self._red.append(tuple(nxt))
        else:
            self.degree = 1

    @property
    def characteristic(self) -> int:
        return self.conductor if self.kind == "prime" else 0

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.kind, self.conductor) == (other.kind, other.conductor))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FieldSpec({self.kind!r}, {self.conductor})"

    # element constructors -------------------------------------------------
    def zero(self) -> "FieldElement":
        z = self._zero_el
        if z is None:
            z = self._zero_el = self.from_fraction(Fraction(0))
        return z

    def one(self) -> "FieldElement":
        o = self._one_el
        if o is None:
            o = self._one_el = self.from_fraction(Fraction(1))
        return o

    def from_int(self, n: int) -> "FieldElement":
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q: Fraction) -> "FieldElement":
        if self.kind == "prime":
            p = self.conductor
            den = q.denominator % p
            if den == 0:
                raise ZeroDivisionError("denominator not invertible in GF(p)")
            return FieldElement(self, (q.numerator * pow(den, p - 2, p)) % p)
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(q)
        return FieldElement(self, tuple(coeffs))

    def zeta(self, power: int = 1) -> "FieldElement":
        """z^power for the primitive N-th root z."""
        if self.kind == "prime":
            raise ValueError("no root of unity generator in a prime field")
        coeffs = [Fraction(0)] * max(self.degree, power % self.conductor + 1)
        coeffs[power % self.conductor] = Fraction(1)
        return self.from_coeffs(coeffs)

    def from_coeffs(self, coeffs) -> "FieldElement":
        """Element from a coefficient list over powers of z (any length < 2N)."""
        if self.kind == "prime":
            raise ValueError("prime fields take residues, not coefficient vectors")
        work = [Fraction(c) for c in coeffs]
        # reduce z^N = 1 first, then modulo the cyclotomic polynomial
        while len(work) > self.conductor:
            c = work.pop()
            work[len(work) - self.conductor] += c
        return FieldElement(self, self._reduce(work))

    def _reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        d = self.degree
        out = list(coeffs[:d]) + [Fraction(0)] * max(0, d - len(coeffs))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c:
                red = self._red[k - d]
                for i in range(d):
                    out[i] += c * red[i]
        return tuple(out)

    # literal grammar ------------------------------------------------------
    _TERM = re.compile(
        r"^(?P<sign>[+-]?)\s*(?:(?P<num>\d+)(?:/(?P<den>\d+))?)?"
        r"\s*(?P<star>\*)?\s*(?:z(?:\^(?P<pow>\d+))?)?$")

    def parse(self, text: str) -> "FieldElement":
        """Parse a scalar literal like "1/2*z^3 - 2"."""
        s = text.strip()
        if not s:
            raise ValueError("empty scalar literal")
        pieces = re.split(r"(?=[+-])", s.replace(" ", ""))
        total = self.zero()
        for piece in pieces:
            if not piece:
                continue
            m = self._TERM.match(piece)
            if not m or (m.group("num") is None and "z" not in piece):
                raise ValueError(f"bad scalar literal term {piece!r} in {text!r}")
            num = int(m.group("num")) if m.group("num") else 1
            den = int(m.group("den")) if m.group("den") else 1
            coeff = Fraction(num, den)
            if m.group("sign") == "-":
                coeff = -coeff
            power = 0
            if "z" in piece:
                power = int(m.group("pow")) if m.group("pow") else 1
            if power:
                if self.kind == "prime":
                    raise ValueError("root-of-unity literal in a prime field")
                total = total + self.zeta(power) * self.from_fraction(coeff)
            else:
                total = total + self.from_fraction(coeff)
        return total

    def format(self, x: "FieldElement") -> str:
        if self.kind == "prime":
            return str(x.value)
        terms = []
        for k, c in enumerate(x.value):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                zpart = "z" if k == 1 else f"z^{k}"
                body = zpart if mag == 1 else f"{mag}*{zpart}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign0, body0 = terms[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


class FieldElement:
    """One exact scalar; immutable; equality is coefficient equality."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        self.field = field
        self.value = value

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.value == other.value)

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0 if self.field.kind == "prime" else any(self.value)

    def is_zero(self) -> bool:
        return not self

    def is_one(self) -> bool:
        return self == self.field.one()

    def sort_key(self):
        if self.field.kind == "prime":
            return (self.value,)
        return tuple(self.value)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        f = self.field
        if f.kind == "prime":
            return FieldElement(f, (self.value + other.value) % f.conductor)
        a, b = self.value, other.value
        if len(a) == 1:
            return FieldElement(f, (a[0] + b[0],))
        return FieldElement(f, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "FieldElement":
        f = self.field
        if f.kind == "prime":
            return FieldElement(f, (-self.value) % f.conductor)
        return FieldElement(f, tuple(-a for a in self.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        f = self.field
        if f.kind == "prime":
            return FieldElement(f, (self.value * other.value) % f.conductor)
        a, b = self.value, other.value
        d = f.degree
        if d == 1:
            return FieldElement(f, (a[0] * b[0],))
        conv = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        return FieldElement(f, f._reduce(conv))

    def inverse(self) -> "FieldElement":
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        if f.kind == "prime":
            return FieldElement(f, pow(self.value, f.conductor - 2, f.conductor))
        if f.degree == 1:
            return FieldElement(f, (1 / self.value[0],))
        # extended Euclid in Q[x] against the cyclotomic polynomial
        phi = [Fraction(c) for c in f._phi]
        a = list(self.value)
        while a and a[-1] == 0:
            a.pop()
        r0, r1 = phi, a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        assert len(r0) == 1  # gcd is a unit since phi is irreducible
        c = r0[0]
        inv = [x / c for x in s0]
        return FieldElement(f, f._reduce(inv))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __repr__(self):
        return f"<{self.field.format(self)}>"


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# rational-coefficient polynomial helpers (ascending coefficient lists) ----

def _poly_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    b = _poly_trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        if len(a) >= i + len(b) and a[i + len(b) - 1]:
            c = a[i + len(b) - 1] / b[-1]
            q[i] = c
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return _poly_trim(q), _poly_trim(a[:len(b) - 1])


# field-coefficient polynomials (lists of FieldElement, ascending) ---------

def fpoly_trim(field: FieldSpec, p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def fpoly_mul(field: FieldSpec, a, b):
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return fpoly_trim(field, out)


def fpoly_divmod(field: FieldSpec, a, b):
    a = list(a)
    b = fpoly_trim(field, b)
    if not b:
        raise ZeroDivisionError
    lead_inv = b[-1].inverse()
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        if len(a) >= i + len(b) and not a[i + len(b) - 1].is_zero():
            c = a[i + len(b) - 1] * lead_inv
            q[i] = c
            for j, d in enumerate(b):
                a[i + j] = a[i + j] - c * d
    return fpoly_trim(field, q), fpoly_trim(field, a[:len(b) - 1])


def fpoly_gcd(field: FieldSpec, a, b):
    a, b = fpoly_trim(field, a), fpoly_trim(field, b)
    while b:
        _, r = fpoly_divmod(field, a, b)
        a, b = b, r
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def fpoly_xgcd(field: FieldSpec, a, b):
    """(g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [field.one()], []
    t0, t1 = [], [field.one()]
    while fpoly_trim(field, r1):
        q, r = fpoly_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _fpoly_sub(field, s0, fpoly_mul(field, q, s1))
        t0, t1 = t1, _fpoly_sub(field, t0, fpoly_mul(field, q, t1))
    r0 = fpoly_trim(field, r0)
    inv = r0[-1].inverse()
    scale = lambda p: [c * inv for c in p]
    return scale(r0), scale(s0), scale(t0)


def _fpoly_sub(field, a, b):
    n = max(len(a), len(b))
    a = list(a) + [field.zero()] * (n - len(a))
    b = list(b) + [field.zero()] * (n - len(b))
    return fpoly_trim(field, [x - y for x, y in zip(a, b)])


def fpoly_pow(field: FieldSpec, p, n: int):
    out = [field.one()]
    for _ in range(n):
        out = fpoly_mul(field, out, p)
    return out


# matrices -----------------------------------------------------------------

class ScalarMatrix:
    """Dense exact matrix; immutable by convention."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, entries, cols: int | None = None):
        self.field = field
        self.entries = tuple(tuple(row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else (cols or 0)
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    _ZEROS_CACHE: dict = {}

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "ScalarMatrix":
        key = (field, rows, cols)
        cached = ScalarMatrix._ZEROS_CACHE.get(key)
        if cached is None:
            z = field.zero()
            cached = ScalarMatrix(field, [[z] * cols for _ in range(rows)], cols)
            ScalarMatrix._ZEROS_CACHE[key] = cached
        return cached

    _IDENTITY_CACHE: dict = {}

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "ScalarMatrix":
        key = (field, n)
        cached = ScalarMatrix._IDENTITY_CACHE.get(key)
        if cached is None:
            z, o = field.zero(), field.one()
            cached = ScalarMatrix(
                field, [[o if i == j else z for j in range(n)] for i in range(n)])
            ScalarMatrix._IDENTITY_CACHE[key] = cached
        return cached

    @staticmethod
    def from_rows(field: FieldSpec, rows, cols=None) -> "ScalarMatrix":
        return ScalarMatrix(field, rows, cols)

    def __eq__(self, other):
        return (isinstance(other, ScalarMatrix) and self.field == other.field
                and self.entries == other.entries and (self.rows, self.cols) == (other.rows, other.cols))

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return ScalarMatrix(self.field, [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return ScalarMatrix(self.field, [
            [a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.cols == 0 or other.cols == 0 or self.rows == 0:
            return ScalarMatrix.zeros(self.field, self.rows, other.cols)
        if self.cols == 1 and self.rows == 1 and other.cols == 1:
            return ScalarMatrix(self.field,
                                [[self.entries[0][0] * other.entries[0][0]]], 1)
        z = self.field.zero()
        out = []
        ot = list(zip(*other.entries))
        for row in self.entries:
            new = []
            for col in ot:
                acc = z
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return ScalarMatrix.from_rows(self.field, out, other.cols)

    def scale(self, c: FieldElement) -> "ScalarMatrix":
        return ScalarMatrix(self.field, [[c * a for a in row] for row in self.entries])

    def transpose(self) -> "ScalarMatrix":
        if not self.entries:
            return ScalarMatrix.zeros(self.field, self.cols, self.rows)
        return ScalarMatrix.from_rows(self.field, [list(c) for c in zip(*self.entries)], self.rows)

    def kron(self, other: "ScalarMatrix") -> "ScalarMatrix":
        out = []
        for r1 in range(self.rows):
            for r2 in range(other.rows):
                row = []
                for c1 in range(self.cols):
                    a = self.entries[r1][c1]
                    for c2 in range(other.cols):
                        row.append(a * other.entries[r2][c2])
                out.append(row)
        m = ScalarMatrix.zeros(self.field, self.rows * other.rows, self.cols * other.cols)
        return ScalarMatrix(self.field, out) if out else m

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.entries for a in row)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return self == ScalarMatrix.identity(self.field, self.rows)

    def row_list(self):
        return [list(r) for r in self.entries]

    def rref(self):
        """(rref matrix rows, pivot column list)."""
        m = self.row_list()
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if not m[i][c].is_zero()), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = m[r][c].inverse()
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "ScalarMatrix":
        if self.rows != self.cols:
            raise ValueError("not square")
        n = self.rows
        aug = [list(self.entries[i]) + list(ScalarMatrix.identity(self.field, n).entries[i])
               for i in range(n)]
        m, pivots = ScalarMatrix(self.field, aug).rref() if n else ([], [])
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return ScalarMatrix(self.field, [row[n:] for row in m])

    def nullspace(self) -> list[list[FieldElement]]:
        m, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        z, o = self.field.zero(), self.field.one()
        for fc in free:
            vec = [z] * self.cols
            vec[fc] = o
            for r, pc in enumerate(pivots):
                vec[pc] = -m[r][fc]
            basis.append(vec)
        return basis


@dataclass
class LinearSolution:
    particular: list
    kernel: list


def solve_linear(A: ScalarMatrix, b: list) -> LinearSolution | None:
    """Solve Ax = b exactly; returns particular solution + kernel basis, or None."""
    if len(b) != A.rows:
        raise ValueError("dimension mismatch")
    aug = [list(A.entries[i]) + [b[i]] for i in range(A.rows)]
    if not aug:
        return LinearSolution([A.field.zero()] * A.cols if A.cols else [],
                              ScalarMatrix.zeros(A.field, 0, A.cols).nullspace())
    m, pivots = ScalarMatrix(A.field, aug).rref()
    if A.cols in pivots:
        return None
    z = A.field.zero()
    x = [z] * A.cols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][A.cols]
    return LinearSolution(x, A.nullspace())


# associative algebras -----------------------------------------------------

class AssocAlgebra:
    """Finite-dimensional algebra via structure constants c[i][j][k]."""

    def __init__(self, field: FieldSpec, structure, unit=None):
        self.field = field
        self.structure = tuple(tuple(tuple(row) for row in plane) for plane in structure)
        self.dim = len(self.structure)
        self.unit = list(unit) if unit is not None else None
        self._sparse = None

    def sparse_structure(self):
        """Nonzero structure constants as sparse[i][j] = ((k, c), ...)."""
        if self._sparse is None:
            self._sparse = tuple(
                tuple(tuple((k, s) for k, s in enumerate(row) if not s.is_zero())
                      for row in plane)
                for plane in self.structure)
        return self._sparse

    def mul(self, u, v):
        sp = self.sparse_structure()
        z = self.field.zero()
        out = [z] * self.dim
        for i in range(self.dim):
            ui = u[i]
            if ui.is_zero():
                continue
            spi = sp[i]
            for j in range(self.dim):
                vj = v[j]
                if vj.is_zero():
                    continue
                c = ui * vj
                for k, s in spi[j]:
                    out[k] = out[k] + c * s
        return out

    def basis_vec(self, i):
        z = self.field.zero()
        v = [z] * self.dim
        v[i] = self.field.one()
        return v

    def left_mult(self, u) -> ScalarMatrix:
        cols = [self.mul(u, self.basis_vec(j)) for j in range(self.dim)]
        return ScalarMatrix.from_rows(
            self.field, [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)], self.dim)

    def right_mult(self, u) -> ScalarMatrix:
        cols = [self.mul(self.basis_vec(j), u) for j in range(self.dim)]
        return ScalarMatrix.from_rows(
            self.field, [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)], self.dim)

    def is_associative(self) -> bool:
        sp = self.sparse_structure()
        for i in range(self.dim):
            spi = sp[i]
            for j in range(self.dim):
                ij = spi[j]
                spj = sp[j]
                for k in range(self.dim):
                    lhs = {}
                    for m, c1 in ij:
                        for l, c2 in sp[m][k]:
                            v = c1 * c2
                            lhs[l] = lhs[l] + v if l in lhs else v
                    rhs = {}
                    for m, c1 in spj[k]:
                        for l, c2 in spi[m]:
                            v = c1 * c2
                            rhs[l] = rhs[l] + v if l in rhs else v
                    for l in set(lhs) | set(rhs):
                        a = lhs.get(l)
                        b = rhs.get(l)
                        if a is None:
                            if not b.is_zero():
                                return False
                        elif b is None:
                            if not a.is_zero():
                                return False
                        elif a != b:
                            return False
        return True

    def find_unit(self):
        """Two-sided unit, or None.  Caches into self.unit on success."""
        if self.unit is not None:
            return self.unit
        if self.dim == 0:
            self.unit = []
            return self.unit
        rows = []
        rhs = []
        for j in range(self.dim):
            bj = self.basis_vec(j)
            lm = self.right_mult(bj)   # x -> x * b_j as function of x coefficients
            rm = self.left_mult(bj)
            for k in range(self.dim):
                rows.append([lm[k, i] for i in range(self.dim)])
                rhs.append(bj[k])
                rows.append([rm[k, i] for i in range(self.dim)])
                rhs.append(bj[k])
        sol = solve_linear(ScalarMatrix.from_rows(self.field, rows, self.dim), rhs)
        if sol is None:
            return None
        self.unit = sol.particular
        return self.unit

    def center_basis(self, candidates=None):
        # x central iff b_j x = x b_j for all j; starting from `candidates`
        # (default: the whole algebra), intersect the commutator kernels
        # incrementally so the working dimension shrinks fast
        if self.dim == 0:
            return []
        if candidates is None:
            cols = [self.basis_vec(i) for i in range(self.dim)]
        else:
            cols = [list(v) for v in candidates]
        z = self.field.zero()
        for j in range(self.dim):
            if not cols:
                return []
            bj = self.basis_vec(j)
            comm = []
            for w in cols:
                lw = self.mul(bj, w)
                rw = self.mul(w, bj)
                comm.append([a - b for a, b in zip(lw, rw)])
            M = ScalarMatrix.from_rows(
                self.field, [list(r) for r in zip(*comm)], len(cols))
            null = M.nullspace()
            if len(null) == len(cols):
                continue
            cols = [[sum((k[c] * cols[c][i] for c in range(len(cols))), z)
                     for i in range(self.dim)] for k in null]
        return cols

    def min_poly(self, x, unit):
        """Monic minimal polynomial of x with x^0 := unit."""
        vecs = [list(unit)]
        cur = list(unit)
        while True:
            cur = self.mul(cur, x)
            vecs.append(cur)
            mat = ScalarMatrix.from_rows(self.field, [list(v) for v in zip(*vecs)], len(vecs))
            null = mat.nullspace()
            if null:
                rel = null[0]
                inv = rel[-1].inverse()
                return [c * inv for c in rel]

    def trace_form_rank(self) -> int:
        # tr(L_i L_j) = sum_{k,m} c[i][m][k] c[j][k][m], directly from the
        # sparse structure constants
        sp = self.sparse_structure()
        z = self.field.zero()
        rows = []
        for i in range(self.dim):
            spi = sp[i]
            row = []
            for j in range(self.dim):
                spj = sp[j]
                tr = z
                for m in range(self.dim):
                    for k, c1 in spi[m]:
                        for kk, c2 in spj[k]:
                            if kk == m:
                                tr = tr + c1 * c2
                row.append(tr)
            rows.append(row)
        return ScalarMatrix.from_rows(self.field, rows, self.dim).rank()


# polynomial factorization over the working field --------------------------

def factor_poly(field: FieldSpec, coeffs) -> list[tuple[list, int]]:
    """Factor a monic polynomial into irreducible (factor, multiplicity) pairs."""
    coeffs = fpoly_trim(field, list(coeffs))
    assert coeffs and coeffs[-1].is_one()
    if field.kind == "prime":
        return _factor_prime(field, coeffs)
    return _factor_cyclotomic(field, coeffs)


def _factor_prime(field, coeffs):
    p = field.conductor
    out = []
    work = list(coeffs)

    def monic_polys(deg):
        import itertools as it
        for tail in it.product(range(p), repeat=deg):
            yield [field.from_int(c) for c in tail] + [field.one()]

    while len(work) > 1:
        deg = len(work) - 1
        found = None
        for d in range(1, deg // 2 + 1):
            for cand in monic_polys(d):
                q, r = fpoly_divmod(field, work, cand)
                if not r:
                    found = (cand, q)
                    break
            if found:
                break
        if found is None:
            _accumulate(field, out, work)
            break
        cand, q = found
        _accumulate(field, out, cand)
        work = q
    return out


def _accumulate(field, out, factor):
    for i, (f, m) in enumerate(out):
        if f == factor:
            out[i] = (f, m + 1)
            return
    out.append((list(factor), 1))


@lru_cache(maxsize=None)
def _sympy_field(conductor: int):
    import sympy as sp
    if conductor <= 2:
        return sp.QQ, None
    zeta = sp.exp(2 * sp.pi * sp.I / conductor)
    return sp.QQ.algebraic_field(zeta), zeta


def _factor_cyclotomic(field, coeffs):
    import sympy as sp
    K, _ = _sympy_field(field.conductor)
    x = sp.Symbol("x")

    def to_K(elem: FieldElement):
        if field.conductor <= 2:
            return K.from_sympy(sp.Rational(elem.value[0]))
        # ANP representation: descending coefficients over powers of the generator
        rep = [sp.QQ.from_sympy(sp.Rational(c)) for c in reversed(elem.value)]
        return K.dtype(rep, K.mod.to_list(), sp.QQ)

    def from_K(a):
        if field.conductor <= 2:
            q = sp.Rational(K.to_sympy(a))
            return field.from_fraction(Fraction(q.p, q.q))
        desc = a.to_list()  # descending powers of the generator, rational entries
        asc = [Fraction(int(t.numerator), int(t.denominator)) for t in reversed(desc)]
        return field.from_coeffs(asc)

    poly = sp.Poly([to_K(c) for c in reversed(coeffs)], x, domain=K)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fac = fac.monic()
        fc = [K.from_sympy(c) for c in reversed(fac.all_coeffs())]
        out.append(([from_K(c) for c in fc], mult))
    return out


# Wedderburn ---------------------------------------------------------------

@dataclass
class WedderburnBlock:
    idempotent: list
    block_dim: int
    matrix_units: list   # n x n nested list of coefficient vectors
    row_parts: list      # partition index for each row


@dataclass
class WedderburnDecomposition:
    blocks: list
    change_of_basis: ScalarMatrix


def _corner_basis(alg: AssocAlgebra, q):
    vecs = []
    rows = []
    for i in range(alg.dim):
        v = alg.mul(alg.mul(q, alg.basis_vec(i)), q)
        cand = rows + [v]
        if ScalarMatrix.from_rows(alg.field, cand, alg.dim).rank() == len(cand):
            rows.append(v)
            vecs.append(v)
    return vecs


def _idempotents_from_factors(alg, x, unit, factors):
    """CRT idempotents for a min poly with >= 2 coprime primary factors."""
    field = alg.field
    idems = []
    full = [field.one()]
    for f, m in factors:
        full = fpoly_mul(field, full, fpoly_pow(field, f, m))
    for f, m in factors:
        fm = fpoly_pow(field, f, m)
        rest, _ = fpoly_divmod(field, full, fm)
        g, u, v = fpoly_xgcd(field, rest, fm)
        assert len(g) == 1
        proj = fpoly_mul(field, u, rest)
        # evaluate proj at x inside the corner with unit `unit`
        acc = [field.zero()] * alg.dim
        power = list(unit)
        for c in proj:
            if not c.is_zero():
                acc = [a + c * b for a, b in zip(acc, power)]
            power = alg.mul(power, x)
        idems.append(acc)
    return idems


def _split_commutative(alg: AssocAlgebra, unit, center):
    """Refine `unit` into central idempotents whose corner-center is a line.

    Candidates stay inside the center so every idempotent produced (a
    polynomial in a central element with central unit) is itself central.
    """
    field = alg.field
    done = []
    work = [unit]
    while work:
        q = work.pop()
        # basis of the center localized at q
        loc = []
        for z in center:
            v = alg.mul(q, z)
            cand = loc + [v]
            if ScalarMatrix.from_rows(field, cand, alg.dim).rank() == len(cand):
                loc.append(v)
        if len(loc) <= 1:
            done.append(q)
            continue
        split = None
        witness = None
        for x in loc:
            mp = alg.min_poly(x, q)
            factors = factor_poly(field, mp)
            if len(factors) >= 2:
                split = _idempotents_from_factors(alg, x, q, factors)
                break
            f, _m = factors[0]
            if len(f) > 2:
                witness = f
        if split is None:
            if witness is not None:
                raise NotSplitOverField(_fpoly_repr(field, witness))
            raise NotSemisimple("central corner of dimension > 1 with only scalar spectra")
        work.extend(split)
    return done


def _vadd(field, a, b):
    return [x + y for x, y in zip(a, b)]


def _fpoly_repr(field, poly):
    return " + ".join(f"({field.format(c)})*x^{k}" for k, c in enumerate(poly))


def _split_corner_primitive(alg: AssocAlgebra, q):
    """Primitive orthogonal idempotents refining q (q A q need not be commutative)."""
    field = alg.field
    corner = _corner_basis(alg, q)
    if len(corner) <= 1:
        return [q]
    witness = None
    candidates = list(corner)
    candidates += [alg.mul(a, b) for a in corner for b in corner]
    candidates += [_vadd(field, a, b) for a in corner for b in corner if a is not b]
    for cand in candidates:
        x = alg.mul(alg.mul(q, cand), q)
        mp = alg.min_poly(x, q)
        factors = factor_poly(field, mp)
        if len(factors) >= 2:
            pieces = _idempotents_from_factors(alg, x, q, factors)
            out = []
            for piece in pieces:
                out.extend(_split_corner_primitive(alg, piece))
            return out
        f, m = factors[0]
        if len(f) > 2:
            witness = f
    if witness is not None:
        raise NotSplitOverField(_fpoly_repr(field, witness))
    raise NotSemisimple("corner of dimension > 1 admits no split element")


def decompose_semisimple_algebra(alg: AssocAlgebra, unit_partition=None) -> WedderburnDecomposition:
    """Split a semisimple algebra into full matrix blocks over the working field.

    unit_partition: optional orthogonal idempotents summing to the unit;
    primitive idempotents are refined inside those corners so rows stay
    supported on single partition members (used by the monad flattening).
    """
    field = alg.field
    if alg.dim == 0:
        return WedderburnDecomposition([], ScalarMatrix.zeros(field, 0, 0))
    if not alg.is_associative():
        raise ValueError("structure constants are not associative")
    unit = alg.find_unit()
    if unit is None:
        raise NotSemisimple("algebra has no two-sided unit")
    if field.characteristic == 0 and alg.trace_form_rank() < alg.dim:
        raise NotSemisimple("trace form is degenerate")
    if unit_partition is None:
        unit_partition = [unit]
    if len(unit_partition) == 1:
        center = alg.center_basis()
    else:
        # central elements are fixed by conjugation with the partition
        # idempotents, so they live in the diagonal corners
        cand = []
        for u_s in unit_partition:
            cand.extend(_corner_basis(alg, u_s))
        center = alg.center_basis(cand)
    # refine the unit into central primitive idempotents, working in the full
    # algebra but with central candidates only
    central_idems = _split_commutative(alg, unit, center)
    blocks = []
    for E in central_idems:
        rows = []
        for part_idx, u_s in enumerate(unit_partition):
            q = alg.mul(alg.mul(E, u_s), E)
            if all(c.is_zero() for c in q):
                continue
            for prim in _split_corner_primitive(alg, q):
                rows.append((part_idx, prim))
        n = len(rows)
        corner_dim = len(_corner_basis(alg, E))
        if n * n != corner_dim:
            raise NotSplitOverField(f"corner of dimension {corner_dim} with {n} primitive idempotents")
        units = _matrix_units(alg, rows)
        blocks.append(WedderburnBlock(
            idempotent=E, block_dim=n, matrix_units=units,
            row_parts=[p for p, _ in rows]))
    blocks.sort(key=lambda b: (b.block_dim, tuple(c.sort_key() for c in b.idempotent)))
    cols = []
    for b in blocks:
        for p in range(b.block_dim):
            for qq in range(b.block_dim):
                cols.append(b.matrix_units[p][qq])
    cob = ScalarMatrix.from_rows(
        field, [[cols[j][i] for j in range(len(cols))] for i in range(alg.dim)], len(cols))
    decomp = WedderburnDecomposition(blocks, cob)
    _verify_decomposition(alg, decomp, unit)
    return decomp


def _matrix_units(alg: AssocAlgebra, rows):
    field = alg.field
    n = len(rows)
    prims = [p for _, p in rows]
    if n == 1:
        return [[prims[0]]]
    e1 = prims[0]
    u = [None] * n   # E_{1i}
    v = [None] * n   # E_{i1}
    u[0] = e1
    v[0] = e1
    for i in range(1, n):
        space = []
        for k in range(alg.dim):
            w = alg.mul(alg.mul(e1, alg.basis_vec(k)), prims[i])
            cand = space + [w]
            if ScalarMatrix.from_rows(field, cand, alg.dim).rank() == len(cand):
                space.append(w)
        if len(space) != 1:
            raise NotSplitOverField(f"hom-corner dimension {len(space)} between primitive idempotents")
        ui = space[0]
        space2 = []
        for k in range(alg.dim):
            w = alg.mul(alg.mul(prims[i], alg.basis_vec(k)), e1)
            cand = space2 + [w]
            if ScalarMatrix.from_rows(field, cand, alg.dim).rank() == len(cand):
                space2.append(w)
        if len(space2) != 1:
            raise NotSplitOverField("asymmetric hom-corner between primitive idempotents")
        vi = space2[0]
        prod = alg.mul(ui, vi)
        # prod = c * e1; find c on a nonzero coordinate of e1
        c = None
        for k in range(alg.dim):
            if not e1[k].is_zero():
                c = prod[k] / e1[k]
                break
        if c is None or c.is_zero():
            raise NotSemisimple("degenerate pairing between primitive idempotents")
        ci = c.inverse()
        u[i] = ui
        v[i] = [ci * x for x in vi]
    units = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            units[i][j] = alg.mul(v[i], u[j])
    return units


def _verify_decomposition(alg: AssocAlgebra, decomp: WedderburnDecomposition, unit):
    field = alg.field
    total = [field.zero()] * alg.dim
    flat = []
    for bi, b in enumerate(decomp.blocks):
        for p in range(b.block_dim):
            total = _vadd(field, total, b.matrix_units[p][p])
            for q in range(b.block_dim):
                flat.append((bi, p, q, b.matrix_units[p][q]))
    assert total == list(unit), "matrix units do not sum to the unit"
    for b1, p1, q1, m1 in flat:
        for b2, p2, q2, m2 in flat:
            prod = alg.mul(m1, m2)
            if b1 == b2 and q1 == p2:
                expect = decomp.blocks[b1].matrix_units[p1][q2]
            else:
                expect = [field.zero()] * alg.dim
            assert prod == list(expect), "matrix unit relations failed"
