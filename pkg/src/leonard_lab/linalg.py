"""Dense exact linear algebra over a :class:`FieldSpec`.

Matrices are numpy object arrays of :class:`FieldElement`, wrapped so the
field travels with the data. Rows and columns are indexed ``0..d``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateEigenspace,
    DimensionTooLarge,
    EigenvaluesNotDistinct,
    FieldMismatch,
    NotAnEigenvalue,
    SingularBasisMatrix,
    SpectrumNotInField,
)
from .scalar import PRIME_FIELD, FieldElement, FieldSpec

COFACTOR_MAX_DIM = 8
_BRUTE_FORCE_ROOT_LIMIT = 1 << 16


def _frozen(arr):
    arr.setflags(write=False)
    return arr


class ExactVector:
    __slots__ = ("field", "entries")

    def __init__(self, field: FieldSpec, entries):
        arr = np.empty(len(entries), dtype=object)
        for i, x in enumerate(entries):
            arr[i] = field(x)
        self.field = field
        self.entries = _frozen(arr)

    @classmethod
    def _wrap(cls, field, arr):
        obj = object.__new__(cls)
        obj.field = field
        obj.entries = _frozen(arr)
        return obj

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def scale(self, c) -> "ExactVector":
        c = self.field(c)
        return ExactVector._wrap(self.field, np.array([c * x for x in self.entries] or [], dtype=object))

    def __eq__(self, other):
        if not isinstance(other, ExactVector):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and all(x == y for x, y in zip(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.field, tuple(self.entries)))

    def to_strings(self) -> list[str]:
        return [x.serialize() for x in self.entries]

    def __repr__(self):
        return f"ExactVector({self.field}, [{', '.join(self.to_strings())}])"


class ExactMatrix:
    __slots__ = ("field", "entries")

    def __init__(self, field: FieldSpec, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("ExactMatrix must be square and nonempty")
        arr = np.empty((n, n), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field(x)
        self.field = field
        self.entries = _frozen(arr)

    @classmethod
    def _wrap(cls, field, arr):
        obj = object.__new__(cls)
        obj.field = field
        obj.entries = _frozen(arr)
        return obj

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        return cls.diagonal(field, [1] * n)

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        return cls.diagonal(field, [0] * n)

    @classmethod
    def diagonal(cls, field: FieldSpec, values: Sequence) -> "ExactMatrix":
        n = len(values)
        arr = np.full((n, n), field.zero, dtype=object)
        for i, v in enumerate(values):
            arr[i, i] = field(v)
        return cls._wrap(field, arr)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[ExactVector]) -> "ExactMatrix":
        arr = np.empty((len(columns), len(columns)), dtype=object)
        for j, col in enumerate(columns):
            if col.field != field:
                raise FieldMismatch("column from another field")
            arr[:, j] = col.entries
        return cls._wrap(field, arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.dim - 1

    def __getitem__(self, idx):
        return self.entries[idx]

    def rows(self) -> list[list[FieldElement]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> ExactVector:
        return ExactVector._wrap(self.field, self.entries[:, j].copy())

    def diagonal_entries(self) -> list[FieldElement]:
        return [self.entries[i, i] for i in range(self.dim)]

    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"cannot combine {self.field} with {other.field}")
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        self._check(other)
        return ExactMatrix._wrap(self.field, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return ExactMatrix._wrap(self.field, self.entries - other.entries)

    def __neg__(self):
        return ExactMatrix._wrap(self.field, -self.entries)

    def __matmul__(self, other):
        if isinstance(other, ExactVector):
            if other.field != self.field or other.dim != self.dim:
                raise FieldMismatch("matrix-vector field or size mismatch")
            return ExactVector._wrap(self.field, self.entries.dot(other.entries))
        self._check(other)
        return ExactMatrix._wrap(self.field, self.entries.dot(other.entries))

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        return ExactMatrix._wrap(self.field, self.entries * c)

    def shift(self, lam) -> "ExactMatrix":
        """Return ``M - lam*I``."""
        lam = self.field(lam)
        arr = self.entries.copy()
        for i in range(self.dim):
            arr[i, i] = arr[i, i] - lam
        return ExactMatrix._wrap(self.field, arr)

    def permuted(self, order: Sequence[int]) -> "ExactMatrix":
        """Simultaneous row/column permutation: entry (i, j) is ``M[order[i], order[j]]``."""
        idx = np.asarray(order, dtype=np.intp)
        return ExactMatrix._wrap(self.field, self.entries[np.ix_(idx, idx)])

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._wrap(self.field, self.entries.T.copy())

    def with_entry(self, i: int, j: int, value) -> "ExactMatrix":
        arr = self.entries.copy()
        arr[i, j] = self.field(value)
        return ExactMatrix._wrap(self.field, arr)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and all(x == y for x, y in zip(self.entries.flat, other.entries.flat))
        )

    def __hash__(self):
        return hash((self.field, tuple(self.entries.flat)))

    def to_strings(self) -> list[list[str]]:
        return [[x.serialize() for x in row] for row in self.entries]

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.to_strings()})"

    # shape predicates ---------------------------------------------------

    def _band_ok(self, lower: int, upper: int) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                if (j - i > upper or i - j > lower) and not self.entries[i, j].is_zero():
                    return False
        return True

    def is_diagonal(self) -> bool:
        return self._band_ok(0, 0)

    def is_upper_triangular(self) -> bool:
        return self._band_ok(0, self.dim)

    def is_lower_triangular(self) -> bool:
        return self._band_ok(self.dim, 0)

    def is_tridiagonal(self) -> bool:
        return self._band_ok(1, 1)

    def is_irreducible_tridiagonal(self) -> bool:
        if not self.is_tridiagonal():
            return False
        return all(
            not self.entries[i, i - 1].is_zero() and not self.entries[i - 1, i].is_zero()
            for i in range(1, self.dim)
        )


def matrix(field: FieldSpec, rows) -> ExactMatrix:
    return ExactMatrix(field, rows)


def vector(field: FieldSpec, entries) -> ExactVector:
    return ExactVector(field, entries)


# determinants ---------------------------------------------------------------


def _bareiss(a: list[list[int]], exact_div) -> int:
    """Fraction-free elimination on a mutable integer grid; returns det up to reduction."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = exact_div(akk * ri[j] - aik * rk[j], prev)
        prev = akk
    return sign * a[n - 1][n - 1]


def determinant_bareiss(M: ExactMatrix) -> FieldElement:
    """Exact determinant by Bareiss elimination with first-nonzero pivoting.

    Over Q each row is first scaled to integers, so the elimination runs on
    Python ints and every division is exact. Over GF(p) the same loop runs on
    residues with division by the previous pivot done through its inverse.
    """
    field = M.field
    if field.kind == PRIME_FIELD:
        p = field.modulus

        def div_mod(x, y):
            return (x * pow(y, -1, p)) % p

        grid = [[x.value for x in row] for row in M.entries]
        return field.from_integer(_bareiss(grid, div_mod))

    grid = []
    scale = 1
    for row in M.entries:
        den = math.lcm(*(x.value.denominator for x in row))
        scale *= den
        grid.append([x.value.numerator * (den // x.value.denominator) for x in row])

    def div_exact(x, y):
        q, r = divmod(x, y)
        assert r == 0, "Bareiss division must be exact"
        return q

    det = _bareiss(grid, div_exact)
    return field.fraction(det, scale)


def determinant_cofactor(M: ExactMatrix) -> FieldElement:
    """Laplace expansion along the first row; factorial cost, capped at dim 8."""
    if M.dim > COFACTOR_MAX_DIM:
        raise DimensionTooLarge(f"cofactor expansion limited to dim <= {COFACTOR_MAX_DIM}, got {M.dim}")

    def expand(rows: tuple[int, ...], cols: tuple[int, ...]) -> FieldElement:
        if len(rows) == 1:
            return M.entries[rows[0], cols[0]]
        r0, rest = rows[0], rows[1:]
        total = M.field.zero
        for k, c in enumerate(cols):
            entry = M.entries[r0, c]
            if entry.is_zero():
                continue
            minor = expand(rest, cols[:k] + cols[k + 1 :])
            total = total + entry * minor if k % 2 == 0 else total - entry * minor
        return total

    idx = tuple(range(M.dim))
    return expand(idx, idx)


# row reduction -------------------------------------------------------------


def row_reduce(M: ExactMatrix) -> tuple[list[list[FieldElement]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = M.rows()
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if not a[i][c].is_zero()), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inv()
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def rank(M: ExactMatrix) -> int:
    return len(row_reduce(M)[1])


def kernel_basis(M: ExactMatrix) -> list[ExactVector]:
    """Basis of ``{v : Mv = 0}``; one vector per free column, free entry set to 1."""
    field = M.field
    reduced, pivots = row_reduce(M)
    n = M.dim
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for row, pc in enumerate(pivots):
            v[pc] = -reduced[row][f]
        basis.append(ExactVector(field, v))
    return basis


def normalize_leading(v: ExactVector) -> ExactVector:
    lead = next((x for x in v.entries if not x.is_zero()), None)
    if lead is None:
        return v
    return v.scale(lead.inv())


def eigenvector_for(M: ExactMatrix, lam) -> ExactVector:
    """Eigenvector for a simple eigenvalue, scaled so its first nonzero entry is 1."""
    lam = M.field(lam)
    basis = kernel_basis(M.shift(lam))
    if not basis:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue")
    if len(basis) > 1:
        raise DegenerateEigenspace(f"eigenspace of {lam} has dimension {len(basis)}")
    return normalize_leading(basis[0])


def inverse(M: ExactMatrix) -> ExactMatrix:
    field = M.field
    n = M.dim
    ident = ExactMatrix.identity(field, n)
    aug = [list(M.entries[i]) + list(ident.entries[i]) for i in range(n)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if not aug[i][c].is_zero()), None)
        if pivot is None:
            raise SingularBasisMatrix("matrix is not invertible")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = aug[c][c].inv()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return ExactMatrix(field, [row[n:] for row in aug])


def change_basis(M: ExactMatrix, P: ExactMatrix) -> ExactMatrix:
    """Return ``P^-1 M P``, the matrix of M relative to the columns of P."""
    return inverse(P) @ M @ P


# characteristic polynomial and in-field roots ------------------------------


def charpoly(M: ExactMatrix) -> list[FieldElement]:
    """Coefficients of det(xI - M), leading first, via the division-free
    Samuelson-Berkowitz recursion (valid in every characteristic)."""
    field = M.field
    a = M.entries

    def rec(k: int) -> list[FieldElement]:
        # charpoly of the trailing principal submatrix a[k:, k:]
        n = a.shape[0] - k
        if n == 1:
            return [field.one, -a[k, k]]
        q = rec(k + 1)
        row = a[k, k + 1 :]
        col = a[k + 1 :, k]
        sub = a[k + 1 :, k + 1 :]
        t = [field.one, -a[k, k]]
        vec = col
        for _ in range(n - 1):
            t.append(-row.dot(vec))
            vec = sub.dot(vec)
        out = []
        for i in range(n + 1):
            s = field.zero
            for j in range(min(i, n - 1) + 1):
                s = s + t[i - j] * q[j]
            out.append(s)
        return out

    return rec(0)


def poly_eval(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in coeffs:
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    return out


def _multiplicity(coeffs, root) -> int:
    m = 0
    while len(coeffs) > 1 and poly_eval(coeffs, root).is_zero():
        coeffs = _deflate(coeffs, root)
        m += 1
    return m


def listing_key(x: FieldElement):
    """Canonical eigenvalue listing: descending value over Q, descending
    signed residue over GF(p)."""
    if x.field.kind == PRIME_FIELD:
        p = x.field.modulus
        r = x.value if x.value <= p // 2 else x.value - p
        return (-r, x.value)
    return (-x.value, 0)


def roots_in_field(coeffs: Sequence[FieldElement], field: FieldSpec) -> dict[FieldElement, int]:
    """Roots lying in ``field`` with multiplicities."""
    if field.kind == PRIME_FIELD and field.modulus <= _BRUTE_FORCE_ROOT_LIMIT:
        found = {}
        for x in field.elements():
            if poly_eval(coeffs, x).is_zero():
                found[x] = _multiplicity(list(coeffs), x)
        return found

    import sympy  # deferred: only needed off the fast paths

    sym = sympy.Symbol("x")
    if field.kind == PRIME_FIELD:
        poly = sympy.Poly([c.value for c in coeffs], sym, modulus=field.modulus)
        raw = poly.ground_roots()
        return {field.from_integer(int(r)): m for r, m in raw.items()}
    poly = sympy.Poly(
        [sympy.Rational(c.value.numerator, c.value.denominator) for c in coeffs], sym, domain="QQ"
    )
    raw = poly.ground_roots()
    return {field(Fraction(int(r.p), int(r.q))): m for r, m in raw.items()}


def known_spectrum(M: ExactMatrix) -> list[FieldElement]:
    """The d+1 distinct eigenvalues of M in the field.

    Triangular matrices report their diagonal in place; otherwise the
    characteristic polynomial is factored over the field and the roots are
    listed in :func:`listing_key` order.
    """
    if M.is_upper_triangular() or M.is_lower_triangular():
        eigs = M.diagonal_entries()
        if len(set(eigs)) != len(eigs):
            raise EigenvaluesNotDistinct("repeated eigenvalue on the diagonal")
        return eigs
    coeffs = charpoly(M)
    roots = roots_in_field(coeffs, M.field)
    if any(m > 1 for m in roots.values()):
        raise EigenvaluesNotDistinct("characteristic polynomial has a repeated root")
    if len(roots) != M.dim:
        raise SpectrumNotInField(
            f"only {len(roots)} of {M.dim} eigenvalues lie in {M.field}"
        )
    return sorted(roots, key=listing_key)


def eigenbasis(M: ExactMatrix, eigenvalues: Iterable[FieldElement]) -> ExactMatrix:
    """Matrix whose columns are normalized eigenvectors, in the given order."""
    cols = [eigenvector_for(M, lam) for lam in eigenvalues]
    return ExactMatrix.from_columns(M.field, cols)


def all_orderings(n: int):
    return itertools.permutations(range(n))
