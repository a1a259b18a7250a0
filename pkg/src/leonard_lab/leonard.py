"""Leonard pairs: construction, eigenbasis normal forms, parameter arrays.

A pair (A, A*) is checked constructively. A* is diagonalized and A must come
out irreducible tridiagonal for some ordering of the A*-eigenvalues; then the
same with the roles swapped. The orderings that work are the *standard*
orderings, and the split basis built from them yields the split sequences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .errors import (
    EigenvaluesNotDistinct,
    FieldTooSmall,
    InvalidParameterArray,
    LeonardLabError,
    NotALeonardPair,
    NotTridiagonalizable,
    NotUpperBidiagonal,
    SingularBasisMatrix,
    SplitBasisDegenerate,
)
from .linalg import (
    ExactMatrix,
    ExactVector,
    change_basis,
    eigenbasis,
    eigenvector_for,
    inverse,
    known_spectrum,
)
from .qbracket import ratio_windows
from .report import FAIL, PASS, VerificationReport
from .scalar import QQ, FieldElement, FieldSpec

SPLIT = "split"
DUAL_EIGENBASIS = "dual_eigenbasis"
PRIMAL_EIGENBASIS = "primal_eigenbasis"
OTHER = "other"
BASIS_TAGS = (SPLIT, DUAL_EIGENBASIS, PRIMAL_EIGENBASIS, OTHER)

SEARCH_MAX_D = 4


@dataclass(frozen=True)
class ParameterArray:
    theta: tuple[FieldElement, ...]
    theta_star: tuple[FieldElement, ...]
    first_split: tuple[FieldElement, ...]
    second_split: tuple[FieldElement, ...]

    def __post_init__(self):
        for name in ("theta", "theta_star", "first_split", "second_split"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def d(self) -> int:
        return len(self.theta) - 1

    @property
    def field(self) -> FieldSpec:
        return self.theta[0].field

    def validate(self) -> "ParameterArray":
        d = self.d
        if d < 1:
            raise InvalidParameterArray("d must be positive")
        if len(self.theta_star) != d + 1:
            raise InvalidParameterArray("theta_star must have d+1 entries")
        for name in ("first_split", "second_split"):
            if len(getattr(self, name)) != d:
                raise InvalidParameterArray(f"{name} must have d entries")
        fields = {x.field for x in self.theta + self.theta_star + self.first_split + self.second_split}
        if len(fields) != 1:
            raise InvalidParameterArray("entries come from different fields")
        if len(set(self.theta)) != d + 1:
            raise InvalidParameterArray("theta: eigenvalues not distinct")
        if len(set(self.theta_star)) != d + 1:
            raise InvalidParameterArray("theta_star: eigenvalues not distinct")
        for name, seq in (("first_split", self.first_split), ("second_split", self.second_split)):
            for i, x in enumerate(seq, start=1):
                if x.is_zero():
                    raise InvalidParameterArray(f"{name}: entry {i} is zero")
        if d >= 3:
            r, rs = ratio_windows(self.theta), ratio_windows(self.theta_star)
            if len(set(r)) != 1 or len(set(rs)) != 1 or r[0] != rs[0]:
                raise InvalidParameterArray("beta ratio condition: eigenvalue ratios are not one common value")
        return self

    def to_json(self) -> dict:
        return {
            "theta": [x.serialize() for x in self.theta],
            "theta_star": [x.serialize() for x in self.theta_star],
            "first_split": [x.serialize() for x in self.first_split],
            "second_split": [x.serialize() for x in self.second_split],
        }

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "ParameterArray":
        return cls(*(tuple(field(x) for x in obj[key]) for key in ("theta", "theta_star", "first_split", "second_split")))


@dataclass(frozen=True)
class LeonardPairMatrices:
    basis_tag: str
    A: ExactMatrix
    A_star: ExactMatrix

    def __post_init__(self):
        if self.basis_tag not in BASIS_TAGS:
            raise ValueError(f"unknown basis tag {self.basis_tag!r}")
        if self.A.dim != self.A_star.dim:
            raise ValueError("A and A_star differ in size")
        if self.A.field != self.A_star.field:
            raise ValueError("A and A_star come from different fields")

    @property
    def d(self) -> int:
        return self.A.dim - 1

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def field(self) -> FieldSpec:
        return self.A.field


@dataclass(frozen=True)
class TridiagonalData:
    """Entries of an irreducible tridiagonal matrix paired with a diagonal one.

    ``b[i]`` is b_i for 0 <= i < d and ``c[i - 1]`` is c_i for 1 <= i <= d.
    """

    d: int
    a: tuple[FieldElement, ...]
    b: tuple[FieldElement, ...]
    c: tuple[FieldElement, ...]
    eigenvalues_of_diagonal_partner: tuple[FieldElement, ...]

    @classmethod
    def from_matrix(cls, T: ExactMatrix, eigenvalues: Sequence[FieldElement]) -> "TridiagonalData":
        n = T.dim
        return cls(
            n - 1,
            tuple(T[i, i] for i in range(n)),
            tuple(T[i, i + 1] for i in range(n - 1)),
            tuple(T[i, i - 1] for i in range(1, n)),
            tuple(eigenvalues),
        )

    def c_at(self, i: int) -> FieldElement:
        return self.c[i - 1]

    def bc(self, i: int) -> FieldElement:
        """b_{i-1} c_i for 1 <= i <= d."""
        return self.b[i - 1] * self.c[i - 1]

    @property
    def field(self) -> FieldSpec:
        return self.a[0].field


# split form -------------------------------------------------------------------------


def build_split_form(pa: ParameterArray, which: str = "first") -> LeonardPairMatrices:
    pa.validate()
    field = pa.field
    n = pa.d + 1
    if which == "first":
        theta, split = pa.theta, pa.first_split
    elif which == "second":
        theta, split = pa.theta[::-1], pa.second_split
    else:
        raise ValueError("which must be 'first' or 'second'")
    return _split_matrices(field, theta, pa.theta_star, split, n)


def _split_matrices(field, theta, theta_star, split, n) -> LeonardPairMatrices:
    A = np.full((n, n), field.zero, dtype=object)
    As = np.full((n, n), field.zero, dtype=object)
    for i in range(n):
        A[i, i] = theta[i]
        As[i, i] = theta_star[i]
        if i:
            A[i, i - 1] = field.one
            As[i - 1, i] = split[i - 1]
    return LeonardPairMatrices(SPLIT, ExactMatrix._wrap(field, A), ExactMatrix._wrap(field, As))


# eigenbasis normal forms ---------------------------------------------------------------


def _ordered_spectrum(M: ExactMatrix, given) -> list[FieldElement]:
    if given is None:
        return known_spectrum(M)
    eigs = [M.field(x) for x in given]
    if len(eigs) != M.dim:
        raise EigenvaluesNotDistinct(f"expected {M.dim} eigenvalues, got {len(eigs)}")
    if len(set(eigs)) != len(eigs):
        raise EigenvaluesNotDistinct("supplied eigenvalue ordering has repeats")
    return eigs


def _normal_form(diag_side: ExactMatrix, other: ExactMatrix, eigenvalues, label: str):
    eigs = _ordered_spectrum(diag_side, eigenvalues)
    P = eigenbasis(diag_side, eigs)
    try:
        Pinv = inverse(P)
    except SingularBasisMatrix as exc:  # cannot happen for distinct eigenvalues
        raise NotTridiagonalizable(str(exc)) from None
    D = Pinv @ diag_side @ P
    T = Pinv @ other @ P
    if not D.is_diagonal():
        raise NotTridiagonalizable(f"{label}: eigenbasis does not diagonalize")
    if not T.is_tridiagonal():
        raise NotTridiagonalizable(f"{label}: nonzero entry off the three central diagonals")
    if not T.is_irreducible_tridiagonal():
        raise NotTridiagonalizable(f"{label}: zero entry on the sub- or superdiagonal")
    return eigs, P, D, T


def dual_eigenbasis_form(m: LeonardPairMatrices, theta_star=None):
    """Rewrite the pair in an A*-eigenbasis ordered by ``theta_star``.

    Without an explicit ordering the spectrum of A* is read off its diagonal
    (triangular A*) or factored from its characteristic polynomial.
    """
    eigs, _, D, T = _normal_form(m.A_star, m.A, theta_star, "A in the A*-eigenbasis")
    pair = LeonardPairMatrices(DUAL_EIGENBASIS, T, D)
    return pair, TridiagonalData.from_matrix(T, eigs)


def primal_eigenbasis_form(m: LeonardPairMatrices, theta=None):
    eigs, _, D, T = _normal_form(m.A, m.A_star, theta, "A* in the A-eigenbasis")
    pair = LeonardPairMatrices(PRIMAL_EIGENBASIS, D, T)
    return pair, TridiagonalData.from_matrix(T, eigs)


def beta_candidate_orderings(n: int, values: Sequence[FieldElement]) -> Iterator[tuple[int, ...]]:
    """Index orderings of ``values`` whose consecutive-window ratios agree.

    For n <= 3 (d <= 2) this is every permutation. Otherwise the first four
    entries fix β+1 and each later entry is forced by the recurrence
    θ_{i+1} = θ_{i-2} − (β+1)(θ_{i-1} − θ_i).
    """
    if n <= 3:
        yield from itertools.permutations(range(n))
        return
    index = {v: k for k, v in enumerate(values)}
    for head in itertools.permutations(range(n), 4):
        v = [values[k] for k in head]
        ratio = (v[0] - v[3]) / (v[1] - v[2])
        order = list(head)
        used = set(head)
        while len(order) < n:
            nxt = v[-3] - ratio * (v[-2] - v[-1])
            k = index.get(nxt)
            if k is None or k in used:
                break
            order.append(k)
            used.add(k)
            v.append(nxt)
        else:
            yield tuple(order)


def standard_orderings(diag_side: ExactMatrix, other: ExactMatrix) -> list[tuple[FieldElement, ...]]:
    """All eigenvalue orderings of ``diag_side`` that make ``other`` irreducible tridiagonal."""
    eigs = known_spectrum(diag_side)
    P = eigenbasis(diag_side, eigs)
    T = change_basis(other, P)
    found = []
    for order in beta_candidate_orderings(len(eigs), eigs):
        if T.permuted(order).is_irreducible_tridiagonal():
            found.append(tuple(eigs[k] for k in order))
    return found


@dataclass
class LeonardCheck:
    """Outcome of the constructive Leonard pair test."""

    dual_orderings: list
    primal_orderings: list
    errors: list

    @property
    def passed(self) -> bool:
        return bool(self.dual_orderings) and bool(self.primal_orderings)


def check_leonard_pair(m: LeonardPairMatrices) -> LeonardCheck:
    result = LeonardCheck([], [], [])
    for side, diag_side, other, store in (
        ("dual", m.A_star, m.A, result.dual_orderings),
        ("primal", m.A, m.A_star, result.primal_orderings),
    ):
        try:
            found = standard_orderings(diag_side, other)
        except LeonardLabError as exc:
            result.errors.append(f"{side}: {type(exc).__name__}: {exc}")
            continue
        if not found:
            label = "A in the A*-eigenbasis" if side == "dual" else "A* in the A-eigenbasis"
            result.errors.append(
                f"{side}: NotTridiagonalizable: {label} is not irreducible tridiagonal for any eigenvalue ordering"
            )
        store.extend(found)
    return result


def _fmt_order(order) -> str:
    return "(" + ",".join(x.serialize() for x in order) + ")"


def verify_leonard_pair(m: LeonardPairMatrices, subject: str | None = None) -> VerificationReport:
    report = VerificationReport(subject or f"{m.basis_tag} pair, d={m.d}, field {m.field}")
    check = check_leonard_pair(m)
    if check.passed:
        detail = (
            f"dual orderings: {' '.join(map(_fmt_order, check.dual_orderings))}; "
            f"primal orderings: {' '.join(map(_fmt_order, check.primal_orderings))}"
        )
        report.add("leonard_pair", PASS, detail=detail)
    else:
        report.add("leonard_pair", FAIL, detail="; ".join(check.errors))
    report.info["leonard"] = {
        "dual_orderings": [[x.serialize() for x in o] for o in check.dual_orderings],
        "primal_orderings": [[x.serialize() for x in o] for o in check.primal_orderings],
        "errors": list(check.errors),
    }
    return report


# parameter array extraction -------------------------------------------------------------


def split_basis(m: LeonardPairMatrices, theta, theta_star) -> ExactMatrix:
    """Columns u_0..u_d with u_0 an A*-eigenvector for θ*_0 and u_i = (A − θ_{i−1})u_{i−1}."""
    field = m.field
    u = eigenvector_for(m.A_star, theta_star[0])
    cols = [u]
    for i in range(1, m.d + 1):
        u = m.A.shift(theta[i - 1]) @ u
        if u.is_zero():
            raise SplitBasisDegenerate(f"u_{i} vanished")
        cols.append(u)
    P = ExactMatrix.from_columns(field, cols)
    try:
        inverse(P)
    except SingularBasisMatrix:
        raise SplitBasisDegenerate("split vectors are linearly dependent") from None
    return P


def _split_sequence(m: LeonardPairMatrices, theta, theta_star) -> tuple[FieldElement, ...]:
    P = split_basis(m, theta, theta_star)
    Pinv = inverse(P)
    As = Pinv @ m.A_star @ P
    A = Pinv @ m.A @ P
    expected = _split_matrices(m.field, theta, theta_star, [As[i - 1, i] for i in range(1, m.d + 1)], m.dim)
    if As != expected.A_star:
        raise NotUpperBidiagonal("A* is not upper bidiagonal with diagonal θ* on the split basis")
    if A != expected.A:
        raise NotUpperBidiagonal("A is not lower bidiagonal with diagonal θ on the split basis")
    return tuple(As[i - 1, i] for i in range(1, m.d + 1))


def extract_parameter_array(m: LeonardPairMatrices, theta=None, theta_star=None) -> ParameterArray:
    """Read (θ, θ*, φ, ϕ) off a Leonard pair.

    Orderings default to the first standard orderings found; the θ*-ordering
    comes from the A*-eigenbasis side, the θ-ordering from the A side.
    """
    if theta is None or theta_star is None:
        check = check_leonard_pair(m)
        if not check.passed:
            raise NotALeonardPair("; ".join(check.errors))
        if theta_star is None:
            theta_star = check.dual_orderings[0]
        if theta is None:
            theta = check.primal_orderings[0]
    theta = tuple(m.field(x) for x in theta)
    theta_star = tuple(m.field(x) for x in theta_star)

    last_error = None
    for th in (theta, theta[::-1]):
        try:
            phi = _split_sequence(m, th, theta_star)
        except NotUpperBidiagonal as exc:
            last_error = exc
            continue
        phi2 = _split_sequence(m, th[::-1], theta_star)
        return ParameterArray(th, theta_star, phi, phi2).validate()
    raise last_error


def commutator(m: LeonardPairMatrices) -> ExactMatrix:
    """A A* − A* A in the pair's current basis."""
    return m.A @ m.A_star - m.A_star @ m.A


# built-in family -----------------------------------------------------------------------


def krawtchouk_pair(d: int, field: FieldSpec = QQ) -> LeonardPairMatrices:
    """a_i = 0, b_i = d − i, c_i = i and A* = diag(d − 2i), in the A*-eigenbasis."""
    if d < 1:
        raise ValueError("d must be positive")
    if field.is_prime_field and (field.modulus <= d or field.modulus == 2):
        raise FieldTooSmall(f"GF({field.modulus}) is too small for d={d}: eigenvalues d-2i collide")
    n = d + 1
    rows = [[0] * n for _ in range(n)]
    for i in range(d):
        rows[i][i + 1] = d - i
        rows[i + 1][i] = i + 1
    A = ExactMatrix(field, rows)
    A_star = ExactMatrix.diagonal(field, [d - 2 * i for i in range(n)])
    return LeonardPairMatrices(DUAL_EIGENBASIS, A, A_star)


# finite-field search ------------------------------------------------------------------


def _recurrence_sequences(p: int, d: int) -> Iterator[tuple[int | None, tuple[int, ...]]]:
    """Distinct residue sequences of length d+1, grouped by β (None when d <= 2)."""
    if d <= 2:
        for seq in itertools.permutations(range(p), d + 1):
            yield None, seq
        return
    for beta in range(p):
        for head in itertools.permutations(range(p), 3):
            seq = list(head)
            while len(seq) < d + 1:
                seq.append((seq[-3] - (beta + 1) * (seq[-2] - seq[-1])) % p)
            if len(set(seq)) == d + 1:
                yield beta, tuple(seq)


def _theta_pairs(p: int, d: int):
    if d <= 2:
        seqs = [s for _, s in _recurrence_sequences(p, d)]
        for th in seqs:
            for ths in seqs:
                yield th, ths
        return
    by_beta: dict[int, list] = {}
    for beta, s in _recurrence_sequences(p, d):
        by_beta.setdefault(beta, []).append(s)
    for beta in sorted(by_beta):
        for th in by_beta[beta]:
            for ths in by_beta[beta]:
                yield th, ths


def search_parameter_arrays(d: int, field: FieldSpec, limit: int, backend: str | None = None) -> list[ParameterArray]:
    """Enumerate Leonard pair parameter arrays over a small prime field.

    θ and θ* run over recurrence orbits sharing one β; for each pair every
    nonzero first split sequence is screened in one batch, and survivors are
    confirmed exactly (verify, then extract and compare).
    """
    if not field.is_prime_field:
        raise ValueError("search requires a prime field")
    if d < 1 or d > SEARCH_MAX_D:
        raise ValueError(f"search is limited to 1 <= d <= {SEARCH_MAX_D}")
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    found: list[ParameterArray] = []
    if limit == 0:
        return found
    p = field.modulus
    phis = np.array(list(itertools.product(range(1, p), repeat=d)), dtype=np.int64).reshape(-1, d)
    use_kernel = p < _kernels.MAX_MODULUS
    for th, ths in _theta_pairs(p, d):
        if use_kernel:
            mask = _kernels.screen_split_candidates(th, ths, phis, p, backend=backend)
            candidates = phis[mask]
        else:
            candidates = phis
        theta = tuple(field.from_integer(x) for x in th)
        theta_star = tuple(field.from_integer(x) for x in ths)
        for row in candidates:
            phi = tuple(field.from_integer(int(x)) for x in row)
            pair = _split_matrices(field, theta, theta_star, phi, d + 1)
            if not check_leonard_pair(pair).passed:
                continue
            try:
                pa = extract_parameter_array(pair, theta=theta, theta_star=theta_star)
            except (LeonardLabError, ValueError):
                continue
            if pa.theta != theta or pa.first_split != phi:
                continue
            found.append(pa)
            if len(found) >= limit:
                return found
    return found
