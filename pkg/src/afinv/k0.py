"""K0 of stationary inductive systems of free abelian groups.

A stationary system is a square nonnegative integer matrix A iterated along
levels Z^b -> Z^b.  When the eventual row space of A is one-dimensional with
a positive integer eigenvalue, the limit group is identified with a scaled
localization r*Z[1/S] of the rationals via the normative value map

    val_n(x) = eigenvalue^(-n) * (v . x) / (v . 1),

where v is the primitive nonnegative left eigenvector.  Morphism matrices
that intertwine two identified systems act as multiplication by a single
rational, the multiplier.  All linear algebra is exact (Fractions).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidInputError, ResourceLimitError

__all__ = [
    "StationarySystem",
    "RankOneForm",
    "DirectSumForm",
    "OpaquePresentation",
    "ScaledLocalization",
    "stationary_k0",
    "scaled_localization",
    "value_map",
    "morphism_multiplier",
    "shift_equivalent_bounded",
    "limit_rank",
]

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(rows) -> Matrix:
    M = tuple(tuple(int(x) for x in row) for row in rows)
    if M and any(len(row) != len(M[0]) for row in M):
        raise InvalidInputError("ragged matrix")
    return M


def mat_mul(A, B):
    if not A or not B:
        return tuple()
    if len(A[0]) != len(B):
        raise InvalidInputError(f"shape mismatch: {len(A[0])} columns vs {len(B)} rows")
    cols = len(B[0])
    return tuple(
        tuple(sum(a_ik * B[k][j] for k, a_ik in enumerate(row)) for j in range(cols))
        for row in A
    )


def mat_vec(A, x):
    if len(A[0]) != len(x):
        raise InvalidInputError("shape mismatch in matrix-vector product")
    return tuple(sum(a * xi for a, xi in zip(row, x)) for row in A)


def vec_mat(v, A):
    if len(v) != len(A):
        raise InvalidInputError("shape mismatch in vector-matrix product")
    return tuple(sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0])))


def mat_pow(A, n: int):
    size = len(A)
    result = tuple(tuple(int(i == j) for j in range(size)) for i in range(size))
    base = A
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def rational_rank(rows) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        rank += 1
    return rank


def _prime_factors(n: int) -> frozenset[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


@dataclass(frozen=True)
class StationarySystem:
    """A square nonnegative integer connecting matrix, repeated at every level."""

    matrix: Matrix
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        M = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        if len(M) == 0 or any(len(row) != len(M) for row in M):
            raise InvalidInputError("stationary system needs a nonempty square matrix")
        if any(x < 0 for row in M for x in row):
            raise InvalidInputError("connecting matrix must be nonnegative")
        if self.labels is not None and len(self.labels) != len(M):
            raise InvalidInputError("label count does not match matrix size")

    @property
    def size(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class RankOneForm:
    """Eventual row space of A is Q*v with vA = eigenvalue*v; limit is r*Z[1/S]."""

    matrix: Matrix
    eigenvalue: int
    left_vector: tuple[int, ...]
    prime_set: frozenset[int]

    @property
    def rank(self) -> int:
        return 1


@dataclass(frozen=True)
class DirectSumForm:
    """A permutation-disjoint direct sum of rank-one blocks."""

    matrix: Matrix
    blocks: tuple[RankOneForm, ...]
    partition: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class OpaquePresentation:
    """No normal form found; the limit is presented by the matrix itself."""

    matrix: Matrix
    rank: int


K0Description = RankOneForm | DirectSumForm | OpaquePresentation


@dataclass(frozen=True)
class ScaledLocalization:
    """The subgroup r * Z[1/S] of Q (r positive, coprime to S in both parts)."""

    scale: Fraction
    prime_set: frozenset[int]

    def __contains__(self, q) -> bool:
        q = Fraction(q) / self.scale
        den = q.denominator
        for p in self.prime_set:
            while den % p == 0:
                den //= p
        return den == 1


def _strip_primes(n: int, primes) -> int:
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def strip_primes(q: Fraction, primes) -> Fraction:
    """Remove every factor of the given primes from a positive rational."""
    if q <= 0:
        raise InvalidInputError("can only strip primes from a positive rational")
    return Fraction(_strip_primes(q.numerator, primes), _strip_primes(q.denominator, primes))


def is_s_unit(q: Fraction, primes) -> bool:
    """Whether q is a unit of Z[1/S], i.e. a ratio of products of primes in S."""
    return q > 0 and strip_primes(q, primes) == 1


def _try_rank_one(A: Matrix) -> RankOneForm | None:
    b = len(A)
    power = mat_pow(A, b)
    if rational_rank(power) != 1:
        return None
    stable = mat_mul(power, power)  # rows of A^2b span the eventual row space
    v = next((row for row in stable if any(row)), None)
    if v is None:
        return None
    g = gcd(*v) if len(v) > 1 else v[0]
    v = tuple(x // g for x in v)
    w = vec_mat(v, A)
    nz = next(i for i, x in enumerate(v) if x)
    if v[nz] == 0 or w[nz] % v[nz] != 0:
        return None
    lam = w[nz] // v[nz]
    if lam <= 0 or w != tuple(lam * x for x in v):
        return None
    return RankOneForm(A, lam, v, _prime_factors(lam))


def _components(A: Matrix) -> list[list[int]]:
    """Connected components of the symmetrized nonzero pattern."""
    n = len(A)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and (A[i][j] or A[j][i]):
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def stationary_k0(sys: StationarySystem) -> K0Description:
    """Identify the limit group of a stationary system, degrading gracefully."""
    A = sys.matrix
    form = _try_rank_one(A)
    if form is not None:
        return form
    comps = _components(A)
    if len(comps) > 1:
        blocks = []
        for comp in comps:
            sub = tuple(tuple(A[i][j] for j in comp) for i in comp)
            block = _try_rank_one(sub)
            if block is None:
                return OpaquePresentation(A, limit_rank(sys))
            blocks.append(block)
        return DirectSumForm(A, tuple(blocks), tuple(tuple(c) for c in comps))
    return OpaquePresentation(A, limit_rank(sys))


def scaled_localization(desc: RankOneForm) -> ScaledLocalization:
    """The image of the value map over all levels and lattice vectors."""
    total = sum(desc.left_vector)
    num = _strip_primes(1, desc.prime_set)
    den = _strip_primes(total, desc.prime_set)
    return ScaledLocalization(Fraction(num, den), desc.prime_set)


def value_map(desc: RankOneForm, n: int, x) -> Fraction:
    """val_n(x) = eigenvalue^-n * (v.x)/(v.1) for a level-n lattice vector x."""
    v = desc.left_vector
    if len(x) != len(v):
        raise InvalidInputError("vector length does not match system size")
    if n < 0:
        raise InvalidInputError("level must be nonnegative")
    dot = sum(a * b for a, b in zip(v, x))
    return Fraction(dot, sum(v)) / desc.eigenvalue**n


def morphism_multiplier(
    descP: RankOneForm, descQ: RankOneForm, M
) -> Fraction | None:
    """The rational q with val_Q(Mx) = q * val_P(x), if a single one exists.

    Requires M to intertwine the connecting matrices exactly (A_Q M = M A_P);
    returns None when v_Q M is not proportional to v_P.  The returned q can be
    zero only in degenerate cases where v_Q annihilates the image of M.
    """
    M = _as_matrix(M)
    if len(M) != len(descQ.left_vector) or (M and len(M[0]) != len(descP.left_vector)):
        raise InvalidInputError("multiplier matrix has wrong shape")
    if mat_mul(descQ.matrix, M) != mat_mul(M, descP.matrix):
        raise InvalidInputError("matrix does not intertwine the connecting maps")
    w = vec_mat(descQ.left_vector, M)
    vP = descP.left_vector
    if all(x == 0 for x in w):
        return Fraction(0)
    if descP.eigenvalue != descQ.eigenvalue:
        return None  # levels scale differently; no level-independent multiplier
    nz = next(i for i, x in enumerate(vP) if x)
    if w[nz] == 0:
        return None
    c = Fraction(w[nz], vP[nz])
    if tuple(c * x for x in vP) != tuple(Fraction(x) for x in w):
        return None
    return c * Fraction(sum(vP), sum(descQ.left_vector))


def shift_equivalent_bounded(A, B, lag_bound: int, entry_bound: int):
    """Search for a shift equivalence (R, S, lag): RA=BR, SB=AS, SR=A^l, RS=B^l.

    Exhaustive over integer matrices with entries in [0, entry_bound]; the
    search space must stay small (this is a desk-scale certifier, not a
    decision procedure).  Returns (R, S, lag) or None.
    """
    A = _as_matrix(A)
    B = _as_matrix(B)
    a, b = len(A), len(B)
    cells = a * b
    if (entry_bound + 1) ** cells > 2_000_000:
        raise ResourceLimitError(
            f"shift-equivalence search space ({entry_bound + 1}^{cells}) too large"
        )
    choices = range(entry_bound + 1)

    def candidates(rows: int, cols: int, left, right):
        """All nonneg matrices M with left*M == M*right, entries bounded."""
        out = []
        for flat in itertools.product(choices, repeat=rows * cols):
            M = tuple(tuple(flat[r * cols + c] for c in range(cols)) for r in range(rows))
            if mat_mul(left, M) == mat_mul(M, right):
                out.append(M)
        return out

    rs = candidates(b, a, B, A)  # R: level map Z^a -> Z^b with RA = BR
    ss = candidates(a, b, A, B)
    powersA = {l: mat_pow(A, l) for l in range(1, lag_bound + 1)}
    powersB = {l: mat_pow(B, l) for l in range(1, lag_bound + 1)}
    for R in rs:
        if all(all(x == 0 for x in row) for row in R):
            continue
        for S in ss:
            for lag in range(1, lag_bound + 1):
                if mat_mul(S, R) == powersA[lag] and mat_mul(R, S) == powersB[lag]:
                    return R, S, lag
    return None


def limit_rank(sys: StationarySystem) -> int:
    """The rank over Q of the limit: rank(A^b) for a b x b matrix A."""
    return rational_rank(mat_pow(sys.matrix, sys.size))
