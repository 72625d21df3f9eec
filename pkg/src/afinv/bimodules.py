"""Q-systems over a finite abelian group and their simple bimodules.

An (untwisted) Q-system is a subgroup H.  A simple H-K bimodule is a coset
of H+K together with a character of H∩K; it is realized concretely as an
induced module whose basis is indexed by the coset, with monomial left/right
actions.  Composition (``fuse``) is computed by the averaging-idempotent
trace formula over exact cyclotomic numbers; ``float_oracle_fuse`` repeats
the computation in complex floating point as an independent cross-check.
"""

from __future__ import annotations

import cmath
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclotomic import CyclotomicNumber, as_integer, root_of_unity
from .errors import (
    InternalConsistencyError,
    InvalidCompositionError,
    InvalidInputError,
    OracleFailureError,
    ResourceLimitError,
    UnsupportedFeatureError,
)
from .groups import (
    Character,
    CocycleTable,
    Coset,
    FiniteAbelianGroup,
    Subgroup,
    coset_of,
    coset_space,
    dual_characters,
    schur_trivial,
    subgroup_intersection,
    subgroup_sum,
    subgroups,
)

DEFAULT_FUSION_ORDER_BOUND = 16

FLOAT_ORACLE_TOLERANCE = 1e-6


class CompletenessWarning(UserWarning):
    """Twisted Q-system classes exist for this group but are not enumerated."""


@dataclass(frozen=True)
class QSystem:
    """An indecomposable Q-system: a subgroup plus an (optional) 2-cocycle."""

    subgroup: Subgroup
    cocycle: CocycleTable | None = None

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.subgroup.group

    def is_twisted(self) -> bool:
        return self.cocycle is not None and not self.cocycle.is_trivial()

    def __str__(self) -> str:
        return f"Q({self.subgroup})"


def qsystems(G: FiniteAbelianGroup, bound: int | None = None) -> list[QSystem]:
    """The canonical representative set: one untwisted Q-system per subgroup.

    The trivial Q-system (the monoidal unit) is always index 0.  A warning is
    issued when some subgroup admits nontrivial cocycle classes, since the
    returned list is then not a complete set of Q-system representatives.
    """
    subs = subgroups(G) if bound is None else subgroups(G, bound)
    if any(not schur_trivial(H) for H in subs):
        warnings.warn(
            "some subgroups are non-cyclic: twisted Q-system classes exist "
            "but are not enumerated",
            CompletenessWarning,
            stacklevel=2,
        )
    return [QSystem(H) for H in subs]


representative_set = qsystems


def _require_untwisted(*qs: QSystem) -> None:
    for q in qs:
        if q.is_twisted():
            raise UnsupportedFeatureError(
                "bimodule computations for twisted Q-systems are not implemented"
            )


@dataclass(frozen=True)
class SimpleBimodule:
    """An irreducible source-target bimodule: (coset of H+K, character of H∩K)."""

    source: QSystem
    target: QSystem
    coset: Coset
    character: Character

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.source.group

    @property
    def dimension(self) -> int:
        return self.coset.size

    def __str__(self) -> str:
        return bimodule_label(self)


def simple_bimodules(P: QSystem, Q: QSystem) -> list[SimpleBimodule]:
    """All simple P-Q bimodules, ordered by (coset rep, character index)."""
    _require_untwisted(P, Q)
    if P.group != Q.group:
        raise InvalidInputError("Q-systems live over different groups")
    H, K = P.subgroup, Q.subgroup
    D = subgroup_sum(H, K)
    I = subgroup_intersection(H, K)
    chars = dual_characters(I)
    out = []
    for coset in coset_space(P.group, D):
        for char in chars:
            out.append(SimpleBimodule(P, Q, coset, char))
    return out


def identity_bimodule(Q: QSystem) -> SimpleBimodule:
    """The unit morphism at Q: the coset H itself with the trivial character."""
    _require_untwisted(Q)
    H = Q.subgroup
    coset = Coset(H.group.zero(), H.elements)
    triv = Character(H, tuple(Fraction(0) for _ in H.elements))
    return SimpleBimodule(Q, Q, coset, triv)


def dual(S: SimpleBimodule) -> SimpleBimodule:
    """The adjoint bimodule: negated coset, conjugated character, sides swapped."""
    G = S.group
    members = tuple(sorted(G.neg(x) for x in S.coset.members))
    return SimpleBimodule(
        S.target, S.source, Coset(members[0], members), S.character.conjugate()
    )


@dataclass
class ExplicitBimoduleModel:
    """A concrete graded unitary model of a simple bimodule.

    ``basis[i]`` is the chosen section pair (h, k) over the grading value
    ``grading[i]``; actions are monomial: ``left_action[h][i] = (j, theta)``
    sends basis vector i to e^(2*pi*i*theta) times basis vector j.
    """

    bimodule: SimpleBimodule
    base_point: tuple
    basis: tuple[tuple[tuple, tuple], ...]
    grading: tuple[tuple, ...]
    left_action: dict
    right_action: dict


def realize(S: SimpleBimodule, base_point: tuple | None = None) -> ExplicitBimoduleModel:
    """Build the induced-module model of S.

    The basis is indexed by the grading values (the coset members); the
    section picks, for each grading value, the lexicographically least pair
    (h, k) with h + base_point + k equal to that value.  The pair (t, -t)
    with t in H∩K then acts by the scalar character(t) on every basis vector.
    """
    _require_untwisted(S.source, S.target)
    G = S.group
    H, K = S.source.subgroup, S.target.subgroup
    chi = S.character
    if base_point is None:
        base_point = S.coset.rep
    elif base_point not in S.coset.members:
        raise InvalidInputError(f"base point {base_point} is not in the coset")

    grading = S.coset.members  # sorted; the grading map is a bijection
    index = {g: i for i, g in enumerate(grading)}
    section = {}
    for gamma in grading:
        delta = G.sub(gamma, base_point)
        for h in H.elements:  # ascending, so the first hit is lex-least in (h, k)
            k = G.sub(delta, h)
            if K.contains(k):
                section[gamma] = (h, k)
                break

    left_action = {}
    for a in H.elements:
        maps = []
        for gamma in grading:
            gamma2 = G.add(a, gamma)
            t = G.sub(G.add(a, section[gamma][0]), section[gamma2][0])
            maps.append((index[gamma2], chi(t)))
        left_action[a] = tuple(maps)
    right_action = {}
    for b in K.elements:
        maps = []
        for gamma in grading:
            gamma2 = G.add(gamma, b)
            t = G.sub(section[gamma][0], section[gamma2][0])
            maps.append((index[gamma2], chi(t)))
        right_action[b] = tuple(maps)

    return ExplicitBimoduleModel(
        bimodule=S,
        base_point=base_point,
        basis=tuple(section[g] for g in grading),
        grading=grading,
        left_action=left_action,
        right_action=right_action,
    )


def _composable(S1: SimpleBimodule, S2: SimpleBimodule) -> None:
    if S1.target != S2.source:
        raise InvalidCompositionError(
            f"middle Q-systems differ: {S1.target} vs {S2.source}"
        )


def _tensor_fixed_phases(m1, m2, t, k, G):
    """Yield (point, phase) for the diagonal of (left_t ∘ right_-t) ∘ (r1_k ⊗ l2_-k).

    Points are pairs of basis indices of the two factor models; only points
    the composite maps to themselves are yielded.
    """
    r1 = m1.right_action[k]
    l2 = m2.left_action[G.neg(k)]
    lt = m1.left_action[t]
    rt = m2.right_action[G.neg(t)]
    n1 = len(m1.grading)
    n2 = len(m2.grading)
    for i1 in range(n1):
        a1, ph1 = r1[i1]
        b1, ph4 = lt[a1]
        if b1 != i1:
            continue
        for i2 in range(n2):
            a2, ph2 = l2[i2]
            b2, ph3 = rt[a2]
            if b2 == i2:
                yield (i1, i2), (ph1 + ph2 + ph3 + ph4) % 1


def fuse(
    S1: SimpleBimodule,
    S2: SimpleBimodule,
    *,
    base_point1: tuple | None = None,
    base_point2: tuple | None = None,
) -> dict[SimpleBimodule, int]:
    """The relative tensor product S1 ⊗_K S2 as a multiplicity dict.

    Realizes both factors, averages over the middle subgroup K (the
    idempotent e = |K|^-1 Σ_k right_k ⊗ left_-k), and reads off the
    multiplicity of each candidate (coset, character) from character-projected
    traces on graded components.  All arithmetic is exact; a non-integer or
    negative multiplicity aborts rather than rounding.
    """
    _composable(S1, S2)
    G = S1.group
    E = G.exponent
    H = S1.source.subgroup
    K = S1.target.subgroup
    L = S2.target.subgroup
    m1 = realize(S1, base_point1)
    m2 = realize(S2, base_point2)

    HL = subgroup_intersection(H, L)
    sum_HL = subgroup_sum(H, L)
    degree = {}
    for i1, g1 in enumerate(m1.grading):
        for i2, g2 in enumerate(m2.grading):
            degree[(i1, i2)] = G.add(g1, g2)
    target_cosets = sorted(
        {coset_of(G, sum_HL, g) for g in degree.values()}, key=lambda c: c.rep
    )
    coset_index = {}
    for idx, c in enumerate(target_cosets):
        for g in c.members:
            coset_index[g] = idx

    # trace of (left_t ∘ right_-t) ∘ e on each degree-g3 component, g3 = coset rep
    inv_K = Fraction(1, K.order)
    traces: dict[tuple, list[CyclotomicNumber]] = {
        t: [CyclotomicNumber.zero(E) for _ in target_cosets] for t in HL.elements
    }
    for t in HL.elements:
        acc: list[dict[Fraction, Fraction]] = [dict() for _ in target_cosets]
        for k in K.elements:
            for point, theta in _tensor_fixed_phases(m1, m2, t, k, G):
                g3_idx = coset_index[degree[point]]
                if degree[point] != target_cosets[g3_idx].rep:
                    continue  # the trace is taken on the canonical component only
                acc[g3_idx][theta] = acc[g3_idx].get(theta, Fraction(0)) + inv_K
        for idx, phase_sums in enumerate(acc):
            total = CyclotomicNumber.zero(E)
            for theta, coeff in phase_sums.items():
                total = total + root_of_unity(theta, E) * coeff
            traces[t][idx] = total

    chars3 = dual_characters(HL)
    inv_HL = Fraction(1, HL.order)
    result: Counter[SimpleBimodule] = Counter()
    for idx, coset3 in enumerate(target_cosets):
        for chi3 in chars3:
            total = CyclotomicNumber.zero(E)
            for t in HL.elements:
                total = total + root_of_unity((-chi3(t)) % 1, E) * traces[t][idx]
            total = total * inv_HL
            mult = as_integer(total)
            if mult is None:
                raise InternalConsistencyError(
                    f"non-integer multiplicity for {S1} ⊗ {S2} at coset {coset3.rep}"
                )
            if mult < 0:
                raise InternalConsistencyError(
                    f"negative multiplicity {mult} for {S1} ⊗ {S2}"
                )
            if mult:
                result[SimpleBimodule(S1.source, S2.target, coset3, chi3)] = mult

    expected_dim = S1.dimension * S2.dimension // K.order
    got_dim = sum(m * s.dimension for s, m in result.items())
    if got_dim != expected_dim:
        raise InternalConsistencyError(
            f"dimension mismatch fusing {S1} ⊗ {S2}: {got_dim} != {expected_dim}"
        )
    return dict(result)


def float_oracle_fuse(S1: SimpleBimodule, S2: SimpleBimodule) -> dict[SimpleBimodule, int]:
    """Independent floating-point rerun of `fuse` (numpy matrices, tolerance 1e-6)."""
    _composable(S1, S2)
    G = S1.group
    K = S1.target.subgroup
    H = S1.source.subgroup
    L = S2.target.subgroup
    m1 = realize(S1)
    m2 = realize(S2)
    n1, n2 = len(m1.grading), len(m2.grading)

    HL = subgroup_intersection(H, L)
    sum_HL = subgroup_sum(H, L)
    points = [(i1, i2) for i1 in range(n1) for i2 in range(n2)]
    degree = {p: G.add(m1.grading[p[0]], m2.grading[p[1]]) for p in points}
    target_cosets = sorted(
        {coset_of(G, sum_HL, g) for g in degree.values()}, key=lambda c: c.rep
    )

    def phase(theta: Fraction) -> complex:
        return cmath.exp(2j * cmath.pi * float(theta))

    result: Counter[SimpleBimodule] = Counter()
    chars3 = dual_characters(HL)
    for coset3 in target_cosets:
        g3 = coset3.rep
        comp = [p for p in points if degree[p] == g3]
        pos = {p: i for i, p in enumerate(comp)}
        dim = len(comp)
        e_mat = np.zeros((dim, dim), dtype=complex)
        for k in K.elements:
            r1 = m1.right_action[k]
            l2 = m2.left_action[G.neg(k)]
            for (i1, i2) in comp:
                a1, ph1 = r1[i1]
                a2, ph2 = l2[i2]
                e_mat[pos[(a1, a2)], pos[(i1, i2)]] += phase(ph1 + ph2)
        e_mat /= K.order
        stacked = {}
        for t in HL.elements:
            lt = m1.left_action[t]
            rt = m2.right_action[G.neg(t)]
            m_t = np.zeros((dim, dim), dtype=complex)
            for (i1, i2) in comp:
                b1, ph4 = lt[i1]
                b2, ph3 = rt[i2]
                m_t[pos[(b1, b2)], pos[(i1, i2)]] = phase(ph3 + ph4)
            stacked[t] = m_t @ e_mat
        for chi3 in chars3:
            tr = sum(
                phase((-chi3(t)) % 1) * np.trace(stacked[t]) for t in HL.elements
            ) / HL.order
            mult = round(tr.real)
            if abs(tr.real - mult) > FLOAT_ORACLE_TOLERANCE or abs(tr.imag) > FLOAT_ORACLE_TOLERANCE:
                raise OracleFailureError(
                    f"trace {tr} did not resolve to an integer for {S1} ⊗ {S2}"
                )
            if mult < 0:
                raise OracleFailureError(f"negative multiplicity {mult} for {S1}{S2}")
            if mult:
                result[SimpleBimodule(S1.source, S2.target, coset3, chi3)] = mult
    return dict(result)


@dataclass(frozen=True)
class FusionTable:
    """All simple bimodules of a group with their pairwise compositions."""

    group: FiniteAbelianGroup
    simples: tuple[SimpleBimodule, ...]
    products: tuple[tuple[tuple[int, int], tuple[tuple[int, int], ...]], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_product_map", dict(self.products))

    def index(self, S: SimpleBimodule) -> int:
        return self.simples.index(S)

    def product(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        """Composition of simples i and j as ((index, multiplicity), ...)."""
        got = self._product_map.get((i, j))  # type: ignore[attr-defined]
        if got is None:
            raise InvalidCompositionError(f"simples {i} and {j} are not composable")
        return got

    def labels(self) -> tuple[str, ...]:
        return tuple(bimodule_label(s) for s in self.simples)


@lru_cache(maxsize=None)
def _fusion_table_cached(G: FiniteAbelianGroup) -> FusionTable:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CompletenessWarning)
        reps = qsystems(G)
    simples: list[SimpleBimodule] = []
    for P in reps:
        for Q in reps:
            simples.extend(simple_bimodules(P, Q))
    index = {s: i for i, s in enumerate(simples)}
    products = []
    for i, s1 in enumerate(simples):
        for j, s2 in enumerate(simples):
            if s1.target != s2.source:
                continue
            out = fuse(s1, s2)
            entry = tuple(sorted((index[s], m) for s, m in out.items()))
            products.append(((i, j), entry))
    return FusionTable(G, tuple(simples), tuple(products))


def fusion_table(G: FiniteAbelianGroup, bound: int = DEFAULT_FUSION_ORDER_BOUND) -> FusionTable:
    """The full composition table; quadratic in the simple count, so bounded."""
    if G.order > bound:
        raise ResourceLimitError(
            f"group order {G.order} exceeds the fusion-table bound {bound}"
        )
    return _fusion_table_cached(G)


@lru_cache(maxsize=None)
def _subgroup_positions(G: FiniteAbelianGroup) -> dict:
    return {H.elements: i + 1 for i, H in enumerate(subgroups(G))}


def _format_rep(rep: tuple) -> str:
    if len(rep) == 1:
        return str(rep[0])
    return "(" + ",".join(str(x) for x in rep) + ")"


def bimodule_label(S: SimpleBimodule) -> str:
    """Display name M_{i-j,k}^l keyed to the canonical subgroup ordering.

    i and j are the 1-based positions of the source and target subgroups; the
    coset part k is omitted when there is a single coset, and the character
    part is omitted when the stabilizer H∩K is trivial.
    """
    G = S.group
    pos = _subgroup_positions(G)
    i = pos[S.source.subgroup.elements]
    j = pos[S.target.subgroup.elements]
    D = subgroup_sum(S.source.subgroup, S.target.subgroup)
    I = subgroup_intersection(S.source.subgroup, S.target.subgroup)
    name = f"M_{{{i}-{j}"
    if D.order < G.order:  # more than one coset
        name += f",{_format_rep(S.coset.rep)}"
    name += "}"
    if I.order > 1:
        chars = dual_characters(I)
        k = chars.index(S.character)
        if k == 0:
            name += "^triv"
        elif I.order == 2:
            name += "^sign"
        else:
            name += f"^chi{k}"
    return name
