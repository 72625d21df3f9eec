"""Enriched Bratteli diagrams and the pointed invariant they present.

A diagram is a chain of levels whose vertices are Q-systems and whose edges
carry simple bimodules: an edge from a level-n vertex v to a level-(n+1)
vertex w is a Q_w - Q_v bimodule (morphism Q_w -> Q_v), so that composing
with hom spaces D(Q_v -> P) on the right is covariant in the level.  Only
eventually-stationary diagrams are supported: explicit levels 0..m-1 followed
by the last edge block repeating forever.

For each representative Q-system P the diagram induces a stationary system on
the free abelian group over hom bases; identifying those limits plus the
multipliers of all simple bimodules and the class of the level-0 generator
yields the complete invariant computed here.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bimodules import (
    CompletenessWarning,
    QSystem,
    SimpleBimodule,
    bimodule_label,
    fuse,
    qsystems,
    simple_bimodules,
)
from .errors import InternalConsistencyError, InvalidInputError, UnsupportedFeatureError
from .groups import FiniteAbelianGroup
from .k0 import (
    K0Description,
    RankOneForm,
    ScaledLocalization,
    StationarySystem,
    mat_mul,
    mat_vec,
    morphism_multiplier,
    scaled_localization,
    stationary_k0,
    value_map,
)

__all__ = [
    "DiagramEdge",
    "EnrichedBratteliDiagram",
    "InductiveSystem",
    "InvariantData",
    "hom_basis",
    "object_diagram",
    "morphism_matrices",
    "pointed_class",
    "compute_invariant",
]


@lru_cache(maxsize=None)
def _fuse_cached(S1: SimpleBimodule, S2: SimpleBimodule):
    return tuple(sorted(((str(s), s, m) for s, m in fuse(S1, S2).items())))


def _fuse_multiplicity(S1: SimpleBimodule, S2: SimpleBimodule, target: SimpleBimodule) -> int:
    for _, s, m in _fuse_cached(S1, S2):
        if s == target:
            return m
    return 0


@dataclass(frozen=True)
class DiagramEdge:
    """An edge between consecutive levels, labeled by a simple bimodule."""

    source: int  # vertex index at the lower level
    target: int  # vertex index at the upper level
    bimodule: SimpleBimodule
    multiplicity: int = 1


@dataclass(frozen=True)
class EnrichedBratteliDiagram:
    """Explicit levels 0..m-1; the final edge block repeats at all later levels.

    ``edges[i]`` connects level i to level i+1 for i < m-1, and ``edges[m-1]``
    connects level m-1 to itself, repeated forever.  ``generator_weights`` is
    the class of the level-0 generator over the level-0 hom basis of the
    trivial Q-system (blocks per vertex, all-ones by default).
    """

    group: FiniteAbelianGroup
    levels: tuple[tuple[QSystem, ...], ...]
    edges: tuple[tuple[DiagramEdge, ...], ...]
    generator_weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.levels) == 0 or len(self.edges) != len(self.levels):
            raise InvalidInputError(
                "need edge blocks for each level gap plus a repeating final block"
            )
        for n, block in enumerate(self.edges):
            lower = self.levels[n]
            upper = self.levels[min(n + 1, len(self.levels) - 1)]
            if not block:
                raise InvalidInputError(f"edge block {n} is empty")
            covered = set()
            for e in block:
                if not (0 <= e.source < len(lower) and 0 <= e.target < len(upper)):
                    raise InvalidInputError(f"edge {e} points outside its levels")
                if e.multiplicity < 1:
                    raise InvalidInputError("edge multiplicities must be >= 1")
                if e.bimodule.source != upper[e.target] or e.bimodule.target != lower[e.source]:
                    raise InvalidInputError(
                        f"edge bimodule {e.bimodule} must be a "
                        f"{upper[e.target]}-{lower[e.source]} bimodule"
                    )
                covered.add(e.target)
            if covered != set(range(len(upper))):
                raise InvalidInputError(f"level {n + 1} has unreachable vertices")
        blocks = [self.group.order // v.subgroup.order for v in self.levels[0]]
        if len(self.generator_weights) != sum(blocks):
            raise InvalidInputError(
                f"generator weights must have length {sum(blocks)}"
            )
        if any(w < 0 for w in self.generator_weights):
            raise InvalidInputError("generator weights must be nonnegative")
        offset = 0
        for size in blocks:
            if not any(self.generator_weights[offset : offset + size]):
                raise InvalidInputError(
                    "each level-0 vertex needs a positive generator weight"
                )
            offset += size

    @classmethod
    def homogeneous(
        cls,
        vertex: QSystem,
        edge,
        generator_weights=None,
    ) -> "EnrichedBratteliDiagram":
        """Single-vertex stationary diagram; ``edge`` maps bimodule -> multiplicity."""
        G = vertex.group
        edge_items = edge.items() if hasattr(edge, "items") else edge
        edges = tuple(
            DiagramEdge(0, 0, bim, mult) for bim, mult in edge_items
        )
        if generator_weights is None:
            generator_weights = (1,) * (G.order // vertex.subgroup.order)
        return cls(G, ((vertex,),), (edges,), tuple(generator_weights))

    @property
    def is_stationary(self) -> bool:
        return len(self.levels) == 1


@dataclass(frozen=True)
class InductiveSystem:
    """A finite prefix of rectangular connecting matrices, then a stationary tail."""

    prefix: tuple[tuple[tuple[int, ...], ...], ...]
    tail: StationarySystem


def hom_basis(P: QSystem, v: QSystem) -> list[SimpleBimodule]:
    """The canonical Z-basis of D(v -> P): simple v-P bimodules in order."""
    return simple_bimodules(v, P)


def _level_bases(d: EnrichedBratteliDiagram, P: QSystem):
    """Per explicit level: the concatenated hom bases with their vertex index."""
    out = []
    for level in d.levels:
        basis = []
        for vi, v in enumerate(level):
            for s in hom_basis(P, v):
                basis.append((vi, s))
        out.append(basis)
    return out


def _connecting_matrix(d, P, block_index: int, bases):
    lower = bases[block_index]
    upper = bases[min(block_index + 1, len(d.levels) - 1)]
    rows = []
    for wi, y in upper:
        row = []
        for vi, x in lower:
            total = 0
            for e in d.edges[block_index]:
                if e.source == vi and e.target == wi:
                    total += e.multiplicity * _fuse_multiplicity(e.bimodule, x, y)
            row.append(total)
        rows.append(tuple(row))
    return tuple(rows)


def object_diagram(d: EnrichedBratteliDiagram, P: QSystem):
    """The Bratteli diagram of the functor at P: stationary or prefix+tail."""
    bases = _level_bases(d, P)
    tail_labels = tuple(bimodule_label(s) for _, s in bases[-1])
    tail = StationarySystem(_connecting_matrix(d, P, len(d.levels) - 1, bases), tail_labels)
    if d.is_stationary:
        return tail
    prefix = tuple(
        _connecting_matrix(d, P, n, bases) for n in range(len(d.levels) - 1)
    )
    return InductiveSystem(prefix, tail)


def morphism_matrices(d: EnrichedBratteliDiagram, X: SimpleBimodule):
    """Per explicit level, the matrix of (- fused with X): P-basis -> Q-basis.

    X is a P-Q bimodule; entry [y, x] is the multiplicity of y in fuse(x, X)
    for x in the level's P-basis and y in its Q-basis.  For stationary
    diagrams the single returned matrix holds at every level.
    """
    basesP = _level_bases(d, X.source)
    basesQ = _level_bases(d, X.target)
    mats = []
    for bP, bQ in zip(basesP, basesQ):
        rows = []
        for wi, y in bQ:
            row = []
            for vi, x in bP:
                row.append(_fuse_multiplicity(x, X, y) if vi == wi else 0)
            rows.append(tuple(row))
        mats.append(tuple(rows))
    return mats


def _tail_and_pushed_weights(d: EnrichedBratteliDiagram, sys0):
    """Push the level-0 generator weights through the prefix to the tail start."""
    w = tuple(int(x) for x in d.generator_weights)
    if isinstance(sys0, InductiveSystem):
        for M in sys0.prefix:
            w = mat_vec(M, w)
        return sys0.tail, w
    return sys0, w


@dataclass(frozen=True)
class InvariantData:
    """The computed pointed invariant of a diagram, restricted to representatives."""

    group: FiniteAbelianGroup
    representatives: tuple[QSystem, ...]
    labels: tuple[str, ...]
    objects: tuple[K0Description, ...]
    scales: tuple[Fraction | None, ...]
    morphisms: tuple[tuple[SimpleBimodule, Fraction | None], ...]
    pointed: Fraction | tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_multiplier_map", dict(self.morphisms))

    def multiplier(self, X: SimpleBimodule) -> Fraction | None:
        return self._multiplier_map.get(X)  # type: ignore[attr-defined]

    def object_by_label(self, label: str) -> K0Description:
        return self.objects[self.labels.index(label)]


def _object_description(d, P):
    sys = object_diagram(d, P)
    tail = sys.tail if isinstance(sys, InductiveSystem) else sys
    return sys, stationary_k0(tail)


def compute_invariant(
    d: EnrichedBratteliDiagram, check_consistency: bool = True
) -> InvariantData:
    """Objects, morphism multipliers, and the pointed class, all exact."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CompletenessWarning)
        reps = qsystems(d.group)
    labels = tuple(f"Q{i + 1}" for i in range(len(reps)))

    systems = []
    descs = []
    for P in reps:
        sys, desc = _object_description(d, P)
        systems.append(sys)
        descs.append(desc)
    scales = tuple(
        scaled_localization(desc).scale if isinstance(desc, RankOneForm) else None
        for desc in descs
    )

    morphisms = []
    for i, P in enumerate(reps):
        for j, Q in enumerate(reps):
            for X in simple_bimodules(P, Q):
                mats = morphism_matrices(d, X)
                _check_intertwining(systems[i], systems[j], mats, X)
                tail_mat = mats[-1]
                if isinstance(descs[i], RankOneForm) and isinstance(descs[j], RankOneForm):
                    q = morphism_multiplier(descs[i], descs[j], tail_mat)
                else:
                    q = None
                morphisms.append((X, q))

    sys0 = systems[0]
    tail0, w = _tail_and_pushed_weights(d, sys0)
    if isinstance(descs[0], RankOneForm):
        pointed: Fraction | tuple[int, ...] = value_map(descs[0], 0, w)
    else:
        pointed = tuple(w)

    inv = InvariantData(
        group=d.group,
        representatives=tuple(reps),
        labels=labels,
        objects=tuple(descs),
        scales=scales,
        morphisms=tuple(morphisms),
        pointed=pointed,
    )
    if check_consistency:
        _check_fusion_consistency(inv)
    return inv


def _check_intertwining(sysP, sysQ, mats, X) -> None:
    tailP = sysP.tail.matrix if isinstance(sysP, InductiveSystem) else sysP.matrix
    tailQ = sysQ.tail.matrix if isinstance(sysQ, InductiveSystem) else sysQ.matrix
    if mat_mul(tailQ, mats[-1]) != mat_mul(mats[-1], tailP):
        raise InternalConsistencyError(
            f"morphism matrix of {X} does not intertwine the stationary tails"
        )
    if isinstance(sysP, InductiveSystem):
        prefixP = sysP.prefix
        prefixQ = sysQ.prefix
        for n in range(len(prefixP)):
            if mat_mul(prefixQ[n], mats[n]) != mat_mul(mats[n + 1], prefixP[n]):
                raise InternalConsistencyError(
                    f"morphism matrices of {X} do not intertwine at level {n}"
                )


def _check_fusion_consistency(inv: InvariantData) -> None:
    """Multiplier of a composite must equal the multiplicity-weighted product."""
    defined = {X: q for X, q in inv.morphisms if q is not None}
    for X, qx in defined.items():
        for Y, qy in defined.items():
            if X.target != Y.source:
                continue
            total = Fraction(0)
            for _, Z, m in _fuse_cached(X, Y):
                qz = defined.get(Z)
                if qz is None:
                    break
                total += m * qz
            else:
                if total != qx * qy:
                    raise InternalConsistencyError(
                        f"multiplier table violates fusion: "
                        f"{bimodule_label(X)} ∘ {bimodule_label(Y)}: {total} != {qx * qy}"
                    )


def pointed_class(d: EnrichedBratteliDiagram) -> Fraction:
    """The class of the level-0 generator in the identified unit object."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CompletenessWarning)
        unit = qsystems(d.group)[0]
    sys0, desc = _object_description(d, unit)
    if not isinstance(desc, RankOneForm):
        raise UnsupportedFeatureError(
            "the unit object was not rank-one identified; no rational pointed class"
        )
    _, w = _tail_and_pushed_weights(d, sys0)
    return value_map(desc, 0, w)


def unit_localization(inv: InvariantData) -> ScaledLocalization | None:
    desc = inv.objects[0]
    if isinstance(desc, RankOneForm):
        return scaled_localization(desc)
    return None
