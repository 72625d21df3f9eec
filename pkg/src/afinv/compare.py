"""Deciding equivalence of two computed invariants.

Equivalence of the underlying actions is detected by finding a family of
positive rationals u_Q, one per representative Q-system, such that

* each u_Q carries the identified image r1*Z[1/S] onto r2*Z[1/S]
  (so u_Q * r1/r2 is a positive unit of Z[1/S]),
* naturality holds for every simple bimodule X: P -> Q,
  u_Q * f1(X) == f2(X) * u_P, and
* the unit component maps the distinguished class: u_unit * p1 == p2.

When every object is rank-one identified, naturality pins the family up to
one global scalar and pointedness pins that scalar, so the search is exact:
either a witness exists (returned, and replayed through verify_witness) or a
specific violated constraint is returned as a certificate.  Objects that
resist rank-one identification make the outcome UNKNOWN, optionally with
bounded shift-equivalence diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bimodules import bimodule_label
from .diagrams import InvariantData
from .errors import InternalConsistencyError, InvalidInputError, ResourceLimitError
from .k0 import (
    DirectSumForm,
    RankOneForm,
    is_s_unit,
    shift_equivalent_bounded,
    strip_primes,
)

__all__ = [
    "Certificate",
    "Verdict",
    "compare",
    "verify_witness",
    "rescaled_invariant",
]

EQUIVALENT = "equivalent"
INEQUIVALENT = "inequivalent"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    """A violated constraint, pinned to the object or bimodule where it fails."""

    kind: str  # rank | prime-set | constraint-inconsistency | unit-obstruction | pointed-obstruction
    at: str
    left: str
    right: str


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: tuple[tuple[str, Fraction], ...] | None = None
    certificate: Certificate | None = None
    reason: str | None = None

    @property
    def exit_code(self) -> int:
        return {EQUIVALENT: 0, INEQUIVALENT: 3, UNKNOWN: 4}[self.status]

    def witness_map(self) -> dict[str, Fraction] | None:
        return dict(self.witness) if self.witness is not None else None


def _prime_profile(desc):
    """Multiset of block prime sets, or None when not comparable."""
    if isinstance(desc, RankOneForm):
        return (tuple(sorted(desc.prime_set)),)
    if isinstance(desc, DirectSumForm):
        return tuple(sorted(tuple(sorted(b.prime_set)) for b in desc.blocks))
    return None


def _fmt_profile(profile) -> str:
    return " + ".join("{" + ",".join(map(str, s)) + "}" for s in profile)


def _check_preconditions(inv1: InvariantData, inv2: InvariantData) -> None:
    if inv1.group != inv2.group:
        raise InvalidInputError("invariants live over different groups")
    if inv1.labels != inv2.labels or inv1.representatives != inv2.representatives:
        raise InvalidInputError("invariants enumerate different representative sets")


def compare(
    inv1: InvariantData,
    inv2: InvariantData,
    se_lag: int = 0,
    se_entries: int = 0,
) -> Verdict:
    """Decide equivalence, returning a witness, a certificate, or UNKNOWN."""
    _check_preconditions(inv1, inv2)
    labels = inv1.labels

    for i, label in enumerate(labels):
        d1, d2 = inv1.objects[i], inv2.objects[i]
        if d1.rank != d2.rank:
            return Verdict(
                INEQUIVALENT,
                certificate=Certificate("rank", label, str(d1.rank), str(d2.rank)),
            )
        p1, p2 = _prime_profile(d1), _prime_profile(d2)
        if p1 is not None and p2 is not None and p1 != p2:
            return Verdict(
                INEQUIVALENT,
                certificate=Certificate(
                    "prime-set", label, _fmt_profile(p1), _fmt_profile(p2)
                ),
            )

    rank_one = all(
        isinstance(d, RankOneForm) for d in inv1.objects + inv2.objects
    )
    if not rank_one:
        opaque = [
            labels[i]
            for i in range(len(labels))
            if not isinstance(inv1.objects[i], RankOneForm)
            or not isinstance(inv2.objects[i], RankOneForm)
        ]
        reason = "objects not rank-one identified: " + ", ".join(opaque)
        if se_lag > 0 and se_entries > 0:
            notes = []
            for label in opaque:
                A = inv1.object_by_label(label).matrix
                B = inv2.object_by_label(label).matrix
                try:
                    found = shift_equivalent_bounded(A, B, se_lag, se_entries)
                except ResourceLimitError:
                    notes.append(f"{label}: bounded shift equivalence search too large")
                    continue
                notes.append(
                    f"{label}: bounded shift equivalence "
                    + (f"witness at lag {found[2]}" if found else "not found")
                )
            reason += "; " + "; ".join(notes)
        return Verdict(UNKNOWN, reason=reason)

    # Every object is rank-one: solve the naturality system exactly.
    mult2 = dict(inv2.morphisms)
    pending: list[tuple[int, int, object, Fraction, Fraction]] = []
    for X, f1 in inv1.morphisms:
        if X not in mult2:
            raise InvalidInputError("invariants tabulate different bimodules")
        f2 = mult2[X]
        if f1 is None or f2 is None:
            which = bimodule_label(X)
            return Verdict(
                UNKNOWN, reason=f"no scalar multiplier recorded for {which}"
            )
        if (f1 == 0) != (f2 == 0):
            return Verdict(
                INEQUIVALENT,
                certificate=Certificate(
                    "constraint-inconsistency", bimodule_label(X), str(f1), str(f2)
                ),
            )
        i = inv1.representatives.index(X.source)
        j = inv1.representatives.index(X.target)
        pending.append((i, j, X, f1, f2))

    # Spanning-tree propagation of the ratios c, anchored at the unit object.
    c: list[Fraction | None] = [None] * len(labels)
    c[0] = Fraction(1)
    frontier = [0]
    while frontier:
        k = frontier.pop()
        for i, j, X, f1, f2 in pending:
            if f1 == 0:
                continue
            if i == k and c[j] is None:
                c[j] = c[k] * f2 / f1
                frontier.append(j)
            elif j == k and c[i] is None:
                c[i] = c[k] * f1 / f2
                frontier.append(i)
    if any(ci is None for ci in c):
        missing = [labels[k] for k, ci in enumerate(c) if ci is None]
        return Verdict(
            UNKNOWN,
            reason="naturality constraints do not reach: " + ", ".join(missing),
        )

    for i, j, X, f1, f2 in pending:
        if c[j] * f1 != f2 * c[i]:
            return Verdict(
                INEQUIVALENT,
                certificate=Certificate(
                    "constraint-inconsistency",
                    bimodule_label(X),
                    str(c[j] * f1),
                    str(f2 * c[i]),
                ),
            )

    p1, p2 = inv1.pointed, inv2.pointed
    if not isinstance(p1, Fraction) or not isinstance(p2, Fraction):
        return Verdict(UNKNOWN, reason="pointed class is not a rational value")
    if (p1 == 0) != (p2 == 0):
        return Verdict(
            INEQUIVALENT,
            certificate=Certificate("pointed-obstruction", labels[0], str(p1), str(p2)),
        )
    if p1 == 0:
        return Verdict(UNKNOWN, reason="degenerate pointed class on both sides")
    t = p2 / p1
    if t <= 0:
        return Verdict(
            INEQUIVALENT,
            certificate=Certificate("pointed-obstruction", labels[0], str(p1), str(p2)),
        )

    witness = tuple((labels[k], t * c[k]) for k in range(len(labels)))
    for k, (label, u) in enumerate(witness):
        ratio = u * inv1.scales[k] / inv2.scales[k]
        S = inv1.objects[k].prime_set
        if not is_s_unit(ratio, S):
            return Verdict(
                INEQUIVALENT,
                certificate=Certificate(
                    "unit-obstruction",
                    label,
                    str(ratio),
                    "S={" + ",".join(map(str, sorted(S))) + "}",
                ),
            )

    if not verify_witness(inv1, inv2, dict(witness)):
        raise InternalConsistencyError("computed witness failed replay verification")
    return Verdict(EQUIVALENT, witness=witness)


def verify_witness(inv1: InvariantData, inv2: InvariantData, witness) -> bool:
    """Replay a claimed witness against every defining constraint."""
    _check_preconditions(inv1, inv2)
    try:
        u = {label: Fraction(witness[label]) for label in inv1.labels}
    except (KeyError, ValueError, TypeError, ZeroDivisionError):
        return False
    if any(q <= 0 for q in u.values()):
        return False

    for k, label in enumerate(inv1.labels):
        d1, d2 = inv1.objects[k], inv2.objects[k]
        if not isinstance(d1, RankOneForm) or not isinstance(d2, RankOneForm):
            return False
        if d1.prime_set != d2.prime_set:
            return False
        if not is_s_unit(u[label] * inv1.scales[k] / inv2.scales[k], d1.prime_set):
            return False

    mult2 = dict(inv2.morphisms)
    for X, f1 in inv1.morphisms:
        f2 = mult2.get(X)
        if f1 is None or f2 is None:
            return False
        i = inv1.labels[inv1.representatives.index(X.source)]
        j = inv1.labels[inv1.representatives.index(X.target)]
        if u[j] * f1 != f2 * u[i]:
            return False

    p1, p2 = inv1.pointed, inv2.pointed
    if not isinstance(p1, Fraction) or not isinstance(p2, Fraction):
        return False
    return u[inv1.labels[0]] * p1 == p2


def rescaled_invariant(inv: InvariantData, factors) -> InvariantData:
    """The same invariant presented under per-object renormalized value maps.

    ``factors`` maps labels to positive rationals c_Q; multipliers become
    f(X: P->Q) * c_Q / c_P, the pointed class picks up c_unit, and each scale
    is replaced by the S-free part of c_Q * scale.  Comparison verdicts must
    not change under this transformation.
    """
    c = {label: Fraction(factors.get(label, 1)) for label in inv.labels}
    if any(q <= 0 for q in c.values()):
        raise InvalidInputError("rescaling factors must be positive")
    by_rep = {rep: c[inv.labels[k]] for k, rep in enumerate(inv.representatives)}

    morphisms = []
    for X, f in inv.morphisms:
        if f is None:
            morphisms.append((X, None))
        else:
            morphisms.append((X, f * by_rep[X.target] / by_rep[X.source]))

    scales = []
    for k, r in enumerate(inv.scales):
        if r is None:
            scales.append(None)
        else:
            scales.append(strip_primes(c[inv.labels[k]] * r, inv.objects[k].prime_set))

    pointed = inv.pointed
    if isinstance(pointed, Fraction):
        pointed = c[inv.labels[0]] * pointed

    return InvariantData(
        group=inv.group,
        representatives=inv.representatives,
        labels=inv.labels,
        objects=inv.objects,
        scales=tuple(scales),
        morphisms=tuple(morphisms),
        pointed=pointed,
    )
