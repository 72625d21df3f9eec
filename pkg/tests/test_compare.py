"""Verdicts, witnesses, and certificates for pairs of computed invariants."""

import dataclasses
from fractions import Fraction

import pytest

from afinv.bimodules import qsystems, simple_bimodules
from afinv.compare import (
    EQUIVALENT,
    INEQUIVALENT,
    UNKNOWN,
    Verdict,
    compare,
    rescaled_invariant,
    verify_witness,
)
from afinv.diagrams import EnrichedBratteliDiagram, compute_invariant
from afinv.errors import InvalidInputError
from afinv.groups import make_group


def _with_multiplier(inv, label_of, new_value):
    """Copy of inv with the multiplier of one simple replaced."""
    from afinv.bimodules import bimodule_label

    morphisms = tuple(
        (X, new_value if bimodule_label(X) == label_of else q)
        for X, q in inv.morphisms
    )
    return dataclasses.replace(inv, morphisms=morphisms)


# ------------------------------------------------------------ positive results


def test_translation_actions_on_distinct_subgroups_are_equivalent(z4_invariants):
    verdict = compare(z4_invariants["F"], z4_invariants["G"])
    assert verdict.status == EQUIVALENT
    assert verdict.witness_map() == {
        "Q1": Fraction(1),
        "Q2": Fraction(1, 2),
        "Q3": Fraction(1, 2),
    }
    assert verdict.exit_code == 0


def test_second_and_third_translation_actions(z4_invariants):
    verdict = compare(z4_invariants["G"], z4_invariants["H"])
    assert verdict.status == EQUIVALENT
    assert verdict.witness_map() == {
        "Q1": Fraction(1),
        "Q2": Fraction(1),
        "Q3": Fraction(1, 2),
    }


def test_self_comparison_yields_identity_witness(z4_invariants):
    for name in ("F", "G", "H"):
        verdict = compare(z4_invariants[name], z4_invariants[name])
        assert verdict.status == EQUIVALENT
        assert set(verdict.witness_map().values()) == {Fraction(1)}


def test_indicator_weight_convention_shifts_the_witness(z4_reps):
    # with the Q-system itself as generator the unit components differ by 4
    # vs 2, so the witness doubles on the unit instead
    Q1, Q2, _ = z4_reps
    F = EnrichedBratteliDiagram.homogeneous(
        Q1, {b: 1 for b in simple_bimodules(Q1, Q1)}, generator_weights=(1, 0, 0, 0)
    )
    G = EnrichedBratteliDiagram.homogeneous(
        Q2, {b: 1 for b in simple_bimodules(Q2, Q2)}, generator_weights=(1, 0)
    )
    verdict = compare(compute_invariant(F), compute_invariant(G))
    assert verdict.status == EQUIVALENT
    assert verdict.witness_map() == {
        "Q1": Fraction(2),
        "Q2": Fraction(1),
        "Q3": Fraction(1),
    }


def test_doubled_generator_is_a_two_unit_away(z4_reps, z4_invariants):
    Q1 = z4_reps[0]
    doubled = EnrichedBratteliDiagram.homogeneous(
        Q1, {b: 1 for b in simple_bimodules(Q1, Q1)}, generator_weights=(2, 2, 2, 2)
    )
    verdict = compare(z4_invariants["F"], compute_invariant(doubled))
    assert verdict.status == EQUIVALENT
    assert set(verdict.witness_map().values()) == {Fraction(2)}


# ------------------------------------------------------------------ negatives


def test_trivial_tail_is_not_equivalent_to_translations(z4_invariants):
    verdict = compare(z4_invariants["E"], z4_invariants["F"])
    assert verdict.status == INEQUIVALENT
    assert verdict.certificate.kind == "rank"
    assert verdict.certificate.at == "Q2"
    assert (verdict.certificate.left, verdict.certificate.right) == ("2", "1")
    assert verdict.exit_code == 3


def test_odd_weight_fails_the_unit_check(z4_reps, z4_invariants):
    Q1 = z4_reps[0]
    odd = EnrichedBratteliDiagram.homogeneous(
        Q1, {b: 1 for b in simple_bimodules(Q1, Q1)}, generator_weights=(3, 1, 1, 1)
    )
    verdict = compare(z4_invariants["F"], compute_invariant(odd))
    assert verdict.status == INEQUIVALENT
    assert verdict.certificate.kind == "unit-obstruction"
    assert verdict.certificate.at == "Q1"
    assert verdict.certificate.left == "3/2"


def test_tampered_multiplier_is_certified(z4_invariants):
    bad = _with_multiplier(z4_invariants["G"], "M_{1-2,0}", Fraction(3))
    verdict = compare(z4_invariants["F"], bad)
    assert verdict.status == INEQUIVALENT
    assert verdict.certificate.kind == "constraint-inconsistency"


def test_zero_nonzero_multiplier_mismatch(z4_invariants):
    bad = _with_multiplier(z4_invariants["G"], "M_{1-1,1}", Fraction(0))
    verdict = compare(z4_invariants["F"], bad)
    assert verdict.status == INEQUIVALENT
    assert verdict.certificate.kind == "constraint-inconsistency"
    assert verdict.certificate.at == "M_{1-1,1}"


def test_pointed_obstruction(z4_invariants):
    zeroed = dataclasses.replace(z4_invariants["F"], pointed=Fraction(0))
    verdict = compare(z4_invariants["F"], zeroed)
    assert verdict.status == INEQUIVALENT
    assert verdict.certificate.kind == "pointed-obstruction"
    both = compare(zeroed, zeroed)
    assert both.status == UNKNOWN
    assert "degenerate" in both.reason


# -------------------------------------------------------------------- unknowns


def test_non_rank_one_objects_stay_unknown(z4_invariants):
    verdict = compare(z4_invariants["E"], z4_invariants["E"])
    assert verdict.status == UNKNOWN
    assert "Q2" in verdict.reason and "Q3" in verdict.reason
    assert verdict.exit_code == 4


def test_shift_equivalence_diagnostics(z4_invariants):
    verdict = compare(z4_invariants["E"], z4_invariants["E"], se_lag=1, se_entries=2)
    assert verdict.status == UNKNOWN
    assert "Q2: bounded shift equivalence witness at lag 1" in verdict.reason
    assert "Q3: bounded shift equivalence search too large" in verdict.reason


def test_missing_multiplier_is_unknown(z4_invariants):
    bad = _with_multiplier(z4_invariants["G"], "M_{2-3}^triv", None)
    verdict = compare(z4_invariants["F"], bad)
    assert verdict.status == UNKNOWN
    assert "M_{2-3}^triv" in verdict.reason


def test_disconnected_naturality_graph_is_unknown(z4_invariants):
    inv = z4_invariants["F"]
    crossless = tuple(
        (X, Fraction(0) if X.source != X.target else q) for X, q in inv.morphisms
    )
    silent = dataclasses.replace(inv, morphisms=crossless)
    verdict = compare(silent, silent)
    assert verdict.status == UNKNOWN
    assert "Q2" in verdict.reason and "Q3" in verdict.reason


# --------------------------------------------------------------- preconditions


def test_different_groups_are_rejected(z4_invariants):
    G2 = make_group(2)
    Q1 = qsystems(G2)[0]
    other = compute_invariant(
        EnrichedBratteliDiagram.homogeneous(
            Q1, {b: 1 for b in simple_bimodules(Q1, Q1)}
        )
    )
    with pytest.raises(InvalidInputError):
        compare(z4_invariants["F"], other)


def test_mismatched_bimodule_tables_are_rejected(z4_invariants):
    pruned = dataclasses.replace(
        z4_invariants["G"], morphisms=z4_invariants["G"].morphisms[1:]
    )
    with pytest.raises(InvalidInputError):
        compare(z4_invariants["F"], pruned)


# ----------------------------------------------------------- witness replaying


def test_verify_witness_accepts_and_rejects(z4_invariants):
    F, G, E = (z4_invariants[k] for k in ("F", "G", "E"))
    assert verify_witness(F, G, {"Q1": 1, "Q2": "1/2", "Q3": Fraction(1, 2)})
    assert verify_witness(F, F, {"Q1": 1, "Q2": 1, "Q3": 1})
    assert not verify_witness(F, G, {"Q1": 1, "Q2": 1, "Q3": 1})
    assert not verify_witness(F, G, {"Q1": 1, "Q2": 1, "Q3": Fraction(1, 2)})
    assert not verify_witness(F, G, {"Q1": 1, "Q2": "1/2"})
    assert not verify_witness(F, G, {"Q1": 0, "Q2": "1/2", "Q3": "1/2"})
    assert not verify_witness(F, G, {"Q1": -1, "Q2": "1/2", "Q3": "1/2"})
    assert not verify_witness(F, G, {"Q1": 1, "Q2": "nonsense", "Q3": "1/2"})
    # a 3 on the unit breaks the 2-unit requirement even though 3 > 0
    assert not verify_witness(F, F, {"Q1": 3, "Q2": 3, "Q3": 3})
    assert not verify_witness(E, E, {"Q1": 1, "Q2": 1, "Q3": 1})


# ------------------------------------------------------------------ rescaling


def test_rescaling_preserves_verdicts(z4_invariants):
    F, G = z4_invariants["F"], z4_invariants["G"]
    scaledG = rescaled_invariant(G, {"Q2": 3, "Q3": Fraction(5, 7)})
    verdict = compare(F, scaledG)
    assert verdict.status == EQUIVALENT
    assert verify_witness(F, scaledG, verdict.witness_map())
    assert verdict.witness_map() == {
        "Q1": Fraction(1),
        "Q2": Fraction(3, 2),
        "Q3": Fraction(5, 14),
    }

    # a genuine obstruction survives any renormalization
    E = z4_invariants["E"]
    assert compare(rescaled_invariant(E, {"Q1": 2}), F).status == INEQUIVALENT

    scaled_both = compare(rescaled_invariant(F, {"Q1": 9}), rescaled_invariant(G, {"Q1": 9}))
    assert scaled_both.status == EQUIVALENT


def test_rescaling_rejects_nonpositive_factors(z4_invariants):
    with pytest.raises(InvalidInputError):
        rescaled_invariant(z4_invariants["F"], {"Q1": 0})
    with pytest.raises(InvalidInputError):
        rescaled_invariant(z4_invariants["F"], {"Q2": Fraction(-1, 2)})


def test_verdict_exit_codes_cover_all_statuses():
    assert Verdict(EQUIVALENT).exit_code == 0
    assert Verdict(INEQUIVALENT).exit_code == 3
    assert Verdict(UNKNOWN).exit_code == 4
    assert Verdict(UNKNOWN).witness_map() is None
