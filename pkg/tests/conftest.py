import warnings

import pytest

from afinv.bimodules import CompletenessWarning, qsystems, simple_bimodules
from afinv.diagrams import EnrichedBratteliDiagram, compute_invariant
from afinv.groups import make_group


@pytest.fixture(autouse=True)
def _quiet_completeness():
    # Many tests sweep over groups with non-cyclic subgroups; the completeness
    # warning is asserted explicitly where it matters.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CompletenessWarning)
        yield


@pytest.fixture(scope="session")
def z4():
    return make_group(4)


@pytest.fixture(scope="session")
def z4_reps(z4):
    return qsystems(z4)


@pytest.fixture(scope="session")
def z4_simples(z4_reps):
    """All 22 simple bimodules of Hilb(Z/4), keyed by label."""
    from afinv.bimodules import bimodule_label

    out = {}
    for P in z4_reps:
        for Q in z4_reps:
            for s in simple_bimodules(P, Q):
                out[bimodule_label(s)] = s
    return out


@pytest.fixture(scope="session")
def z4_diagrams(z4_reps):
    """The four running examples: F, G, H (regular-ish) and E (trivial action)."""
    Q1, Q2, Q3 = z4_reps
    homog = EnrichedBratteliDiagram.homogeneous
    F = homog(Q1, {b: 1 for b in simple_bimodules(Q1, Q1)})
    G = homog(Q2, {b: 1 for b in simple_bimodules(Q2, Q2)})
    H = homog(Q3, {b: 1 for b in simple_bimodules(Q3, Q3)})
    triv = next(b for b in simple_bimodules(Q3, Q3) if b.character.is_trivial())
    E = homog(Q3, {triv: 4})
    return {"F": F, "G": G, "H": H, "E": E}


@pytest.fixture(scope="session")
def z4_invariants(z4_diagrams):
    return {k: compute_invariant(d) for k, d in z4_diagrams.items()}
