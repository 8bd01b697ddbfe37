"""Term-for-term comparison of the D4 trivalent-node run against the worked
computation: every displayed cluster variable, the printed multidegrees, the
92-term count, and the final fundamental character in both bases."""

import pytest

from qtchar import j_inv, multidegree, run_fundamental_z
from qtchar.characters import dominance_check, positivity_report

from goldens_d4 import (
    STEP11_EXPANDED_TERMS,
    STEP_DEGREES,
    STEP_VERTICES,
    Y_FINAL,
    Z_DISPLAYS,
    parse_terms,
)


@pytest.fixture(scope="module")
def d4_run(d4):
    return run_fundamental_z(d4, 2, check=True, record=True)


def test_fifteen_steps_at_the_printed_vertices(d4_run):
    snaps = d4_run["snapshots"]
    assert [v for _, v, _ in snaps] == STEP_VERTICES


@pytest.mark.parametrize("step", sorted(Z_DISPLAYS))
def test_displayed_variables_term_for_term(d4, d4_run, step):
    _, vertex, seed = d4_run["snapshots"][step - 1]
    got = seed.X[vertex].terms
    want = parse_terms(Z_DISPLAYS[step], d4.height)
    assert got == want, f"step {step} at {vertex}"


def test_step_11_has_92_terms(d4_run):
    _, vertex, seed = d4_run["snapshots"][10]
    assert vertex == (2, -2)
    poly = seed.X[vertex]
    assert sum(len(c) for c in poly.terms.values()) == STEP11_EXPANDED_TERMS


def test_multidegrees_match_every_printed_value(d4, d4_run):
    for (idx, vertex, seed), want in zip(d4_run["snapshots"], STEP_DEGREES):
        assert multidegree(d4, seed.X[vertex]) == want, f"step {idx}"


def test_final_character_in_y_basis(d4, d4_run):
    y = j_inv(d4, d4_run["chi"])
    want = parse_terms(Y_FINAL, d4.height)
    assert y.terms == want
    assert y == d4_run["y_character"].poly


def test_final_character_counts_and_coefficients(d4, d4_run):
    y = d4_run["y_character"].poly
    assert len(y) == 28
    special = [m for m, c in y.terms.items() if c != {0: 1}]
    assert len(special) == 1
    assert y.terms[special[0]] == {2: 1, -2: 1}  # t + t^{-1}
    assert sum(y.specialize_t1().values()) == 29


def test_final_character_dominance_and_positivity(d4, d4_run):
    char = d4_run["y_character"]
    assert dominance_check(d4, char)["holds"]
    assert positivity_report(char)["all_nonnegative"]


def test_inclusion_image_matches_cluster_run(d4, d4_run):
    # the defining identity of the run: the z-seed variable equals the
    # inclusion image of the Y-basis fundamental character
    assert d4_run["matches"]
    assert d4_run["multidegree"] == (0, 0, 0, 0)
