from fractions import Fraction

import pytest

from qtchar import (
    a_monomial,
    dominance_check,
    eta,
    eta_inv,
    fundamental_character,
    initial_seed,
    kr_character,
    make_y_torus,
    shift_s,
    standard_character,
    tsystem_check,
)
from qtchar.characters import (
    DominanceError,
    WindowTooShallow,
    ag_exponents,
    positivity_report,
    solve_a_decomposition,
)
from qtchar.quiver import WindowError
from qtchar.qtorus import mono_from_dict, mono_mul


# --- eta ---------------------------------------------------------------------


def test_eta_sends_initial_variables_to_nested_monomials(a2):
    seed = initial_seed(a2, "gminus", -8)
    img = eta(a2, seed.X[(1, -4)])
    ytor = make_y_torus(a2)
    assert img == ytor.monomial({(1, -4): 1, (1, -2): 1, (1, 0): 1})


def test_eta_roundtrip_random(a2, rng):
    seed = initial_seed(a2, "gminus", -8)
    t = seed.torus
    verts = list(seed.window.vertices)
    for _ in range(30):
        P = t.zero()
        for _ in range(3):
            P = P + t.monomial(
                {rng.choice(verts): rng.randint(-2, 2) for _ in range(2)},
                coeff={rng.randint(-2, 2): rng.randint(1, 3)},
            )
        assert eta_inv(a2, eta(a2, P), t) == P


def test_eta_preserves_star_product(a2, rng):
    seed = initial_seed(a2, "gminus", -8)
    t = seed.torus
    verts = list(seed.window.vertices)
    for _ in range(20):
        P = t.monomial({rng.choice(verts): rng.randint(-1, 2)})
        Q = t.monomial({rng.choice(verts): rng.randint(-1, 2)})
        assert eta(a2, P * Q) == eta(a2, P) * eta(a2, Q)


# --- characters -----------------------------------------------------------------


def test_kr_pass_zero_is_initial_monomial(a2):
    c = kr_character(a2, 1, -2, 0)
    ytor = make_y_torus(a2)
    assert c.poly == ytor.monomial({(1, -2): 1, (1, 0): 1})
    assert c.level == 2 and c.r == -2


def test_sl2_fundamental_via_one_pass(a1):
    c = kr_character(a1, 1, 0, 1)
    ytor = make_y_torus(a1)
    assert c.poly == ytor.variable((1, -2)) + ytor.variable((1, 0), -1)


def test_a2_truncated_character_list(a2):
    ytor = make_y_torus(a2)
    c0 = kr_character(a2, 1, 0, 0)
    assert c0.poly == ytor.variable((1, 0))
    c1 = kr_character(a2, 1, 0, 1)
    assert c1.poly == ytor.variable((1, -2)) + ytor.monomial({(1, 0): -1, (2, -1): 1})
    c2 = kr_character(a2, 1, 0, 2)
    assert c2.poly == (
        ytor.variable((1, -4))
        + ytor.monomial({(1, -2): -1, (2, -3): 1})
        + ytor.variable((2, -1), -1)
    )


def test_sl2_full_fundamental(a1):
    c = fundamental_character(a1, 1)
    assert len(c.poly) == 2
    assert all(coeff == {0: 1} for coeff in c.poly.terms.values())
    assert not c.truncated


def test_fundamental_shift_equivariance(a2):
    c1 = fundamental_character(a2, 1, -4)
    c2 = fundamental_character(a2, 1, -8)
    assert shift_s(c1.poly, -4) == c2.poly


def test_truncation_stability_under_deepening(a2, d4):
    base = fundamental_character(a2, 1)
    for extra in (2, 4):
        deeper = fundamental_character(a2, 1, r_floor=base.window["r_floor"] - extra)
        assert deeper.poly == base.poly
    base4 = fundamental_character(d4, 2)
    for extra in (2, 4):
        deeper = fundamental_character(d4, 2, r_floor=base4.window["r_floor"] - extra)
        assert deeper.poly == base4.poly


def test_kr_truncation_stability(a3):
    base = kr_character(a3, 2, -1, 2)
    for extra in (2, 4):
        deeper = kr_character(a3, 2, -1, 2, r_floor=base.window["r_floor"] - extra)
        assert deeper.poly == base.poly


def test_window_too_shallow_error(a2):
    with pytest.raises(WindowTooShallow) as err:
        kr_character(a2, 1, 0, 2, r_floor=-4)
    assert err.value.required <= -4
    with pytest.raises(WindowTooShallow):
        fundamental_character(a2, 1, r_floor=-2)


def test_positivity_of_t1_specialization(a2, d4):
    for cartan, i in [(a2, 1), (a2, 2), (d4, 2)]:
        rep = positivity_report(fundamental_character(cartan, i))
        assert rep["all_nonnegative"]


# --- T-system ---------------------------------------------------------------------


def test_sl2_tsystem_calibration(a1):
    rep = tsystem_check(a1, 1, 1)
    assert rep["holds"]
    assert rep["alpha"] == Fraction(-1) and rep["gamma"] == 0
    assert rep["alpha_extracted"] == Fraction(-1) and rep["gamma_extracted"] == 0


def test_ag_closed_form(a1, a2):
    a, g = ag_exponents(a1, 1, 1)
    assert (a, g) == (Fraction(-1), Fraction(0))
    a, g = ag_exponents(a2, 1, 1)
    assert (a, g) == (Fraction(-1, 2), Fraction(1, 2))
    for cartan in (a1, a2):
        for k in (1, 2, 3):
            a, g = ag_exponents(cartan, 1, k)
            assert g - a == 1


def test_tsystem_a2_all(a2):
    for i in (1, 2):
        for k in (1, 2, 3):
            rep = tsystem_check(a2, i, k)
            assert rep["holds"] and rep["commuting_pair"]
            assert rep["alpha_extracted"] == rep["alpha"]
            assert rep["gamma_extracted"] == rep["gamma"]


def test_tsystem_deeper_parameter(a2):
    rep = tsystem_check(a2, 1, 1, r=-10)
    assert rep["holds"] and rep["alpha_extracted"] == rep["alpha"]


def test_tsystem_d4_spot(d4):
    rep = tsystem_check(d4, 2, 2)
    assert rep["holds"] and rep["alpha_extracted"] == rep["alpha"]


def test_tsystem_parameter_validation(a2):
    with pytest.raises(WindowError):
        tsystem_check(a2, 1, 1, r=-5)  # wrong parity
    with pytest.raises(WindowTooShallow):
        tsystem_check(a2, 1, 1, r=0)  # not all factors defined


# --- dominance ---------------------------------------------------------------------


def test_a_monomial_values(a1, d4):
    assert a_monomial(a1, 1, -1) == mono_from_dict({(1, -2): 1, (1, 0): 1})
    assert a_monomial(d4, 2, -1) == mono_from_dict(
        {(2, -2): 1, (2, 0): 1, (1, -1): -1, (3, -1): -1, (4, -1): -1}
    )
    with pytest.raises(WindowError):
        a_monomial(d4, 2, 0)  # lies in the variable lattice, not the complement


def test_solve_a_decomposition_sl2(a1):
    # Y_{1,0}^{-1} = Y_{1,-2} * A_{1,-1}^{-1}
    target = dict(mono_from_dict({(1, -2): 1, (1, 0): 1}))
    assert solve_a_decomposition(a1, target) == {(1, -1): 1}
    assert solve_a_decomposition(a1, {}) == {}
    assert solve_a_decomposition(a1, {(1, 0): 1}) is None


def test_dominance_sl2(a1):
    char = fundamental_character(a1, 1)
    rep = dominance_check(a1, char)
    assert rep["holds"] and not rep["offending"]
    assert list(rep["witnesses"].values()) == [{(1, -1 - 2 * a1.h_prime + 2): 1}]


def test_dominance_d4(d4):
    char = fundamental_character(d4, 2)
    rep = dominance_check(d4, char)
    assert rep["holds"]
    assert len(rep["witnesses"]) == 27  # every non-leading monomial decomposes


def test_dominant_monomial_unique(a2):
    char = fundamental_character(a2, 1)
    dom = char.dominant_monomial()
    assert all(e > 0 for _, e in dom)


# --- standard classes -----------------------------------------------------------------


def test_standard_is_fundamental_for_single_factor(a2):
    f = fundamental_character(a2, 1, -4)
    s = standard_character(a2, {(1, -4): 1})
    assert s.poly == f.poly


def test_standard_leading_coefficient_is_one(a1):
    s = standard_character(a1, {(1, -4): 1, (1, -2): 1})
    dom = mono_from_dict({(1, -4): 1, (1, -2): 1})
    assert s.poly.terms[dom] == {0: 1}


def test_sl2_standard_factors_at_t1(a1):
    s = standard_character(a1, {(1, -4): 1, (1, -2): 1})
    f1 = fundamental_character(a1, 1, -4).poly.specialize_t1()
    f2 = fundamental_character(a1, 1, -2).poly.specialize_t1()
    prod = {}
    for m1, c1 in f1.items():
        for m2, c2 in f2.items():
            m = mono_mul(m1, m2)
            prod[m] = prod.get(m, 0) + c1 * c2
    assert s.poly.specialize_t1() == {m: c for m, c in prod.items() if c}


def test_sl2_standard_kl_structure(a1):
    # [M(Y_{-4} Y_{-2})] = [L(Y_{-4} Y_{-2})] + t^{-1} [L(1)]: the trivial
    # class enters with a strictly negative power of t
    s = standard_character(a1, {(1, -4): 1, (1, -2): 1})
    assert s.poly.terms[()] == {-2: 1}


def test_standard_validation(a2):
    with pytest.raises(DominanceError):
        standard_character(a2, {})
    with pytest.raises(WindowError):
        standard_character(a2, {(1, -1): 1})  # wrong parity


def test_standard_same_spectral_parameter(a3):
    s = standard_character(a3, {(1, -4): 1, (3, -4): 1})
    dom = mono_from_dict({(1, -4): 1, (3, -4): 1})
    assert s.poly.terms[dom] == {0: 1}
    f1 = fundamental_character(a3, 1, -4).poly
    f3 = fundamental_character(a3, 3, -4).poly
    assert f1 * f3 == f3 * f1  # equal-parameter factors commute exactly
    repeated = standard_character(a3, {(2, -3): 2})
    assert repeated.poly.terms[mono_from_dict({(2, -3): 2})] == {0: 1}
