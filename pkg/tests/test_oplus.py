import pytest

from qtchar import (
    InhomogeneousInput,
    fundamental_character,
    initial_seed,
    j_inv,
    j_map,
    lambda_entry,
    make_y_torus,
    make_z_torus,
    multidegree,
    rho_map,
    run_fundamental_z,
    shift_s,
    z_seed,
)
from qtchar.characters import eta
from qtchar.oplus import f_index
from qtchar.quiver import WindowError


def test_lambda_values_sl2(a1):
    assert lambda_entry(a1, (1, 0), (1, 2)) == -1  # F_11(2)
    assert lambda_entry(a1, (1, 0), (1, 0)) == 0
    for s in range(-10, 11, 2):
        assert lambda_entry(a1, (1, 0), (1, s)) == -lambda_entry(a1, (1, s), (1, 0))


def test_z_torus_pairing_is_lambda(d4):
    ztor = make_z_torus(d4)
    for v in [(2, 0), (1, -1), (2, 2)]:
        for w in [(2, -2), (3, -1), (1, 1)]:
            assert ztor.pairing(v, w) == lambda_entry(d4, v, w)


def test_j_map_telescopes(a2):
    ytor = make_y_torus(a2)
    P = ytor.monomial({(1, -2): 1, (1, 0): 1})
    img = j_map(a2, P)
    ztor = make_z_torus(a2)
    assert img == ztor.monomial({(1, -2): 1, (1, 2): -1})  # z_{1,-2} f_1^{-1}


def test_j_map_commutation_fidelity(a2, rng):
    # the pairing of inclusion images equals the Y-pairing, via the
    # N = 2F - F(+2) - F(-2) identity
    ytor = make_y_torus(a2)
    ztor = make_z_torus(a2)
    vars_y = [(1, 0), (1, -2), (1, -4), (2, -1), (2, -3)]
    for v in vars_y:
        for w in vars_y:
            img_v = j_map(a2, ytor.variable(v)).lead_monomial()
            img_w = j_map(a2, ytor.variable(w)).lead_monomial()
            assert ztor.D(img_v, img_w) == ytor.pairing(v, w)


def test_j_map_commutes_with_bar(a2, rng):
    ytor = make_y_torus(a2)
    vars_y = [(1, 0), (1, -2), (2, -1), (2, -3)]
    for _ in range(25):
        P = ytor.zero()
        for _ in range(3):
            P = P + ytor.monomial(
                {rng.choice(vars_y): rng.randint(-2, 2) for _ in range(2)},
                coeff={rng.randint(-2, 2): rng.randint(-3, 3) or 1},
            )
        assert j_map(a2, P.bar()) == j_map(a2, P).bar()


def test_j_inv_roundtrip(a2, rng):
    ytor = make_y_torus(a2)
    vars_y = [(1, 0), (1, -2), (1, -4), (2, -1), (2, -3)]
    for _ in range(25):
        P = ytor.zero()
        for _ in range(3):
            P = P + ytor.monomial(
                {rng.choice(vars_y): rng.randint(-2, 2) for _ in range(2)},
                coeff={rng.randint(-1, 1): 1},
            )
        assert j_inv(a2, j_map(a2, P)) == P


def test_j_inv_rejects_non_image(a2):
    ztor = make_z_torus(a2)
    with pytest.raises(WindowError):
        j_inv(a2, ztor.variable((1, -2)))  # column sum nonzero


def test_rho_is_j_after_eta(a2, rng):
    # the commuting-triangle identity on the initial torus
    seed = initial_seed(a2, "gminus", -8)
    t = seed.torus
    verts = list(seed.window.vertices)
    for _ in range(25):
        P = t.zero()
        for _ in range(2):
            P = P + t.monomial({rng.choice(verts): rng.randint(-2, 2) for _ in range(2)})
        assert rho_map(a2, P) == j_map(a2, eta(a2, P))


def test_rho_examples(d4):
    seed = initial_seed(d4, "gminus", -8)
    t = seed.torus
    img = rho_map(d4, t.variable((2, 0)))
    ztor = make_z_torus(d4)
    assert img == ztor.monomial({(2, 0): 1, f_index(d4, 2): -1})  # z_{2,0} f_2^{-1}
    # the formal top variable collapses to 1
    top = t.monomial({})
    assert rho_map(d4, top) == ztor.one()


def test_z_seed_window_matches_worked_example(d4):
    seed = z_seed(d4, -6)
    assert len(seed.window.vertices) == 17
    assert {v for v in seed.window.frozen if v[1] > 0} == {(2, 2), (1, 1), (3, 1), (4, 1)}
    assert seed.compatibility_defects() == []
    # quantization matrix is the restricted antisymmetric F-matrix
    for v in seed.window.vertices:
        for w in seed.window.vertices:
            assert seed.L[(v, w)] == lambda_entry(d4, v, w)


def test_useed_l_twisted_by_gradings_is_lambda(d4):
    # L(v,w) = F(s-r) - t_i(j,s) + t_j(i,r) with t_i(j,s) = -F_ij(2-s-xi_i)
    seed = initial_seed(d4, "gminus", -8)
    s = d4.series
    xi = d4.height

    def t_load(i, j, sp):
        return -s.fpair_printed(i, j, 2 - sp - xi[i])

    for (i, r) in seed.window.vertices:
        for (j, sp) in seed.window.vertices:
            want = s.fpair_printed(i, j, sp - r) - t_load(i, j, sp) + t_load(j, i, r)
            assert seed.L[((i, r), (j, sp))] == want, ((i, r), (j, sp))


def test_grading_identities(d4):
    # B_{(j,s)} . u_i = 0 and B_{(j,s)} . t_i = 0 on interior vertices
    seed = z_seed(d4, -8)
    s = d4.series
    xi = d4.height
    for i in d4.lie_type.nodes:
        for v in seed.window.interior_mutable():
            row = seed.B.row(v)
            u_dot = sum(b for (jj, _), b in row.items() if jj == i)
            t_dot = sum(
                b * (-s.fpair_printed(i, jj, 2 - ss - xi[i])) for (jj, ss), b in row.items()
            )
            assert u_dot == 0 and t_dot == 0, (i, v)


def test_multidegree_d4_values(d4):
    seed = z_seed(d4, -6)
    s1 = seed.mutate((2, 0))
    assert multidegree(d4, s1.X[(2, 0)]) == (1, 0, 1, 1)
    s2 = s1.mutate((1, -1))
    assert multidegree(d4, s2.X[(1, -1)]) == (0, 0, 1, 1)


def test_multidegree_inhomogeneous_error(d4):
    ztor = make_z_torus(d4)
    P = ztor.variable((2, 0)) + ztor.variable((1, -1))
    with pytest.raises(InhomogeneousInput) as err:
        multidegree(d4, P)
    assert len(err.value.monomials) == 2


def test_run_fundamental_z_sl2(a1):
    rep = run_fundamental_z(a1, 1)
    assert rep["matches"] and rep["frozen_nonnegative"]
    chi = rep["chi"]
    assert len(chi) == 2
    assert j_map(a1, rep["y_character"].poly) == chi
    assert rep["multidegree"] == (0,)


def test_run_fundamental_z_homogeneous_along_run(d4):
    rep = run_fundamental_z(d4, 2, record=True)
    for _, v, s in rep["snapshots"]:
        multidegree(d4, s.X[v])  # raises if inhomogeneous


def test_frozen_exponents_nonnegative(a2, d4):
    for cartan, i in [(a2, 1), (a2, 2), (d4, 2)]:
        rep = run_fundamental_z(cartan, i)
        assert rep["frozen_nonnegative"], (cartan.lie_type, i)
        assert all(lo >= 0 for lo, _ in rep["f_exponents"].values())


def test_shift_commutes_with_j(a2):
    ytor = make_y_torus(a2)
    P = ytor.monomial({(1, -2): 1, (2, -3): -1}) + ytor.variable((1, -4)).t_shift(2)
    assert shift_s(j_map(a2, P), -2) == j_map(a2, shift_s(P, -2))


def test_shift_roundtrip(a2):
    ztor = make_z_torus(a2)
    P = ztor.variable((1, -2)) + ztor.variable((2, -3), -1)
    assert shift_s(shift_s(P, 2), -2) == P


def test_shifted_fundamental_equals_direct(a2):
    direct = fundamental_character(a2, 1, -6)
    base = fundamental_character(a2, 1, -4)
    assert shift_s(base.poly, -2) == direct.poly
