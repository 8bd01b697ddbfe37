"""Exact computation of deformed characters of quantum affine algebra
modules through quantum cluster mutation."""

from .cartan import (
    CartanData,
    CartanError,
    CartanSeries,
    HeightFunction,
    HorizonError,
    LieType,
    SignConvention,
    cartan_matrix,
    coxeter_number,
    c_sym,
    ctilde,
    default_height,
    f_pair,
    n_pair,
)
from .characters import (
    CharacterResult,
    WindowTooShallow,
    a_monomial,
    dominance_check,
    eta,
    eta_inv,
    fundamental_character,
    kr_character,
    standard_character,
    tsystem_check,
)
from .oplus import (
    InhomogeneousInput,
    j_inv,
    j_map,
    lambda_entry,
    multidegree,
    rho_map,
    run_fundamental_z,
    shift_s,
    z_seed,
)
from .qcluster import (
    QuantumSeed,
    apply_sequence,
    initial_seed,
    make_y_torus,
    make_z_torus,
    sequence_S,
    sequence_Si,
    sequence_step_bound,
)
from .quiver import ExchangeMatrix, VertexWindow, build_window, k_factors, mutate_B
from .qtorus import (
    NotDivisible,
    QTPoly,
    QuantumTorus,
    divide_exact_right,
    poly_from_json,
    poly_to_json,
    poly_to_latex,
    spectral_shift,
)

__version__ = "0.1.0"
