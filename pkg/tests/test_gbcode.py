import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbforge.f2 import Poly, poly_mul_mod
from gbforge.gbcode import (
    OracleGuardError,
    dimension_by_rank,
    dual_code,
    fam_even,
    fam_kp,
    fam_odd,
    fam_square,
    gb_build,
    gb_dimension,
    gb_from_exponents,
    gb_triple,
    oracle_distance,
    pair_in_kernel,
    pair_in_rowspace,
    parse_literal,
)


@st.composite
def codes(draw, max_n=24):
    n = draw(st.integers(2, max_n))
    a = draw(st.integers(0, (1 << n) - 1))
    b = draw(st.integers(0, (1 << n) - 1))
    if a == 0 and b == 0:
        a = 1
    return gb_build(Poly(a), Poly(b), n)


@given(codes())
def test_css_orthogonality(code):
    prod = code.hx.to_dense().astype(int) @ code.hz.to_dense().T.astype(int)
    assert not (prod % 2).any()


@given(codes())
def test_dimension_gcd_matches_rank(code):
    assert gb_dimension(code) == dimension_by_rank(code)


def test_k_examples():
    assert gb_dimension(gb_triple(1, 3, 9)) == 2
    # gcd(a, b, n) = 2: 1 + X^2 divides both and X^8 - 1
    assert gb_dimension(gb_triple(2, 4, 8)) == 4
    assert gb_dimension(gb_from_exponents([0], [0], 1)) == 0


def test_parse_literal():
    code = parse_literal(" GB( 0, 1 ; 0,3 ; 9 ) ")
    assert (code.n, code.a_poly.exponents, code.b_poly.exponents) == (9, [0, 1], [0, 3])
    assert code.literal == "GB(0,1;0,3;9)"
    assert code.N == 18
    for bad in ["GB(0,1;0,3)", "GB(0,x;0,3;9)", "GX(0;0;3)", "GB(0,1;0,3;n)"]:
        with pytest.raises(ValueError):
            parse_literal(bad)


def test_build_guards():
    with pytest.raises(ValueError):
        gb_from_exponents([0, 9], [0, 1], 9)
    with pytest.raises(ValueError):
        gb_build(Poly(), Poly(), 5)


def test_kernel_and_rowspace_predicates():
    code = gb_triple(1, 3, 9)
    rep = Poly.from_exponents([0, 3, 6])
    assert pair_in_kernel(Poly(), rep, code)
    assert not pair_in_rowspace(Poly(), rep, code)
    # (B H, A H) with H = X^2 is a stabilizer
    h = Poly.from_exponents([2])
    u, v = poly_mul_mod(code.b_poly, h, 9), poly_mul_mod(code.a_poly, h, 9)
    assert pair_in_kernel(u, v, code)
    assert pair_in_rowspace(u, v, code)


def test_dual_code_swaps_roles():
    code = gb_from_exponents([0, 2], [1, 5], 11)
    dual = dual_code(code)
    assert dual.hx == code.hz
    assert dual.hz == code.hx


@pytest.mark.parametrize(
    "triple,d",
    [((1, 3, 5), 3), ((1, 3, 8), 4), ((1, 1, 4), 2), ((1, 3, 9), 3), ((1, 2, 5), 3)],
)
def test_oracle_distance_small(triple, d):
    a, b, n = triple
    code = gb_triple(a, b, n)
    assert oracle_distance(code, "x") == d
    assert oracle_distance(code, "z") == d


def test_oracle_k_zero_and_guard():
    assert oracle_distance(gb_from_exponents([0], [0], 1)) is None
    with pytest.raises(OracleGuardError):
        oracle_distance(gb_triple(1, 3, 25))


def test_oracle_finds_weight_by_enumeration():
    # the pair (0, 1 + X^3 + X^6) is a weight-3 logical operator
    code = gb_triple(1, 3, 9)
    v = code.cycle_vector(Poly(), Poly.from_exponents([0, 3, 6]))
    assert not code.hx.apply(v).any()
    assert oracle_distance(code) <= int(v.sum())


def test_family_constructions():
    code, p = fam_square(3)
    assert code.literal == "GB(0,1;0,3;9)" and p.as_tuple() == (18, 2, 3)
    code, p = fam_even(2)
    assert code.literal == "GB(0,1;0,3;8)" and p.as_tuple() == (16, 2, 4)
    code, p = fam_odd(2)
    assert code.literal == "GB(0,1;0,5;13)" and p.as_tuple() == (26, 2, 5)
    code, p = fam_kp(2)
    assert code.literal == "GB(0,9;1,8;13)" and p.as_tuple() == (26, 2, 5)
    assert str(p) == "[[26,2,5]]" and p.status == "claimed"
    for fam, bad in [(fam_square, 1), (fam_even, 0), (fam_odd, 0), (fam_kp, 0)]:
        with pytest.raises(ValueError):
            fam(bad)


def test_small_families_match_oracle():
    for fam, params in [(fam_square, (2, 3, 4)), (fam_even, (1, 2)), (fam_odd, (1,)), (fam_kp, (1,))]:
        for p in params:
            code, claim = fam(p)
            if 2 * code.n + 1 - 2 * gb_dimension(code) > 40:
                continue
            assert oracle_distance(code) == claim.d, (fam.__name__, p)


def test_normal_form():
    code = gb_from_exponents([2, 5], [4, 7], 11)
    assert code.normal_form() == (3, 3, 2, 4)
    with pytest.raises(ValueError):
        gb_from_exponents([0, 1, 2], [0, 1], 5).normal_form()


def test_cycle_vector_layout():
    code = gb_triple(1, 2, 5)
    v = code.cycle_vector(Poly.from_exponents([1]), Poly.from_exponents([0, 4]))
    assert np.flatnonzero(v).tolist() == [1, 5, 9]
