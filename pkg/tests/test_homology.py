from fractions import Fraction

import pytest

from coneforms.forms import DifferentialForm
from coneforms.homology import (
    ComplexStratum,
    build_stratified_complex,
    homology_ranks,
    stable_homology_ranks,
)
from coneforms.ring import CoefficientElement
from coneforms.symplectic import (
    SymplecticChart,
    brylinski_delta,
    cyclic_plane_action,
    symplectic_star,
)


@pytest.fixture(scope="module")
def plane():
    return SymplecticChart.standard(1)


def test_basis_sizes_plane_d0(plane):
    strata = build_stratified_complex(plane, 0, "deRham")
    assert [st.dimension for st in strata] == [1, 2, 1]
    assert all(not st.boundary_matrix for st in strata)
    assert [st.rank for st in strata] == [0, 0, 0]


def test_delta_matrix_entries_match_hand_computation(plane):
    """delta(x^a y^b dx^dy) = -(a x^(a-1) y^b dx + b x^a y^(b-1) dy)."""
    strata = build_stratified_complex(plane, 2, "delta")
    top = strata[2]
    one_positions = {label: i for i, label in enumerate(strata[1].basis)}
    x_slot, y_slot = 0, 1
    for col, (powers, idx) in enumerate(top.basis):
        assert idx == (0, 1)
        a, b = powers
        expected = {}
        if a:
            pos = one_positions[((a - 1, b), (0,))]
            expected[pos] = Fraction(-a)
        if b:
            pos = one_positions[((a, b - 1), (1,))]
            expected[pos] = Fraction(-b)
        assert top.boundary_matrix.get(col, {}) == expected


def test_invariant_basis_z2_d2(plane):
    action = cyclic_plane_action(2, plane)
    strata = build_stratified_complex(plane, 2, "deRham", action)
    zero_forms = strata[0]
    assert zero_forms.dimension == 4
    assert zero_forms.block_dims == {0: 1, 1: 0, 2: 3}
    # the invariant 0-form basis is exactly {1, x^2, xy, y^2}
    monomials = set()
    for vec in zero_forms.vectors:
        assert len(vec) == 1 and vec[0][1] == 1
        monomials.add(vec[0][0][0])
    assert monomials == {(0, 0), (2, 0), (1, 1), (0, 2)}


def test_truncated_and_stable_ranks_plane(plane):
    for d in (0, 1, 4, 8):
        de_rham = build_stratified_complex(plane, d, "deRham")
        delta = build_stratified_complex(plane, d, "delta")
        got_dr = homology_ranks(de_rham)
        got_delta = homology_ranks(delta)
        # closed forms at top coefficient degree have no primitive inside the
        # truncation; those classes die one truncation later
        assert got_dr == [1, d + 2, d + 1]
        assert got_delta == [d + 1, d + 2, 1]
        assert got_delta == got_dr[::-1]
        assert stable_homology_ranks(de_rham) == [1, 0, 0]
        assert stable_homology_ranks(delta) == [0, 0, 1]


def test_four_space_ranks():
    s = SymplecticChart.standard(2)
    de_rham = build_stratified_complex(s, 4, "deRham")
    delta = build_stratified_complex(s, 4, "delta")
    assert stable_homology_ranks(de_rham) == [1, 0, 0, 0, 0]
    assert stable_homology_ranks(delta) == [0, 0, 0, 0, 1]
    assert homology_ranks(delta) == homology_ranks(de_rham)[::-1]


def test_invariant_ranks_match_reversed(plane):
    for k in (2, 3, 4):
        action = cyclic_plane_action(k, plane)
        de_rham = build_stratified_complex(plane, 4, "deRham", action)
        delta = build_stratified_complex(plane, 4, "delta", action)
        assert homology_ranks(delta) == homology_ranks(de_rham)[::-1]
        assert stable_homology_ranks(de_rham) == [1, 0, 0]
        assert stable_homology_ranks(delta) == [0, 0, 1]


def test_wrong_chart_action_rejected(plane):
    s4 = SymplecticChart.standard(2)
    action = cyclic_plane_action(2, plane)
    with pytest.raises(ValueError):
        build_stratified_complex(s4, 2, "delta", action)
    with pytest.raises(ValueError):
        build_stratified_complex(plane, -1, "delta")
    with pytest.raises(ValueError):
        build_stratified_complex(plane, 2, "laplace")


def test_non_complex_input_rejected(plane):
    strata = build_stratified_complex(plane, 1, "delta")
    x_dy = strata[1].basis.index(((1, 0), (1,)))
    assert strata[1].boundary_matrix.get(x_dy), "x dy must have nonzero boundary"
    broken = ComplexStratum(
        degree=2, operator="delta", basis=list(strata[2].basis),
        boundary_matrix={0: {x_dy: Fraction(1)}}, rank=1,
        block_dims=dict(strata[2].block_dims),
        block_ranks=dict(strata[2].block_ranks),
        block_offsets=dict(strata[2].block_offsets))
    bad = [strata[0], strata[1], broken]
    # stratum 1 must kill the image of the broken boundary but does not
    with pytest.raises(ValueError):
        homology_ranks(bad)


def test_delta_blocks_equal_conjugated_derham_blocks(plane):
    """Per coefficient-degree block, the boundary matrix of the Poisson
    complex equals the sign-twisted star-conjugated de Rham matrix."""
    d = 3
    strata = build_stratified_complex(plane, d, "delta")
    for p in (1, 2):
        source = strata[p]
        target_positions = {lab: i for i, lab in enumerate(strata[p - 1].basis)}
        for col, (powers, idx) in enumerate(source.basis):
            coeff = CoefficientElement.make(plane.chart, {(powers, ()): 1})
            form = DifferentialForm.make(plane.chart, p, {idx: coeff})
            conj = symplectic_star(
                symplectic_star(form, plane).exterior_derivative(), plane)
            if p % 2 == 0:
                conj = -conj
            expected = {}
            for cidx, c in conj.components.items():
                for (pw, _m), v in c.terms.items():
                    expected[target_positions[(pw, cidx)]] = v.re
            assert source.boundary_matrix.get(col, {}) == expected
