import random

import pytest

from superalg.nijenhuis import (
    EndomorphismField,
    coboundary_2cochain,
    monomial_fields_up_to,
    nijenhuis_tensor,
    sp_matrices,
    standard_even_structure,
    standard_odd_structure,
    symplectic_obstruction_map,
    tensoriality_defect,
)
from superalg.polyvf import Coords, Polynomial, monomials_of_degree
from superalg.scalars import FIELD_Q, ZERO, rational


def test_flat_even_structure_squares():
    J = standard_even_structure(1, 0)
    assert J.square_is(-1)
    J2 = standard_even_structure(1, 1)
    assert J2.square_is(-1)


def test_flat_even_J_vanishes_on_R20():
    J = standard_even_structure(1, 0)
    fields = monomial_fields_up_to(J.coords, 2)
    for X in fields:
        for Y in fields:
            assert not nijenhuis_tensor(J, X, Y, "even")


def test_flat_even_J_vanishes_on_R22():
    J = standard_even_structure(1, 1)
    fields = monomial_fields_up_to(J.coords, 2)
    for X in fields:
        for Y in fields:
            assert not nijenhuis_tensor(J, X, Y, "even")


def test_flat_odd_structures_vanish_on_R11():
    for square in (-1, 1):
        J = standard_odd_structure(1, square)
        assert J.square_is(square)
        fields = monomial_fields_up_to(J.coords, 2)
        for X in fields:
            for Y in fields:
                assert not nijenhuis_tensor(J, X, Y, "odd")


def test_even_variant_rejects_non_complex_structure():
    coords = Coords(["x", "y"], [0, 0])
    J = EndomorphismField.from_constant_matrix(
        coords, {(0, 0): rational(1), (1, 1): rational(1)}, parity=0
    )
    with pytest.raises(ValueError):
        nijenhuis_tensor(J, monomial_fields_up_to(coords, 0)[0], monomial_fields_up_to(coords, 0)[1], "even")


def test_nonflat_J_has_nonzero_tensor():
    # J d3 = d4 + x2 d1, J d4 = -d3 - x2 d2 squares to -1 but is curved
    from superalg.polyvf import VectorField, coordinate_field

    coords = Coords(["x_1", "x_2", "x_3", "x_4"], [0, 0, 0, 0])
    one = coords.one()
    x2 = coords.var("x_2")
    cols = {
        0: VectorField(coords, {1: one}),
        1: VectorField(coords, {0: -one}),
        2: VectorField(coords, {3: one, 0: x2}),
        3: VectorField(coords, {2: -one, 1: -x2}),
    }
    J = EndomorphismField(coords, cols, parity=0)
    assert J.square_is(-1)
    n = nijenhuis_tensor(J, coordinate_field(coords, 1), coordinate_field(coords, 2), "even")
    assert n, "a curved structure must have nonzero Nijenhuis tensor"


def test_tensoriality():
    rng = random.Random(3)
    J = standard_even_structure(1, 1)
    coords = J.coords
    fields = monomial_fields_up_to(coords, 1)
    monos = [m for d in range(3) for m in monomials_of_degree(coords, d)]
    from superalg.polyvf import mono_parity

    even_monos = [m for m in monos if mono_parity(m, coords) == 0]
    for _ in range(12):
        X = rng.choice(fields)
        Y = rng.choice(fields)
        f = Polynomial(coords, {rng.choice(even_monos): FIELD_Q.random(rng)})
        assert not tensoriality_defect(J, X, Y, f, "even")


def symplectic_B(dim):
    n = dim // 2
    B = [[ZERO] * dim for _ in range(dim)]
    for k in range(n):
        B[k][n + k] = rational(1)
        B[n + k][k] = rational(-1)
    return B


def test_symplectic_map_kills_coboundaries():
    rng = random.Random(17)
    for dim in (2, 4):
        B = symplectic_B(dim)
        basis = sp_matrices(B)
        assert len(basis) == dim * (dim + 1) // 2  # dim sp(2n) = n(2n+1)
        for _ in range(10):
            S = []
            for _i in range(dim):
                m = [[ZERO] * dim for _ in range(dim)]
                for mat in basis:
                    coef = FIELD_Q.random(rng)
                    for r in range(dim):
                        for c in range(dim):
                            m[r][c] = m[r][c] + coef * mat[r][c]
                S.append(m)
            c = coboundary_2cochain(S)
            C = symplectic_obstruction_map(c, B)
            assert C == {}


def test_symplectic_map_dim2_everything_vanishes():
    B = symplectic_B(2)
    c = {(0, 1): [rational(3), rational(-2)]}
    assert symplectic_obstruction_map(c, B) == {}


def test_symplectic_map_injective_on_h2_dim4():
    # degree-1 structure functions of sp(4) inject into the 3-forms
    from superalg.linalg import SparseMatrix, SpanSolver, rank as mrank

    dim = 4
    B = symplectic_B(dim)
    basis = sp_matrices(B)
    # B^2 = image of d: Hom(V, sp) -> Hom(L^2 V, V)
    pair_list = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    cols = []
    for u in range(dim):
        for mat in basis:
            S = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
            S[u] = mat
            c = coboundary_2cochain(S)
            vec = []
            for (i, j) in pair_list:
                vec.extend(c.get((i, j), [ZERO] * dim))
            cols.append(vec)
    nspace = len(pair_list) * dim
    b2 = SpanSolver(cols, nspace)
    assert b2.rank == 20  # 40 generators minus the 20-dim first prolongation
    h2 = 24 - b2.rank
    assert h2 == 4
    # the induced map on representatives has full rank h2 = dim L^3 V* = 4
    reps = []
    import itertools

    for (i, j) in pair_list:
        for t in range(dim):
            vec = [ZERO] * nspace
            vec[pair_list.index((i, j)) * dim + t] = rational(1)
            red = b2.reduce(vec)
            if any(red):
                reps.append(red)
    reps = [list(r) for r in reps]
    from superalg.linalg import row_space_basis

    rep_basis = row_space_basis(reps, nspace)
    assert len(rep_basis) == 4
    images = []
    for r in rep_basis:
        c = {}
        for pi, (i, j) in enumerate(pair_list):
            vec = r[pi * dim : (pi + 1) * dim]
            if any(vec):
                c[(i, j)] = list(vec)
        C = symplectic_obstruction_map(c, B)
        img = [ZERO] * 4
        for t, (a, b, cc) in enumerate(itertools.combinations(range(dim), 3)):
            img[t] = C.get((a, b, cc), ZERO)
        images.append(img)
    assert len(row_space_basis(images, 4)) == 4
