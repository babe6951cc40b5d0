import random

from superalg.linalg import (
    SparseMatrix,
    SpanSolver,
    intersect_subspaces,
    kernel_basis,
    primitive_integer_vector,
    quotient_representatives,
    rank,
    row_space_basis,
    rref_rows,
)
from superalg.scalars import FIELD_Q, FIELD_QI, rational

from oracles import dense_rank_fraction_free


def random_matrix(rng, rows, cols, field=FIELD_Q, density=0.6):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = field.random(rng)
                if v:
                    entries[(r, c)] = v
    return SparseMatrix(rows, cols, entries)


def test_rank_identity_and_zero():
    assert rank(SparseMatrix.identity(3)) == 3
    assert rank(SparseMatrix(4, 2, {})) == 0


def test_rank_duplicated_row_matches_oracle():
    rng = random.Random(3)
    m = random_matrix(rng, 4, 5, density=0.9)
    dense = m.to_dense()
    dense.append(list(dense[1]))  # duplicate a row
    mat = SparseMatrix.from_dense(dense)
    expected = dense_rank_fraction_free(dense)
    assert expected == 4
    assert rank(mat) == expected


def test_rank_matches_oracle_randomized():
    rng = random.Random(17)
    for trial in range(30):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        field = FIELD_QI if trial % 3 == 0 else FIELD_Q
        m = random_matrix(rng, rows, cols, field=field, density=0.5)
        assert rank(m) == dense_rank_fraction_free(m.to_dense())


def test_kernel_identity_empty():
    assert kernel_basis(SparseMatrix.identity(4)) == []


def test_kernel_zero_matrix_full():
    ker = kernel_basis(SparseMatrix(2, 3, {}))
    assert len(ker) == 3


def test_kernel_one_row():
    # [[1, 1]] has kernel spanned by (1, -1)
    m = SparseMatrix.from_dense([[rational(1), rational(1)]])
    ker = kernel_basis(m)
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == -v[1] and v[0]


def test_rank_plus_nullity_and_exactness():
    rng = random.Random(23)
    for _ in range(20):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        m = random_matrix(rng, rows, cols, density=0.45)
        ker = kernel_basis(m)
        assert rank(m) + len(ker) == cols
        for v in ker:
            assert not any(m.mul_vector(v))  # exactly zero, no drift


def test_rref_insertion_order_independent():
    rng = random.Random(5)
    m = random_matrix(rng, 6, 6, density=0.7)
    rows = m.row_dicts()
    shuffled = [dict(sorted(r.items(), reverse=True)) for r in rows]
    assert rref_rows(rows, 6) == rref_rows(shuffled, 6)


def test_rref_dense_sparse_agree():
    rng = random.Random(29)
    for _ in range(10):
        m = random_matrix(rng, 9, 9, density=0.4)
        from superalg import linalg

        dense = linalg._rref_dense(m.row_dicts(), 9)
        sparse = linalg._rref_sparse(m.row_dicts(), 9)
        assert dense == sparse


def test_intersect_trivial_cases():
    e = [[rational(1), rational(0)], [rational(0), rational(1)]]
    full = intersect_subspaces(e, e)
    assert len(full) == 2
    a = [[rational(1), rational(0), rational(0), rational(0)],
         [rational(0), rational(1), rational(0), rational(0)]]
    b = [[rational(0), rational(0), rational(1), rational(0)],
         [rational(0), rational(0), rational(0), rational(1)]]
    assert intersect_subspaces(a, b) == []


def test_intersect_dimension_formula():
    # dim(a & b) = dim a + dim b - rank[a|b] for random 3-dim subspaces of Q^5
    rng = random.Random(41)
    for _ in range(15):
        a = [[FIELD_Q.random(rng) for _ in range(5)] for _ in range(3)]
        b = [[FIELD_Q.random(rng) for _ in range(5)] for _ in range(3)]
        da = len(row_space_basis(a, 5))
        db = len(row_space_basis(b, 5))
        joint = dense_rank_fraction_free(a + b)
        meet = intersect_subspaces(a, b)
        assert len(meet) == da + db - joint
        solver = SpanSolver(a, 5)
        solver_b = SpanSolver(b, 5)
        for v in meet:
            assert solver.contains(v) and solver_b.contains(v)


def test_quotient_representatives():
    assert quotient_representatives(2, [[rational(1), rational(0)], [rational(0), rational(1)]]) == []
    reps = quotient_representatives(2, [])
    assert len(reps) == 2
    reps = quotient_representatives(3, [[rational(1), rational(1), rational(0)]])
    assert len(reps) == 2
    stacked = [[rational(1), rational(1), rational(0)]] + reps
    assert dense_rank_fraction_free(stacked) == 3


def test_span_solver_roundtrip():
    rng = random.Random(59)
    vecs = [[FIELD_Q.random(rng) for _ in range(6)] for _ in range(4)]
    solver = SpanSolver(vecs, 6)
    coeffs = [rational(2), rational(-1, 3), rational(0), rational(5)]
    target = [sum((c * v[i] for c, v in zip(coeffs, vecs)), rational(0)) for i in range(6)]
    sol = solver.solve(target)
    assert sol is not None
    rebuilt = [sum((c * v[i] for c, v in zip(sol, vecs)), rational(0)) for i in range(6)]
    assert rebuilt == target
    assert solver.solve([rational(1)] + [rational(0)] * 5) is None or solver.rank == 6


def test_primitive_integer_vector():
    v = [rational(-2, 3), rational(4, 9), rational(0)]
    assert primitive_integer_vector(v) == [3, -2, 0]
    assert primitive_integer_vector([rational(0)] * 3) == [0, 0, 0]
