import random

import pytest

from superalg.algebra import LieSuperAlgebra, TruncationError, from_matrices, realify
from superalg.constructors import (
    Action,
    abelian_negative,
    build_ab,
    build_complexified_minkowski,
    build_gl,
    build_hei,
    build_minkowski_g0,
    build_minkowski_negative,
    build_q,
    build_sl,
    combine_nonpositive,
    realified_matrix_pair,
    tautological_action,
)
from superalg.scalars import GaussianRational, I, gaussian, rational
from superalg.spaces import BasisVector, SuperSpace

from oracles import matrix_supercommutator


def dense_of(alg, k, n):
    m = [[rational(0) for _ in range(n)] for _ in range(n)]
    for (r, c), v in alg.matrices[k].items():
        m[r][c] = v
    return m


def test_gl11_odd_bracket():
    g = build_gl(1, 1)
    e12, e21 = g.element({"E_{1,2}": 1}), g.element({"E_{2,1}": 1})
    out = g.bracket(e12, e21)
    # odd-odd anticommutator of complementary units is the full diagonal
    assert out == g.element({"E_{1,1}": 1, "E_{2,2}": 1})
    assert g.sdim() == (2, 2)


def test_even_self_bracket_vanishes():
    g = build_gl(2, 0)
    x = g.element({"E_{1,2}": rational(3, 2), "E_{1,1}": 1})
    assert g.bracket(x, x) == {}


def test_gl21_jacobi_and_matrix_oracle():
    g = build_gl(2, 1)
    assert g.check_super_jacobi() == []
    assert g.check_parities() == []
    # cross-check a few brackets against dense supercommutators
    rng = random.Random(5)
    n = 3
    for _ in range(10):
        i = rng.randrange(len(g))
        j = rng.randrange(len(g))
        comm = matrix_supercommutator(
            dense_of(g, i, n), dense_of(g, j, n), g.parity(i), g.parity(j)
        )
        out = g.bracket({i: rational(1)}, {j: rational(1)})
        rebuilt = [[rational(0)] * n for _ in range(n)]
        for k, c in out.items():
            for (r, cc), v in g.matrices[k].items():
                rebuilt[r][cc] = rebuilt[r][cc] + c * v
        assert rebuilt == comm


def test_fault_injection_reported():
    g = build_gl(1, 1)
    doc = g.to_document()
    # corrupt one structure constant
    bad = [list(row) for row in doc["brackets"]]
    bad[0][3] = "7/1"
    doc2 = dict(doc, brackets=bad)
    g2 = LieSuperAlgebra.from_document(doc2)
    violations = g2.check_super_jacobi()
    assert violations, "corrupted constants must be caught"


def test_weights_assigned_from_cartan():
    g = build_gl(2, 1)
    w = {b.id: b.weight for b in g.space.basis}
    assert w["E_{1,2}"] == (1, -1, 0)
    assert w["E_{3,1}"] == (-1, 0, 1)
    assert w["E_{2,2}"] == (0, 0, 0)


def test_realify_gl10():
    gc = build_gl(1, 0)
    gr = realify(gc)
    assert gr.sdim() == (2, 0)
    assert gr.check_i_op() == []
    # i_op swaps basis with sign
    k = gr.index("E_{1,1}")
    ik = gr.index("iE_{1,1}")
    assert gr.i_op[k] == {ik: rational(1)}
    assert gr.i_op[ik] == {k: rational(-1)}


def test_realify_block_form_matches_direct_real_construction():
    # structure constants of realify(gl(n|m;C)) match the (A,B;-B,A) block form
    gc = build_gl(1, 1)
    gr = realify(gc)
    assert gr.check_super_jacobi() == []
    n = 2
    gens = []
    for k in range(len(gc)):
        a = gc.matrices[k]
        blk = {}
        for (r, c), v in a.items():
            blk[(r, c)] = v
            blk[(r + n, c + n)] = v
        gens.append((gc.ident(k), gc.parity(k), None, blk))
    for k in range(len(gc)):
        a = gc.matrices[k]
        blk = {}
        for (r, c), v in a.items():
            blk[(r + n, c)] = v
            blk[(r, c + n)] = -v
        gens.append(("i" + gc.ident(k), gc.parity(k), None, blk))
    parity = [0, 1, 0, 1]
    direct = from_matrices(gens, parity, real=True, name="block")
    for i in range(len(gr)):
        for j in range(len(gr)):
            assert gr._table.get((i, j), {}) == direct._table.get((i, j), {})


def test_realify_sl_jacobi():
    gr = realify(build_sl(2, 1))
    assert gr.check_super_jacobi() == []
    assert gr.check_grading() == []


def test_q_variants():
    for variant in ("J", "Pi"):
        g = build_q(2, variant)
        assert g.sdim() == (4, 4)
        assert g.check_super_jacobi() == []
    g1 = build_q(1, "Pi")
    assert g1.sdim() == (1, 1)


def test_q_variants_differ_over_Q_but_intertwine_over_Qi():
    gj = build_q(2, "J")
    gp = build_q(2, "Pi")
    # as presented over Q the structure constants differ
    bj = gj.bracket(gj.element({"B_{1,1}": 1}), gj.element({"B_{1,1}": 1}))
    bp = gp.bracket(gp.element({"B_{1,1}": 1}), gp.element({"B_{1,1}": 1}))
    assert bj != bp
    # over Q(i), B -> iB intertwines Pi into J
    gjc = build_q(2, "J", field="Q(i)")
    gpc = build_q(2, "Pi", field="Q(i)")

    def phi(alg_elt):
        out = {}
        for k, c in alg_elt.items():
            ident = gpc.ident(k)
            if ident.startswith("B"):
                out[gjc.index(ident)] = out.get(gjc.index(ident), 0) + c * I
            else:
                out[gjc.index(ident)] = out.get(gjc.index(ident), 0) + c
        return {k: v for k, v in out.items() if v}

    rng = random.Random(9)
    for _ in range(12):
        i = rng.randrange(len(gpc))
        j = rng.randrange(len(gpc))
        lhs = phi(gpc.bracket({i: gaussian(1)}, {j: gaussian(1)}))
        rhs = gjc.bracket(phi({i: gaussian(1)}), phi({j: gaussian(1)}))
        assert lhs == rhs


def test_hei_relations():
    g = build_hei(2, 0)
    assert len(g) == 3
    p, q, z = g.element({"p_1": 1}), g.element({"q_1": 1}), g.element({"z": 1})
    assert g.bracket(p, q) == z
    assert g.bracket(p, z) == {}
    assert g.check_super_jacobi() == []
    assert g.check_grading() == []
    g2 = build_hei(4, 2)
    assert g2.check_super_jacobi() == []


def test_hei_odd_theta_square():
    g = build_hei(0, 1)
    th = g.element({"θ": 1})
    assert g.bracket(th, th) == g.element({"z": 1})


def test_ab_central_odd():
    g = build_ab(1)
    assert g.sdim() == (1, 2)
    assert g.space.basis[g.index("z")].parity == 1
    assert g.bracket(g.element({"q_1": 1}), g.element({"ξ_1": 1})) == g.element({"z": 1})
    assert g.check_super_jacobi() == []


def test_minkowski_negative_dimensions():
    g = build_minkowski_negative(1)
    assert g.sdim() == (4, 4)
    d1 = [k for k in range(len(g)) if g.degree(k) == -1]
    d2 = [k for k in range(len(g)) if g.degree(k) == -2]
    assert len(d1) == 4 and all(g.parity(k) == 1 for k in d1)
    assert len(d2) == 4 and all(g.parity(k) == 0 for k in d2)
    assert g.check_super_jacobi() == []
    assert g.check_grading() == []


def test_minkowski_qq_bracket_matches_block_pattern():
    # [Q, Q'] must reproduce the hermitian -(conj(Q)^t Q' + conj(Q')^t Q) block
    g = build_minkowski_negative(1)
    q1 = g.element({"Q_{1,1}": 1})
    out = g.bracket(q1, q1)
    # conj(Q)^t Q for Q = (1 0): E_{11}; so [Q,Q] = -2 T_{1,1}
    assert out == g.element({"T_{1,1}": rational(-2)})
    out2 = g.bracket(q1, g.element({"iQ_{1,1}": 1}))
    assert out2 == {}
    out3 = g.bracket(q1, g.element({"Q_{1,2}": 1}))
    assert out3 == g.element({"T_{1,2}+T_{2,1}": rational(-1)})


def test_minkowski_nonintegrability_witness():
    # [g_{-1}, g_{-1}] = g_{-2} != 0: sections of degree -1 do not close
    g = build_minkowski_negative(1)
    d1 = [k for k in range(len(g)) if g.degree(k) == -1]
    span = set()
    for i in d1:
        for j in d1:
            for t in g._table.get((i, j), {}):
                span.add(t)
    d2 = {k for k in range(len(g)) if g.degree(k) == -2}
    assert span == d2
    # 2-step nilpotency: [g_{-2}, anything] = 0
    for k in range(len(g)):
        for t in range(len(g)):
            if g.degree(k) == -2:
                assert g._table.get((k, t), {}) == {}


def test_minkowski_g0_reduced_dimension():
    alg = build_minkowski_g0(1, "reduced")
    zero = alg.component_indices(0)
    assert len(zero) == 6  # sl(2;C) realified
    assert alg.check_super_jacobi() == []
    assert alg.check_grading() == []


def test_minkowski_g0_conformal_trace_constraint():
    alg = build_minkowski_g0(1, "conformal")
    zero = alg.component_indices(0)
    assert len(zero) == 8  # gl(2;C) realified, B determined by A
    assert alg.check_super_jacobi() == []
    # iA_{1,1} carries the u(1) compensation: acts on Q with the B-term
    iA11 = alg.index("iA_{1,1}")
    mat = alg.matrices[iA11]
    assert mat.get((2, 2)) == GaussianRational(0, 2)


def test_complexified_minkowski_sl41():
    g = build_complexified_minkowski(1)
    assert g.sdim() == (16, 8)  # sl(4|1;C): 24 total
    assert g.check_super_jacobi() == []
    assert g.check_grading() == []
    degs = {d: len(g.component_indices(d)) for d in g.degrees()}
    assert degs[-2] == 4 and degs[2] == 4 and degs[-1] == 4 and degs[1] == 4


def test_truncation_error():
    basis = [BasisVector("a", 0, 1), BasisVector("b", 0, 2)]
    g = LieSuperAlgebra(SuperSpace(basis), {}, truncation=2)
    with pytest.raises(TruncationError):
        g.bracket_basis(0, 1)


def test_serialization_roundtrip():
    g = build_minkowski_g0(1, "reduced")
    doc = g.to_document()
    g2 = LieSuperAlgebra.from_document(doc)
    assert g2.to_document() == doc
    assert g2.check_super_jacobi() == []


def test_action_representation_check():
    g = build_gl(1, 1)
    act = tautological_action(g)
    assert act.check_representation() == []
    assert act.is_faithful()
    gm, act2 = realified_matrix_pair(g)
    assert act2.check_representation() == []
    combined = combine_nonpositive(gm, act2)
    assert combined.check_super_jacobi() == []
    assert combined.check_grading() == []
