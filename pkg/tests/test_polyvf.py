import random

import pytest

from superalg.polyvf import (
    Coords,
    Polynomial,
    VectorField,
    coordinate_field,
    fields_of_degree,
    monomials_of_degree,
)
from superalg.scalars import FIELD_Q, FIELD_QI, rational


def xy_theta():
    return Coords(["x", "y", "θ1", "θ2"], [0, 0, 1, 1])


def random_poly(coords, rng, max_terms=4, field=FIELD_Q):
    monos = []
    for d in range(4):
        monos += monomials_of_degree(coords, d)
    terms = {}
    for _ in range(max_terms):
        terms[rng.choice(monos)] = field.random(rng)
    return Polynomial(coords, terms)


def random_field(coords, rng, parity=None):
    # homogeneous parity fields only, as required by the bracket
    while True:
        v = rng.randrange(len(coords))
        monos = [m for d in range(4) for m in monomials_of_degree(coords, d)]
        from superalg.polyvf import mono_parity

        if parity is not None:
            monos = [m for m in monos if (mono_parity(m, coords) + coords.parities[v]) % 2 == parity]
            if not monos:
                continue
        m = rng.choice(monos)
        c = FIELD_Q.random(rng)
        if not c:
            continue
        return VectorField(coords, {v: Polynomial(coords, {m: c})})


def test_odd_variables_anticommute():
    c = xy_theta()
    t1, t2 = c.var("θ1"), c.var("θ2")
    assert t1 * t2 == -(t2 * t1)
    assert not (t1 * t1)


def test_grassmann_inverse_expansion():
    c = xy_theta()
    one = c.one()
    t1 = c.var("θ1")
    assert (one + t1) * (one - t1) == one


def test_poly_multiplication_associative():
    rng = random.Random(13)
    c = xy_theta()
    for _ in range(20):
        p, q, r = (random_poly(c, rng) for _ in range(3))
        assert (p * q) * r == p * (q * r)


def test_left_derivative_signs():
    c = xy_theta()
    t1, t2 = c.var("θ1"), c.var("θ2")
    p = t1 * t2
    # d/dθ2 must move past θ1: sign -1
    assert p.deriv(c.index["θ2"]) == -t1
    assert p.deriv(c.index["θ1"]) == t2
    x = c.var("x")
    assert (x * x * t1).deriv(c.index["x"]) == (x * t1).scale(2)


def test_derivative_leibniz():
    rng = random.Random(31)
    c = xy_theta()
    from superalg.polyvf import mono_parity

    for _ in range(25):
        p = random_poly(c, rng)
        q = random_poly(c, rng)
        for v in range(len(c)):
            if c.parities[v]:
                # split p into parity-homogeneous parts for the graded rule
                p_ev = Polynomial(c, {m: x for m, x in p.terms.items() if mono_parity(m, c) == 0})
                p_od = p - p_ev
                lhs = (p * q).deriv(v)
                rhs = p.deriv(v) * q + p_ev * q.deriv(v) - p_od * q.deriv(v)
            else:
                lhs = (p * q).deriv(v)
                rhs = p.deriv(v) * q + p * q.deriv(v)
            assert lhs == rhs


def test_bracket_antisymmetry_and_jacobi():
    rng = random.Random(47)
    c = xy_theta()
    for _ in range(25):
        X = random_field(c, rng)
        Y = random_field(c, rng)
        Z = random_field(c, rng)
        px, py, pz = X.parity(), Y.parity(), Z.parity()
        sxy = -1 if (px and py) else 1
        assert X.bracket(Y) == Y.bracket(X).scale(-sxy)
        # graded Jacobi: (-1)^{px pz}[X,[Y,Z]] + cyclic = 0
        sxz = -1 if (px and pz) else 1
        syx = -1 if (py and px) else 1
        szy = -1 if (pz and py) else 1
        total = (
            X.bracket(Y.bracket(Z)).scale(sxz)
            + Y.bracket(Z.bracket(X)).scale(syx)
            + Z.bracket(X.bracket(Y)).scale(szy)
        )
        assert not total


def test_bracket_is_commutator_on_functions():
    rng = random.Random(53)
    c = xy_theta()
    for _ in range(15):
        X = random_field(c, rng)
        Y = random_field(c, rng)
        f = random_poly(c, rng)
        sign = -1 if (X.parity() and Y.parity()) else 1
        lhs = X.bracket(Y).apply(f)
        rhs = X.apply(Y.apply(f)) - Y.apply(X.apply(f)).scale(sign)
        assert lhs == rhs


def test_fields_of_degree_enumeration():
    c = Coords(["x", "θ"], [0, 1])
    # degree 1 fields on 1|1: coefficients of degree 2 over x, θ
    basis = fields_of_degree(c, 1)
    assert len(basis) == 4  # {x^2, xθ} per derivative
    degs = {f.degree() for f in basis}
    assert degs == {1}


def test_graded_coords_degrees():
    c = Coords(["t", "ξ"], [0, 1], degrees=[2, 1])
    monos = monomials_of_degree(c, 3)
    # weight 3 monomials in t (deg 2), ξ (deg 1): t*ξ only
    assert len(monos) == 1
    f = coordinate_field(c, "t")
    assert f.degree() == -2


def test_gaussian_coefficients_work():
    c = Coords(["x"], [0], field=FIELD_QI)
    rng = random.Random(3)
    p = Polynomial(c, {((0, 2),): FIELD_QI.random(rng)})
    X = VectorField(c, {0: p})
    Y = coordinate_field(c, "x")
    b = X.bracket(Y)
    assert b.degree() == 0
