import random

import pytest

from superalg.grassmann import (
    CanonicalIso,
    GrassmannElement,
    NormalizationError,
    all_subsets,
    canonical_iso,
    composed_iso_is_algebra_map,
    make_real_structure,
    normalize_generators,
    parse_element,
    random_real_structure,
    real_form_basis,
    rho_bar,
    rho_tr,
    structural_subspaces,
)
from superalg.linalg import row_space_basis
from superalg.scalars import GaussianRational, I, gaussian, rational


def th(n, *jk):
    out = GrassmannElement.one(n)
    for j in jk:
        out = out * GrassmannElement.generator(n, j)
    return out


def test_multiplication_signs():
    assert th(3, 0) * th(3, 1) == th(3, 0, 1)
    assert th(3, 1) * th(3, 0) == -th(3, 0, 1)
    assert not th(3, 1) * th(3, 1)


def test_unit_inverse_expansion():
    one = GrassmannElement.one(2)
    t1 = th(2, 0)
    assert (one + t1) * (one - t1) == one


def test_associativity_random():
    rng = random.Random(5)
    n = 3
    subsets = all_subsets(n)

    def rnd():
        return GrassmannElement(
            n, {rng.choice(subsets): gaussian(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)}
        )

    for _ in range(25):
        a, b, c = rnd(), rnd(), rnd()
        assert (a * b) * c == a * (b * c)


def test_serialization_roundtrip():
    n = 3
    a = GrassmannElement(n, {(0, 2): gaussian(rational(3, 5), rational(4, 5)), (): gaussian(2)})
    s = str(a)
    assert "th1^th3" in s
    assert parse_element(n, s) == a


def test_rho_bar_canonical():
    rho = rho_bar(1)
    basis = real_form_basis(rho)
    assert len(basis) == 2
    # the canonical form is spanned by 1 and theta
    iso = canonical_iso(rho)
    assert iso.check()
    ts = normalize_generators(rho)
    assert ts[0] == th(1, 0)


def test_rho_bar_rejects_non_unit_phase():
    with pytest.raises(ValueError):
        rho_bar(1, [gaussian(2)])


def test_rho_bar_pythagorean_phase():
    lam = gaussian(rational(3, 5), rational(4, 5))
    rho = rho_bar(1, [lam])
    assert rho.validate() == []
    basis = real_form_basis(rho)
    assert len(basis) == 2
    # the fixed line inside G_1 is spanned by (1 + conj(lambda)) theta
    fixed_line = [a for a in basis if a.in_nilpotent_ideal()]
    assert len(fixed_line) == 1
    v = fixed_line[0]
    assert rho.apply(v) == v
    ts = normalize_generators(rho)
    assert rho.apply(ts[0]) == ts[0]
    assert not ts[0] * ts[0]


def test_rho_tr_valid_and_normalizes():
    rho = rho_tr(2)
    assert rho.validate() == []
    # rho^2(xi) = rho(i eta) = -i rho(eta) = -i i xi = xi
    xi = GrassmannElement.generator(2, 0)
    assert rho.apply(rho.apply(xi)) == xi
    ts = normalize_generators(rho)
    assert len(ts) == 2
    for a in ts:
        for b in ts:
            assert not a * b + b * a
    iso = canonical_iso(rho)
    assert iso.check()


def test_invalid_structure_reports_generator():
    # rho(theta) = 2 theta is not involutive
    imgs = [GrassmannElement(1, {(0,): gaussian(2)})]
    with pytest.raises(ValueError) as exc:
        make_real_structure(imgs)
    assert "generator 1" in str(exc.value)


def test_fixed_space_dimension_random():
    rng = random.Random(11)
    for n in (1, 2, 3, 4):
        rho, _ = random_real_structure(n, rng)
        basis = real_form_basis(rho)
        assert len(basis) == 2 ** n
        # RE is closed under multiplication
        for a in basis[:4]:
            for b in basis[:4]:
                prod = a * b
                assert rho.apply(prod) == prod


def test_structural_subspaces():
    sub2 = structural_subspaces(2)
    assert set(sub2["center"]) == {(), (0, 1)}
    sub3 = structural_subspaces(3)
    assert set(sub3["center"]) == {(), (0, 1), (0, 2), (1, 2), (0, 1, 2)}
    assert set(sub3["odd_minus"]) == {(0,), (1,), (2,)}


def test_rho_preserves_nilpotent_ideal():
    rng = random.Random(13)
    for n in (2, 3):
        rho, _ = random_real_structure(n, rng)
        for j in range(n):
            img = rho.apply(GrassmannElement.generator(n, j))
            assert img.in_nilpotent_ideal()


def test_realification_splits():
    # RE + i RE = everything, RE ∩ i RE = 0
    rng = random.Random(17)
    rho, _ = random_real_structure(2, rng)
    basis = real_form_basis(rho)
    subsets = all_subsets(2)
    pos = {s: k for k, s in enumerate(subsets)}
    vecs = [rho.element_to_vec(a, pos) for a in basis]
    vecs += [rho.element_to_vec(a.scale(I), pos) for a in basis]
    assert len(row_space_basis(vecs, 2 * len(subsets))) == 2 * len(subsets)


def test_normalization_random_campaign_small():
    rng = random.Random(23)
    for n in (1, 2, 3):
        for _ in range(5):
            rho, _ = random_real_structure(n, rng)
            ts = normalize_generators(rho)
            iso = CanonicalIso(rho, ts)
            assert iso.check()


def test_pairwise_isomorphism():
    rng = random.Random(29)
    rho1, _ = random_real_structure(2, rng)
    rho2, _ = random_real_structure(2, rng)
    assert composed_iso_is_algebra_map(rho1, rho2)


def test_no_canonical_form_witness():
    # two valid structures with distinct fixed subspaces
    rho1 = rho_bar(1)
    rho2 = rho_bar(1, [gaussian(rational(3, 5), rational(4, 5))])
    b1 = real_form_basis(rho1)
    b2 = real_form_basis(rho2)
    subsets = all_subsets(1)
    pos = {s: k for k, s in enumerate(subsets)}
    v1 = [rho1.element_to_vec(a, pos) for a in b1]
    joint = v1 + [rho2.element_to_vec(a, pos) for a in b2]
    assert len(row_space_basis(joint, 2 * len(subsets))) > len(row_space_basis(v1, 2 * len(subsets)))
