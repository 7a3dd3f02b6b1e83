import pytest

from congsub.cosets import congruence_table, tables_isomorphic
from congsub.fingroups import (
    Epimorphism,
    GroupTooLargeError,
    SignedEpi,
    abelian,
    act_word,
    alternating,
    cyclic,
    dihedral,
    epi_set,
    from_permutations,
    invert_aut_word,
    orbit_stabilizer,
    parse_group_spec,
    quaternion,
    rho_det,
    rho_image,
    rho_psl,
    stabilizer_image_table,
    symmetric,
)
from congsub.matgroup import Mat2, PslElement


def test_constructor_orders():
    assert cyclic(5).order == 5
    assert abelian(4, 2).order == 8
    assert dihedral(6).order == 12
    assert symmetric(4).order == 24
    assert alternating(4).order == 12
    assert quaternion().order == 8


def test_order_cap():
    with pytest.raises(GroupTooLargeError):
        cyclic(500)


def test_element_orders():
    q = quaternion()
    orders = sorted(q.element_order(x) for x in range(q.order))
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]
    d = dihedral(4)
    assert sorted(d.element_order(x) for x in range(d.order)) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_perfect_detection():
    assert alternating(5).is_perfect()
    assert not alternating(4).is_perfect()
    assert not symmetric(3).is_perfect()


def test_commutator_subgroup_sizes():
    assert len(symmetric(3).commutator_subgroup()) == 3
    assert len(quaternion().commutator_subgroup()) == 2
    assert len(abelian(4, 2).commutator_subgroup()) == 1


def test_from_permutations():
    g = from_permutations("(1 2),(1 2 3)")
    assert g.order == 6
    assert not g.is_perfect()


def test_parse_group_spec():
    assert parse_group_spec("cyclic:6").order == 6
    assert parse_group_spec("abelian:2,2").order == 4
    assert parse_group_spec("dihedral:5").order == 10
    assert parse_group_spec("sym:3").order == 6
    assert parse_group_spec("alt:5").order == 60
    assert parse_group_spec("quaternion").order == 8
    assert parse_group_spec("perm:(1 2)(3 4),(1 2 3)").order == 12
    with pytest.raises(ValueError):
        parse_group_spec("nosuch:1")


def test_epi_counts():
    assert len(epi_set(cyclic(2))) == 3
    assert len(epi_set(abelian(2, 2))) == 6
    assert len(epi_set(symmetric(3))) == 18
    assert epi_set(cyclic(1)) != []


def test_epi_set_deterministic():
    assert epi_set(symmetric(3)) == epi_set(symmetric(3))


def test_rho_images():
    assert rho_image("R") == (1, 0, 1, 1)
    assert rho_det(rho_image("P")) == -1
    assert rho_det(rho_image("O")) == -1
    assert rho_det(rho_image("Rr")) == 1
    assert rho_psl("Rr").is_identity()
    with pytest.raises(ValueError):
        rho_psl("P")  # determinant -1 has no image in PSL


def test_act_word_inverse():
    g = symmetric(3)
    s = SignedEpi(epi_set(g)[0].gx, epi_set(g)[0].gy, 1)
    for w in ("PR", "ORr", "RrOP"):
        assert act_word(g, invert_aut_word(w), act_word(g, w, s)) == s


def test_orbit_sizes_abelian():
    orb = orbit_stabilizer(cyclic(2), epi_set(cyclic(2))[0])
    assert orb.signed_orbit_size == 6
    assert orb.epi_orbit_size == 3
    assert orb.aut_plus_index == 3
    orb = orbit_stabilizer(abelian(2, 2), epi_set(abelian(2, 2))[0])
    assert orb.aut_plus_index == 6


def test_orbit_transitive_on_epis():
    # every epimorphism is reached: the orbit covers the full epi set
    g = symmetric(3)
    orb = orbit_stabilizer(g, epi_set(g)[0])
    assert orb.epi_orbit_size == len(epi_set(g))


def test_stabilizer_words_fix_basepoint():
    g = dihedral(4)
    pi0 = epi_set(g)[0]
    orb = orbit_stabilizer(g, pi0)
    base = SignedEpi(pi0.gx, pi0.gy, 1)
    for w in orb.stabilizer_words[:25]:
        assert act_word(g, w, base) == base
        assert rho_det(rho_image(w)) == 1


def test_stabilizer_image_matches_congruence_oracle():
    # base the stabilizer at the standard epimorphism x -> (1, 0),
    # y -> (0, 1); other base points give conjugate subgroups whose
    # tables agree only up to relocating the base coset
    for g, pi0, (m, n) in [
        (cyclic(2), Epimorphism(1, 0), (2, 1)),
        (abelian(2, 2), Epimorphism(2, 1), (2, 2)),
        (cyclic(3), Epimorphism(1, 0), (3, 1)),
        (cyclic(4), Epimorphism(1, 0), (4, 1)),
        (abelian(4, 2), Epimorphism(2, 1), (4, 2)),
    ]:
        assert pi0 in epi_set(g)
        t = stabilizer_image_table(g, pi0)
        assert tables_isomorphic(t, congruence_table(m, n)), (m, n)
