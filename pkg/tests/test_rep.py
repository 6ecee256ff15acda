"""Modules, intertwiners, duals and retract presentations."""

import pytest

from hopfmod.linalg import Mat
from hopfmod.rep import (IntertwinerError, Morph, NotProjectiveError,
                         PresentationError, custom_module, direct_sum,
                         dsum_retracts, dual_left, dual_right, ev_coev,
                         free_cover, hom_space, is_morphism, pivotal_right_maps,
                         regular, tensor, trivial, word_module)


def test_regular_module_basics(get_alg):
    alg = get_alg("kz3-qq")
    G = regular(alg)
    assert G.dim == alg.dim
    assert G.projective
    assert G.label == "H"
    v = alg._basis(1)
    assert G.action_vec(v) == alg.left_mult(v)
    assert G == regular(alg)  # same presentation, equal as colors


def test_trivial_module(get_alg):
    alg = get_alg("kz3-qq")
    one = trivial(alg)
    assert one.dim == 1
    assert one.projective  # semisimple case
    g, f = None, None
    (f, g), = one.cover
    assert (g @ f).is_identity()


def test_trivial_not_projective_without_semisimplicity(get_alg):
    alg = get_alg("kz2-f2")
    one = trivial(alg)
    assert not one.projective
    with pytest.raises(NotProjectiveError):
        free_cover(one)


def test_tensor_dims_and_action(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    T = tensor(G, G)
    assert T.dim == 4
    assert len(T.letters) == 2
    # on a grouplike algebra the tensor action of g is rho(g) (x) rho(g)
    g = alg._basis(1)
    assert T.action_vec(g) == G.action_vec(g).kron(G.action_vec(g))


def test_duals_invert_action(get_alg):
    alg = get_alg("qsl2-zeta4")
    G = regular(alg)
    for dual in (dual_left, dual_right):
        D = dual(G)
        assert D.dim == G.dim
        # the dual action of the unit is still the identity
        assert D.action_vec(alg.unit).is_identity()
    # v(vM) untwists through the pivot back to M's matrices conjugated
    DD = dual_left(dual_left(G))
    piv = G.action_vec(alg.pivot)
    v = alg._basis(3)
    assert DD.action_vec(v) == piv @ G.action_vec(v) @ G.action_vec(
        alg.pivot_inverse)


def test_morph_checks_intertwining(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    ident = Morph(G, G, Mat.identity(alg.field, 2))
    assert (ident @ ident).mat.is_identity()
    swap = Mat.from_rows(alg.field, [[alg.field.zero, alg.field.one],
                                     [alg.field.one, alg.field.zero]])
    Morph(G, G, swap)  # right multiplication by g intertwines
    one = trivial(alg)
    proj = Mat.from_rows(alg.field, [[alg.field.one, alg.field.zero]])
    with pytest.raises(IntertwinerError):
        Morph(G, one, proj)  # e_0 -> 1, e_g -> 0 is not H-linear
    assert not is_morphism(G, one, proj)
    with pytest.raises(IntertwinerError):
        Morph(G, G, Mat.zeros(alg.field, 3, 2))  # wrong shape


def test_hom_space_dimensions(get_alg):
    for name in ("kz2-qq", "kz3-qq", "ks3-qq"):
        alg = get_alg(name)
        G = regular(alg)
        assert len(hom_space(trivial(alg), trivial(alg))) == 1
        # Hom_H(H, H) is H acting by right multiplication
        assert len(hom_space(G, G)) == alg.dim, name
    alg = get_alg("sweedler-qq")
    # the space of left integrals is one-dimensional
    assert len(hom_space(trivial(alg), regular(alg))) == 1


def test_hom_space_is_deterministic(get_alg):
    alg = get_alg("kz3-qq")
    G = regular(alg)
    first = [m.mat for m in hom_space(G, G)]
    second = [m.mat for m in hom_space(G, G)]
    assert first == second
    for m in first:
        assert is_morphism(G, G, m)


@pytest.mark.parametrize("side", ["left", "right"])
def test_ev_coev_zigzag(get_alg, side):
    alg = get_alg("qsl2-zeta4")
    G = regular(alg)
    ev, coev = ev_coev(G, side)
    F = alg.field
    ident = Mat.identity(F, G.dim)
    if side == "left":
        # (id (x) ev) o (coev (x) id) = id on M
        composite = ident.kron(ev.mat) @ coev.mat.kron(ident)
    else:
        composite = ev.mat.kron(ident) @ ident.kron(coev.mat)
    assert composite.is_identity()
    with pytest.raises(ValueError):
        ev_coev(G, "middle")


def test_pivotal_right_zigzag(get_alg):
    alg = get_alg("qsl2-zeta4")
    G = regular(alg)
    ev_p, coev_p = pivotal_right_maps(G)
    ident = Mat.identity(alg.field, G.dim)
    composite = ev_p.mat.kron(ident) @ ident.kron(coev_p.mat)
    assert composite.is_identity()


def test_word_module(get_alg):
    alg = get_alg("kz2-qq")
    assert word_module(alg, "1").dim == 1
    assert word_module(alg, "H,H").dim == 4
    assert word_module(alg, ["H", "vH"]).dim == 4
    assert word_module(alg, "H*").trace == dual_left(regular(alg)).trace
    with pytest.raises(KeyError):
        word_module(alg, "M")


def test_direct_sum_retracts(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    S = direct_sum(G, trivial(alg))
    assert S.dim == 3
    rts = dsum_retracts(S)
    assert len(rts) == 2
    F = alg.field
    acc = Mat.zeros(F, S.dim, S.dim)
    for inc, prj in rts:
        assert (prj @ inc).mat.is_identity()
        acc = acc + (inc @ prj).mat
    assert acc.is_identity()


def test_covers_retract_to_identity(get_alg):
    alg = get_alg("kz2-f2")  # non-semisimple: covers do real work here
    G = regular(alg)
    for M in (G, tensor(G, G), dual_left(G), dual_right(G),
              tensor(G, dual_left(G))):
        F = alg.field
        acc = Mat.zeros(F, M.dim, M.dim)
        for f, g in M.cover:
            assert is_morphism(M, G, f)
            assert is_morphism(G, M, g)
            acc = acc + (g @ f)
        assert acc.is_identity(), M.label


def test_custom_module_round_trip(get_alg):
    alg = get_alg("kz2-qq")
    data = {
        "dimension": 1,
        # sign representation of Z/2
        "action": [[["1"]], [["-1"]]],
    }
    M = custom_module(alg, data, label="sign")
    assert M.dim == 1
    assert M.action(1).rows[0][0] == alg.field.parse("-1")
    with pytest.raises(IntertwinerError):
        custom_module(alg, {"dimension": 1, "action": [[["1"]]]})


def test_set_presentation_rejects_non_retract(get_alg):
    alg = get_alg("kz2-qq")
    data = {"dimension": 1, "action": [[["1"]], [["-1"]]]}
    M = custom_module(alg, data, label="sign")
    F = alg.field
    bad_f = Mat.zeros(F, alg.dim, 1)
    bad_g = Mat.zeros(F, 1, alg.dim)
    with pytest.raises(PresentationError):
        M.set_presentation([(bad_f, bad_g)])
