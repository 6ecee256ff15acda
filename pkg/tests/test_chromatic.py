"""Chromatic maps: two-sided, based, and the sided twisted variants."""

import pytest

from hopfmod.chromatic import (ChromaticMap, NotUnimodular, alpha_module,
                               chromatic_based, chromatic_left,
                               chromatic_right, chromatic_two_sided,
                               lambda_sided, standard_test_modules,
                               transport_generator, verify_chromatic)
from hopfmod.mtrace import TraceContext
from hopfmod.rep import Morph, dsum_retracts, direct_sum, regular, tensor, trivial


def test_two_sided_map_verifies(get_alg):
    alg = get_alg("kz2-qq")
    c = chromatic_two_sided(alg)
    assert c.kind == "two_sided"
    assert c.base.trace == ("regular",)
    report = verify_chromatic(c, standard_test_modules(alg))
    assert report["ok"]
    assert report["fingerprint"] == alg.fingerprint()
    assert {r["module"] for r in report["results"]} == {"1", "H", "H(x)H",
                                                        "vH"}
    assert c.verified["H"]


def test_two_sided_nonsemisimple(get_alg):
    alg = get_alg("kz3-f3")
    c = chromatic_two_sided(alg)
    report = verify_chromatic(c, standard_test_modules(alg))
    assert report["ok"], report


def test_two_sided_requires_unimodular(get_alg):
    with pytest.raises(NotUnimodular):
        chromatic_two_sided(get_alg("sweedler-qq"))


def test_based_map_on_tensor_square(get_alg):
    alg = get_alg("kz2-qq")
    ctx = TraceContext(alg)
    G = regular(alg)
    c = chromatic_two_sided(alg)
    cP = chromatic_based(c, tensor(G, G))
    assert cP.base.trace == tensor(G, G).trace
    report = verify_chromatic(cP, standard_test_modules(alg), ctx)
    assert report["ok"], report
    with pytest.raises(ValueError):
        chromatic_based(cP, G)  # base is no longer the regular module


def test_transport_generator_round_trip(get_alg):
    """Moving the generator through a direct-sum retract keeps the identity."""
    alg = get_alg("kz2-qq")
    ctx = TraceContext(alg)
    G = regular(alg)
    S = direct_sum(G, trivial(alg))
    (inc, prj), _ = dsum_retracts(S)
    c = chromatic_two_sided(alg)
    moved = transport_generator(c, S, [(inc.mat, prj.mat)])
    assert moved.generator is S
    report = verify_chromatic(moved, [trivial(alg), G], ctx)
    assert report["ok"], report


def test_sided_maps_on_sweedler(get_alg):
    alg = get_alg("sweedler-qq")
    G = regular(alg)
    tests = [trivial(alg), G, tensor(G, G)]
    for build, kind in ((chromatic_left, "left"), (chromatic_right, "right")):
        c = build(alg)
        assert c.kind == kind
        report = verify_chromatic(c, tests)
        assert report["ok"], (kind, report)
        assert all(r["route"] in ("diagram", "contraction")
                   for r in report["results"])


def test_sided_maps_match_two_sided_when_unimodular(get_alg):
    """On a unibalanced algebra the twisted identities also hold."""
    alg = get_alg("kz3-qq")
    for build in (chromatic_left, chromatic_right):
        report = verify_chromatic(build(alg), [trivial(alg), regular(alg)])
        assert report["ok"], report


def test_alpha_module_trivial_iff_unimodular(get_alg):
    alg = get_alg("kz2-qq")
    A = alpha_module(alg)
    assert A.dim == 1
    assert A.action_vec(alg._basis(1)).rows[0][0] == alg.field.one
    sw = get_alg("sweedler-qq")
    Asw = alpha_module(sw)
    vals = [Asw.action_vec(sw._basis(i)).rows[0][0] for i in range(sw.dim)]
    assert vals != list(sw.counit)


def test_lambda_sided_are_morphisms(get_alg):
    alg = get_alg("sweedler-qq")
    G = regular(alg)
    for side in ("left", "right"):
        m = lambda_sided(G, side)
        assert isinstance(m, Morph)
    with pytest.raises(ValueError):
        lambda_sided(G, "middle")


def test_chromatic_map_signature_guard(get_alg):
    alg = get_alg("kz2-qq")
    c = chromatic_two_sided(alg)
    with pytest.raises(ValueError):
        ChromaticMap("diagonal", c.base, c.generator, c.morph, "test")
    with pytest.raises(ValueError):
        # left kind demands the double-dual source signature
        ChromaticMap("left", c.base, c.generator, c.morph, "test")
