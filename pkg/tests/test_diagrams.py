"""Slice diagrams: evaluation, open presentations, serialization."""

import pytest

from hopfmod.diagrams import (CoevL, CoevR, Coupon, DOWN, EvL, EvR, Gate, Id,
                              OpenPresentation, SignatureMismatch,
                              SliceDiagram, UP, admissibility_check,
                              diagram_from_json, diagram_to_json, evaluate,
                              fprime, rotate_cut, signature_module,
                              strand_module)
from hopfmod.linalg import Mat
from hopfmod.mtrace import TraceContext
from hopfmod.rep import Morph, dual_left, hom_space, regular, trivial


def test_identity_diagram(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    d = SliceDiagram(alg, [(G, UP)], [[Id(G, UP)], [Id(G, UP)]])
    assert evaluate(d).is_identity()
    assert not d.is_closed
    assert d.top == [(G, UP)]
    assert [m.label for m in d.strand_colors()] == [G.label]


def test_left_zigzag(get_alg):
    alg = get_alg("qsl2-zeta4")
    G = regular(alg)
    d = SliceDiagram(alg, [(G, UP)], [
        [CoevL(G), Id(G, UP)],   # 1 -> G v G, then the strand
        [Id(G, UP), EvL(G)],     # vG G -> 1 on the right pair
    ])
    assert evaluate(d).is_identity()


def test_right_pivotal_zigzag(get_alg):
    alg = get_alg("qsl2-zeta4")
    G = regular(alg)
    d = SliceDiagram(alg, [(G, UP)], [
        [Id(G, UP), CoevR(G)],
        [EvR(G), Id(G, UP)],
    ])
    assert evaluate(d).is_identity()


def test_closed_circle_values(get_alg):
    """A right-coev/left-ev circle computes the pivot character."""
    alg = get_alg("kz3-qq")
    G = regular(alg)
    circ = SliceDiagram(alg, [], [[CoevR(G)], [EvL(G)]])
    assert circ.is_closed
    assert evaluate(circ).rows[0][0] == alg.field.from_int(3)
    quantum = get_alg("qsl2-zeta4")
    circ_q = SliceDiagram(quantum, [], [[CoevR(regular(quantum))],
                                        [EvL(regular(quantum))]])
    assert evaluate(circ_q).rows[0][0] == quantum.field.zero


def test_coupon_stack_matches_composition(get_alg):
    alg = get_alg("kz3-qq")
    G = regular(alg)
    f, g = hom_space(G, G)[1], hom_space(G, G)[2]
    stacked = SliceDiagram(alg, [(G, UP)], [
        [Coupon("f", f, [(G, UP)], [(G, UP)])],
        [Coupon("g", g, [(G, UP)], [(G, UP)])],
    ])
    fused = SliceDiagram(alg, [(G, UP)], [
        [Coupon("gf", g @ f, [(G, UP)], [(G, UP)])],
    ])
    assert evaluate(stacked) == evaluate(fused)


def test_stateful_coupons_close_to_scalar(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    one = trivial(alg)
    # 1 -> H maps are spanned by the cointegral; counit gives H -> 1
    coint_col = Mat.column(alg.field, alg.cointegral)
    counit_row = Mat.row_vector(alg.field, alg.counit)
    d = SliceDiagram(alg, [], [
        [Coupon("state", Morph(one, G, coint_col), [], [(G, UP)])],
        [Coupon("counit", Morph(G, one, counit_row), [(G, UP)], [])],
    ])
    assert evaluate(d).rows[0][0] == alg.apply_counit(alg.cointegral)


def test_signature_mismatch_reports_layer(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    with pytest.raises(SignatureMismatch) as err:
        SliceDiagram(alg, [(G, UP)], [[Id(G, UP)], [EvL(G)]])
    assert err.value.layer == 1


def test_gates_only_evaluate_after_cutting(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    gated = SliceDiagram(alg, [(G, UP)], [
        [Gate(1, G, UP, "in")],
        [Gate(1, G, UP, "out")],
    ])
    assert gated.has_gates()
    with pytest.raises(SignatureMismatch):
        evaluate(gated)  # markers must be cut away first
    assert not SliceDiagram(alg, [(G, UP)], [[Id(G, UP)]]).has_gates()


def test_json_round_trip_with_coupons(get_alg):
    alg = get_alg("kz3-qq")
    G = regular(alg)
    f = hom_space(G, G)[1]
    d = SliceDiagram(alg, [(G, UP)], [
        [Id(G, UP), CoevR(G)],
        [Coupon("f", f, [(G, UP)], [(G, UP)]), Id(G, DOWN), Id(G, UP)],
        [EvR(G), Id(G, UP)],
    ])
    data = diagram_to_json(d)
    assert "f" in data["registry"]
    again = diagram_from_json(alg, data)
    assert evaluate(again) == evaluate(d)


def test_open_presentation_guards(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    closed = SliceDiagram(alg, [], [[CoevR(G)], [EvL(G)]])
    with pytest.raises(SignatureMismatch):
        OpenPresentation(closed)
    widened = SliceDiagram(alg, [(G, UP)], [[Id(G, UP), CoevR(G)]])
    with pytest.raises(SignatureMismatch):
        OpenPresentation(widened)
    bad = get_alg("kz2-f2")
    one = trivial(bad)
    thin = SliceDiagram(bad, [(one, UP)], [[Id(one, UP)]])
    with pytest.raises(SignatureMismatch):
        OpenPresentation(thin)  # cut strand is not projective
    assert not admissibility_check(thin)
    assert admissibility_check(widened)


def test_fprime_invariant_under_cut_rotation(get_alg):
    alg = get_alg("kz3-qq")
    ctx = TraceContext(alg)
    G = regular(alg)
    f = hom_space(G, G)[2]
    d = SliceDiagram(alg, [(G, UP)], [
        [Id(G, UP), CoevR(G)],
        [Coupon("f", f, [(G, UP)], [(G, UP)]), Id(G, DOWN), Id(G, UP)],
        [EvR(G), Id(G, UP)],
    ])
    pres = OpenPresentation(d)
    base = fprime(ctx, pres)
    left = rotate_cut(pres, "conjugate_left")
    right = rotate_cut(pres, "conjugate_right")
    assert strand_module(left.strand).trace != strand_module(
        pres.strand).trace
    assert fprime(ctx, left) == base
    assert fprime(ctx, right) == base
    # opposite rotations compose back to an equivalent presentation
    assert fprime(ctx, rotate_cut(left, "conjugate_right")) == base
    with pytest.raises(ValueError):
        rotate_cut(pres, "flip")


def test_signature_module_builds_letters(get_alg):
    alg = get_alg("kz2-qq")
    G = regular(alg)
    X = signature_module(alg, [(G, UP), (G, DOWN)])
    assert X.dim == 4
    assert strand_module((G, DOWN)).trace == dual_left(G).trace
    assert signature_module(alg, []).dim == 1
