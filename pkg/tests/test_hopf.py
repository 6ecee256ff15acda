"""Structure constants, axioms, integrals and distinguished elements."""

import json

import pytest

from hopfmod.builtins import BUILTIN_NAMES, builtin_algebra, load_algebra
from hopfmod.hopf import HopfAlgebra, HopfError, check_hopf_axioms
from hopfmod.linalg import Mat

# (dim, unimodular, semisimple, unibalanced) per built-in
FLAGS = {
    "trivial-qq": (1, True, True, True),
    "kz2-qq": (2, True, True, True),
    "kz3-qq": (3, True, True, True),
    "kz4-qq": (4, True, True, True),
    "kz5-qq": (5, True, True, True),
    "kz6-qq": (6, True, True, True),
    "kz2-f2": (2, True, False, True),
    "kz3-f3": (3, True, False, True),
    "ks3-qq": (6, True, True, True),
    "sweedler-qq": (4, False, False, False),
    "qsl2-zeta4": (8, True, False, True),
}


def test_builtin_roster():
    assert set(BUILTIN_NAMES) == set(FLAGS)
    with pytest.raises(KeyError):
        builtin_algebra("kz7-qq")


@pytest.mark.parametrize("name", sorted(FLAGS))
def test_axioms_and_flags(get_alg, name):
    alg = get_alg(name)
    report = check_hopf_axioms(alg)
    assert set(report) >= {"associativity", "unit", "coassociativity",
                           "counit", "bialgebra", "antipode"}
    for axiom, (ok, witness) in report.items():
        assert ok, (name, axiom, witness)
    alg.validate()  # should not raise
    dim, unimod, ss, unibal = FLAGS[name]
    assert alg.dim == dim
    assert alg.is_unimodular == unimod
    assert alg.is_semisimple == ss
    assert alg.is_unibalanced() == unibal


@pytest.mark.parametrize("name", sorted(FLAGS))
def test_integral_normalization(get_alg, name):
    """lambda(Lambda) = 1 after the stored normalization."""
    alg = get_alg(name)
    assert alg.apply_integral(alg.cointegral) == alg.field.one


def test_unit_and_counit(get_alg):
    alg = get_alg("ks3-qq")
    assert alg.left_mult(alg.unit).is_identity()
    assert alg.right_mult(alg.unit).is_identity()
    assert alg.apply_counit(alg.unit) == alg.field.one
    e1 = alg._basis(1)
    assert alg.product(alg.unit, e1) == e1


def test_antipode_involutive_for_group_algebras(get_alg):
    for name in ("kz2-qq", "kz4-qq", "ks3-qq"):
        alg = get_alg(name)
        s2 = alg.antipode @ alg.antipode
        assert s2.is_identity(), name
        assert (alg.antipode @ alg.antipode_inv).is_identity()


def test_quantum_antipode_order_four(get_alg):
    alg = get_alg("qsl2-zeta4")
    s2 = alg.antipode @ alg.antipode
    assert not s2.is_identity()
    assert (s2 @ s2).is_identity()
    # the pivot conjugates S^2 to the identity
    piv = alg.left_mult(alg.pivot) @ alg.right_mult(alg.pivot_inverse)
    assert s2 == piv


def test_sweedler_distinguished_elements(get_alg):
    alg = get_alg("sweedler-qq")
    assert alg.dist_grouplike != alg.unit
    assert alg.is_grouplike(alg.dist_grouplike)
    assert len(alg.grouplikes()) == 2


def test_json_round_trip(get_alg):
    alg = get_alg("qsl2-zeta4")
    again = HopfAlgebra.from_json(alg.to_json())
    assert again.fingerprint() == alg.fingerprint()
    assert again.field == alg.field
    assert len(alg.fingerprint()) == 16


def test_from_json_rejects_malformed(get_alg):
    with pytest.raises(HopfError):
        HopfAlgebra.from_json({"dim": 2})
    data = get_alg("kz2-qq").to_json()
    bad = json.loads(json.dumps(data))
    bad["counit"] = ["1"]  # wrong length
    with pytest.raises(HopfError):
        HopfAlgebra.from_json(bad)


def test_validate_catches_broken_product(get_alg):
    data = get_alg("kz2-qq").to_json()
    broken = json.loads(json.dumps(data))
    broken["mul"][1][1] = ["0", "1"]  # g*g = g breaks the antipode axiom
    alg = HopfAlgebra.from_json(broken)
    report = check_hopf_axioms(alg)
    assert not all(ok for ok, _ in report.values())
    with pytest.raises(HopfError):
        alg.validate()


def test_load_algebra_from_file(tmp_path, get_alg):
    alg = get_alg("kz3-qq")
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(alg.to_json()))
    loaded = load_algebra(str(path))
    assert loaded.fingerprint() == alg.fingerprint()
    assert load_algebra("kz3-qq").fingerprint() == alg.fingerprint()


def test_comul_matrices_shape(get_alg):
    alg = get_alg("kz2-qq")
    for mat in alg.comul:
        assert isinstance(mat, Mat)
        assert (mat.nrows, mat.ncols) == (alg.dim, alg.dim)
    # counit is a right inverse of comultiplication in both legs
    spread = alg.comul_vec(alg._basis(1))
    F = alg.field
    left = [F.zero] * alg.dim
    for a in range(alg.dim):
        for b in range(alg.dim):
            left[a] = F.add(left[a], F.mul(spread.rows[a][b], alg.counit[b]))
    assert left == alg._basis(1)
