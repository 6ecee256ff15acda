"""Built-in example algebras.

The library spans the regimes the test batteries need: semisimple group
algebras over Q, modular (non-semisimple but unimodular) group algebras over
F_p, a non-unimodular algebra (the 4-dimensional Sweedler algebra), and an
8-dimensional non-semisimple unimodular quantum algebra shipped as a data
file over the 4th cyclotomic field and re-verified against the Hopf axioms
every time it is loaded.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from itertools import permutations

from hopfmod.fields import QQ, GF, Field
from hopfmod.hopf import HopfAlgebra
from hopfmod.linalg import Mat


def trivial_algebra(field: Field = QQ, name: str = "trivial-qq") -> HopfAlgebra:
    one, mat = field.one, Mat(field, [[field.one]])
    return HopfAlgebra(field, 1, [[[one]]], [one], [mat], [one], mat,
                       pivot_hint=[one], name=name)


def group_algebra(field: Field, table: list[list[int]], name: str,
                  pivot_index: int = 0) -> HopfAlgebra:
    """Group algebra from a Cayley table (index 0 = identity)."""
    n = len(table)
    zero, one = field.zero, field.one
    mul = [[[one if k == table[i][j] else zero for k in range(n)]
            for j in range(n)] for i in range(n)]
    unit = [one if i == 0 else zero for i in range(n)]
    comul = []
    for i in range(n):
        m = Mat.zeros(field, n, n)
        m.rows[i][i] = one
        comul.append(m)
    counit = [one] * n
    inv = [next(j for j in range(n) if table[i][j] == 0) for i in range(n)]
    antipode = Mat.zeros(field, n, n)
    for j in range(n):
        antipode.rows[inv[j]][j] = one
    pivot = [one if i == pivot_index else zero for i in range(n)]
    return HopfAlgebra(field, n, mul, unit, comul, counit, antipode,
                       pivot_hint=pivot, name=name)


def cyclic_group_algebra(field: Field, n: int, name: str) -> HopfAlgebra:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return group_algebra(field, table, name)


def symmetric3_algebra(field: Field = QQ, name: str = "ks3-qq") -> HopfAlgebra:
    elems = sorted(permutations(range(3)))
    pos = {p: i for i, p in enumerate(elems)}
    # composition (p*q)(x) = p(q(x))
    table = [[pos[tuple(p[q[x]] for x in range(3))] for q in elems]
             for p in elems]
    if elems[0] != (0, 1, 2):
        raise AssertionError("identity must come first")
    return group_algebra(field, table, name)


def sweedler_algebra(field: Field = QQ, name: str = "sweedler-qq") -> HopfAlgebra:
    """Four-dimensional algebra on basis {1, w, x, wx}: w^2=1, x^2=0, xw=-wx."""
    z, o = field.zero, field.one
    m = field.neg(o)

    def vec(**kw):
        v = [z, z, z, z]
        names = {"one": 0, "w": 1, "x": 2, "wx": 3}
        for k, c in kw.items():
            v[names[k]] = c
        return v

    mul = [[None] * 4 for _ in range(4)]
    mul[0][0] = vec(one=o); mul[0][1] = vec(w=o); mul[0][2] = vec(x=o); mul[0][3] = vec(wx=o)
    mul[1][0] = vec(w=o);   mul[1][1] = vec(one=o); mul[1][2] = vec(wx=o); mul[1][3] = vec(x=o)
    mul[2][0] = vec(x=o);   mul[2][1] = vec(wx=m); mul[2][2] = vec();     mul[2][3] = vec()
    mul[3][0] = vec(wx=o);  mul[3][1] = vec(x=m);  mul[3][2] = vec();     mul[3][3] = vec()
    unit = vec(one=o)
    comul = [Mat.zeros(field, 4, 4) for _ in range(4)]
    comul[0].rows[0][0] = o                      # 1 (x) 1
    comul[1].rows[1][1] = o                      # w (x) w
    comul[2].rows[2][0] = o; comul[2].rows[1][2] = o   # x(x)1 + w(x)x
    comul[3].rows[3][1] = o; comul[3].rows[0][3] = o   # wx(x)w + 1(x)wx
    counit = [o, o, z, z]
    antipode = Mat.zeros(field, 4, 4)
    antipode.rows[0][0] = o
    antipode.rows[1][1] = o
    antipode.rows[3][2] = m      # S(x) = -wx
    antipode.rows[2][3] = o      # S(wx) = x
    return HopfAlgebra(field, 4, mul, unit, comul, counit, antipode,
                       name=name)


def quantum_sl2_root4(name: str = "qsl2-zeta4") -> HopfAlgebra:
    """Load the shipped structure-constant file and re-verify the axioms."""
    text = resources.files("hopfmod").joinpath(
        "data/quantum_sl2_root4.json").read_text()
    alg = HopfAlgebra.from_json(json.loads(text))
    alg.validate()
    alg.name = name
    return alg


_FACTORIES = {
    "trivial-qq": lambda: trivial_algebra(),
    "kz2-qq": lambda: cyclic_group_algebra(QQ, 2, "kz2-qq"),
    "kz3-qq": lambda: cyclic_group_algebra(QQ, 3, "kz3-qq"),
    "kz4-qq": lambda: cyclic_group_algebra(QQ, 4, "kz4-qq"),
    "kz5-qq": lambda: cyclic_group_algebra(QQ, 5, "kz5-qq"),
    "kz6-qq": lambda: cyclic_group_algebra(QQ, 6, "kz6-qq"),
    "kz2-f2": lambda: cyclic_group_algebra(GF(2), 2, "kz2-f2"),
    "kz3-f3": lambda: cyclic_group_algebra(GF(3), 3, "kz3-f3"),
    "ks3-qq": lambda: symmetric3_algebra(),
    "sweedler-qq": lambda: sweedler_algebra(),
    "qsl2-zeta4": quantum_sl2_root4,
}

BUILTIN_NAMES: tuple[str, ...] = tuple(_FACTORIES)


@lru_cache(maxsize=None)
def builtin_algebra(name: str) -> HopfAlgebra:
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise KeyError(
            f"unknown built-in algebra {name!r}; "
            f"choose from {', '.join(BUILTIN_NAMES)}") from None


def load_algebra(ref: str) -> HopfAlgebra:
    """Resolve a built-in name or a structure-constant JSON file path."""
    if ref in _FACTORIES:
        return builtin_algebra(ref)
    with open(ref) as fh:
        alg = HopfAlgebra.from_json(json.load(fh))
    alg.validate()
    return alg
