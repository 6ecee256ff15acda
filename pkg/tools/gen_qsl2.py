#!/usr/bin/env python3
"""Generate the 8-dimensional small-quantum-sl2 structure-constant file.

Basis monomials E^a F^b K^c (a,b,c in {0,1}), indexed a + 2b + 4c, over the
4th cyclotomic field.  Relations: E^2 = F^2 = 0, K^2 = 1, KE = -EK,
KF = -FK, FE = EF; Delta(E) = 1(x)E + E(x)K, Delta(F) = K(x)F + F(x)1,
Delta(K) = K(x)K; S(E) = -EK, S(F) = -KF, S(K) = K.  The package validates
this file against the Hopf axioms at load time; run this script only to
regenerate it.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

D = 8


def idx(a: int, b: int, c: int) -> int:
    return a + 2 * b + 4 * c


def unidx(i: int) -> tuple[int, int, int]:
    return i & 1, (i >> 1) & 1, (i >> 2) & 1


def mono_mul(m1: tuple[int, int, int], m2: tuple[int, int, int]):
    """Product of two basis monomials -> (coefficient, index) or None."""
    a, b, c = m1
    d_, e, f = m2
    if a + d_ > 1 or b + e > 1:
        return None
    sign = -1 if (c * (d_ + e)) % 2 else 1
    return sign, idx(a + d_, b + e, (c + f) % 2)


def alg_mul(x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, ci in x.items():
        for j, cj in y.items():
            r = mono_mul(unidx(i), unidx(j))
            if r is None:
                continue
            s, k = r
            out[k] = out.get(k, 0) + ci * cj * s
    return {k: v for k, v in out.items() if v}


def tensor_mul(x: dict, y: dict) -> dict:
    """Multiply elements of H (x) H given as {(i,j): coeff}."""
    out: dict[tuple[int, int], int] = {}
    for (i1, j1), c1 in x.items():
        for (i2, j2), c2 in y.items():
            r1 = mono_mul(unidx(i1), unidx(i2))
            r2 = mono_mul(unidx(j1), unidx(j2))
            if r1 is None or r2 is None:
                continue
            s1, k1 = r1
            s2, k2 = r2
            key = (k1, k2)
            out[key] = out.get(key, 0) + c1 * c2 * s1 * s2
    return {k: v for k, v in out.items() if v}


def main() -> None:
    E, F, K = {1: 1}, {2: 1}, {4: 1}
    one = {0: 1}

    # comultiplication of the generators in H (x) H
    dE = {(0, 1): 1, (1, 4): 1}
    dF = {(4, 2): 1, (2, 0): 1}
    dK = {(4, 4): 1}
    dOne = {(0, 0): 1}

    comul = []
    for i in range(D):
        a, b, c = unidx(i)
        t = dict(dOne)
        for _ in range(a):
            t = tensor_mul(t, dE)
        for _ in range(b):
            t = tensor_mul(t, dF)
        for _ in range(c):
            t = tensor_mul(t, dK)
        m = [[0] * D for _ in range(D)]
        for (p, q), coeff in t.items():
            m[p][q] = coeff
        comul.append(m)

    sE = alg_mul({1: -1}, K)          # -EK
    sF = alg_mul({4: -1}, F)          # -KF
    sK = dict(K)
    antipode_cols = []
    for i in range(D):
        a, b, c = unidx(i)
        t = dict(one)
        for _ in range(c):
            t = alg_mul(t, sK)
        for _ in range(b):
            t = alg_mul(t, sF)
        for _ in range(a):
            t = alg_mul(t, sE)
        col = [0] * D
        for k, v in t.items():
            col[k] = v
        antipode_cols.append(col)
    antipode = [[antipode_cols[j][i] for j in range(D)] for i in range(D)]

    mul = []
    for i in range(D):
        row = []
        for j in range(D):
            v = [0] * D
            r = mono_mul(unidx(i), unidx(j))
            if r is not None:
                s, k = r
                v[k] = s
            row.append(v)
        mul.append(row)

    unit = [1, 0, 0, 0, 0, 0, 0, 0]
    counit = [1 if unidx(i)[0] == 0 and unidx(i)[1] == 0 else 0
              for i in range(D)]
    pivot = [0, 0, 0, 0, 1, 0, 0, 0]  # K

    def scal(n: int) -> str:
        return str(Fraction(n))

    data = {
        "name": "qsl2-zeta4",
        "dimension": D,
        "field": {"cyclotomic": 4},
        "mul": [[[scal(x) for x in v] for v in row] for row in mul],
        "unit": [scal(x) for x in unit],
        "comul": [[[scal(x) for x in row] for row in m] for m in comul],
        "counit": [scal(x) for x in counit],
        "antipode": [[scal(x) for x in row] for row in antipode],
        "pivot": [scal(x) for x in pivot],
    }
    out = Path(__file__).resolve().parent.parent / "src" / "hopfmod" / "data"
    out.mkdir(parents=True, exist_ok=True)
    (out / "quantum_sl2_root4.json").write_text(
        json.dumps(data, separators=(",", ": "), indent=None) + "\n")
    print("wrote", out / "quantum_sl2_root4.json")


if __name__ == "__main__":
    main()
