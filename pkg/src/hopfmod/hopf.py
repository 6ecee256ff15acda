"""Finite-dimensional Hopf algebras given by structure constants.

A :class:`HopfAlgebra` stores multiplication, unit, comultiplication, counit
and antipode over one of the exact coefficient fields.  All linear maps use
the column convention ``(M v)_a = sum_j M[a][j] v_j``.

Beyond the axioms, the class derives the data the rest of the package is
built on: a left cointegral ``Lambda`` (unique up to scale, verified), the
right integral ``lambda`` normalised by ``lambda(Lambda) = 1``, the
distinguished group-like element ``a``, the distinguished character
``alpha`` (via ``Lambda S(h) = alpha(h) Lambda``), and a pivot ``g`` with
``g^2 = a`` and ``S^2(x) = g x g^{-1}``.
"""

from __future__ import annotations

import hashlib
import json
from functools import cached_property
from typing import Any, Sequence

from hopfmod.fields import Field, FieldError, field_from_json
from hopfmod.linalg import Mat, inverse, nullspace

Vector = list


class HopfError(ValueError):
    """Structural problem with Hopf data (failed axiom, missing pivot, ...)."""


class ShapeError(HopfError):
    """Malformed structure-constant tensors."""


class SolverError(HopfError):
    """Integral/cointegral solution space is not 1-dimensional."""


class NormalizationError(HopfError):
    """The pairing lambda(Lambda) vanishes, so normalization is impossible."""


class NoPivotError(HopfError):
    """No pivot element is available for this algebra."""


class HopfAlgebra:
    def __init__(self, field: Field, dim: int,
                 mul: list[list[Vector]], unit: Vector,
                 comul: list[Mat], counit: Vector, antipode: Mat,
                 pivot_hint: Vector | None = None,
                 name: str | None = None):
        self.field = field
        self.dim = dim
        self.mul = mul
        self.unit = list(unit)
        self.comul = comul
        self.counit = list(counit)
        self.antipode = antipode
        self.pivot_hint = list(pivot_hint) if pivot_hint is not None else None
        self.name = name
        self._check_shapes()

    # --- construction helpers ----------------------------------------------

    def _check_shapes(self) -> None:
        d = self.dim
        if len(self.mul) != d or any(len(r) != d for r in self.mul):
            raise ShapeError("mul table must be dim x dim")
        if any(len(v) != d for row in self.mul for v in row):
            raise ShapeError("mul entries must be vectors of length dim")
        if len(self.unit) != d or len(self.counit) != d:
            raise ShapeError("unit/counit must have length dim")
        if len(self.comul) != d:
            raise ShapeError("comul must have one matrix per basis vector")
        for m in self.comul:
            if m.nrows != d or m.ncols != d:
                raise ShapeError("comul matrices must be dim x dim")
        if self.antipode.nrows != d or self.antipode.ncols != d:
            raise ShapeError("antipode must be dim x dim")

    # --- basic operations ---------------------------------------------------

    def product(self, v: Sequence, w: Sequence) -> Vector:
        F = self.field
        z = F.zero
        out = [z] * self.dim
        for i, vi in enumerate(v):
            if vi == z:
                continue
            for j, wj in enumerate(w):
                if wj == z:
                    continue
                c = F.mul(vi, wj)
                for a, m in enumerate(self.mul[i][j]):
                    if m != z:
                        out[a] = F.add(out[a], F.mul(c, m))
        return out

    def left_mult(self, v: Sequence) -> Mat:
        """Matrix of x -> v * x."""
        F = self.field
        out = Mat.zeros(F, self.dim, self.dim)
        for j in range(self.dim):
            col = self.product(v, self._basis(j))
            for a in range(self.dim):
                out.rows[a][j] = col[a]
        return out

    def right_mult(self, v: Sequence) -> Mat:
        """Matrix of x -> x * v."""
        F = self.field
        out = Mat.zeros(F, self.dim, self.dim)
        for j in range(self.dim):
            col = self.product(self._basis(j), v)
            for a in range(self.dim):
                out.rows[a][j] = col[a]
        return out

    def _basis(self, i: int) -> Vector:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def apply_counit(self, v: Sequence) -> Any:
        F = self.field
        out = F.zero
        for c, x in zip(self.counit, v):
            out = F.add(out, F.mul(c, x))
        return out

    def apply_antipode(self, v: Sequence) -> Vector:
        return self.antipode.apply(list(v))

    @cached_property
    def antipode_inv(self) -> Mat:
        return inverse(self.antipode)

    def comul_vec(self, v: Sequence) -> Mat:
        """Delta(v) as a dim x dim coefficient matrix."""
        F = self.field
        out = Mat.zeros(F, self.dim, self.dim)
        for i, vi in enumerate(v):
            if vi == F.zero:
                continue
            for a in range(self.dim):
                row = self.comul[i].rows[a]
                for b in range(self.dim):
                    if row[b] != F.zero:
                        out.rows[a][b] = F.add(out.rows[a][b],
                                               F.mul(vi, row[b]))
        return out

    @cached_property
    def comul3(self) -> list[list[list[list[Any]]]]:
        """Coefficients of the two-fold coproduct: Delta2(e_i) in H^(3)."""
        F = self.field
        d = self.dim
        z = F.zero
        out = [[[[z] * d for _ in range(d)] for _ in range(d)]
               for _ in range(d)]
        for i in range(d):
            Di = self.comul[i]
            for m in range(d):
                for c in range(d):
                    coeff = Di.rows[m][c]
                    if coeff == z:
                        continue
                    Dm = self.comul[m]
                    for a in range(d):
                        row = Dm.rows[a]
                        for b in range(d):
                            if row[b] != z:
                                out[i][a][b][c] = F.add(
                                    out[i][a][b][c], F.mul(coeff, row[b]))
        return out

    @cached_property
    def comul4(self) -> list[dict[tuple[int, int, int, int], Any]]:
        """Sparse coefficients of the three-fold coproduct in H^(4)."""
        F = self.field
        d = self.dim
        z = F.zero
        out: list[dict[tuple[int, int, int, int], Any]] = [dict() for _ in range(d)]
        d3 = self.comul3
        for i in range(d):
            tgt = out[i]
            for m in range(d):
                Dm = self.comul[m]
                for b in range(d):
                    for c in range(d):
                        coeff = d3[i][m][b][c]
                        if coeff == z:
                            continue
                        for a in range(d):
                            row = Dm.rows[a]
                            for a2 in range(d):
                                if row[a2] != z:
                                    key = (a, a2, b, c)
                                    cur = tgt.get(key, z)
                                    tgt[key] = F.add(cur, F.mul(coeff, row[a2]))
        return out

    # --- axioms --------------------------------------------------------------

    def verify_axioms(self) -> dict[str, tuple[bool, Any]]:
        """Check each Hopf axiom, reporting a witness index on failure."""
        F = self.field
        d = self.dim
        report: dict[str, tuple[bool, Any]] = {}

        witness = None
        for i in range(d):
            for j in range(d):
                ij = self.mul[i][j]
                for k in range(d):
                    lhs = self.product(ij, self._basis(k))
                    rhs = self.product(self._basis(i), self.mul[j][k])
                    if lhs != rhs:
                        witness = (i, j, k)
                        break
                if witness:
                    break
            if witness:
                break
        report["associativity"] = (witness is None, witness)

        witness = None
        for i in range(d):
            if (self.product(self.unit, self._basis(i)) != self._basis(i)
                    or self.product(self._basis(i), self.unit) != self._basis(i)):
                witness = i
                break
        report["unit"] = (witness is None, witness)

        witness = None
        for i in range(d):
            left = self.comul3[i]
            for a in range(d):
                for b in range(d):
                    for c in range(d):
                        rhs = F.zero
                        for m in range(d):
                            x = self.comul[i].rows[a][m]
                            if x != F.zero:
                                y = self.comul[m].rows[b][c]
                                if y != F.zero:
                                    rhs = F.add(rhs, F.mul(x, y))
                        if left[a][b][c] != rhs:
                            witness = (i, a, b, c)
                            break
                    if witness:
                        break
                if witness:
                    break
            if witness:
                break
        report["coassociativity"] = (witness is None, witness)

        witness = None
        for i in range(d):
            lhs1 = [F.zero] * d
            lhs2 = [F.zero] * d
            Di = self.comul[i]
            for a in range(d):
                for b in range(d):
                    c = Di.rows[a][b]
                    if c == F.zero:
                        continue
                    lhs1[b] = F.add(lhs1[b], F.mul(self.counit[a], c))
                    lhs2[a] = F.add(lhs2[a], F.mul(c, self.counit[b]))
            if lhs1 != self._basis(i) or lhs2 != self._basis(i):
                witness = i
                break
        report["counit"] = (witness is None, witness)

        witness = None
        if self.comul_vec(self.unit) != Mat(
                F, [[F.mul(a, b) for b in self.unit] for a in self.unit]):
            witness = "comul(unit)"
        if witness is None and self.apply_counit(self.unit) != F.one:
            witness = "counit(unit)"
        if witness is None:
            for i in range(d):
                for j in range(d):
                    lhs = self.comul_vec(self.mul[i][j])
                    rhs = Mat.zeros(F, d, d)
                    Di, Dj = self.comul[i], self.comul[j]
                    for a1 in range(d):
                        for b1 in range(d):
                            x = Di.rows[a1][b1]
                            if x == F.zero:
                                continue
                            for a2 in range(d):
                                for b2 in range(d):
                                    y = Dj.rows[a2][b2]
                                    if y == F.zero:
                                        continue
                                    c = F.mul(x, y)
                                    prod_a = self.mul[a1][a2]
                                    prod_b = self.mul[b1][b2]
                                    for a in range(d):
                                        if prod_a[a] == F.zero:
                                            continue
                                        ca = F.mul(c, prod_a[a])
                                        for b in range(d):
                                            if prod_b[b] != F.zero:
                                                rhs.rows[a][b] = F.add(
                                                    rhs.rows[a][b],
                                                    F.mul(ca, prod_b[b]))
                    if lhs != rhs:
                        witness = (i, j)
                        break
                    eps = self.apply_counit(self.mul[i][j])
                    if eps != F.mul(self.counit[i], self.counit[j]):
                        witness = ("counit", i, j)
                        break
                if witness:
                    break
        report["bialgebra"] = (witness is None, witness)

        witness = None
        for i in range(d):
            lhs1 = [F.zero] * d
            lhs2 = [F.zero] * d
            Di = self.comul[i]
            for a in range(d):
                for b in range(d):
                    c = Di.rows[a][b]
                    if c == F.zero:
                        continue
                    sa = self.apply_antipode(self._basis(a))
                    t1 = self.product(sa, self._basis(b))
                    sb = self.apply_antipode(self._basis(b))
                    t2 = self.product(self._basis(a), sb)
                    for x in range(d):
                        if t1[x] != F.zero:
                            lhs1[x] = F.add(lhs1[x], F.mul(c, t1[x]))
                        if t2[x] != F.zero:
                            lhs2[x] = F.add(lhs2[x], F.mul(c, t2[x]))
            target = [F.mul(self.counit[i], u) for u in self.unit]
            if lhs1 != target or lhs2 != target:
                witness = i
                break
        report["antipode"] = (witness is None, witness)

        try:
            self.antipode_inv
            report["antipode_invertible"] = (True, None)
        except Exception:
            report["antipode_invertible"] = (False, "singular antipode matrix")

        return report

    def validate(self) -> None:
        """Raise :class:`HopfError` naming the first failed axiom, if any."""
        for axiom, (ok, witness) in self.verify_axioms().items():
            if not ok:
                raise HopfError(f"axiom {axiom!r} fails at witness {witness!r}")

    # --- integrals and distinguished elements --------------------------------

    @cached_property
    def cointegral(self) -> Vector:
        """Left cointegral Lambda: h Lambda = counit(h) Lambda, verified 1-dim."""
        F = self.field
        d = self.dim
        blocks: list[list[Any]] = []
        for i in range(d):
            L = self.left_mult(self._basis(i))
            for a in range(d):
                row = list(L.rows[a])
                row[a] = F.sub(row[a], self.counit[i])
                blocks.append(row)
        basis = nullspace(Mat(F, blocks))
        if len(basis) != 1:
            raise SolverError(
                f"left cointegral space has dimension {len(basis)}, expected 1")
        return basis[0]

    @cached_property
    def integral(self) -> Vector:
        """Right integral lambda as a coordinate row, with lambda(Lambda) = 1."""
        F = self.field
        d = self.dim
        rows: list[list[Any]] = []
        for i in range(d):
            Di = self.comul[i]
            for b in range(d):
                # sum_a lambda_a D_i[a][b] = lambda_i unit_b
                row = [Di.rows[a][b] for a in range(d)]
                row[i] = F.sub(row[i], self.unit[b])
                rows.append(row)
        basis = nullspace(Mat(F, rows))
        if len(basis) != 1:
            raise SolverError(
                f"right integral space has dimension {len(basis)}, expected 1")
        lam = basis[0]
        norm = F.zero
        for x, y in zip(lam, self.cointegral):
            norm = F.add(norm, F.mul(x, y))
        if norm == F.zero:
            raise NormalizationError("integral pairing lambda(Lambda) vanishes")
        inv = F.inv(norm)
        return [F.mul(inv, x) for x in lam]

    def apply_integral(self, v: Sequence) -> Any:
        F = self.field
        out = F.zero
        for x, y in zip(self.integral, v):
            out = F.add(out, F.mul(x, y))
        return out

    @cached_property
    def dist_grouplike(self) -> Vector:
        """Group-like a with (id (x) lambda) Delta(h) = lambda(h) a."""
        F = self.field
        d = self.dim
        lam = self.integral
        pick = next((i for i in range(d) if lam[i] != F.zero), None)
        if pick is None:
            raise HopfError("right integral is zero")
        Dp = self.comul[pick]
        vec = [F.zero] * d
        for x in range(d):
            for b in range(d):
                if Dp.rows[x][b] != F.zero and lam[b] != F.zero:
                    vec[x] = F.add(vec[x], F.mul(Dp.rows[x][b], lam[b]))
        inv = F.inv(lam[pick])
        a = [F.mul(inv, x) for x in vec]
        # verify the defining property on the whole basis
        for i in range(d):
            Di = self.comul[i]
            got = [F.zero] * d
            for x in range(d):
                for b in range(d):
                    if Di.rows[x][b] != F.zero and lam[b] != F.zero:
                        got[x] = F.add(got[x], F.mul(Di.rows[x][b], lam[b]))
            want = [F.mul(lam[i], ax) for ax in a]
            if got != want:
                raise HopfError("distinguished group-like equation fails")
        if not self.is_grouplike(a):
            raise HopfError("distinguished element is not group-like")
        return a

    @cached_property
    def alpha(self) -> Vector:
        """Distinguished character row: Lambda S(h) = alpha(h) Lambda."""
        F = self.field
        d = self.dim
        Lam = self.cointegral
        pick = next((k for k in range(d) if Lam[k] != F.zero))
        inv = F.inv(Lam[pick])
        out = [F.zero] * d
        for j in range(d):
            w = self.product(Lam, self.apply_antipode(self._basis(j)))
            aj = F.mul(inv, w[pick])
            if w != [F.mul(aj, x) for x in Lam]:
                raise HopfError("character equation Lambda S(h) = alpha(h) Lambda fails")
            out[j] = aj
        return out

    def is_grouplike(self, v: Sequence) -> bool:
        F = self.field
        if self.apply_counit(v) != F.one:
            return False
        target = Mat(F, [[F.mul(a, b) for b in v] for a in v])
        return self.comul_vec(v) == target

    @cached_property
    def is_unimodular(self) -> bool:
        return self.alpha == self.counit

    @cached_property
    def is_semisimple(self) -> bool:
        return self.apply_counit(self.cointegral) != self.field.zero

    @cached_property
    def is_cosemisimple(self) -> bool:
        return self.apply_integral(self.unit) != self.field.zero

    def grouplikes(self) -> list[Vector]:
        """Enumerate group-like elements by bounded deterministic search.

        Candidates are counit-normalised basis vectors and two-term basis
        combinations; the hits are then closed under multiplication and
        antipode-inverses.  Complete for the shipped algebras (whose
        group-likes are supported on at most two basis vectors); documented
        as a bounded search, not a general variety solver.
        """
        F = self.field
        d = self.dim
        candidates: list[Vector] = [list(self.unit)]
        for i in range(d):
            candidates.append(self._basis(i))
        for i in range(d):
            for j in range(i + 1, d):
                for sj in (F.one, F.neg(F.one)):
                    v = [F.zero] * d
                    v[i] = F.one
                    v[j] = sj
                    candidates.append(v)
        if self.pivot_hint is not None:
            candidates.append(list(self.pivot_hint))
        found: list[Vector] = []
        for cand in candidates:
            e = self.apply_counit(cand)
            if e == F.zero:
                continue
            inv = F.inv(e)
            g = [F.mul(inv, x) for x in cand]
            if self.is_grouplike(g) and g not in found:
                found.append(g)
        # close under multiplication and inverses (S restricts to inversion)
        frontier = list(found)
        while frontier:
            nxt: list[Vector] = []
            for g in frontier:
                for h in list(found):
                    for p in (self.product(g, h), self.product(h, g)):
                        if p not in found:
                            found.append(p)
                            nxt.append(p)
                s = self.apply_antipode(g)
                if s not in found:
                    found.append(s)
                    nxt.append(s)
            frontier = nxt
        return found

    @cached_property
    def pivot(self) -> Vector:
        """Group-like g with g^2 = a and S^2(x) = g x g^{-1}."""
        g = self.pivot_or_none
        if g is None:
            raise NoPivotError(
                "no pivot found among enumerated group-likes; "
                "supply one in the algebra data")
        return g

    @cached_property
    def pivot_or_none(self) -> Vector | None:
        if self.pivot_hint is not None:
            if self._pivot_ok(self.pivot_hint):
                return list(self.pivot_hint)
            raise HopfError("supplied pivot fails the pivot equations")
        for g in self.grouplikes():
            if self._pivot_ok(g):
                return g
        return None

    def _pivot_ok(self, g: Sequence) -> bool:
        F = self.field
        if not self.is_grouplike(g):
            return False
        if self.product(g, g) != self.dist_grouplike:
            return False
        S2 = self.antipode @ self.antipode
        conj = self.left_mult(g) @ self.right_mult(self._grouplike_inverse(g))
        return S2 == conj

    def _grouplike_inverse(self, g: Sequence) -> Vector:
        return self.apply_antipode(g)

    @cached_property
    def pivot_inverse(self) -> Vector:
        return self._grouplike_inverse(self.pivot)

    def is_unibalanced(self) -> bool:
        """Unimodular with S(Lambda) = Lambda and an existing pivot."""
        if not self.is_unimodular:
            return False
        if self.apply_antipode(self.cointegral) != self.cointegral:
            return False
        return self.pivot_or_none is not None

    # --- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        return {
            "dimension": self.dim,
            "field": F.describe(),
            "mul": [[[F.to_json(x) for x in v] for v in row]
                    for row in self.mul],
            "unit": [F.to_json(x) for x in self.unit],
            "comul": [[[F.to_json(x) for x in row] for row in m.rows]
                      for m in self.comul],
            "counit": [F.to_json(x) for x in self.counit],
            "antipode": [[F.to_json(x) for x in row]
                         for row in self.antipode.rows],
            **({"pivot": [F.to_json(x) for x in self.pivot_hint]}
               if self.pivot_hint is not None else {}),
            **({"name": self.name} if self.name else {}),
        }

    @staticmethod
    def from_json(data: dict) -> "HopfAlgebra":
        try:
            field = field_from_json(data["field"])
            d = int(data["dimension"])
            mul = [[[field.parse(x) for x in vec] for vec in row]
                   for row in data["mul"]]
            unit = [field.parse(x) for x in data["unit"]]
            comul = [Mat(field, [[field.parse(x) for x in row] for row in m])
                     for m in data["comul"]]
            counit = [field.parse(x) for x in data["counit"]]
            antipode = Mat(field, [[field.parse(x) for x in row]
                                   for row in data["antipode"]])
            pivot = ([field.parse(x) for x in data["pivot"]]
                     if "pivot" in data else None)
        except (KeyError, TypeError, FieldError) as exc:
            raise HopfError(f"malformed algebra data: {exc}") from exc
        return HopfAlgebra(field, d, mul, unit, comul, counit, antipode,
                           pivot_hint=pivot, name=data.get("name"))

    def fingerprint(self) -> str:
        payload = json.dumps(self.to_json(), sort_keys=True,
                             separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def check_hopf_axioms(alg: HopfAlgebra) -> dict:
    """Per-axiom pass/fail report with a witness basis index on failure."""
    return alg.verify_axioms()
