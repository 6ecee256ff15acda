"""Modified trace on projective modules, dual-basis copairings, handle elements.

For a unimodular algebra with S(cointegral) = cointegral and a pivot g, the
trace of an endomorphism f of the regular module is lambda(g f(1)); a general
projective P is folded through a retract presentation (f_k: P->H, g_k: H->P):

    t_P(f) = sum_k lambda(g (f_k f g_k)(1)).

From t we build, per module X, dual bases {x^i} of Hom(X,1) and {x_i} of
Hom(1,X) with t_X(x_i x^j) = delta_ij, their copairing Omega_X, and the
handle element Lambda^t_X = sum_i x_i x^i.  The randomized battery at the
bottom exercises cyclicity, both partial-trace identities, the naturality /
duality / rotation behaviour of Omega, presentation independence and the
comparison of Lambda^t with the integral-action maps.
"""

from __future__ import annotations

from random import Random
from typing import Any, Sequence

from hopfmod.fields import Field
from hopfmod.hopf import HopfAlgebra
from hopfmod.linalg import Mat, NoSolutionError, inverse, rref
from hopfmod.rep import (AlgebraMismatch, Module, Morph, NotProjectiveError,
                         PresentationError, _psi_matrices,
                         _tensor_cover_right, dual_left, ev_coev,
                         pivotal_right_maps, regular, tensor)

__all__ = [
    "NotUnimodular", "DegenerateTraceError", "NotProjectiveError",
    "PresentationError", "TraceContext", "random_scalar", "random_vector",
    "random_matrix", "transported_endo", "hom_from_regular",
    "hom_to_regular", "property_battery",
]


class NotUnimodular(ValueError):
    """The algebra does not support the integral-formula trace."""


class DegenerateTraceError(ValueError):
    """The trace pairing on Hom(1,X) x Hom(X,1) is singular."""


# omega() runs through retract presentations; above this dimension the
# handle element is taken as the integral action instead (same morphism,
# compared exactly by the battery on small modules)
_OMEGA_DIM_LIMIT = 256


class TraceContext:
    """Holds the pivot/integral pair and caches dual bases per module."""

    def __init__(self, algebra: HopfAlgebra):
        if not algebra.is_unimodular:
            raise NotUnimodular(
                "trace formula needs a unimodular algebra "
                "(two-sided cointegral)")
        if algebra.apply_antipode(algebra.cointegral) != algebra.cointegral:
            raise NotUnimodular(
                "trace formula needs an antipode-fixed cointegral")
        self.algebra = algebra
        self.g = algebra.pivot  # NoPivotError if the algebra has none
        self._omega_cache: dict[tuple, tuple[list, list]] = {}
        self._checked: set[tuple] = set()
        self._fold_cache: dict[tuple, tuple] = {}

    # -- the trace -----------------------------------------------------------

    def _cover(self, P: Module) -> list[tuple[Mat, Mat]]:
        fam = P.cover  # NotProjectiveError when no presentation exists
        if P.trace not in self._checked:
            acc = Mat.zeros(P.algebra.field, P.dim, P.dim)
            for f, g in fam:
                acc = acc + (g @ f)
            if not acc.is_identity():
                raise PresentationError(
                    f"presentation of {P.label} does not retract to the "
                    "identity")
            self._checked.add(P.trace)
        return fam

    def _folded(self, P: Module) -> tuple[list[list], list[list]]:
        """Per presentation component: g_k(1_H) and the row lambda(g f_k(.))."""
        key = P.trace
        hit = self._fold_cache.get(key)
        if hit is not None:
            return hit
        alg = self.algebra
        carriers, rows = [], []
        for f, g in self._cover(P):
            carriers.append(g.apply(alg.unit))
            rows.append([alg.apply_integral(alg.product(self.g, f.col(j)))
                         for j in range(P.dim)])
        self._fold_cache.setdefault(key, (carriers, rows))
        return self._fold_cache[key]

    def mtrace(self, P: Module, f: Morph | Mat) -> Any:
        """t_P(f) for an endomorphism f of the projective module P."""
        mat = f.mat if isinstance(f, Morph) else f
        if mat.nrows != P.dim or mat.ncols != P.dim:
            raise AlgebraMismatch("trace argument is not an endomorphism of P")
        F = self.algebra.field
        carriers, rows = self._folded(P)
        total = F.zero
        for w, row in zip(carriers, rows):
            v = mat.apply(w)
            for c, x in zip(row, v):
                if c != F.zero and x != F.zero:
                    total = F.add(total, F.mul(c, x))
        return total

    def mtrace_rank1(self, P: Module, u: Sequence, v: Sequence) -> Any:
        """t_P(v u) for a covector u: P->1 and a vector v: 1->P."""
        F = self.algebra.field
        carriers, rows = self._folded(P)
        total = F.zero
        for w, row in zip(carriers, rows):
            a = _dot(F, u, w)
            if a == F.zero:
                continue
            b = _dot(F, row, v)
            if b != F.zero:
                total = F.add(total, F.mul(a, b))
        return total

    # -- dual bases and the handle element ------------------------------------

    def omega(self, X: Module) -> tuple[list[list], list[list]]:
        """Dual bases ({x^i: X->1}, {x_i: 1->X}) with t(x_i x^j) = delta_ij.

        Hom(X,1) is spanned by counit-composed presentation components and
        Hom(1,X) by presentation images of the cointegral; both spans are
        reduced to deterministic echelon bases before Gram inversion.
        """
        key = X.trace
        hit = self._omega_cache.get(key)
        if hit is not None:
            return hit
        alg = self.algebra
        F = alg.field
        fam = self._cover(X)
        u_span = [[_dot_col(F, alg.counit, f, j) for j in range(X.dim)]
                  for f, _ in fam]
        v_span = [g.apply(alg.cointegral) for _, g in fam]
        u_basis = _echelon_rows(F, u_span)
        v_basis = _echelon_rows(F, v_span)
        if len(u_basis) != len(v_basis):
            raise DegenerateTraceError(
                f"Hom({X.label},1) and Hom(1,{X.label}) have different "
                f"dimensions {len(u_basis)} != {len(v_basis)}")
        k = len(u_basis)
        if k == 0:
            self._omega_cache.setdefault(key, ([], []))
            return self._omega_cache[key]
        gram = Mat(F, [[self.mtrace_rank1(X, u, v) for v in v_basis]
                       for u in u_basis])
        try:
            ginv = inverse(gram)
        except NoSolutionError as exc:
            raise DegenerateTraceError(
                f"trace pairing on {X.label} is singular") from exc
        x_down = [[_col_comb(F, v_basis, ginv, i, a) for a in range(X.dim)]
                  for i in range(k)]
        for i in range(k):
            for j in range(k):
                want = F.one if i == j else F.zero
                if self.mtrace_rank1(X, u_basis[j], x_down[i]) != want:
                    raise DegenerateTraceError(
                        f"dual-basis normalization failed on {X.label}")
        self._omega_cache.setdefault(key, (u_basis, x_down))
        return self._omega_cache[key]

    def omega_tensor(self, X: Module) -> Mat:
        """Coordinates of Omega_X: W[a][b] = sum_i x^i[a] x_i[b]."""
        F = self.algebra.field
        ups, downs = self.omega(X)
        out = Mat.zeros(F, X.dim, X.dim)
        for u, v in zip(ups, downs):
            for a in range(X.dim):
                if u[a] == F.zero:
                    continue
                row = out.rows[a]
                for b in range(X.dim):
                    if v[b] != F.zero:
                        row[b] = F.add(row[b], F.mul(u[a], v[b]))
        return out

    def lambda_t(self, X: Module, route: str = "auto") -> Mat:
        """Handle element Lambda^t_X = sum_i x_i x^i as a matrix on X."""
        if route == "auto":
            route = "omega" if X.dim <= _OMEGA_DIM_LIMIT else "integral"
        if route == "integral":
            return X.action_vec(self.algebra.cointegral)
        if route != "omega":
            raise ValueError("route must be 'auto', 'omega' or 'integral'")
        F = self.algebra.field
        ups, downs = self.omega(X)
        out = Mat.zeros(F, X.dim, X.dim)
        for u, v in zip(ups, downs):
            for a in range(X.dim):
                if v[a] == F.zero:
                    continue
                row = out.rows[a]
                for b in range(X.dim):
                    if u[b] != F.zero:
                        row[b] = F.add(row[b], F.mul(v[a], u[b]))
        return out

    def lambda_right(self, X: Module) -> Mat:
        """Right handle map: action of S(cointegral) on X."""
        alg = self.algebra
        return X.action_vec(alg.apply_antipode(alg.cointegral))

    def lambda_left(self, X: Module) -> Mat:
        """Left handle map: action of S^{-1}(cointegral) on X."""
        alg = self.algebra
        return X.action_vec(alg.antipode_inv.apply(alg.cointegral))

    # -- partial traces --------------------------------------------------------

    def ptr_r(self, f: Mat, X: Module, Y: Module) -> Mat:
        """Close the Y strand of f in End(X (x) Y) through the pivot."""
        F = self.algebra.field
        gY = Y.action_vec(self.g)
        nx, ny = X.dim, Y.dim
        out = Mat.zeros(F, nx, nx)
        for xp in range(nx):
            for yp in range(ny):
                frow = f.rows[xp * ny + yp]
                for x in range(nx):
                    acc = out.rows[xp][x]
                    base = x * ny
                    for y in range(ny):
                        c = frow[base + y]
                        if c != F.zero and gY.rows[y][yp] != F.zero:
                            acc = F.add(acc, F.mul(c, gY.rows[y][yp]))
                    out.rows[xp][x] = acc
        return out

    def ptr_l(self, f: Mat, X: Module, Y: Module) -> Mat:
        """Close the X strand of f in End(X (x) Y) through the inverse pivot."""
        alg = self.algebra
        F = alg.field
        gXi = X.action_vec(alg.pivot_inverse)
        nx, ny = X.dim, Y.dim
        out = Mat.zeros(F, ny, ny)
        for x in range(nx):
            for yp in range(ny):
                frow = f.rows[x * ny + yp]
                orow = out.rows[yp]
                for a in range(nx):
                    c = gXi.rows[a][x]
                    if c == F.zero:
                        continue
                    base = a * ny
                    for y in range(ny):
                        if frow[base + y] != F.zero:
                            orow[y] = F.add(orow[y],
                                            F.mul(frow[base + y], c))
        return out


# -- small helpers -------------------------------------------------------------

def _dot(F: Field, u: Sequence, v: Sequence) -> Any:
    acc = F.zero
    for a, b in zip(u, v):
        if a != F.zero and b != F.zero:
            acc = F.add(acc, F.mul(a, b))
    return acc


def _dot_col(F: Field, row: Sequence, mat: Mat, j: int) -> Any:
    acc = F.zero
    for a in range(mat.nrows):
        x = mat.rows[a][j]
        if x != F.zero and row[a] != F.zero:
            acc = F.add(acc, F.mul(row[a], x))
    return acc


def _col_comb(F: Field, basis: list[list], coeffs: Mat, i: int, a: int) -> Any:
    acc = F.zero
    for l, vec in enumerate(basis):
        c = coeffs.rows[l][i]
        if c != F.zero and vec[a] != F.zero:
            acc = F.add(acc, F.mul(c, vec[a]))
    return acc


def _echelon_rows(F: Field, span: list[list]) -> list[list]:
    if not span:
        return []
    red, pivots = rref(Mat(F, [list(r) for r in span]))
    return [red.rows[r] for r in range(len(pivots))]


# -- randomized material ---------------------------------------------------------

def random_scalar(field: Field, rng: Random, span: int = 3) -> Any:
    """Small field element drawn from rng (uses a primitive root if present)."""
    out = field.from_int(rng.randint(-span, span))
    zeta = getattr(field, "zeta", None)
    if callable(zeta):
        out = field.add(out, field.mul(
            field.from_int(rng.randint(-span, span)), zeta()))
    return out


def random_vector(field: Field, rng: Random, n: int) -> list:
    return [random_scalar(field, rng) for _ in range(n)]


def random_matrix(field: Field, rng: Random, nrows: int, ncols: int) -> Mat:
    return Mat(field, [random_vector(field, rng, ncols)
                       for _ in range(nrows)])


def transported_endo(alg: HopfAlgebra, N: Module, a: Sequence,
                     B: Mat) -> Mat:
    """Endomorphism of H (x) N from right multiplication and an arbitrary B.

    The untwisting h (x) n -> h1 (x) S(h2)n identifies H (x) N with a free
    module, on which R_a (x) B commutes with the action for any matrix B;
    conjugating back yields a module endomorphism without a hom solve.
    """
    psi, psi_inv = _psi_matrices(alg, N)
    return psi_inv @ (alg.right_mult(a).kron(B) @ psi)


def hom_from_regular(Y: Module, y0: Sequence) -> Mat:
    """The module map H -> Y determined by 1 |-> y0."""
    F = Y.algebra.field
    cols = [Y.action_vec(Y.algebra._basis(i)).apply(list(y0))
            for i in range(Y.algebra.dim)]
    return Mat(F, [[cols[i][r] for i in range(Y.algebra.dim)]
                   for r in range(Y.dim)])


def hom_to_regular(ctx: TraceContext, Y: Module, rng: Random) -> Mat:
    """A module map Y -> H: presentation components mixed by right factors."""
    alg = ctx.algebra
    F = alg.field
    out = Mat.zeros(F, alg.dim, Y.dim)
    for f, _ in ctx._cover(Y):
        a = random_vector(F, rng, alg.dim)
        out = out + (alg.right_mult(a) @ f)
    return out


def _rotate_basis_up(ctx: TraceContext, X: Module, Z: Module,
                     u: Sequence) -> list:
    """Rotation transport of x^i: X(x)Z -> 1 to a covector on Z(x)X."""
    F = ctx.algebra.field
    evp, _ = pivotal_right_maps(Z)
    _, coevl = ev_coev(Z, "left")
    IZ = Mat.identity(F, Z.dim)
    IZX = Mat.identity(F, Z.dim * X.dim)
    mid = IZ.kron(Mat.row_vector(F, list(u))).kron(IZ)
    return (evp.mat @ (mid @ IZX.kron(coevl.mat))).rows[0]


def _rotate_basis_down(ctx: TraceContext, X: Module, Z: Module,
                       v: Sequence) -> list:
    """Rotation transport of x_i: 1 -> X(x)Z to a vector into Z(x)X."""
    F = ctx.algebra.field
    evp, _ = pivotal_right_maps(Z)
    _, coevl = ev_coev(Z, "left")
    IZ = Mat.identity(F, Z.dim)
    IZX = Mat.identity(F, Z.dim * X.dim)
    mid = IZ.kron(Mat.column(F, list(v))).kron(IZ)
    return (IZX.kron(evp.mat) @ (mid @ coevl.mat)).col(0)


# -- the property battery ---------------------------------------------------------

def _pair_tensor(F: Field, ups: list[list], downs: list[list],
                 nl: int, nr: int) -> Mat:
    out = Mat.zeros(F, nl, nr)
    for u, v in zip(ups, downs):
        for a in range(nl):
            if u[a] == F.zero:
                continue
            row = out.rows[a]
            for b in range(nr):
                if v[b] != F.zero:
                    row[b] = F.add(row[b], F.mul(u[a], v[b]))
    return out


def property_battery(alg: HopfAlgebra, seed: int = 0,
                     instances: int = 50) -> dict:
    """Run the full trace/copairing battery; returns a structured report.

    The randomized families (cyclicity, right/left partial trace) split the
    requested instance count; the structural identities (naturality, duality,
    rotation, handle-element comparison, presentation independence) always
    run.  Every comparison is exact.
    """
    ctx = TraceContext(alg)
    F = alg.field
    rng = Random(seed)
    H = regular(alg)
    HH = tensor(H, H)
    HvH = tensor(H, dual_left(H))
    checks: list[dict] = []

    def record(name: str, count: int, ok: bool, witness: Any = None) -> None:
        checks.append({"name": name, "instances": count, "ok": bool(ok),
                       "witness": witness})

    n_cyc = max(instances - 2 * (instances // 3), 1)
    n_ptr = max(instances // 3, 1)

    # cyclicity between distinct projectives: f: H -> Y, g: Y -> H
    ok, witness, runs = True, None, 0
    for Y in (HH, HvH):
        for _ in range(-(-n_cyc // 2)):
            f = hom_from_regular(Y, random_vector(F, rng, Y.dim))
            g = hom_to_regular(ctx, Y, rng)
            lhs = ctx.mtrace(Y, f @ g)
            rhs = ctx.mtrace(H, g @ f)
            runs += 1
            if lhs != rhs:
                ok, witness = False, {"module": Y.label,
                                      "lhs": F.to_json(lhs),
                                      "rhs": F.to_json(rhs)}
                break
        if not ok:
            break
    record("cyclicity", runs, ok, witness)

    # partial traces on End(H (x) H): t(f) = t(ptr_r f) = t(ptr_l f)
    ok_r, ok_l, wit_r, wit_l = True, True, None, None
    for _ in range(n_ptr):
        f = transported_endo(alg, H, random_vector(F, rng, alg.dim),
                             random_matrix(F, rng, alg.dim, alg.dim))
        full = ctx.mtrace(HH, f)
        if ok_r and full != ctx.mtrace(H, ctx.ptr_r(f, H, H)):
            ok_r, wit_r = False, {"full": F.to_json(full)}
        if ok_l and full != ctx.mtrace(H, ctx.ptr_l(f, H, H)):
            ok_l, wit_l = False, {"full": F.to_json(full)}
    record("partial-trace-right", n_ptr, ok_r, wit_r)
    record("partial-trace-left", n_ptr, ok_l, wit_l)

    # naturality of Omega under f: H -> Y and f: Y -> H
    ok, witness, runs = True, None, 0
    ups_h, downs_h = ctx.omega(H)
    for Y in (HH, HvH):
        ups_y, downs_y = ctx.omega(Y)
        for direction in ("up", "down"):
            for _ in range(2):
                if direction == "up":
                    f = hom_from_regular(Y, random_vector(F, rng, Y.dim))
                    src_ups, src_downs = ups_h, downs_h
                    dst_ups, dst_downs = ups_y, downs_y
                    nl, nr = H.dim, Y.dim
                else:
                    f = hom_to_regular(ctx, Y, rng)
                    src_ups, src_downs = ups_y, downs_y
                    dst_ups, dst_downs = ups_h, downs_h
                    nl, nr = Y.dim, H.dim
                lhs = _pair_tensor(F, src_ups,
                                   [f.apply(v) for v in src_downs], nl, nr)
                rhs = _pair_tensor(
                    F, [(Mat.row_vector(F, u) @ f).rows[0]
                        for u in dst_ups], dst_downs, nl, nr)
                runs += 1
                if lhs != rhs:
                    ok, witness = False, {"module": Y.label,
                                          "direction": direction}
                    break
            if not ok:
                break
        if not ok:
            break
    record("omega-naturality", runs, ok, witness)

    # duality: Omega_{vX} is the flip of Omega_X
    ok, witness = True, None
    for X in (H, HH):
        if ctx.omega_tensor(dual_left(X)) != ctx.omega_tensor(X).transpose():
            ok, witness = False, {"module": X.label}
            break
    record("omega-duality", 2, ok, witness)

    # rotation: transport Omega_{X(x)Z} to Z(x)X through ev/coev on Z
    ok, witness = True, None
    for X, Z in ((H, H), (dual_left(H), H)):
        XZ, ZX = tensor(X, Z), tensor(Z, X)
        ups, downs = ctx.omega(XZ)
        t_ups = [_rotate_basis_up(ctx, X, Z, u) for u in ups]
        t_downs = [_rotate_basis_down(ctx, X, Z, v) for v in downs]
        lhs = _pair_tensor(F, t_ups, t_downs, ZX.dim, ZX.dim)
        if lhs != ctx.omega_tensor(ZX):
            ok, witness = False, {"X": X.label, "Z": Z.label}
            break
    record("omega-rotation", 2, ok, witness)

    # handle element: omega route vs left/right integral actions on G, G(x)G
    ok, witness = True, None
    for X in (H, HH):
        lt = ctx.lambda_t(X, route="omega")
        if lt != ctx.lambda_right(X) or lt != ctx.lambda_left(X):
            ok, witness = False, {"module": X.label}
            break
    record("handle-element-comparison", 2, ok, witness)

    # presentation independence of the trace
    ok, witness, runs = True, None, 0
    base = Module(alg, HH.dim, HH._action, HH.label, HH.trace, check=False)
    base._cover = _tensor_cover_right(alg, H, [(Mat.identity(F, alg.dim),
                                                Mat.identity(F, alg.dim))])
    alt = TraceContext(alg)
    for _ in range(4):
        f = transported_endo(alg, H, random_vector(F, rng, alg.dim),
                             random_matrix(F, rng, alg.dim, alg.dim))
        runs += 1
        if ctx.mtrace(HH, f) != alt.mtrace(base, f):
            ok, witness = False, {"module": HH.label}
            break
    for _ in range(4):
        a = random_vector(F, rng, alg.dim)
        ra = alg.right_mult(a)
        try:
            ra_inv = inverse(ra)
        except NoSolutionError:
            continue
        twisted = Module(alg, H.dim, H._action, H.label, H.trace, check=False)
        twisted._cover = [(ra, ra_inv)]
        other = TraceContext(alg)
        fmat = alg.right_mult(random_vector(F, rng, alg.dim))
        runs += 1
        if ctx.mtrace(H, fmat) != other.mtrace(twisted, fmat):
            ok, witness = False, {"module": H.label}
            break
    record("presentation-independence", runs, ok, witness)

    return {
        "algebra": alg.name or "custom",
        "fingerprint": alg.fingerprint(),
        "seed": seed,
        "instances": instances,
        "checks": checks,
        "ok": all(c["ok"] for c in checks),
    }
