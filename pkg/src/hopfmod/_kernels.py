"""Integer fast paths for the large verification contractions.

The heavy check in :mod:`hopfmod.chromatic` reduces to a single big matrix
product with small integer entries.  This module runs that product either
through a numba ``@njit`` kernel or through plain numpy int64 matmul; the
environment variable ``HOPFMOD_KERNEL`` (``"numba"`` or ``"numpy"``) selects
the path, defaulting to numba when it imports.

Exactness policy: int64 products are used only after an a-priori overflow
certificate ``inner_dim * max|A| * max|B| < 2**62`` holds; otherwise callers
fall back to exact object arithmetic.  Floating point is never used.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Any

import numpy as np

INT64_SAFE = 2**62


def _select_mode() -> str:
    mode = os.environ.get("HOPFMOD_KERNEL", "").strip().lower()
    if mode in {"numba", "numpy"}:
        if mode == "numba" and _load_numba() is None:
            raise RuntimeError("HOPFMOD_KERNEL=numba but numba is unavailable")
        return mode
    return "numba" if _load_numba() is not None else "numpy"


_NUMBA_MATMUL = None


def _load_numba():
    global _NUMBA_MATMUL
    if _NUMBA_MATMUL is not None:
        return _NUMBA_MATMUL
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover - exercised on numba-less installs
        return None

    @njit(parallel=True, cache=True)
    def _mm(a, b):  # pragma: no cover - compiled
        n, k = a.shape
        k2, m = b.shape
        out = np.zeros((n, m), dtype=np.int64)
        for i in prange(n):
            for l in range(k):
                v = a[i, l]
                if v != 0:
                    for j in range(m):
                        out[i, j] += v * b[l, j]
        return out

    _NUMBA_MATMUL = _mm
    return _NUMBA_MATMUL


def kernel_mode() -> str:
    """The active kernel path, resolved from ``HOPFMOD_KERNEL``."""
    return _select_mode()


def int_matmul(a: np.ndarray, b: np.ndarray, mode: str | None = None) -> np.ndarray:
    """Exact int64 matrix product via the selected kernel path."""
    if a.dtype != np.int64 or b.dtype != np.int64:
        raise TypeError("int_matmul expects int64 operands")
    mode = mode or _select_mode()
    if mode == "numba":
        mm = _load_numba()
        return mm(np.ascontiguousarray(a), np.ascontiguousarray(b))
    return a @ b


def certify_int64(a: np.ndarray, b: np.ndarray) -> bool:
    """True when a @ b provably fits in int64."""
    if a.size == 0 or b.size == 0:
        return True
    ma = int(np.abs(a).max())
    mb = int(np.abs(b).max())
    return a.shape[1] * ma * mb < INT64_SAFE


# --- converting exact scalars to integer component arrays -------------------


def scalar_components(field) -> int | None:
    """Number of integer components per scalar, or None if unsupported.

    Q and F_p scalars map to one integer, degree<=2 cyclotomics to two
    (coordinates in the power basis); anything else takes the object path.
    """
    desc = field.describe()
    if desc == "rational" or (isinstance(desc, dict) and "prime" in desc):
        return 1
    if isinstance(desc, dict) and "cyclotomic" in desc:
        if field.degree == 1:
            return 1
        return 2 if field.degree == 2 else None
    return None


def to_int_components(rows: list[list[Any]], field) -> tuple[list[np.ndarray], int]:
    """Integer component matrices of an exact matrix, plus the denominator.

    Returns ``(comps, den)`` with ``matrix = (sum_i comps[i] * basis_i) / den``
    where ``basis_i`` is ``1`` (and the field generator for quadratic
    cyclotomics).  Raises ``ValueError`` for unsupported fields.
    """
    ncomp = scalar_components(field)
    if ncomp is None:
        raise ValueError("field has no integer component representation")
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    desc = field.describe()
    if isinstance(desc, dict) and "prime" in desc:
        arr = np.array([[int(x) for x in row] for row in rows], dtype=np.int64)
        return [arr.reshape(nr, nc)], 1
    if ncomp == 1:
        # rationals, or a degree-1 cyclotomic whose scalars are 1-tuples
        den = 1
        for row in rows:
            for x in row:
                den = lcm(den, _tuple_coord(x, 0).denominator)
        arr = np.array(
            [[int(_tuple_coord(x, 0) * den) for x in row] for row in rows],
            dtype=np.int64)
        return [arr.reshape(nr, nc)], den
    # quadratic cyclotomic: tuples of two Fractions
    den = 1
    for row in rows:
        for x in row:
            for c in x:
                den = lcm(den, c.denominator)
    comps = []
    for k in range(2):
        comps.append(np.array(
            [[int(_tuple_coord(x, k) * den) for x in row] for row in rows],
            dtype=np.int64).reshape(nr, nc))
    return comps, den


def _tuple_coord(x, k):
    if isinstance(x, tuple):
        return x[k] if k < len(x) else Fraction(0)
    return x if k == 0 else Fraction(0)


def component_matmul(acomps: list[np.ndarray], bcomps: list[np.ndarray],
                     field, mode: str | None = None) -> list[np.ndarray]:
    """Product of component-represented matrices in the field's basis.

    For one component this is a single integer product.  For quadratic
    cyclotomics with ``z^2 = beta + alpha z`` (integer alpha, beta) the
    product ``(A0 + A1 z)(B0 + B1 z)`` expands into four integer products
    recombined exactly.
    """
    if len(acomps) == 1:
        return [int_matmul(acomps[0], bcomps[0], mode)]
    red = field._red[0]  # z^2 = red[0] + red[1] z
    beta, alpha = red[0], red[1]
    if beta.denominator != 1 or alpha.denominator != 1:
        raise ValueError("non-integral quadratic reduction")
    beta_i, alpha_i = int(beta), int(alpha)
    p00 = int_matmul(acomps[0], bcomps[0], mode)
    p01 = int_matmul(acomps[0], bcomps[1], mode)
    p10 = int_matmul(acomps[1], bcomps[0], mode)
    p11 = int_matmul(acomps[1], bcomps[1], mode)
    return [p00 + beta_i * p11, p01 + p10 + alpha_i * p11]


def certify_component_matmul(acomps, bcomps) -> bool:
    if len(acomps) == 1:
        return certify_int64(acomps[0], bcomps[0])
    # factor 4 headroom for the recombination of the four partial products
    if acomps[0].size == 0 or bcomps[0].size == 0:
        return True
    ma = max(int(np.abs(c).max()) for c in acomps)
    mb = max(int(np.abs(c).max()) for c in bcomps)
    return acomps[0].shape[1] * ma * mb < INT64_SAFE // 8


def reduce_mod(comps: list[np.ndarray], p: int) -> list[np.ndarray]:
    return [np.mod(c, p) for c in comps]
