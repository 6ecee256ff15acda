#!/usr/bin/env python3
"""Brute-force oracle for the S^1 x S^2 invariant over the group algebra Q[Z/2].

This script is deliberately independent of the main package: every tensor is
hard-coded for the 2-dimensional Hopf algebra H = Q[Z/2] (basis e, u with
u*u = e, all basis elements group-like, S = id) and the final scalar is
obtained by explicit nested-loop contractions over Fractions.  No file in
src/ is imported.

The manifold S^1 x S^2 is presented by surgery on a 0-framed unknot.  Its
evaluation reduces to the closed network

    ev_piv  o  ptr_G'(c_{H (x) vH})  o  (h (x) id)  o  coev ,

i.e. an h-coupon circle (here h = id, normalised so its modified trace is 1)
folded into a G (x) vG cable, with the chromatic coupon based at that cable
inserted and its generator leg closed into a loop.  The largest tensor that
appears is the 8x8 matrix of c_{H (x) vH} (64 entries).

As a cross-check the same value is computed along a second, inequivalent
route: cutting an empty curve contributes the scalar 1/t_1(id) and leaves the
circle with a chromatic bubble based at a single strand, giving
(1/t_1(id)) * t_H(h o ptr(c_H)).

Both routes must agree; the script prints the common value and exits 0.
"""

from __future__ import annotations

import sys
from fractions import Fraction as Fr

D = 2  # dim H; basis index 0 = e, 1 = u


def mul_idx(i: int, j: int) -> int:
    """Basis-index product e_i * e_j (group multiplication in Z/2)."""
    return (i + j) % 2


# Structure data, all hard-coded:
LAM = [Fr(1), Fr(1)]          # two-sided cointegral e + u
lam = [Fr(1), Fr(0)]          # right integral, lam(LAM) = 1
g = 0                         # pivot element = e (index 0)
S = [0, 1]                    # antipode permutes basis identically (S = id)
h_coupon = [[Fr(1), Fr(0)], [Fr(0), Fr(1)]]  # End(H) coupon with t_H(h) = 1


def lam_of(vec):
    return sum(lam[i] * vec[i] for i in range(D))


def check(cond: bool, msg: str) -> None:
    if not cond:
        print("oracle self-check FAILED:", msg)
        sys.exit(1)


# t_H(h) = lam(g * h(1_H)):  h(1) = e, g*e = e, lam(e) = 1.
check(lam[mul_idx(g, 0)] == 1, "t_H(h) != 1")

# --- chromatic coupon based at H ------------------------------------------
# c_H(x (x) y) = lam(S(y_(1)) g x) y_(2) (x) y_(3); group-likes give
# Delta^2(y) = y (x) y (x) y.
c_H = [[Fr(0)] * (D * D) for _ in range(D * D)]
for x in range(D):
    for y in range(D):
        coeff = lam[mul_idx(mul_idx(S[y], g), x)]
        c_H[y * D + y][x * D + y] += coeff

# --- the cable P = H (x) vH ------------------------------------------------
# vH carries the action (x . phi)(m) = phi(S(x) m); on dual basis indices
# x . j* = (x j)*.  The free-module identification psi: H (x) vH ->
# H (x) (vH trivial), x (x) phi -> x_(1) (x) S(x_(2)) phi gives projections
# f_k and sections g_k with sum g_k f_k = id.
#   f_k(x (x) j*) = [ (x+j) % 2 == k ] * x          (k = 0, 1)
#   g_k(x)        = x (x) ((x+k) % 2)*
NP = D * D  # dim of P


def p_idx(x: int, j: int) -> int:
    return x * D + j


f_maps = []  # each: D x NP matrix (P -> H)
g_maps = []  # each: NP x D matrix (H -> P)
for k in range(D):
    f_k = [[Fr(0)] * NP for _ in range(D)]
    g_k = [[Fr(0)] * D for _ in range(NP)]
    for x in range(D):
        for j in range(D):
            if (x + j) % 2 == k:
                f_k[x][p_idx(x, j)] = Fr(1)
        g_k[p_idx(x, (x + k) % 2)][x] = Fr(1)
    f_maps.append(f_k)
    g_maps.append(g_k)

# check sum g_k f_k = id_P
acc = [[sum(g_maps[k][a][m] * f_maps[k][m][b] for k in range(D) for m in range(D))
        for b in range(NP)] for a in range(NP)]
check(all(acc[a][b] == (Fr(1) if a == b else Fr(0)) for a in range(NP)
          for b in range(NP)), "g_k f_k do not sum to the identity")

# c_P = sum_k (id_H (x) g_k) c_H (id_H (x) f_k)  in End(H (x) P), 8x8.
NHP = D * NP
c_P = [[Fr(0)] * NHP for _ in range(NHP)]
for k in range(D):
    for A in range(D):
        for a in range(NP):
            for Y in range(D):
                for b in range(NP):
                    s = Fr(0)
                    for m in range(D):
                        for n in range(D):
                            s += g_maps[k][a][m] * c_H[A * D + m][Y * D + n] \
                                * f_maps[k][n][b]
                    c_P[A * NP + a][Y * NP + b] += s

# partial closure of the generator leg (left loop through rho(g^-1) = id)
c_closed = [[sum(c_P[A * NP + a][A * NP + b] for A in range(D))
             for b in range(NP)] for a in range(NP)]

# --- route 1: the folded-cable network -------------------------------------
# bottom bend  b = (h (x) id) coev :   1 -> H (x) vH,   coordinates [x==j]
# top bend  ev_piv :  H (x) vH -> 1,   m (x) phi -> phi(g m),  g = e
bend_in = [Fr(1) if x == j else Fr(0) for x in range(D) for j in range(D)]
bend_in = [sum(h_coupon[x][m] * (Fr(1) if m == j else Fr(0)) for m in range(D))
           for x in range(D) for j in range(D)]
bend_out = [Fr(1) if mul_idx(g, x) == j else Fr(0)
            for x in range(D) for j in range(D)]

K_route1 = Fr(0)
for a in range(NP):
    for b in range(NP):
        K_route1 += bend_out[a] * c_closed[a][b] * bend_in[b]

# --- route 2: empty-curve cut ----------------------------------------------
# t_1(id) = 1/eps(LAM); eps = 1 on both basis vectors, so eps(LAM) = 2.
t_1 = Fr(1, 2)
ptr_cH = [[sum(c_H[A * D + a][A * D + b] for A in range(D)) for b in range(D)]
          for a in range(D)]
h_ptr = [[sum(h_coupon[a][m] * ptr_cH[m][b] for m in range(D))
          for b in range(D)] for a in range(D)]
# t_H(f) = lam(g f(1_H)); f(1) is column 0.
K_route2 = lam_of([h_ptr[a][0] for a in range(D)]) / t_1

check(K_route1 == K_route2,
      f"routes disagree: {K_route1} vs {K_route2}")

print(f"ptr(c_H) = {ptr_cH}")
print(f"route 1 (folded cable) : {K_route1}")
print(f"route 2 (empty cut)    : {K_route2}")
print(f"K(S1 x S2; Q[Z/2]) = {K_route1}")
