"""Reference values produced by the independent oracles in ``oracles.py``.

Letters a1..a5 name the running example's roots: a1 = 0, a2 and a3 the
positive real roots in increasing order, a4 in the upper half plane and
a5 its conjugate. Permutations are written on 1-based letter indices.
Regenerate with ``python3 tests/oracles_freeze.py``.
"""

RUNNING_COEFFS = [0, 0.9, -0.6, 0.4, -0.3, 0.06]

# sympy nroots, 30 digits
RUNNING_ROOTS = [
    0j,
    1.79446169501068 + 0j,
    3.597292786835576 + 0j,
    -0.195877240923128 + 1.511733655350128j,
    -0.195877240923128 - 1.511733655350128j,
]

# (r^2 - 1) / (r^2 + 1) at the critical moduli 0.46, |0.3+0.56i|, 1.62
RUNNING_HEIGHTS = [-0.650709805216243, -0.4249073810202336, 0.4481845270941398]

# gradient descent of |p|^2 from b +- 1e-3 along the descent directions
RUNNING_DESCENTS = {1: {1, 2}, 3: {2, 3}, 1j: {1, 4}, -1j: {1, 5}}

# fixed-step RK4 lift of the lasso around each critical value (image of letter i at index i-1)
RUNNING_MONODROMY = {
    0.46: [2, 1, 3, 4, 5],
    -1.62: [1, 3, 2, 4, 5],
    0.3 + 0.56j: [4, 2, 3, 1, 5],
    0.3 - 0.56j: [5, 2, 3, 4, 1],
}

# RK4 lift of a circle of radius 2 max|cvl| + 1 based in the gap containing argument 0
RUNNING_INFINITY_LOOP = [3, 4, 2, 5, 1]

# segment 0.1 -> 0.2 lifted from the preimage near a1; equals the solution of p(z) = 0.2 nearest 0
RUNNING_LIFT_ENDPOINT = 0.2612779360308797

# z^2 - 1 level traces by explicit square-root branch tracking: start index -> end index
Z2_LEVEL_PERMUTATION = {0.5: [1, 0], -0.5: [0, 1]}
