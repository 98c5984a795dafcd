"""
Verifying and searching for shift equivalences
==============================================

A lag-m shift equivalence is a pair of nonnegative matrices R, S with
A^m = RS, AR = RB, B^m = SR and BS = SA.
"""
from shiftequiv import (
    Matrix,
    SEWitness,
    SSEStep,
    iter_se,
    search_se,
    solve_intertwiners,
    sse_to_se,
    verify_se,
    verify_sse_chain,
    verify_unital,
)

TWO, ONES = [[2]], [[1, 1], [1, 1]]

# checking a witness gives a report with a residual for each failed relation
print(verify_se(SEWitness(TWO, ONES, [[1, 1]], [[1], [1]], 1)))
print(verify_se(SEWitness(TWO, ONES, [[1, 1]], [[1], [2]], 1)))

# an elementary strong shift equivalence and its composite
chain = [SSEStep(TWO, ONES, [[1, 1]], [[1], [1]]), SSEStep(ONES, TWO, [[1], [1]], [[1, 1]])]
print("chain valid:", verify_sse_chain(chain), "composite lag:", sse_to_se(chain).m)

# the search walks the intertwiner lattice in a fixed order
print("intertwiner lattice basis:", solve_intertwiners(TWO, ONES))
w = search_se(TWO, ONES, m_max=3, coeff_bound=3)
print("first witness:", w.R, w.S, "lag", w.m, "unital:", verify_unital(w.R, TWO, ONES))

# every matrix is shift equivalent to itself at lag 2 through (A, A)
FIB = Matrix([[1, 1], [1, 0]])
print("(A, A, 2) reached:", any(c.R == FIB and c.S == FIB
                               for c in iter_se(FIB, FIB, 2, 2, m_min=2)))

# different Perron eigenvalues rule out any witness
print("[1] vs [2]:", search_se([[1]], TWO, 3, 3))
