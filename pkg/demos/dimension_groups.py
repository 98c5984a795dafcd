"""
Dimension groups of nonnegative integer matrices
================================================

A class [v, k] in G_A stands for the vector v sitting at level k of the
direct limit Z^n -> Z^n -> ... under repeated multiplication by A^t.
"""
from shiftequiv import DimClass, equal, in_positive_cone, order_unit, x_action

# the one-vertex graph with two loops; G_A is the dyadic rationals Z[1/2]
TWO = [[2]]
half = DimClass((1,), 1, TWO)
print("[1,1] == [2,2]:", equal(half, DimClass((2,), 2, TWO)))
print("[1,0] == [3,0]:", equal(DimClass((1,), 0, TWO), DimClass((3,), 0, TWO)))

# x multiplies by A^t, x^-1 moves one level up
print("x[1,1] =", x_action(half, 1))
print("x^-1[1,1] =", x_action(half, -1))

# the all-ones matrix kills (1,-1), so that class is zero
ONES = [[1, 1], [1, 1]]
print("[(1,-1),0] == 0:", equal(DimClass((1, -1), 0, ONES), DimClass((0, 0), 0, ONES)))

# the positive cone test searches for a level where the vector is nonnegative
FIB = [[1, 1], [1, 0]]
print("[(1,-1),0] in cone:", in_positive_cone(DimClass((1, -1), 0, FIB)))
print("[(-1),0] in cone:", in_positive_cone(DimClass((-1,), 0, TWO), 10))

# order unit: the class of the sum of all vertices
print("order unit of FIB:", order_unit(FIB))
