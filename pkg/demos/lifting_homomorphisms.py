"""
Lifting module maps to matrices
===============================

An order preserving Z[x, x^-1]-module map between dimension groups is
determined by the images of the vertex generators, and comes from a
nonnegative intertwiner up to a power of x.
"""
from shiftequiv import GradedHomSpec, generator_class, lift_hom_to_matrix, matrix_to_hom

TWO, ONES = [[2]], [[1, 1], [1, 1]]

# the generator of G_[2] goes to [(2,2),1], the class of (1,1)
spec = GradedHomSpec(TWO, ONES, [((2, 2), 1)])
lift = lift_hom_to_matrix(spec)
print("R =", lift.R, "shift =", lift.shift)
g = generator_class(TWO, 0)
print("image of generator:", spec(g), "via the lift:", lift(g))

# sending the generator [1,0] to [1,1] halves it, so the lift needs a shift
lift = lift_hom_to_matrix(GradedHomSpec(TWO, TWO, [((1,), 1)]))
print("R =", lift.R, "shift =", lift.shift)

# matrix_to_hom goes the other way
print(matrix_to_hom([[1, 1]], TWO, ONES).images)
