"""
Z/m graded Grothendieck groups
==============================

Reducing the level modulo m coarsens the dimension group: (v, k) and (w, l)
agree when (A^t)^p v = (A^t)^q w with p + k = q + l mod m.
"""
from shiftequiv import ZModClass, cuntz_splice, zmod_equal, zmod_intertwiner_check

A = [[2]]
print(zmod_equal(ZModClass((1,), 0, 2, A), ZModClass((2,), 1, 2, A)))
print(zmod_equal(ZModClass((1,), 0, 2, A), ZModClass((3,), 0, 2, A)))

# with m = 1 the level is forgotten, so [1] and [2] become equal
print(zmod_equal(ZModClass((1,), 0, 1, A), ZModClass((2,), 0, 1, A)))

# the identity intertwines a matrix with itself in every grading
FIB = [[1, 1], [1, 0]]
print(zmod_intertwiner_check([[1, 0], [0, 1]], FIB, FIB, 3, 0))
print(cuntz_splice(A, 0))
