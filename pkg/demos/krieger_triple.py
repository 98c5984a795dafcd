"""
The Krieger dimension triple
============================

Delta_A is the set of rational vectors in the eventual image of A that
become integral after enough right multiplications by A.  psi identifies it
with the dimension group.
"""
from fractions import Fraction

from shiftequiv import (
    apply_R_delta,
    apply_Rt_G,
    delta_membership,
    delta_order_unit,
    equal,
    eventual_image,
    order_unit,
    psi,
)

A = [[1, 1], [1, 1]]
space = eventual_image(A)
print("eventual image basis:", space.basis, "reached at power", space.stabilization_power)

# 1/2 is in Delta for [2] since (1/2)*2 is integral; 1/3 never becomes integral
print("1/2 in Delta_[2]:", delta_membership((Fraction(1, 2),), [[2]]))
print("1/3 in Delta_[2]:", delta_membership((Fraction(1, 3),), [[2]]))

# the order unit of the triple maps to the order unit of G_A
u = delta_order_unit(A)
print("delta order unit:", u.v, "psi of it equals [(1,1),0]:", equal(psi(u), order_unit(A)))

# an intertwiner R (A R = R B) acts on both sides, and psi commutes with it
B, R = [[2]], [[1], [1]]
d = delta_membership((1, 1), A)
print("psi(dR) == R^t psi(d):", equal(psi(apply_R_delta(d, R, B)), apply_Rt_G(psi(d), R, B)))
