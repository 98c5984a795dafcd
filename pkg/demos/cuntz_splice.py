"""
The Cuntz splice obstruction
============================

Splicing two new vertices onto a loop keeps the dimension group size but
leaves no nonzero nonnegative intertwiner, so there is no unital graded
homomorphism in either direction.
"""
from shiftequiv import cuntz_splice, solve_intertwiners, unital_hom_obstruction

for n in range(1, 5):
    B = cuntz_splice([[n]], 0)
    forward = unital_hom_obstruction([[n]], B)
    backward = unital_hom_obstruction(B, [[n]])
    print(f"n={n}", B.tolist(), type(forward).__name__, type(backward).__name__)

# for one loop the intertwiners are the line (t, 0, -t), never nonnegative
print(solve_intertwiners([[1]], cuntz_splice([[1]], 0)))
# for two loops only R = 0 solves (2) R = R B
print(solve_intertwiners([[2]], cuntz_splice([[2]], 0)))
