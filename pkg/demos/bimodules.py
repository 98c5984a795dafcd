"""
Edge sets, bridging bimodules and aligned module shift equivalence
==================================================================

A nonnegative matrix is the counting data of a set of edges between two
vertex sets.  Tensor products concatenate paths, and maps between them are
blocks of rational matrices indexed by vertex pairs.
"""
from shiftequiv.bimodule import tensor_power
from shiftequiv import (
    EdgeSet,
    bridging_K0_action,
    lex_module_se,
    verify_aligned,
    verify_module_se,
    verify_unitally_aligned,
)

E = EdgeSet.from_matrix([[2]])
print("paths of length 3 from 0 to 0:", tensor_power(E, 3).dim(0, 0))

# the bridging bimodule of R acts on K_0 like R^t
action = bridging_K0_action([[1, 1]], [[2]], [[1, 1], [1, 1]])
print("generator 0 goes to", action(0))

# module shift equivalence with lexicographic identifications
data = lex_module_se([[2]], [[1, 1], [1, 1]], [[1, 1]], [[1], [1]], 1)
print("module shift equivalence:", verify_module_se(data).ok)
print("aligned:", verify_aligned(data).ok)
# the unital report contains every earlier check
print(verify_unitally_aligned([[1, 1]], [[1], [1]], data))

# swapping the two parallel edges inside sigma_G breaks an associator
bad = lex_module_se([[2]], [[2]], [[1]], [[2]], 1, sigma_G_pairing={(0, 0): [1, 0]})
print(verify_aligned(bad).first_failure())
