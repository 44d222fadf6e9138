"""R(3,3) = 6 by sweeping every 2-colouring of pairs, then the colour quotient of a small situs."""

import itertools
import time

from situskit import ramsey as rm
from situskit.simplex import corepresented_by_set

t = time.time()
print("6 atoms, colouring without a homogeneous triple:", rm.ramsey_search(6))
c = rm.ramsey_search(5)
print("5 atoms:", c)
print(f"({time.time() - t:.2f}s)")

# the pentagon: edges of the 5-cycle get colour 0
cyc = {tuple(sorted(p)) for p in zip(range(1, 6), [2, 3, 4, 5, 1])}
pent = {p: int(p not in cyc) for p in itertools.combinations(range(1, 6), 2)}
X = corepresented_by_set(range(1, 6), 3)
colour = rm.Coloring(2, lambda y: pent.get(tuple(sorted(y)), 0))
homog = [t for t in rm.homogeneous_simplices(X, colour, 3) if len(set(t)) == 3]
print("homogeneous non-degenerate triples under the pentagon colouring:", homog)

C, q = rm.coloring_quotient(corepresented_by_set([1, 2, 3], 3), rm.Coloring(2, lambda y: 0))
print("constant colouring quotient, level sizes:", [C.size(n) for n in (1, 2, 3)])
