"""A 7-point structure with the tree property, and the lifting check that sees it."""

import time

from situskit import dividing_lines as dl
from situskit.fostruct import FinStructure, parse

# parameters 1..4 are the leaves of a binary tree of height 2; 5 and 6 are
# the inner nodes and 7 the root, as far as R(x, -) can tell
pairs = [(i, i) for i in range(1, 5)] + [(1, 5), (2, 5), (3, 6), (4, 6)] + [(i, 7) for i in range(1, 5)]
M = FinStructure(range(1, 8), {"R": pairs})
phi = parse("R(x,y)", M.signature)

t = time.time()
v = dl.tree_property(M, phi, b=2, d=2, k=2)
print("tree found by search:", v.oracle_holds is False, v.witness["tree"])
print("lifting holds:", v.holds, f"({time.time() - t:.1f}s)")

for small in (FinStructure.pure_set(3), FinStructure.chain(3)):
    v = dl.tree_property(small, "x = y")
    print(small.name, "NTP by both sides:", v.holds and v.oracle_holds)
