"""Stability of a finite structure, decided by a lifting property and by brute force.

Run: python3 walkthroughs/stability_two_ways.py
"""

from situskit import dividing_lines as dl
from situskit.fostruct import FinStructure, parse
from situskit.simplex import validate
from situskit.stone import stone_space

# A 4-element chain. Increasing sequences are indiscernible for x <= y,
# but permuting one changes the truth value, so the order property shows up.
chain = FinStructure.chain(4)
phi = parse("x <= y", chain.signature)

X = stone_space(chain, phi, "extendable", 3, distinct=3)
print("stone space levels:", [X.size(n) for n in (1, 2, 3)], "violations:", validate(X))
print("least neighbourhood at level 2:", sorted(X.filters[2].core))

v = dl.stability(chain, phi, I=5, N=3)
print("lifting holds:", v.holds, "| oracle holds:", v.oracle_holds)
print("witness sequence:", v.witness["sequence"])

# Pure equality: every sequence of distinct elements is an indiscernible set.
pure = FinStructure.pure_set(3)
v = dl.stability(pure, "x = y", I=5, N=3)
print("pure set -> lifting:", v.holds, "oracle:", v.oracle_holds)
