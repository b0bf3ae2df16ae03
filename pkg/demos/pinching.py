"""Without a filling support the length sum has no minimum: descending it
pinches the boundary multicurve.  With the systole held at delta the
constrained minimiser has only that multicurve as its short curves.

The constrained run takes about a minute.
"""
import numpy as np

from steinberg.curves import boundary_multicurve
from steinberg import minima as mn

g = 2
kept = [0, 2, 3, 5]
print("curves kept:", kept, "-> boundary multicurve", boundary_multicurve(g, kept).labels())

F = mn.LengthFunctional.uniform(g, kept)
words = [c.label() for c in mn.word_dictionary(g)]
for stop in (1.0, 0.5, 0.2):
    res = mn.descend(F, mn.critical_point(g), maxiter=5000,
                     watch=lambda z: "reached" if mn.dictionary_lengths(z, g).min() < stop else None)
    ls = mn.dictionary_lengths(res.point)
    print(f"shortest {ls.min():.3f} ({words[int(ls.argmin())]}) with L(C') = {res.value:.6f}")

res = mn.locate_admissible_vertex((1, 4), delta=0.05)
print(f"\nconstrained at delta = 0.05: {res.status}, L(C') = {res.objective:.7f}")
print("systoles:", [c.label() for c in res.systoles], "contained:", res.contained)
