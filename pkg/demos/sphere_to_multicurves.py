"""Walk from the polygon of necklace curves to a cycle of multicurves.

    python3 demos/sphere_to_multicurves.py [genus]
"""
import sys

from steinberg.necklace import DihedralElement
from steinberg.sphere import build_phi, fundamental_cycle, homology
from steinberg.steinberg_map import pushforward_cycle, stabilizer_report, vertex_table, verify_flag_structure

g = int(sys.argv[1]) if len(sys.argv) > 1 else 2
n = 2 * g + 2

K = build_phi(g)
print(f"Phi_{g}: f-vector {K.f_vector()}, reduced homology {[str(h) for h in homology(K)]}")
z = fundamental_cycle(K)
print(f"fundamental cycle: {len(z)} facets, boundary zero: {K.boundary(z).is_zero()}")

print("\ndiagonal -> boundary multicurve of the untouched curves")
for row in vertex_table(g):
    kind = "short" if row["short"] else "long "
    print(f"  {kind} {row['diagonal']}: {row['multicurve']}  separating={row['separating']}")

for model in ("literal", "union"):
    rep = verify_flag_structure(g, model)
    print(f"\nface map [{model}]: {rep.checks} checks, {len(rep.failures)} failures")
    if rep.failures:
        w = rep.failures[0]
        print(f"  e.g. {w['small']} -> {w['small_image']} is not inside {w['large']} -> {w['large_image']}")

img = pushforward_cycle(g)
print(f"\nimage cycle: {len(img.chain)} flags on {len(img.vertices)} multicurves")
rep = stabilizer_report(g, img)
signs = {row["element"]: row["sign"] for row in rep.details["elements"]}
print(f"dihedral group of order {rep.details['order']} preserves it up to sign: {rep.passed}")
print("  sign character:", " ".join(f"{k}:{'+' if v > 0 else '-'}" for k, v in signs.items()))
print("  rotation by one:", signs[str(DihedralElement(1, False, n))])
