"""The right-angled surface p: systoles, the path gamma(t) and the minimum of L(1,C)."""
import numpy as np

from steinberg import hyperbolic as hy
from steinberg import minima as mn

g = 2
print(f"right-angled hexagon side {hy.right_angled_regular_side(6):.9f}")
print(f"systole at p {hy.systole_at_p(g):.9f}, separating curve {hy.separating_length_at_p(g):.9f}")
print(f"collar threshold delta* = {hy.delta_star(g):.12f} (log 3 = {np.log(3):.12f})")

prof = hy.length_profile(g, hy.t_grid(-0.4, 0.4, 0.1))
print("\n   t    curve     separating")
for t, curve, _, sep in prof.rows:
    print(f"{t:5.2f}  {curve:.6f}  {sep:.6f}")

F = mn.LengthFunctional.uniform(g)
x0 = mn.symmetric_chart(g).point(np.array([0.15, -0.1, 0.05, 0.1, -0.05, 0.1]))
res = mn.minimize(F, x0)
x = res.point
print(f"\nminimize L(1,C): {res.status} after {res.iterations} steps, |grad| = {res.grad_norm:.1e}")
print("lengths at the minimum", np.round(mn.curve_lengths(x), 9))
rank, sv = mn.jacobian_rank(x)
print(f"length Jacobian rank {rank}, singular values {np.array2string(sv, precision=2)}")
mem = mn.min_membership(x)
print(f"0 in the open cone of gradients: {mem.member} (residual {mem.residual:.1e})")

y = np.zeros(6)
y[3] = 0.4
print("a far chart point is in Min(C):", mn.min_membership(mn.symmetric_chart(g).point(y)).member)
