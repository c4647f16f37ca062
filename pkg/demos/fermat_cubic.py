"""
The Fermat cubic cone
=====================

Z^2 is certified in the tight closure of (X, Y) over F7, while Z is
separated from (X, Y) by a map onto two lines.  Over the rationals the same
question is asked fiber by fiber.
"""

# %%
from tightax import (QQ, RingPresentation, TightParams, axes_closure_test, clear_denominators, fiber_sweep,
                     tight_membership)
from tightax.corpus import load_problem

pf = load_problem("fermat_f7.prob")
R, I = pf.presentation, pf.ideal()
params = TightParams(c_deg=4, e_max=3)

# %%
for name in ("Z^2", "Z"):
    v = tight_membership(R, I, R(name), params)
    detail = f"c = {v.certificate.c}" if v.certificate else f"{v.bounds['candidates_tried']} candidates fail"
    print(name, v.kind.value, detail)

# %%
# each xi map kills Y and sends a pair of the three lines Y = 0 to the axes
for h in ("xi35", "xi36", "xi56"):
    print(h, axes_closure_test(R, I, R("Z"), [pf.target(h)]).verdict)

# %%
# rational model: three lucky fibers, all certified with e <= 2
Q = RingPresentation.build("XYZ", QQ, ["X^3 + Y^3 + Z^3"])
model = clear_denominators(Q, {"I": Q.ideal("X", "Y")}, {"f": Q("Z^2")})
rep = fiber_sweep(model, "I", "f", [7, 13, 31], TightParams(c_deg=4, e_max=2), exclude_divisors_of=3)
print(rep.aggregate)
for fib in rep.fibers:
    print(fib.p, fib.reason, fib.verdict.certificate.c)
