"""
Tight closure beyond the axes closure
=====================================

A non-normal ring where X lies in the tight closure of (Z) but one map to
an axes ring already shows it is not in the axes closure.
"""

# %%
from tightax import GF, RingHom, RingPresentation, TightParams, axes_closure_test, make_target, tight_membership
from tightax.axes import AxesRing

p = 5
R = RingPresentation.build("XYZ", GF(p), ["X^2 - Y*Z^2"])
I, f = R.ideal("Z"), R("X")

# %%
# bounded search for c with c*f^q in I^[q]
v = tight_membership(R, I, f, TightParams(c_deg=2, e_max=4))
print(v.kind.value, "c =", v.certificate.c, "for e in", v.certificate.e_range)

# %%
# setting Y = 1 lands in two crossing lines; a linear change of variables
# turns them into the coordinate axes U*V = 0
T = RingPresentation.build("XZ", GF(p), ["X^2 - Z^2"])
A = AxesRing(GF(p), 2, ("U", "V"))
y1 = make_target(
    RingHom(R, T, (T("X"), T.ring.one, T("Z")), "y1"),
    (RingHom(T, A.presentation, (A.ring.parse("1/2*U + 1/2*V"), A.ring.parse("1/2*V - 1/2*U"))),
     RingHom(A.presentation, T, (T("X - Z"), T("X + Z")))),
)
rep = axes_closure_test(R, I, f, [y1])
print(rep.verdict, rep.refuting)

# %%
# the report keeps the evidence next to the verdict
import json
print(json.dumps(rep.to_dict()["evidence"]["per_hom"][0], indent=2))
