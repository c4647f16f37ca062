"""
Membership in axes rings
========================

Branch valuations settle most membership questions in K[X1..Xn]/(Xi*Xj);
the rest fall back to exact local membership.
"""

# %%
from tightax import GF, QQ, RingPresentation, is_axes_presentation, lemma1_membership, val_branch, val_ideal
from tightax.axes import AxesRing

A = AxesRing(QQ, 2)
I = A.ideal("X1 + X2")
for text in ("X1^2 + X2^3", "X1 - X2", "X1"):
    f = A.element(text)
    vals = [(val_branch(f, i), val_ideal(I, i)) for i in range(A.n)]
    out = lemma1_membership(f, I, A)
    print(f"{text:12s} (val f, val I) per branch {vals} -> {out.kind}, member={out.member}")

# %%
out = lemma1_membership(A.element("X1^2 + X2^3"), I, A)
print("unit", out.unit, "cofactors", [str(c) for c in out.cofactors])

# %%
# three lines through the origin in a plane are not an axes ring
N = RingPresentation.build("XZ", GF(7), ["X^3 - Z^3"])
chk = is_axes_presentation(N)
print(chk.accepted, chk.reason)
print(is_axes_presentation(RingPresentation.build("UV", GF(7), ["U*V"])).accepted)
