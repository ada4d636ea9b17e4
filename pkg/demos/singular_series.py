"""Twin-prime singular series and its empirical counterpart.

S(r) predicts the density of prime pairs (p, p - r); restricted to an
arithmetic progression a mod q it rescales by 1/rho(r, q).  The log-weighted
window sum psi should track S(r, q, a) * Y.
"""

from koblitz.twinseries import TwinWindow, psi, rho, singular_series, singular_series_mod

print("singular series at small even shifts:")
for r in (2, 4, 6, 8, 10, 12, 30):
    print(f"  S({r:>2}) = {singular_series(r).value:.6f}")
print("  (odd shifts give 0; powers of 2 do not change the value)\n")

print("admissible residue counts rho(r, q):")
for r, q in ((2, 3), (3, 3), (2, 15), (6, 35)):
    print(f"  rho({r}, {q:>2}) = {rho(r, q)}")

print("\npsi vs S(r,q,a) * Y over the window (10^5, 2*10^5]:")
w = TwinWindow(X=10**5, Y=10**5)
for r, q, a in ((2, 1, 0), (4, 1, 0), (2, 3, 1), (6, 5, 2)):
    got = psi(w, r, q, a)
    want = singular_series_mod(r, q, a).value * w.Y
    print(f"  r={r}, q={q}, a={a}:  psi = {got:>12.1f}   predicted = {want:>12.1f}")
