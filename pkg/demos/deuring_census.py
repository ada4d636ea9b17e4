"""Exhaustively count curves over F_p by trace and compare with class numbers.

For every trace r with r^2 < 4p, the number of short Weierstrass models over
F_p with exactly p + 1 - r points equals (p - 1) H(r^2 - 4p), where H is the
weighted class number of the imaginary quadratic order of that discriminant.
This script prints the full comparison table for one prime.
"""

import sys

from koblitz.classnumbers import kronecker_H
from koblitz.curves import census, deuring_check, pi_star

p = int(sys.argv[1]) if len(sys.argv) > 1 else 37

print(f"census of all y^2 = x^3 + ax + b over F_{p} ({p*p - p} nonsingular models)\n")
print(f"{'r':>4} {'order p+1-r':>12} {'count':>8} {'12*H(r^2-4p)':>13} {'(p-1)H':>8}")
for rec in census(p):
    twelve = kronecker_H(rec.r * rec.r - 4 * p).twelve_h
    expected = (p - 1) * twelve // 12
    mark = "" if expected == rec.count else "   <-- MISMATCH"
    print(f"{rec.r:>4} {p + 1 - rec.r:>12} {rec.count:>8} {twelve:>13} {expected:>8}{mark}")

rep = deuring_check(p)
print(f"\nall ordinary rows match: {rep.ordinary_all_match}")
if rep.supersingular is not None:
    ss = rep.supersingular
    print(f"supersingular row r=0: census {ss.census_count}, class-number {ss.expected_count}")
print(f"models with a prime number of points: pi*({p}) = {pi_star(p)}")
