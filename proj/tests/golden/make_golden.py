# Independent high-precision evaluation of closed-form hyperbolic quantities.
import json
from mpmath import mp, asinh, sqrt, cosh, sinh, asin, pi, mpf, log

mp.dps = 50
eps = 2 * asinh(1)
a = asinh(sqrt(cosh(eps / 4)))
h = asinh(cosh(a) / sinh(eps / 2))
w0 = asinh(1) / 2
theta0 = asin(1 / cosh(w0))
out = {
    "eps_max": str(eps),
    "fat_a": str(a),
    "fat_h": str(h),
    "sinh_half_eps": str(sinh(eps / 2)),
    "w0": str(w0),
    "theta0": str(theta0),
    "pi_minus_2theta0": str(pi - 2 * theta0),
    "bst_k4": str(8 * log(4)),
    "bst_triangle": str(12 * log(2)),
    "bp09_g2_c1": str(46 * sqrt(2 * pi * 2) * sqrt((log(2) / (2 * pi)) ** 2 + 1)),
    "group_lower_b1_1": str(2 / log(3) ** 2),
    "odd_sys_g100": str(log(100) / 4),
    "odd_area_g100": str(4 * pi * 99 + log(100) ** 2 / 4),
    "logh_3_2_05": str(mpf(4) / 3 * mpf("0.5") * 2 * log(3)),
}
print(json.dumps(out, indent=1))
