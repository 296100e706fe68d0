"""Independent reference values frozen into the unit tests.

Run with python3; prints each value with 17 significant digits.
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40

# Kernel: bounded solution of g'''' + 2g''' - g'' - 2g' = delta, g -> 0 at +inf.
# Characteristic roots 0, 1, -1, -2; bounded branches: {1, e^t} on the left,
# {e^-t, e^-2t} on the right. Match g, g', g'' and a unit jump in g'''.
t = sp.symbols("t")
a, b, c, d = sp.symbols("a b c d")
left = a + b * sp.exp(t)
right = c * sp.exp(-t) + d * sp.exp(-2 * t)
eqs = [sp.Eq(sp.diff(right, t, k).subs(t, 0), sp.diff(left, t, k).subs(t, 0)) for k in range(3)]
eqs.append(sp.Eq(sp.diff(right, t, 3).subs(t, 0) - sp.diff(left, t, 3).subs(t, 0), 1))
sol = sp.solve(eqs, [a, b, c, d])
gl, gr = left.subs(sol), right.subs(sol)
print("kernel left", sp.simplify(gl), "right", sp.simplify(gr))
for tv in [-3, -1, -0.25, 0.5, 1, 4]:
    gg = gl if tv < 0 else gr
    vals = [sp.N(sp.diff(gg, t, k).subs(t, tv), 20) for k in range(3)]
    w1 = -(vals[2] + vals[1])
    w2 = -(2 * vals[2] + 3 * vals[1] - vals[0])
    print(f"g({tv}) = {vals[0]}  w1 = {sp.N(w1, 20)}  w2 = {sp.N(w2, 20)}")

# Four-point constant: max |alpha - beta| / |cos alpha - cos beta| on
# alpha/2 < beta < 3 alpha/2, by maximizing the continuous function.
for alpha in [0.3, 0.7, mp.pi / 4, 1.2]:
    f = lambda beta: abs(alpha - beta) / abs(mp.cos(alpha) - mp.cos(beta))
    # The ratio is monotone in beta on each side; the sup sits at an end.
    sup = max(f(alpha / 2 + mp.mpf("1e-30")), f(3 * alpha / 2 - mp.mpf("1e-30")))
    print(f"c0({float(alpha)!r}) = {mp.nstr(sup, 17)}")

# Radial energy of |x| on 1 < |x| < 2: integral of (2/|x|)^2.
print("energy |x| on C_{1,2} =", mp.nstr(mp.quad(lambda r: 4 / r**2 * 4 * mp.pi * r**2, [1, 2]), 17))

# Cusp partial sums of h(s)^2 / s on [2^-k, 1] for h = s^(1/2).
print("sqrt cusp partial k=10:", mp.nstr(mp.quad(lambda s: 1, [2**-10, 1]), 17))
print("log cusp partial p=1/2, c=1/2, k=10:",
      mp.nstr(mp.quad(lambda s: 1 / (s * mp.log(1 / s)), [mp.mpf(0.5) * 2**-10, 0.5]), 17))
