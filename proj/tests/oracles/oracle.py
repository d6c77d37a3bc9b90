"""Independent reference values for the unit tests.

Run: python3 tests/oracles/oracle.py > tests/oracles/values.txt
Values are frozen by hand into the test sources.
"""
import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 30
s2 = sp.sqrt(2)
f1 = sp.Matrix([1, -sp.I, 0]) / s2
f1b = sp.Matrix([1, sp.I, 0]) / s2
e3 = sp.Matrix([0, 0, 1])
u, v, t = sp.symbols("u v t")


def show(name, val):
    if isinstance(val, (list, tuple)):
        print(name, " ".join(repr(complex(sp.N(x, 20))) for x in val))
    else:
        print(name, repr(complex(sp.N(val, 20))))


X = (-u * v * f1 + 2 * f1b + (u + v) * e3) / (u - v)

# sphere chart value at (1, -1)
show("X(1,-1)", list(X.subs({u: 1, v: -1})))
# mixed derivative at (2, i)
Xuv = sp.diff(X, u, v).subs({u: 2, v: sp.I})
show("Xuv(2,i)", list(sp.simplify(Xuv)))
# isotropic cone Y(v)
Y = -(v**2) * f1 + 2 * f1b + 2 * v * e3
show("|Y(1+2i)|^2", sp.expand((Y.T * Y)[0].subs(v, 1 + 2 * sp.I)))

# confocal member (A^-1 - zI)^-1
A = sp.diag(sp.Rational(1, 4), sp.Rational(1, 2), 1)
show("member diag", list(((A.inv() - sp.Rational(1, 2) * sp.eye(3)).inv()).diagonal()))

# isotropic ruling quartic Y^T A^-1 Y for A = diag(1/4, 1/2, 1)
q = sp.Poly(sp.expand((Y.T * A.inv() * Y)[0]), v)
roots = np.roots([complex(c) for c in q.all_coeffs()])
roots = sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
print("isotropic roots", " ".join(repr(complex(r)) for r in roots))
As = sp.diag(sp.Rational(1, 4), sp.Rational(1, 4), 1)
qs = sp.Poly(sp.expand((Y.T * As.inv() * Y)[0]), v)
print("spheroid quartic factored", sp.factor(qs.as_expr()))

# tangency on the unit sphere with the member z = 3/4 (radius 1/2, chart X/2)
# x0 = N0 = point at polar angle 0.7, azimuth 0.3, v1 = 0.4 + 0.2 i
th, ph = sp.Rational(7, 10), sp.Rational(3, 10)
x0 = sp.Matrix([sp.sin(th) * sp.cos(ph), sp.sin(th) * sp.sin(ph), sp.cos(th)])
v1 = sp.Rational(2, 5) + sp.I / 5
tc = sp.simplify(((X / 2 - x0).T * x0)[0].subs(v, v1))
sol = sp.solve(sp.numer(sp.together(tc)), u)
show("tc sphere u1", sol)
# the closed form case x0 = N0 = e3, v1 = 1
tc3 = ((X / 2 - e3).T * e3)[0].subs(v, 1)
show("tc e3 u1", sp.solve(sp.numer(sp.together(tc3)), u))

# bending of the spheroid profile r = 2 sin u, h = cos u with c = 0.8
c = mp.mpf("0.8")
um = mp.mpf("0.8")


def Hc(uu):
    f = lambda s: mp.sqrt(4 * mp.cos(s) ** 2 * (1 - c**2) + mp.sin(s) ** 2)
    return mp.cos(um) - mp.quad(f, [um, uu])


for uu in ("0.4", "0.65", "1.2"):
    uu = mp.mpf(uu)
    vv = mp.mpf("0.5")
    p = (c * 2 * mp.sin(uu) * mp.cos(vv / c), c * 2 * mp.sin(uu) * mp.sin(vv / c), Hc(uu))
    print("bent point u=%s v=0.5" % mp.nstr(uu, 3), " ".join(mp.nstr(x, 18) for x in p))

# Gauss curvature of the spheroid from its fundamental forms
r = 2 * sp.sin(u)
h = sp.cos(u)
P = sp.Matrix([r * sp.cos(v), r * sp.sin(v), h])
Pu, Pv = P.diff(u), P.diff(v)
n = Pu.cross(Pv)
E, F, G = Pu.dot(Pu), Pu.dot(Pv), Pv.dot(Pv)
L, M, N = (P.diff(u, 2).dot(n), P.diff(u, v).dot(n), P.diff(v, 2).dot(n))
K = (L * N - M**2) / (E * G - F**2) / n.dot(n)
for uu in (sp.Rational(1, 2), 1):
    show("spheroid K u=%s" % uu, K.subs({u: uu, v: sp.Rational(3, 10)}))

# cross ratio of collinear points p_k = a + t_k d
def cr(t1, t2, t3, t4):
    return ((t1 - t3) * (t2 - t4)) / ((t1 - t4) * (t2 - t3))


show("cr(0,3,1,2)", cr(0, 3, 1, 2))
show("cr(i,2,1+i,-1)", cr(sp.I, 2, 1 + sp.I, -1))
