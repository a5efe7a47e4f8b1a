"""Reference values for axisymmetric radial graphs over S^2.

The surface r = rho*(1 + u(theta)) is embedded in the ambient model of the
space form (R^3, the hyperboloid in R^{1,3}, or S^3 in R^4). Metric and
second fundamental form come from symbolic derivatives of the embedding;
integrals are done in 30-digit arithmetic. Nothing here uses the intrinsic
curvature formulas of the Rust crate.

Run: python3 oracles/embedded_surface.py
"""

import mpmath as mp
import sympy as sp

mp.mp.dps = 30

th, ph = sp.symbols("theta phi", real=True)
X1 = sp.cos(th)
DIRECTION = [sp.cos(th), sp.sin(th) * sp.cos(ph), sp.sin(th) * sp.sin(ph)]
# unit-norm degree-2 zonal harmonic about the x1 axis
Y2 = sp.sqrt(sp.Rational(45, 16) / sp.pi) * (X1**2 - sp.Rational(1, 3))
Y0 = 1 / sp.sqrt(4 * sp.pi)


def model(K, r):
    """Embedding of the point at distance r in direction DIRECTION, and the
    ambient bilinear form."""
    if K == 0:
        return [r * x for x in DIRECTION], [1, 1, 1]
    if K == -1:
        return [sp.cosh(r)] + [sp.sinh(r) * x for x in DIRECTION], [-1, 1, 1, 1]
    return [sp.cos(r)] + [sp.sin(r) * x for x in DIRECTION], [1, 1, 1, 1]


def warp(K, r):
    """phi, phi', Phi"""
    if K == 0:
        return r, mp.mpf(1), r * r / 2
    if K == -1:
        return mp.sinh(r), mp.cosh(r), mp.cosh(r) - 1
    return mp.sin(r), mp.cos(r), 1 - mp.cos(r)


def power_integral(K, r):
    """int_0^r phi^2"""
    if K == 0:
        return r**3 / 3
    if K == -1:
        return (mp.sinh(2 * r) / 2 - r) / 2
    return (r - mp.sin(2 * r) / 2) / 2


class Surface:
    def __init__(self, K, rho, u):
        self.K, self.rho = K, rho
        r = rho * (1 + u)
        X, eta = model(K, r)
        Xt = [sp.diff(c, th) for c in X]
        Xp = [sp.diff(c, ph) for c in X]
        second = [[sp.diff(c, a, b) for c in X] for a, b in [(th, th), (th, ph), (ph, ph)]]
        dr = [sp.diff(c, sp.Symbol("s")) for c in model(K, sp.Symbol("s"))[0]]
        dr = [c.subs(sp.Symbol("s"), r) for c in dr]
        args = (th, ph)
        self.f_r = sp.lambdify(args, r, "mpmath")
        self.f_X = sp.lambdify(args, X, "mpmath")
        self.f_Xt = sp.lambdify(args, Xt, "mpmath")
        self.f_Xp = sp.lambdify(args, Xp, "mpmath")
        self.f_second = sp.lambdify(args, second, "mpmath")
        self.f_dr = sp.lambdify(args, dr, "mpmath")
        self.eta = eta

    def dot(self, a, b):
        return sum(e * x * y for e, x, y in zip(self.eta, a, b))

    def normal(self, t, p):
        rows = [self.f_Xt(t, p), self.f_Xp(t, p)]
        if self.K != 0:
            rows.append(self.f_X(t, p))
        d = len(self.eta)
        # the null vector of the rows (lowered with eta) is the row of
        # cofactors along an appended last row
        M = mp.matrix(d, d)
        for i, row in enumerate(rows):
            for j in range(d):
                M[i, j] = self.eta[j] * row[j]
        n = [((-1) ** (d - 1 + j)) * mp.det(minor(M, d - 1, j)) for j in range(d)]
        nn = self.dot(n, n)
        n = [c / mp.sqrt(nn) for c in n]
        if self.dot(n, self.f_dr(t, p)) < 0:
            n = [-c for c in n]
        return n

    def local(self, t, p=mp.mpf(0)):
        """(area element, sigma_1, sigma_2, r)"""
        Xt, Xp = self.f_Xt(t, p), self.f_Xp(t, p)
        g = mp.matrix([[self.dot(Xt, Xt), self.dot(Xt, Xp)], [self.dot(Xp, Xt), self.dot(Xp, Xp)]])
        N = self.normal(t, p)
        stt, stp, spp = self.f_second(t, p)
        h = mp.matrix([[-self.dot(stt, N), -self.dot(stp, N)], [-self.dot(stp, N), -self.dot(spp, N)]])
        dg = g[0, 0] * g[1, 1] - g[0, 1] ** 2
        s1 = (g[1, 1] * h[0, 0] - 2 * g[0, 1] * h[0, 1] + g[0, 0] * h[1, 1]) / dg
        s2 = (h[0, 0] * h[1, 1] - h[0, 1] ** 2) / dg
        return mp.sqrt(dg), s1, s2, self.f_r(t, p)

    def integrate(self, f, points=()):
        """2*pi * int_0^pi f(theta) dtheta, f already carrying the area element."""
        nodes = [mp.mpf(0)] + sorted(points) + [mp.pi]
        return 2 * mp.pi * mp.quad(f, nodes)

    def curvature_integral(self, k, weight=None):
        def f(t):
            a, s1, s2, r = self.local(t)
            w = 1 if weight is None else warp(self.K, r)[1 if weight == "dphi" else 2]
            return a * w * [1, s1, s2][k]

        return self.integrate(f)

    def volume(self):
        # polar volume element phi(r)^2 sin(theta) dr dtheta dphi
        return self.integrate(lambda t: power_integral(self.K, self.f_r(t, 0)) * mp.sin(t))

    def quermass(self, k):
        if k == -1:
            return self.volume()
        if k == 0:
            return self.curvature_integral(0)
        if k == 1:
            return self.curvature_integral(1) + self.K * 2 * self.volume()
        return self.curvature_integral(2) + self.K * self.quermass(0)


def minor(M, i0, j0):
    d = M.rows
    out = mp.matrix(d - 1, d - 1)
    for i in range(d):
        if i == i0:
            continue
        for j in range(d):
            if j == j0:
                continue
            out[i - (i > i0), j - (j > j0)] = M[i, j]
    return out


def ball_quermass(K, k, rho):
    phi, dphi, _ = warp(K, mp.mpf(rho))
    om = 4 * mp.pi
    if k == -1:
        return om * power_integral(K, mp.mpf(rho))
    if k == 0:
        return om * phi**2
    if k == 1:
        return om * 2 * dphi * phi + K * 2 * ball_quermass(K, -1, rho)
    return om * dphi**2 + K * ball_quermass(K, 0, rho)


def origin_asymmetry(s):
    vol = s.volume()
    R = mp.findroot(lambda x: 4 * mp.pi * power_integral(s.K, x) - vol, s.rho)
    FR = power_integral(s.K, R)
    grid = [mp.pi * i / 400 for i in range(401)]
    vals = [s.f_r(t, 0) - R for t in grid]
    roots = [
        mp.findroot(lambda t: s.f_r(t, 0) - R, (a, b), solver="bisect")
        for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:])
        if fa * fb < 0
    ]
    return s.integrate(lambda t: abs(power_integral(s.K, s.f_r(t, 0)) - FR) * mp.sin(t), roots), R


def show(label, v):
    print(f"{label:<34} {mp.nstr(v, 22)}")


if __name__ == "__main__":
    print("# u = 0.05 x1, K = 0, rho = 1")
    s = Surface(0, 1, sp.Rational(1, 20) * X1)
    show("volume", s.volume())
    show("curvature_integral k=1", s.curvature_integral(1))
    show("curvature_integral k=2", s.curvature_integral(2))

    print("# u = 0.01 Y2, K = -1, rho = 1")
    s = Surface(-1, 1, sp.Rational(1, 100) * Y2)
    show("volume", s.volume())
    show("area", s.quermass(0))
    show("curvature_integral k=1", s.curvature_integral(1))
    show("curvature_integral k=2", s.curvature_integral(2))
    show("quermass k=1", s.quermass(1))
    show("weighted Phi k=1", s.curvature_integral(1, "Phi"))
    show("weighted dphi k=1", s.curvature_integral(1, "dphi"))

    print("# u = 0.01 Y2 + 0.02 x1, K = +1, rho = 0.7")
    s = Surface(1, mp.mpf("0.7"), sp.Rational(1, 100) * Y2 + sp.Rational(1, 50) * X1)
    show("quermass k=2 (expect 4 pi)", s.quermass(2))
    show("4 pi", 4 * mp.pi)

    print("# constrained: u = 0.01 Y2 + a0 Y0 with A_0 = psi_0(1), K = -1")
    target = ball_quermass(-1, 0, 1)

    def area_gap(a0):
        return Surface(-1, 1, sp.Rational(1, 100) * Y2 + sp.Float(str(a0), 40) * Y0).quermass(0) - target

    a0 = mp.findroot(area_gap, (mp.mpf("-1e-3"), mp.mpf("1e-3")), solver="secant", tol=mp.mpf(10) ** -26)
    s = Surface(-1, 1, sp.Rational(1, 100) * Y2 + sp.Float(str(a0), 40) * Y0)
    delta = s.quermass(1) - ball_quermass(-1, 1, 1)
    alpha, R = origin_asymmetry(s)
    om = 4 * mp.pi
    # n(n-k)(k-j)/(4 omega) * C(n,k) * phi'^k / phi^(n+k+2) at (n,k,j) = (2,1,0)
    const = 2 * 1 * 1 / (4 * om) * 2 * mp.cosh(1) / mp.sinh(1) ** 5
    show("a0", a0)
    show("delta_{1,0}", delta)
    show("origin asymmetry", alpha)
    show("matched volume radius", R)
    show("constant", const)
    show("margin", delta - const * alpha**2)
