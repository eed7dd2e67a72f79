"""Reference values for the Gamma-function closed forms, at 30 digits.

Each constant is evaluated twice: from its closed form, and as the quotient
of the stated minimizer by direct quadrature. Frozen outputs live in the
Rust tests.
"""
from mpmath import mp, mpf, gamma, pi, quad, inf, diff

mp.dps = 30


def sphere(n):
    return 2 * pi ** (mpf(n) / 2) / gamma(mpf(n) / 2)


def t_rad(n, p, q, alpha):
    n, p, q, alpha = map(mpf, (n, p, q, alpha))
    e = (q - p) / q
    g = gamma(q / (q - p)) * gamma(q * (p - 1) / (q - p)) / (gamma(n / 2) * gamma(q * p / (q - p)))
    return (pi ** (n * e / 2) * n * (n * p / (q * (p - 1))) ** (p - 1)
            * (q * (n - alpha) / (n * p)) ** (p - 1 + p / q)
            * (2 * q * (p - 1) / (n * (q - p))) ** e * g ** e)


def t_rad_quotient(n, p, q, alpha, beta, a=1, b=1):
    n, p, q, alpha, beta = map(mpf, (n, p, q, alpha, beta))
    gam = (n - alpha) / (beta - 1)
    ex = (q - p) * (beta - 1) / (p * (p - 1))
    u = lambda r: (a + b * (r ** (-gam) - 1) ** (-ex)) ** (-p / (q - p))
    du = lambda r: diff(u, r)
    g = lambda r: 1 - r ** gam
    num = quad(lambda r: abs(du(r)) ** p * r ** (n - 1 - alpha + p) * g(r) ** (p - beta), [0, mpf(1) / 2, 1])
    den = quad(lambda r: abs(u(r)) ** q * r ** (n - 1 - n + q / p * (n - alpha)) * g(r) ** (-1 - (beta - 1) / p * q),
               [0, mpf(1) / 2, 1])
    return sphere(n) * num / (sphere(n) * den) ** (p / q)


def s_rad(n, p, a, b):
    n, p, a, b = map(mpf, (n, p, a, b))
    th = 1 - a + b
    e = p * th / n
    g = gamma(n / (p * th)) * gamma(n * (p - 1) / (p * th)) / (gamma(n / 2) * gamma(n / th))
    return (pi ** (p * th / 2) * n * ((n - th * p) / (p - 1)) ** (p - 1)
            * ((n - p + p * a) / (n - th * p)) ** (p - e)
            * (2 * (p - 1) / (th * p)) ** e * g ** e)


def s_rad_quotient(n, p, a, b):
    n, p, a, b = map(mpf, (n, p, a, b))
    th = 1 - a + b
    q = n * p / (n - th * p)
    h = th * (n - p + p * a) / (n - th * p)
    v = lambda y: (1 + y ** (p * h / (p - 1))) ** (1 - n / (p * th))
    dv = lambda y: diff(v, y)
    num = quad(lambda y: abs(dv(y)) ** p * y ** (a * p + n - 1), [0, 1, inf])
    den = quad(lambda y: abs(v(y)) ** q * y ** (b * q + n - 1), [0, 1, inf])
    return sphere(n) * num / (sphere(n) * den) ** (p / q)


if __name__ == "__main__":
    print("t_rad(3,2,4,2)      ", t_rad(3, 2, 4, 2))
    print("  quotient of U     ", t_rad_quotient(3, 2, 4, 2, 2))
    print("s_rad(3,2,0,0)      ", s_rad(3, 2, 0, 0))
    print("  quotient of V     ", s_rad_quotient(3, 2, 0, 0))
    for tup in [(3, 2, 4, 2, 2), (4, 2, 3, 1, 2), (5, 3, 4.5, 2, 3), (3, 1.5, 2.5, 0.5, 1.5), (6, 2.5, 5, -1, 2)]:
        print("t_rad", tup[:4], t_rad(*tup[:4]), " quotient", t_rad_quotient(*tup))
