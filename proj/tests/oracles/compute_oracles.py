"""Independent high-precision oracle for the frozen test values.

Everything here uses mpmath at 50 digits and brute-force / exact-rational
arithmetic only; nothing calls into the C++ library. Run with
`python3 tests/oracles/compute_oracles.py` and compare with the constants
frozen in tests/*.cpp.
"""
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 50


def S(p, n):
    return mp.fsum(mp.mpf(k) ** (-p) for k in range(1, n + 1))


def tail_bruteforce(q, n):
    # zeta(q) - S_n by mpmath's own zeta, cross-checked against a direct
    # nsum of the tail.
    direct = mp.nsum(lambda k: k ** (-q), [n + 1, mp.inf])
    via_zeta = mp.zeta(q) - S(q, n)
    assert abs(direct - via_zeta) < mp.mpf(10) ** -40
    return direct


def B(p, q, n, order=1):
    a = mp.mpf(q) / p
    zp = mp.zeta(p)
    s = S(p, n)
    t = zp - s
    d = s ** a - S(q, n)
    val = zp ** a - d
    if order >= 1:
        val -= a * zp ** (a - 1) * t
    if order >= 2:
        val += a * (a - 1) / 2 * zp ** (a - 2) * t ** 2
    return val


def bernoulli_rational(m):
    b = [Fraction(1)]
    for k in range(1, m + 1):
        acc = sum(Fraction(mp.binomial(k + 1, j).__int__()) * b[j] for j in range(k))
        b.append(-acc / (k + 1))
    return b


def main():
    print("S_3^(3) =", Fraction(1) + Fraction(1, 8) + Fraction(1, 27))
    print("S_3^(2) =", Fraction(1) + Fraction(1, 4) + Fraction(1, 9))
    print("zeta(3) =", mp.zeta(3))
    print("zeta(5) =", mp.zeta(5))
    print("zeta(7) =", mp.zeta(7))
    print("tail q=3 n=2 =", tail_bruteforce(3, 2))
    print("EM0 error q=3 n=2 =", mp.mpf("1.1875") - mp.zeta(3))
    print("D_2^(2,3) =", mp.mpf("1.25") ** mp.mpf("1.5") - mp.mpf("1.125"))
    print("spectral D alpha=2 p=2 q=3 n=2 =",
          mp.mpf("1.0625") ** mp.mpf("1.5") - (1 + mp.mpf(1) / 64))
    print("A_1^(2,4) =", mp.zeta(2) ** 2)
    print("trunc err q=3 n=10 =", tail_bruteforce(3, 10))
    print("trunc err q=3 n=100 =", tail_bruteforce(3, 100))
    b = bernoulli_rational(40)
    print("B_2, B_4, B_40 =", b[2], b[4], b[40])
    for p, q, n in [(2, 3, 500), (2, 3, 5000), (4, 5, 500), (4, 5, 5000),
                    (2, 5, 5000), (6, 7, 34), (6, 7, 340)]:
        e = abs(B(p, q, n) - mp.zeta(q))
        print(f"|B_{n}^({p},{q}) - zeta| = {mp.nstr(e, 12)}  scaled by n^r: "
              f"{mp.nstr(e * n ** min(2 * p - 2, q - 1), 12)}")
    for q in (3, 19):
        e = abs(B(2, q, 5000) - mp.zeta(q))
        print(f"appendix-F q={q} n=5000 error = {mp.nstr(e, 12)}, n^2*err = {mp.nstr(e * 5000**2, 12)}")
    for n in (100, 1000):
        e1 = abs(B(2, 5, n) - mp.zeta(5))
        e2 = abs(B(2, 5, n, 2) - mp.zeta(5))
        print(f"(2,5) n={n}: |B|={mp.nstr(e1, 6)} |B2|={mp.nstr(e2, 6)}")


if __name__ == "__main__":
    main()
