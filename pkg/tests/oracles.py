"""Slow, obviously-correct reference computations used by the tests."""

from fractions import Fraction


def sigma_naive(r, n):
    return sum(d**r for d in range(1, n + 1) if n % d == 0)


def divisors_naive(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def euler_product_power(step, exponent, prec):
    """prod_{n>=1} (1 - q^{step n})^exponent by repeated multiplication, exponent >= 0."""
    out = [1] + [0] * (prec - 1)
    for n in range(step, prec, step):
        for _ in range(exponent):
            for i in range(prec - 1, n - 1, -1):
                out[i] -= out[i - n]
    return out


def tau_naive(prec):
    body = euler_product_power(1, 24, prec - 1)
    return [0] + body


def series_mul(a, b):
    prec = min(len(a), len(b))
    return [sum(Fraction(a[i]) * b[n - i] for i in range(n + 1)) for n in range(prec)]


# tau(n), n = 1..12
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]

# the normalized weight-10 newform on Gamma_0(2), n = 1..9
TAU_10_2 = [1, 16, -156, 256, 870, -2496, -952, 4096, 4653]

# ||Delta||^2 with measure dx dy / y^2 over SL_2(Z) \ H
DELTA_NORM2 = 1.035362056804320922e-06
