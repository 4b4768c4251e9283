#!/usr/bin/env python3
"""Regenerates the high-precision reference values frozen into the tests.

Independent of the Rust code: the series is summed with mpmath, the
expansion is built by the doubling rule, and the ratio limits are evaluated
as plain continued fractions. Run with `python3 tools/reference_values.py`.
"""
from mpmath import mp, mpf

mp.dps = 120


def quotients(b, level):
    q = [b - 1, b + 2]
    for _ in range(1, level):
        n = len(q)
        q = q + [q[n - 1] - 2] + [q[i] for i in range(n - 2, 0, -1)] + [q[0] + 1]
    return q


def series(b):
    total = mpf(0)
    j = 0
    while True:
        term = mpf(1) / mpf(b) ** (2**j)
        if term < mpf(10) ** (-mp.dps + 10):
            return total
        total += term
        j += 1


def eval_cf(terms, tail):
    value = tail
    for a in reversed(terms):
        value = a + 1 / value
    return value


def ratio_limit(b, k):
    """[a_k; a_{k-1}, ..., a_2, b-2, (x+1)/x]"""
    x = series(b)
    q = quotients(b, max(2, (k - 1).bit_length()))
    prefix = [q[i - 1] for i in range(k, 1, -1)] + [b - 2]
    return eval_cf(prefix, (x + 1) / x)


def k_il(i, l):
    return (2 ** (i + 1) + (-1) ** i) // 3 * 2 ** (2 + l) + (1 if i % 2 else -1)


if __name__ == "__main__":
    for b in (3, 4, 5, 6):
        print(f"x({b})        = {mp.nstr(series(b), 50)}")
    x3 = series(3)
    print(f"(x+1)/x, b=3 = {mp.nstr((x3 + 1) / x3, 50)}")
    print(f"t(2, 3)      = {mp.nstr(ratio_limit(3, 2), 50)}")
    print(f"t(7, 3)      = {mp.nstr(ratio_limit(3, 7), 50)}")
    for l in (1, 2, 3):
        k = k_il(0, l)
        value = -7 + x3 + 1 / ratio_limit(3, k)
        print(f"cluster(3, 0, {l}) at k={k}: {mp.nstr(value, 40)}")
