#!/usr/bin/env python3
"""Independent high-precision evaluation of the integer constants used by the
decision procedure. Prints one `name n value` line per constant so the C++
side can compare exact integers.

    A(n)     = floor(9 n^3 sqrt(n ln n))
    p_max(n) = floor(exp(sqrt(6 n ln n)))
"""

import argparse

import mpmath


def a_of_n(n: int) -> int:
    return int(mpmath.floor(9 * n**3 * mpmath.sqrt(n * mpmath.log(n))))


def unity_order_bound(n: int) -> int:
    return int(mpmath.floor(mpmath.exp(mpmath.sqrt(6 * n * mpmath.log(n)))))


def bal_upper_bound(n: int, m: int) -> int:
    e = mpmath.exp(n * n * (1 + mpmath.sqrt(6 * n * mpmath.log(n))))
    return int(mpmath.ceil(mpmath.mpf(m) ** (2 * n - 1) * e))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=12)
    parser.add_argument("--digits", type=int, default=80)
    args = parser.parse_args()
    mpmath.mp.dps = args.digits
    for n in range(2, args.max_n + 1):
        print(f"a_of_n {n} {a_of_n(n)}")
        print(f"unity_order_bound {n} {unity_order_bound(n)}")
    for m in (1, 2, 3):
        print(f"bal_upper_bound_2 {m} {bal_upper_bound(2, m)}")


if __name__ == "__main__":
    main()
