"""
Miscellaneous helper functions
"""

import math


# construct python regex named group
def named_group(name, regex):
    return r'(?P<{}>{})'.format(name, regex)


def next_power_of_two(n):
    if n <= 1:
        return 1
    return 1 << (int(n) - 1).bit_length()


def coprime_orders(q_max):
    """
    All (r, q) with 1 <= q <= q_max, 1 <= r <= q and gcd(r, q) = 1.
    """
    for q in range(1, q_max + 1):
        for r in range(1, q + 1):
            if math.gcd(r, q) == 1:
                yield r, q


# enough digits to round-trip a double
def format_real(value):
    return '%.17g' % value
