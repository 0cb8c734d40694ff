"""Independent reference computations used by several test modules.

Nothing here calls the library's iteration, reduction or valuation code.
"""

from fractions import Fraction

INF = None  # the point at infinity, for the naive evaluators below

NAIVE_MAPS = {
    "x^2": lambda v: v * v,
    "x^2+1": lambda v: v * v + 1,
    "x^2-2": lambda v: v * v - 2,
    "(x^2-1)/x": lambda v: INF if v == 0 else (v * v - 1) / v,
    "x^3-3x": lambda v: v**3 - 3 * v,
    "x+x^2": lambda v: v + v * v,
}


def naive_orbit(text: str, alpha, steps: int) -> list:
    """alpha, phi(alpha), ..., phi^steps(alpha) as Fractions (None for infinity)."""
    f = NAIVE_MAPS[text]
    out = [Fraction(alpha)]
    for _ in range(steps):
        x = out[-1]
        if x is INF:
            # every fixture map with a pole sends infinity to infinity
            out.append(INF)
        else:
            out.append(f(x))
    return out


def exact_ord(q: Fraction, p: int) -> float:
    if q == 0:
        return float("inf")
    k = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k


def classify(k: float) -> str:
    return "0" if k <= 0 else "1" if k == 1 else ">=2"


def walk_portrait(step, x0) -> tuple[int, int]:
    # list-based walk, distinct from the library's dict walk
    xs = [x0]
    while True:
        nxt = step(xs[-1])
        if nxt in xs:
            m = xs.index(nxt)
            return m, len(xs) - m
        xs.append(nxt)


def poly_step_mod(coeffs: list[int], p: int):
    """x -> sum c_i x^i mod p for an integer polynomial (monic maps keep infinity fixed)."""

    def step(x):
        if x is INF:
            return INF
        return sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p

    return step
