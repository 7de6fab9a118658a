"""Tiny deterministic generator for reproducible probe sampling.

Linear congruential recurrence x' = (1664525 * x + 1013904223) mod 2**32
(the Numerical Recipes constants).  Every randomized audit in the package
goes through this class so that a seed pins the byte-exact output.
"""

from __future__ import annotations

from .dyadic import Dyadic


class Lcg:
    A = 1664525
    C = 1013904223
    M = 2**32

    def __init__(self, seed: int):
        self.state = seed % self.M

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) % self.M
        return self.state

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next() % bound

    def word(self, alphabet: str, max_len: int) -> str:
        n = self.below(max_len + 1)
        return "".join(alphabet[self.below(len(alphabet))] for _ in range(n))

    def dyadic(self, max_bits: int = 24, max_exp: int = 12) -> Dyadic:
        num = self.below(1 << max_bits)
        if self.below(2):
            num = -num
        return Dyadic(num, self.below(max_exp + 1))
