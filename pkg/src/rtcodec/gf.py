"""Table-driven GF(2^w) arithmetic for w in {8, 16}."""

from __future__ import annotations

_PRIMITIVE_POLY = {8: 0x11D, 16: 0x1100B}


class GF:
    """Galois field GF(2^w) with generator 2; exp/log tables built once."""

    _cache: dict[int, "GF"] = {}

    def __init__(self, width: int):
        if width not in _PRIMITIVE_POLY:
            raise ValueError(f"unsupported field width {width}")
        self.width = width
        self.order = 1 << width
        self.charac = self.order - 1
        poly = _PRIMITIVE_POLY[width]
        self.exp = [0] * (2 * self.charac)
        self.log = [0] * self.order
        x = 1
        for i in range(self.charac):
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x & self.order:
                x ^= poly
        for i in range(self.charac, 2 * self.charac):
            self.exp[i] = self.exp[i - self.charac]

    @classmethod
    def get(cls, width: int) -> "GF":
        if width not in cls._cache:
            cls._cache[width] = cls(width)
        return cls._cache[width]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero field element")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % self.charac]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % self.charac]

    def inv(self, a: int) -> int:
        return self.div(1, a)

    # polynomials: coefficient lists, highest degree first

    def poly_mul(self, p: list[int], q: list[int]) -> list[int]:
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a == 0:
                continue
            for j, b in enumerate(q):
                out[i + j] ^= self.mul(a, b)
        return out

    def poly_eval(self, p: list[int], x: int) -> int:
        y = 0
        for c in p:
            y = self.mul(y, x) ^ c
        return y

    def poly_divmod(self, dividend: list[int], divisor: list[int]) -> tuple[list[int], list[int]]:
        out = list(dividend)
        lead_inv = self.inv(divisor[0])
        for i in range(len(dividend) - len(divisor) + 1):
            coef = out[i] = self.mul(out[i], lead_inv)
            if coef != 0:
                for j in range(1, len(divisor)):
                    out[i + j] ^= self.mul(divisor[j], coef)
        sep = len(dividend) - len(divisor) + 1
        return out[:sep], out[sep:]
