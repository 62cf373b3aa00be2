"""Exact scalars: the rationals (gmpy2 mpq) and prime fields (least residues)."""

from fractions import Fraction

from gmpy2 import mpq


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class FieldSpec:
    """k = Q (characteristic 0) or F_p.

    Elements of F_p are python ints in [0, p); elements of Q are mpq.
    """

    __slots__ = ("characteristic",)

    def __init__(self, characteristic=0):
        if characteristic != 0:
            if not is_prime(characteristic) or characteristic >= 2 ** 31:
                raise ValueError("field characteristic must be 0 or a prime < 2^31, got %r" % characteristic)
        object.__setattr__(self, "characteristic", int(characteristic))

    def __setattr__(self, k, v):
        raise AttributeError("FieldSpec is immutable")

    @classmethod
    def rationals(cls):
        return cls(0)

    @classmethod
    def prime(cls, p):
        return cls(p)

    @property
    def kind(self):
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("FieldSpec", self.characteristic))

    def __repr__(self):
        return "Q" if self.characteristic == 0 else "F_%d" % self.characteristic

    # scalars
    def __call__(self, value):
        p = self.characteristic
        if p:
            if isinstance(value, (Fraction,)) or type(value).__name__ == "mpq":
                num, den = int(value.numerator), int(value.denominator)
                if den % p == 0:
                    raise ZeroDivisionError("denominator divisible by %d" % p)
                return num * pow(den, p - 2, p) % p
            return int(value) % p
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)

    @property
    def zero(self):
        return 0 if self.characteristic else mpq(0)

    @property
    def one(self):
        return 1 if self.characteristic else mpq(1)

    def add(self, a, b):
        p = self.characteristic
        return (a + b) % p if p else a + b

    def sub(self, a, b):
        p = self.characteristic
        return (a - b) % p if p else a - b

    def mul(self, a, b):
        p = self.characteristic
        return (a * b) % p if p else a * b

    def neg(self, a):
        p = self.characteristic
        return (-a) % p if p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(a, p - 2, p) if p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a):
        return str(a)

    def to_json(self, a):
        return str(a)
