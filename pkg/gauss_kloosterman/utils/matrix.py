from dataclasses import dataclass

from gauss_kloosterman.logs import log_messages
from gauss_kloosterman.utils.errors import ConsistencyError
from gauss_kloosterman.utils.gaussint import ONE, ZERO, GaussianInt, as_gaussian, divides


@dataclass(frozen=True, slots=True)
class Mat2:
    """2x2 matrix over Z[i], rows (a, b) and (c, d)"""

    a: GaussianInt
    b: GaussianInt
    c: GaussianInt
    d: GaussianInt

    @classmethod
    def of(cls, a, b, c, d) -> "Mat2":
        return cls(as_gaussian(a), as_gaussian(b), as_gaussian(c), as_gaussian(d))

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def det(self) -> GaussianInt:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mat2":
        """Inverse of a determinant-one matrix"""
        if self.det() != ONE:
            raise ConsistencyError(log_messages.SINGULAR_MATRIX.format(matrix=self, det=self.det()))
        return Mat2(self.d, -self.b, -self.c, self.a)

    def in_gamma0(self, q0: GaussianInt) -> bool:
        return self.det() == ONE and divides(q0, self.c)

    def is_upper_triangular(self) -> bool:
        return not self.c

    def act(self, pair: tuple[GaussianInt, GaussianInt]) -> tuple[GaussianInt, GaussianInt]:
        """Moebius action on a cusp given as a coprime pair (numerator, denominator); (1, 0) is infinity"""
        x, y = pair
        return self.a * x + self.b * y, self.c * x + self.d * y

    def maps(self, src: tuple[GaussianInt, GaussianInt], dst: tuple[GaussianInt, GaussianInt]) -> bool:
        x, y = self.act(src)
        return x * dst[1] == y * dst[0]

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2(ONE, ZERO, ZERO, ONE)


def translation(t) -> Mat2:
    """n[t]"""
    return Mat2(ONE, as_gaussian(t), ZERO, ONE)


def rotation(unit) -> Mat2:
    """h[unit] = diag(unit, unit^-1)"""
    unit = as_gaussian(unit)
    return Mat2(unit, ZERO, ZERO, unit.conjugate())
