"""Second-order forward-mode differentiation over point batches.

A Jet carries values (N,), gradients (N, d) and optionally Hessians (N, d, d)
with respect to the d ambient coordinates. Arithmetic follows the product,
quotient and chain rules exactly, so parse trees evaluated on jets give exact
first and second derivatives.
"""
import typing

import numpy as np

Scalar = typing.Union[int, float]


class Jet:
    __slots__ = ("value", "gradient", "hessian")

    # Keep numpy scalars from broadcasting over jets
    __array_ufunc__ = None

    def __init__(
        self,
        value: np.ndarray,
        gradient: typing.Optional[np.ndarray] = None,
        hessian: typing.Optional[np.ndarray] = None,
    ):
        self.value = value
        self.gradient = gradient
        self.hessian = hessian

    @staticmethod
    def variables(points: np.ndarray, order: int = 2) -> typing.List["Jet"]:
        """Coordinate functions x_i as jets"""
        points = np.atleast_2d(points)
        num_points, dim = points.shape
        eye = np.eye(dim)
        jets = []
        for i in range(dim):
            gradient = np.broadcast_to(eye[i], (num_points, dim)) if order >= 1 else None
            hessian = np.zeros((num_points, dim, dim)) if order >= 2 else None
            jets.append(Jet(points[:, i].copy(), gradient, hessian))

        return jets

    @staticmethod
    def constant(value: Scalar, like: "Jet") -> "Jet":
        num_points = like.value.shape[0]
        gradient = None if like.gradient is None else np.zeros_like(like.gradient)
        hessian = None if like.hessian is None else np.zeros_like(like.hessian)
        return Jet(np.full(num_points, float(value)), gradient, hessian)

    @property
    def order(self) -> int:
        if self.hessian is not None:
            return 2

        if self.gradient is not None:
            return 1

        return 0

    # -------------------------------------------------------------------------

    def apply(
        self, f0: np.ndarray, f1: np.ndarray, f2: typing.Optional[np.ndarray] = None
    ) -> "Jet":
        """Chain rule for a scalar function with derivatives f1, f2 at self.value"""
        gradient = None
        hessian = None
        if self.gradient is not None:
            gradient = f1[:, None] * self.gradient

        if self.hessian is not None:
            assert (f2 is not None) and (self.gradient is not None)
            hessian = f1[:, None, None] * self.hessian + f2[:, None, None] * (
                self.gradient[:, :, None] * self.gradient[:, None, :]
            )

        return Jet(f0, gradient, hessian)

    def subset(self, mask: np.ndarray) -> "Jet":
        return Jet(
            self.value[mask],
            None if self.gradient is None else self.gradient[mask],
            None if self.hessian is None else self.hessian[mask],
        )

    def assign(self, mask: np.ndarray, other: "Jet") -> None:
        self.value[mask] = other.value
        if self.gradient is not None:
            assert other.gradient is not None
            self.gradient[mask] = other.gradient

        if self.hessian is not None:
            assert other.hessian is not None
            self.hessian[mask] = other.hessian

    # -------------------------------------------------------------------------

    def __neg__(self) -> "Jet":
        return Jet(
            -self.value,
            None if self.gradient is None else -self.gradient,
            None if self.hessian is None else -self.hessian,
        )

    def __add__(self, other: typing.Union["Jet", Scalar]) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.value + other, self.gradient, self.hessian)

        return Jet(
            self.value + other.value,
            _combine(self.gradient, other.gradient, 1.0),
            _combine(self.hessian, other.hessian, 1.0),
        )

    __radd__ = __add__

    def __sub__(self, other: typing.Union["Jet", Scalar]) -> "Jet":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Jet":
        return (-self) + other

    def __mul__(self, other: typing.Union["Jet", Scalar]) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(
                self.value * other,
                None if self.gradient is None else self.gradient * other,
                None if self.hessian is None else self.hessian * other,
            )

        u, v = self, other
        gradient = None
        hessian = None
        if (u.gradient is not None) and (v.gradient is not None):
            gradient = u.value[:, None] * v.gradient + v.value[:, None] * u.gradient

        if (
            (u.hessian is not None)
            and (v.hessian is not None)
            and (u.gradient is not None)
            and (v.gradient is not None)
        ):
            cross = u.gradient[:, :, None] * v.gradient[:, None, :]
            hessian = (
                u.value[:, None, None] * v.hessian
                + v.value[:, None, None] * u.hessian
                + cross
                + cross.transpose(0, 2, 1)
            )

        return Jet(u.value * v.value, gradient, hessian)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        inv = 1.0 / self.value
        return self.apply(inv, -(inv**2), 2.0 * inv**3)

    def __truediv__(self, other: typing.Union["Jet", Scalar]) -> "Jet":
        if not isinstance(other, Jet):
            return self * (1.0 / other)

        return self * other.reciprocal()

    def __rtruediv__(self, other: Scalar) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, exponent: int) -> "Jet":
        if exponent == 0:
            return Jet.constant(1.0, self)

        if exponent < 0:
            return (self ** (-exponent)).reciprocal()

        value = self.value
        f0 = value**exponent
        f1 = exponent * value ** (exponent - 1)
        f2 = exponent * (exponent - 1) * value ** max(exponent - 2, 0)
        if exponent == 1:
            f2 = np.zeros_like(value)

        return self.apply(f0, f1, f2)


def _combine(
    a: typing.Optional[np.ndarray], b: typing.Optional[np.ndarray], scale: float
) -> typing.Optional[np.ndarray]:
    if (a is None) or (b is None):
        return None

    return a + scale * b


def dot_jet(points: np.ndarray, direction: np.ndarray, order: int = 2) -> Jet:
    """Linear function x -> <x, direction>"""
    points = np.atleast_2d(points)
    num_points, dim = points.shape
    gradient = np.broadcast_to(direction, (num_points, dim)).copy() if order >= 1 else None
    hessian = np.zeros((num_points, dim, dim)) if order >= 2 else None
    return Jet(points @ direction, gradient, hessian)


def arccos_jet(u: Jet) -> Jet:
    """arccos for |u| < 1"""
    value = np.clip(u.value, -1.0, 1.0)
    one_minus = 1.0 - value * value
    root = np.sqrt(one_minus)
    return u.apply(np.arccos(value), -1.0 / root, -value / (one_minus * root))


def smoothstep_jet(t: Jet) -> Jet:
    """C^2 quintic step: 0 for t <= 1, 1 for t >= 2, 0 <= derivative <= 15/8"""
    s = np.clip(t.value - 1.0, 0.0, 1.0)
    f0 = s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
    f1 = 30.0 * s * s * (1.0 - s) ** 2
    f2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    return t.apply(f0, f1, f2)
