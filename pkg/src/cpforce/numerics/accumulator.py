from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike


def two_sum(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Error-free transformation: u + v == s + t exactly, s = fl(u + v)."""
    s = u + v
    up = s - v
    vpp = s - up
    up = up - u
    vpp = vpp - v
    t = -(up + vpp)
    return s, t


class Accumulator:
    """
    Running compensated sum of scalars or fixed-shape arrays.

    Keeps the sum as an unevaluated pair (s, t) like GeographicLib's accumulator, elementwise. The result depends
    only on the order of :meth:`add` calls.
    """

    __slots__ = ("_s", "_t")

    def __init__(self, shape: tuple[int, ...] = ()) -> None:
        self._s = np.zeros(shape)
        self._t = np.zeros(shape)

    def add(self, value: ArrayLike) -> None:
        y, u = two_sum(np.asarray(value, dtype=float), self._t)
        self._s, self._t = two_sum(y, self._s)
        self._t = np.where(self._s == 0, 0.0, self._t + u)
        self._s = np.where(self._s == 0, u, self._s)

    @property
    def value(self) -> np.ndarray:
        return self._s + self._t


__all__ = ["two_sum", "Accumulator"]
