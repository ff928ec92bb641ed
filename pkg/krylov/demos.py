"""Built-in worked examples.

``compatible``: H = diag(3, 2, 1, 0, -1, -2, -3) with c equal to the
diagonal. The system is compatible, the iteration stops at r = 6 and
x = (-1, -1, -1, 0, -1, -1, -1).

``incompatible``: H = diag(5, 2, 1, 0, -1, -2, -3) with
c = (3, 2, 1, 1, -1, -2, -3). c has a component along e_4, the null vector
of H, so the iteration stops at r = 7 with a certificate. The minimum-norm
least-squares solution is (-0.6, -1, -1, 0, -1, -1, -1) with
||Hx + c||^2 = 1.
"""
from dataclasses import dataclass

import numpy as np

from .operator import DenseSymmetric, make_diagonal


@dataclass(frozen=True)
class Demo:
    name: str
    H: DenseSymmetric
    c: np.ndarray
    description: str


def compatible_demo() -> Demo:
    d = [3.0, 2.0, 1.0, 0.0, -1.0, -2.0, -3.0]
    return Demo(
        name="compatible",
        H=make_diagonal(d),
        c=np.array(d),
        description="singular compatible system, r = 6",
    )


def incompatible_demo() -> Demo:
    return Demo(
        name="incompatible",
        H=make_diagonal([5.0, 2.0, 1.0, 0.0, -1.0, -2.0, -3.0]),
        c=np.array([3.0, 2.0, 1.0, 1.0, -1.0, -2.0, -3.0]),
        description="singular incompatible system, r = 7",
    )


DEMOS = {
    "compatible": compatible_demo,
    "incompatible": incompatible_demo,
}


def get_demo(name: str) -> Demo:
    """Look up a demo by name."""
    try:
        return DEMOS[name]()
    except KeyError:
        raise ValueError(f"unknown demo '{name}' (expected one of: {', '.join(DEMOS)})") from None
