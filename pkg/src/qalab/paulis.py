"""Pauli matrices and tensor helpers used throughout the experiments."""

import numpy as np

from .algebra import AlgebraElement, element

SIGMA_X = element(np.array([[0, 1], [1, 0]], dtype=np.complex128))
SIGMA_Y = element(np.array([[0, -1j], [1j, 0]], dtype=np.complex128))
SIGMA_Z = element(np.array([[1, 0], [0, -1]], dtype=np.complex128))
IDENTITY2 = element(np.eye(2, dtype=np.complex128))


def kron(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Tensor product of two elements, row-major index ordering."""
    return element(np.kron(a.entries, b.entries))


def spin_at(theta: float) -> AlgebraElement:
    """Spin observable in the x-z plane: cos(theta)*Z + sin(theta)*X."""
    return element(np.cos(theta) * SIGMA_Z.entries + np.sin(theta) * SIGMA_X.entries)
