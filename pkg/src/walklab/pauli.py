"""Pauli matrices and closed-form exponentials of involutory generators."""

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)


def involution_exp(generator: np.ndarray, phi: float) -> np.ndarray:
    """exp(-i*phi*G) for a generator G with G @ G = I."""
    dim = generator.shape[0]
    return np.cos(phi) * np.eye(dim, dtype=complex) - 1j * np.sin(phi) * generator


def axis_matrix(nx: float, ny: float, nz: float = 0.0) -> np.ndarray:
    """nx*sigma_x + ny*sigma_y + nz*sigma_z."""
    return nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z


def unitarity_defect(matrix: np.ndarray) -> float:
    """Frobenius norm of U^dagger U - I."""
    dim = matrix.shape[0]
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(dim)))


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Frobenius norm of H - H^dagger."""
    return float(np.linalg.norm(matrix - matrix.conj().T))
