"""Shared oracles: matrix-level symplectic diagonalization and dense quadrature.

These deliberately avoid the closed forms under test: eigenvalues come from
|eig(i Omega gamma)| on explicitly constructed covariance matrices, and the
detector is modelled physically (EPR purification + beamsplitter + measurement
map) rather than through the published conditional-spectrum expressions.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, derandomize=True, deadline=None)
settings.load_profile("ci")

SZ = np.diag([1.0, -1.0])


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a (2n x 2n) covariance matrix, ascending."""
    n = gamma.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ev = np.abs(np.linalg.eigvals(1j * omega @ gamma))
    ev.sort()
    return ev[::2]  # pairs (+l, -l) collapse to one entry each


def channel_state_covariance(v_mod: float, transmissivity: float, chi_ch: float) -> np.ndarray:
    """Two-mode covariance of the shared state after the channel (pre-detector)."""
    v = v_mod + 1.0
    b = transmissivity * (v + chi_ch)
    c = math.sqrt(transmissivity * (v * v - 1.0))
    gamma = np.zeros((4, 4))
    gamma[:2, :2] = v * np.eye(2)
    gamma[2:, 2:] = b * np.eye(2)
    gamma[:2, 2:] = c * SZ
    gamma[2:, :2] = c * SZ
    return gamma


def conditional_spectrum_oracle(
    multiplier: int,
    v_mod: float,
    transmissivity: float,
    det_efficiency: float,
    xi_ch: float,
    xi_d: float,
) -> np.ndarray:
    """Symplectic spectrum of Eve's conditional state, built physically.

    The trusted detector is a beamsplitter of transmittance eta_d fed by one
    half of an EPR pair of variance v = 1 + mu*xi_d/(1-eta_d); homodyne
    measures X on the output mode, heterodyne applies the (gamma_B + I)
    conditional map. Requires eta_d < 1. Returns three eigenvalues, which
    should match {lambda3, lambda4, 1}.
    """
    if det_efficiency >= 1.0:
        raise ValueError("oracle needs eta_d < 1 to purify the detector noise")
    chi_ch = (1.0 - transmissivity) / transmissivity + xi_ch
    gamma = np.zeros((8, 8))
    gamma[:4, :4] = channel_state_covariance(v_mod, transmissivity, chi_ch)
    v_epr = 1.0 + multiplier * xi_d / (1.0 - det_efficiency)
    c_epr = math.sqrt(v_epr**2 - 1.0)
    gamma[4:6, 4:6] = v_epr * np.eye(2)
    gamma[6:, 6:] = v_epr * np.eye(2)
    gamma[4:6, 6:] = c_epr * SZ
    gamma[6:, 4:6] = c_epr * SZ

    bs = np.eye(8)
    root_t, root_r = math.sqrt(det_efficiency), math.sqrt(1.0 - det_efficiency)
    for q in range(2):  # mix mode B (2:4) with EPR half F (4:6)
        b_idx, f_idx = 2 + q, 4 + q
        bs[b_idx, b_idx] = root_t
        bs[b_idx, f_idx] = root_r
        bs[f_idx, b_idx] = -root_r
        bs[f_idx, f_idx] = root_t
    gamma = bs @ gamma @ bs.T

    keep = [0, 1, 4, 5, 6, 7]
    gamma_b = gamma[2:4, 2:4]
    cross = gamma[np.ix_(keep, [2, 3])]
    rest = gamma[np.ix_(keep, keep)]
    if multiplier == 2:
        conditional = rest - cross @ np.linalg.inv(gamma_b + np.eye(2)) @ cross.T
    else:
        pick_x = np.diag([1.0, 0.0])
        conditional = rest - cross @ np.linalg.pinv(pick_x @ gamma_b @ pick_x) @ cross.T
    return symplectic_eigenvalues(conditional)


def dense_trapezoid(f, lo: float, hi: float, n_points: int = 1_000_001) -> float:
    grid = np.linspace(lo, hi, n_points)
    return float(np.trapezoid(f(grid), grid))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
