"""Dicke-state (quasispin) algebra for S co-located two-level nuclei.

The Dicke basis is indexed by the excitation number s = 0..S; index 0 is the
collective ground state.  Spatial phase factors are taken as matched, so the
collective operators are plain sums of single-nucleus operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

MAX_DENSE_S = 12


class SizeError(ValueError):
    pass


def _check_range(big_s, s):
    big_s = np.asarray(big_s, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s > big_s):
        raise ValueError("excitation number must satisfy 0 <= s <= S")
    return big_s, s


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def raise_coefficient(big_s, s):
    """Amplitude of Sigma+ |s> = sqrt((S - s)(s + 1)) |s + 1>."""
    big_s, s = _check_range(big_s, s)
    return _scalar(np.sqrt((big_s - s) * (s + 1.0)))


def lower_coefficient(big_s, s):
    """Amplitude of Sigma- |s> = sqrt((S - s + 1) s) |s - 1>."""
    big_s, s = _check_range(big_s, s)
    return _scalar(np.sqrt((big_s - s + 1.0) * s))


def hp_raise_coefficient(big_s, s):
    """Holstein-Primakoff approximation sqrt(S) sqrt(s + 1), valid for s << S."""
    big_s, s = _check_range(big_s, s)
    return _scalar(np.sqrt(big_s) * np.sqrt(s + 1.0))


@dataclass(frozen=True)
class DickeLadder:
    big_s: int
    s: int

    def __post_init__(self):
        if not 0 <= self.s <= self.big_s:
            raise ValueError(f"need 0 <= s <= S, got s={self.s}, S={self.big_s}")

    @property
    def up(self) -> float:
        return raise_coefficient(self.big_s, self.s)

    @property
    def down(self) -> float:
        return lower_coefficient(self.big_s, self.s)

    @property
    def sigma_z(self) -> float:
        return self.s - self.big_s / 2


@dataclass(frozen=True)
class CollectiveOperators:
    big_s: int
    sigma_plus: np.ndarray
    sigma_minus: np.ndarray
    sigma_z: np.ndarray

    @property
    def sigma_x(self) -> np.ndarray:
        return 0.5 * (self.sigma_plus + self.sigma_minus)

    @property
    def sigma_y(self) -> np.ndarray:
        return -0.5j * (self.sigma_plus - self.sigma_minus)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_collective_operators(big_s: int) -> CollectiveOperators:
    """Dense (S+1)x(S+1) Sigma+, Sigma-, Sigma^z from the ladder coefficients."""
    if big_s < 1 or big_s > MAX_DENSE_S:
        raise SizeError(f"dense operators are limited to 1 <= S <= {MAX_DENSE_S}, got {big_s}")
    s = np.arange(big_s)
    plus = np.zeros((big_s + 1, big_s + 1), dtype=complex)
    plus[s + 1, s] = raise_coefficient(big_s, s)
    z = np.diag(np.arange(big_s + 1) - big_s / 2).astype(complex)
    return CollectiveOperators(
        big_s, _frozen(plus), _frozen(plus.conj().T.copy()), _frozen(z)
    )


def tensor_product_collective_operators(big_s: int) -> CollectiveOperators:
    """Brute-force route: sum single-nucleus operators over 2**S states and
    project onto the symmetric states (Sigma+)^s |0>, normalised numerically.

    Independent of the closed-form ladder coefficients; used as their oracle.
    """
    if big_s < 1 or big_s > MAX_DENSE_S:
        raise SizeError(f"brute force limited to 1 <= S <= {MAX_DENSE_S}, got {big_s}")
    # single nucleus, basis (ground, excited)
    up = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))
    pz = sp.csr_matrix(np.diag([-1.0, 1.0]))
    eye = sp.identity(2, format="csr")

    def embed(op, site):
        out = sp.identity(1, format="csr")
        for k in range(big_s):
            out = sp.kron(out, op if k == site else eye, format="csr")
        return out

    plus_full = sum(embed(up, k) for k in range(big_s))
    z_full = 0.5 * sum(embed(pz, k) for k in range(big_s))

    dim = 2**big_s
    ground = np.zeros(dim)
    ground[0] = 1.0
    basis = [ground]
    for _ in range(big_s):
        v = plus_full @ basis[-1]
        basis.append(v / np.linalg.norm(v))
    b = np.column_stack(basis)

    plus = (b.T @ (plus_full @ b)).astype(complex)
    z = (b.T @ (z_full @ b)).astype(complex)
    return CollectiveOperators(
        big_s, _frozen(plus), _frozen(plus.conj().T.copy()), _frozen(z)
    )


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def su2_residuals(ops: CollectiveOperators) -> dict[str, float]:
    """Max-abs residuals of the SU(2) relations and of the Casimir identity."""
    p, m, z = ops.sigma_plus, ops.sigma_minus, ops.sigma_z
    j = ops.big_s / 2
    eye = np.eye(ops.big_s + 1)
    return {
        "[S+,S-]-2Sz": float(np.max(np.abs(commutator(p, m) - 2 * z))),
        "[Sz,S+]-S+": float(np.max(np.abs(commutator(z, p) - p))),
        "[Sz,S-]+S-": float(np.max(np.abs(commutator(z, m) + m))),
        "casimir": float(np.max(np.abs(p @ m - (j * (j + 1) * eye - z @ z + z)))),
    }


def rotate_sigma_z(big_s, pulse_area_argument):
    """<Sigma^z> after a resonant rotation of the fully excited state.

    ``pulse_area_argument`` is the full rotation angle 2 g~ \\int A dt.
    """
    return 0.5 * big_s * np.cos(pulse_area_argument)


def hp_coherent_amplitude(g_tilde: float, sqrt_s: float, pump_area) -> complex:
    """Coherent exciton amplitude beta = -i g~ sqrt(S) \\int A dt."""
    beta = -1j * g_tilde * sqrt_s * np.asarray(pump_area, dtype=float)
    return complex(beta) if beta.ndim == 0 else beta
