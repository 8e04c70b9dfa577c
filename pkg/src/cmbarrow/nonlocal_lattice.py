"""Non-local operator calculus on a periodic 1+1-D lattice.

Objects
-------
ScalarField
    complex array of shape ``(n_t, n_z)``, one value per site x = (t, z).
Kernel
    complex array of shape ``(n_t, n_z, n_t, n_z)`` holding K(x, x').
PotentialKernel
    array of shape ``(2, n_t, n_z, n_t, n_z)``, components A_0 (t) and A_1 (z).
FieldTensor
    array of shape ``(2, 2, n_t, n_z, n_t, n_z)``, antisymmetric in the first
    two axes.

Integrals over x' become volume-weighted sums, and derivatives become
periodic central differences on either site slot. The two slots use
independent stencils, so the derivatives in x and x' commute to rounding and
the gauge identities hold at machine precision. Index raising is the
identity (Euclidean signature).

A "broken" control replaces the x' derivative by s(x) * d/dx' with a
site-dependent factor s, which violates the commutation condition on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Lattice",
    "identity_kernel",
    "apply_kernel",
    "compose_kernels",
    "d_x",
    "d_xprime",
    "d_field",
    "reference_modulation",
    "commutator_residual",
    "transform_potential",
    "field_tensor",
    "gauge_invariance_residual",
    "covariant_derivative",
    "covariance_residual",
    "random_field",
    "random_kernel",
    "random_potential",
]


@dataclass(frozen=True)
class Lattice:
    """Periodic (t, z) lattice."""

    n_t: int
    n_z: int
    h_t: float
    h_z: float

    def __post_init__(self):
        if self.n_t < 8 or self.n_z < 8:
            raise DomainError("lattice needs at least 8 sites per direction")
        if not (self.h_t > 0 and self.h_z > 0):
            raise DomainError("lattice spacings must be positive")

    @classmethod
    def unit_box(cls, n_t: int, n_z: int | None = None) -> "Lattice":
        """Lattice covering the unit torus, spacing 1/n per direction."""
        n_z = n_t if n_z is None else n_z
        return cls(n_t, n_z, 1.0 / n_t, 1.0 / n_z)

    @property
    def field_shape(self) -> tuple[int, int]:
        return (self.n_t, self.n_z)

    @property
    def kernel_shape(self) -> tuple[int, int, int, int]:
        return (self.n_t, self.n_z, self.n_t, self.n_z)

    @property
    def volume(self) -> float:
        return self.h_t * self.h_z

    @property
    def extent(self) -> tuple[float, float]:
        return (self.n_t * self.h_t, self.n_z * self.h_z)

    def spacing(self, mu: int) -> float:
        return (self.h_t, self.h_z)[_check_index(mu)]

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        t = np.arange(self.n_t) * self.h_t
        z = np.arange(self.n_z) * self.h_z
        return np.meshgrid(t, z, indexing="ij")


def _check_index(mu) -> int:
    if isinstance(mu, bool) or mu not in (0, 1):
        raise DomainError(f"lattice index must be 0 or 1, got {mu!r}")
    return int(mu)


def _check_kernel(lat: Lattice, K: np.ndarray, name: str = "kernel") -> np.ndarray:
    K = np.asarray(K)
    if K.shape != lat.kernel_shape:
        raise DomainError(f"{name} has shape {K.shape}, expected {lat.kernel_shape}")
    return K


def _check_field(lat: Lattice, phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi)
    if phi.shape != lat.field_shape:
        raise DomainError(f"field has shape {phi.shape}, expected {lat.field_shape}")
    return phi


def _check_potential(lat: Lattice, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    if A.shape != (2,) + lat.kernel_shape:
        raise DomainError(f"potential has shape {A.shape}, expected {(2,) + lat.kernel_shape}")
    return A


def _check_modulation(lat: Lattice, s):
    if s is None:
        return None
    s = np.asarray(s, dtype=np.float64)
    if s.shape != lat.field_shape:
        raise DomainError(f"modulation has shape {s.shape}, expected {lat.field_shape}")
    return s


def _inf_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


# -- Kernel algebra --------------------------------------------------------


def identity_kernel(lat: Lattice) -> np.ndarray:
    """Kronecker delta divided by the cell volume, the unit of :func:`compose_kernels`."""
    n = lat.n_t * lat.n_z
    return (np.eye(n, dtype=np.complex128) / lat.volume).reshape(lat.kernel_shape)


def apply_kernel(lat: Lattice, P: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """(P phi)(x) = sum_{x'} P(x, x') phi(x') h_t h_z."""
    P = _check_kernel(lat, P)
    phi = _check_field(lat, phi)
    n = lat.n_t * lat.n_z
    out = P.reshape(n, n) @ phi.reshape(n)
    return out.reshape(lat.field_shape) * lat.volume


def compose_kernels(lat: Lattice, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """(PQ)(x, x'') = sum_{x'} P(x, x') Q(x', x'') h_t h_z."""
    P = _check_kernel(lat, P, "P")
    Q = _check_kernel(lat, Q, "Q")
    n = lat.n_t * lat.n_z
    return ((P.reshape(n, n) @ Q.reshape(n, n)) * lat.volume).reshape(lat.kernel_shape)


def _central(a: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (np.roll(a, -1, axis=axis) - np.roll(a, 1, axis=axis)) / (2.0 * h)


def d_x(lat: Lattice, K: np.ndarray, mu: int) -> np.ndarray:
    """Central difference of K(x, x') in x^mu."""
    mu = _check_index(mu)
    return _central(_check_kernel(lat, K), mu, lat.spacing(mu))


def d_xprime(lat: Lattice, K: np.ndarray, mu: int, s=None) -> np.ndarray:
    """Central difference of K(x, x') in x'^mu, optionally multiplied by s(x)."""
    mu = _check_index(mu)
    out = _central(_check_kernel(lat, K), 2 + mu, lat.spacing(mu))
    s = _check_modulation(lat, s)
    if s is not None:
        out = s[:, :, None, None] * out
    return out


def d_field(lat: Lattice, phi: np.ndarray, mu: int) -> np.ndarray:
    """Central difference of a local field in x^mu."""
    mu = _check_index(mu)
    return _central(_check_field(lat, phi), mu, lat.spacing(mu))


def reference_modulation(lat: Lattice, amplitude: float = 0.5) -> np.ndarray:
    """s(x) = 1 + amplitude sin(2 pi t / L_t), used by the broken control."""
    t, _ = lat.coordinates()
    return 1.0 + amplitude * np.sin(2.0 * np.pi * t / lat.extent[0])


# -- Gauge laws ------------------------------------------------------------


def commutator_residual(lat: Lattice, K: np.ndarray, mu: int, nu: int, s=None) -> float:
    """||d^mu d'^nu K - d'^nu d^mu K||_inf / ||K||_inf.

    ``s=None`` is the standard control; an array ``s`` selects the broken
    control where the x' derivative carries the factor s(x).
    """
    K = _check_kernel(lat, K)
    scale = _inf_norm(K)
    if scale == 0:
        raise DomainError("commutator residual is undefined for the zero kernel")
    a = d_x(lat, d_xprime(lat, K, nu, s), mu)
    b = d_xprime(lat, d_x(lat, K, mu), nu, s)
    return _inf_norm(a - b) / scale


def transform_potential(lat: Lattice, A: np.ndarray, Lam: np.ndarray, s=None) -> np.ndarray:
    """A'_mu = A_mu + d_mu Lambda + d'_mu Lambda."""
    A = _check_potential(lat, A)
    Lam = _check_kernel(lat, Lam, "Lambda")
    return np.stack([A[mu] + d_x(lat, Lam, mu) + d_xprime(lat, Lam, mu, s) for mu in (0, 1)])


def _total_derivative(lat, K, mu, s):
    return d_x(lat, K, mu) + d_xprime(lat, K, mu, s)


def field_tensor(lat: Lattice, A: np.ndarray, s=None) -> np.ndarray:
    """F^{mu nu} = (d^mu + d'^mu) A^nu - (d^nu + d'^nu) A^mu.

    Only F^{01} is computed; F^{10} is its exact negative and the diagonal
    is exactly zero.
    """
    A = _check_potential(lat, A)
    F01 = _total_derivative(lat, A[1], 0, s) - _total_derivative(lat, A[0], 1, s)
    F = np.zeros((2, 2) + lat.kernel_shape, dtype=np.result_type(F01, np.complex128))
    F[0, 1] = F01
    F[1, 0] = -F01
    return F


def gauge_invariance_residual(lat: Lattice, A: np.ndarray, Lam: np.ndarray, s=None,
                              floor: float = np.finfo(float).tiny) -> float:
    """Relative change of the field tensor under the gauge transformation.

    ||F(A') - F(A)||_inf / max(||F(A)||_inf, floor); the same control is
    used in the transformation and in the field tensor.
    """
    F0 = field_tensor(lat, A, s)
    F1 = field_tensor(lat, transform_potential(lat, A, Lam, s), s)
    return _inf_norm(F1 - F0) / max(_inf_norm(F0), floor)


def covariant_derivative(lat: Lattice, phi: np.ndarray, A: np.ndarray, mu: int, e: float) -> np.ndarray:
    """D_mu phi = d_mu phi + i e (A_mu phi) for a local field phi.

    The x' derivative of a local field vanishes, so it does not appear.
    """
    A = _check_potential(lat, A)
    return d_field(lat, phi, mu) + 1j * e * apply_kernel(lat, A[mu], phi)


def covariance_residual(lat: Lattice, phi: np.ndarray, A: np.ndarray, Lam: np.ndarray, e: float) -> float:
    """Departure from first-order covariance of the non-local derivative.

    With phi' = phi - i e (Lambda phi) and A' the transformed potential,
    R_mu = D'_mu phi' - [D_mu phi - i e Lambda (D_mu phi)]. The first-order
    terms cancel exactly by periodic summation by parts, so max_mu ||R_mu||_inf
    is O(e^2).
    """
    if e < 0:
        raise DomainError("coupling must be >= 0")
    phi = _check_field(lat, phi)
    A_new = transform_potential(lat, A, Lam)
    phi_new = phi - 1j * e * apply_kernel(lat, Lam, phi)
    worst = 0.0
    for mu in (0, 1):
        D = covariant_derivative(lat, phi, A, mu, e)
        expected = D - 1j * e * apply_kernel(lat, Lam, D)
        R = covariant_derivative(lat, phi_new, A_new, mu, e) - expected
        worst = max(worst, _inf_norm(R))
    return worst


# -- Random smooth inputs --------------------------------------------------

# lattice wavenumbers (in units of 2 pi / L) used for random inputs; 4 per direction
_MODES = np.array([-1, 0, 1, 2])


def _basis(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.outer(_MODES, np.arange(n)) / n)


def _coefficients(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_field(lat: Lattice, rng: np.random.Generator) -> np.ndarray:
    C = _coefficients(rng, (_MODES.size,) * 2) / _MODES.size
    return np.einsum("ab,at,bz->tz", C, _basis(lat.n_t), _basis(lat.n_z))


def random_kernel(lat: Lattice, rng: np.random.Generator) -> np.ndarray:
    C = _coefficients(rng, (_MODES.size,) * 4) / _MODES.size**2
    bt, bz = _basis(lat.n_t), _basis(lat.n_z)
    return np.einsum("abcd,at,bz,cu,dv->tzuv", C, bt, bz, bt, bz, optimize=True)


def random_potential(lat: Lattice, rng: np.random.Generator) -> np.ndarray:
    return np.stack([random_kernel(lat, rng) for _ in (0, 1)])
