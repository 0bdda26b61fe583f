"""Six channel models mapping density matrices to density matrices.

Four are deterministic completely positive trace-preserving maps
(depolarizing, dephasing, erasure, bosonic thermal loss); two are
stochastic surrogates that draw fresh randomness per use (free-space
turbulence, fiber polarization-mode dispersion).  Each model exposes a
plain ``*_apply`` function plus a frozen config dataclass; the
:class:`Channel` wrapper dispatches on the config and enforces the
dimension and randomness contracts at the call boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import ClassVar, Union

import numpy as np

from .states import (
    DensityMatrix,
    hermitize,
    kron,
    partial_trace_second,
    validate_density,
)


def _check_prob(p: float, what: str) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class DepolarizingConfig:
    kind: ClassVar[str] = "depolarizing"
    p: float

    def __post_init__(self):
        _check_prob(self.p, "depolarizing probability")


@dataclass(frozen=True)
class DephasingConfig:
    kind: ClassVar[str] = "dephasing"
    p: float

    def __post_init__(self):
        _check_prob(self.p, "dephasing probability")


@dataclass(frozen=True)
class ErasureConfig:
    kind: ClassVar[str] = "erasure"
    p: float

    def __post_init__(self):
        _check_prob(self.p, "erasure probability")


@dataclass(frozen=True)
class BosonicConfig:
    """Thermal-loss parameters: dB attenuation, environment occupancy, Fock cutoff."""

    kind: ClassVar[str] = "bosonic"
    loss_db: float
    n_th: float = 0.0
    fock_dim: int = 2

    def __post_init__(self):
        if self.loss_db < 0.0:
            raise ValueError(f"loss_db must be >= 0, got {self.loss_db}")
        if self.n_th < 0.0:
            raise ValueError(f"n_th must be >= 0, got {self.n_th}")
        if self.fock_dim < 2:
            raise ValueError(f"fock_dim must be >= 2, got {self.fock_dim}")

    @property
    def eta(self) -> float:
        return float(10.0 ** (-self.loss_db / 10.0))


@dataclass(frozen=True)
class TurbulenceConfig:
    """Free-space fade surrogate: pointing jitter, scintillation, fixed path loss.

    ``sigma_p`` and ``w0`` share one length unit; ``rytov_var`` is the
    Rytov variance controlling scintillation strength (0 disables it).
    """

    kind: ClassVar[str] = "turbulence"
    sigma_p: float
    w0: float
    rytov_var: float
    path_loss_db: float = 0.0

    def __post_init__(self):
        if self.w0 <= 0.0:
            raise ValueError(f"beam waist w0 must be > 0, got {self.w0}")
        if self.sigma_p < 0.0:
            raise ValueError(f"sigma_p must be >= 0, got {self.sigma_p}")
        if self.rytov_var < 0.0:
            raise ValueError(f"rytov_var must be >= 0, got {self.rytov_var}")
        if self.path_loss_db < 0.0:
            raise ValueError(f"path_loss_db must be >= 0, got {self.path_loss_db}")


@dataclass(frozen=True)
class PMDConfig:
    """Polarization-mode-dispersion surrogate over concatenated fiber sections.

    ``dgd`` is the total differential group delay and ``sigma_omega`` the
    source spectral width; only their product matters, so both are
    dimensionless here.
    """

    kind: ClassVar[str] = "pmd"
    dgd: float
    sigma_omega: float
    n_sections: int = 8

    def __post_init__(self):
        if self.dgd < 0.0:
            raise ValueError(f"dgd must be >= 0, got {self.dgd}")
        if self.sigma_omega < 0.0:
            raise ValueError(f"sigma_omega must be >= 0, got {self.sigma_omega}")
        if self.n_sections < 1:
            raise ValueError(f"n_sections must be >= 1, got {self.n_sections}")


ChannelConfig = Union[
    DepolarizingConfig,
    DephasingConfig,
    ErasureConfig,
    BosonicConfig,
    TurbulenceConfig,
    PMDConfig,
]

_CONFIG_TYPES = {
    cls.kind: cls
    for cls in (
        DepolarizingConfig,
        DephasingConfig,
        ErasureConfig,
        BosonicConfig,
        TurbulenceConfig,
        PMDConfig,
    )
}


def config_from_dict(d: dict) -> ChannelConfig:
    """Build a channel config from a parsed JSON object with a ``type`` key."""
    d = dict(d)
    kind = d.pop("type", None)
    if kind not in _CONFIG_TYPES:
        raise ValueError(
            f"unknown channel type {kind!r}; expected one of {sorted(_CONFIG_TYPES)}"
        )
    cls = _CONFIG_TYPES[kind]
    allowed = {f.name for f in fields(cls)}
    unknown = set(d) - allowed
    if unknown:
        raise ValueError(f"unknown parameters for {kind} channel: {sorted(unknown)}")
    return cls(**d)


def config_to_dict(cfg: ChannelConfig) -> dict:
    d: dict = {"type": cfg.kind}
    for f in fields(cfg):
        d[f.name] = getattr(cfg, f.name)
    return d


# --- deterministic qubit maps ---


def depolarizing_apply(p: float, rho: DensityMatrix) -> DensityMatrix:
    """(1-p) rho + p I/2."""
    if rho.dim != 2:
        raise ValueError(f"depolarizing map is defined on qubits, got dim {rho.dim}")
    _check_prob(p, "depolarizing probability")
    out = (1.0 - p) * rho.mat + p * np.eye(2, dtype=complex) / 2.0
    return validate_density(out)


def dephasing_apply(p: float, rho: DensityMatrix) -> DensityMatrix:
    """Scale the off-diagonal coherences by (1-p); diagonal untouched."""
    if rho.dim != 2:
        raise ValueError(f"dephasing map is defined on qubits, got dim {rho.dim}")
    _check_prob(p, "dephasing probability")
    out = rho.mat * (1.0 - p)
    out[np.diag_indices(2)] = rho.mat.diagonal()
    return validate_density(out)


def erasure_apply(p: float, rho: DensityMatrix) -> DensityMatrix:
    """Embed into dim d+1 and route weight p to the orthogonal flag state."""
    _check_prob(p, "erasure probability")
    d = rho.dim
    out = np.zeros((d + 1, d + 1), dtype=complex)
    out[:d, :d] = (1.0 - p) * rho.mat
    out[d, d] = p
    return validate_density(out)


def pure_loss_apply(eta: float, rho: DensityMatrix) -> DensityMatrix:
    """Amplitude damping with transmissivity eta: K0 = diag(1, sqrt(eta)), K1 = sqrt(1-eta)|0><1|."""
    if rho.dim != 2:
        raise ValueError(f"pure-loss map is defined on qubits, got dim {rho.dim}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(eta)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(1.0 - eta)], [0.0, 0.0]], dtype=complex)
    out = k0 @ rho.mat @ k0.conj().T + k1 @ rho.mat @ k1.conj().T
    return validate_density(out)


# --- bosonic thermal loss ---


def thermal_state(n_th: float, fock_dim: int) -> DensityMatrix:
    """Truncated thermal state, geometric weights renormalized on the cutoff."""
    if n_th < 0.0:
        raise ValueError(f"n_th must be >= 0, got {n_th}")
    if fock_dim < 2:
        raise ValueError(f"fock_dim must be >= 2, got {fock_dim}")
    if n_th == 0.0:
        weights = np.zeros(fock_dim)
        weights[0] = 1.0
    else:
        ratio = n_th / (1.0 + n_th)
        weights = ratio ** np.arange(fock_dim) / (1.0 + n_th)
        weights = weights / weights.sum()
    return validate_density(np.diag(weights).astype(complex))


def beamsplitter_unitary(eta: float, fock_dim: int) -> np.ndarray:
    """Two-mode beamsplitter exp(theta (a^dag b - a b^dag)) with cos^2(theta) = eta.

    Built by exponentiating the (anti-Hermitian) generator through an
    eigendecomposition of iG, so no matrix-exponential dependency is
    needed.  The result is exactly unitary up to floating-point error but
    mixes Fock layers above the cutoff only through the truncated ladder
    operators, which is the standard finite-dimensional approximation.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    if fock_dim < 2:
        raise ValueError(f"fock_dim must be >= 2, got {fock_dim}")
    theta = float(np.arccos(np.sqrt(eta)))
    a = np.diag(np.sqrt(np.arange(1, fock_dim)), k=1).astype(complex)
    adag = a.conj().T
    gen = theta * (kron(adag, a) - kron(a, adag))
    # gen is anti-Hermitian, so i*gen is Hermitian and eigh applies.
    vals, vecs = np.linalg.eigh(1j * gen)
    return (vecs * np.exp(-1j * vals)) @ vecs.conj().T


def bosonic_apply(
    loss_db: float, n_th: float, fock_dim: int, rho: DensityMatrix
) -> DensityMatrix:
    """Thermal-loss channel via the two-mode dilation: couple to a thermal
    environment on a beamsplitter and trace the environment out."""
    cfg = BosonicConfig(loss_db=loss_db, n_th=n_th, fock_dim=fock_dim)
    if rho.dim != fock_dim:
        raise ValueError(
            f"state dim {rho.dim} does not match fock_dim {fock_dim}"
        )
    u = beamsplitter_unitary(cfg.eta, fock_dim)
    env = thermal_state(n_th, fock_dim)
    return _bosonic_step(u, env, rho, fock_dim)


def _bosonic_step(
    u: np.ndarray, env: DensityMatrix, rho: DensityMatrix, fock_dim: int
) -> DensityMatrix:
    joint = u @ kron(rho.mat, env.mat) @ u.conj().T
    return validate_density(partial_trace_second(joint, fock_dim, fock_dim))


# --- turbulence surrogate ---


def pointing_loss_factor(sigma_p: float, w0: float) -> float:
    """Mean fractional power kept under Gaussian pointing jitter: exp(-2 (sigma_p/w0)^2)."""
    if w0 <= 0.0:
        raise ValueError(f"beam waist w0 must be > 0, got {w0}")
    if sigma_p < 0.0:
        raise ValueError(f"sigma_p must be >= 0, got {sigma_p}")
    return float(np.exp(-2.0 * (sigma_p / w0) ** 2))


def sample_scintillation(rytov_var: float, rng: np.random.Generator) -> float:
    """Unit-mean Gamma-Gamma irradiance sample; rytov_var = 0 returns exactly 1."""
    if rytov_var < 0.0:
        raise ValueError(f"rytov_var must be >= 0, got {rytov_var}")
    if rytov_var == 0.0:
        return 1.0
    sr125 = rytov_var ** 1.2  # sigma_R^(12/5)
    alpha = 1.0 / np.expm1(0.49 * rytov_var / (1.0 + 1.11 * sr125) ** (7.0 / 6.0))
    beta = 1.0 / np.expm1(0.51 * rytov_var / (1.0 + 0.69 * sr125) ** (5.0 / 6.0))
    x = rng.gamma(shape=alpha, scale=1.0 / alpha)
    y = rng.gamma(shape=beta, scale=1.0 / beta)
    return float(x * y)


def turbulence_apply(
    cfg: TurbulenceConfig, rho: DensityMatrix, rng: np.random.Generator
) -> DensityMatrix:
    """One atmospheric fade: sample a transmissivity, apply the pure-loss map."""
    eta = (
        pointing_loss_factor(cfg.sigma_p, cfg.w0)
        * sample_scintillation(cfg.rytov_var, rng)
        * 10.0 ** (-cfg.path_loss_db / 10.0)
    )
    eta = min(max(eta, 0.0), 1.0)
    assert 0.0 <= eta <= 1.0
    return pure_loss_apply(eta, rho)


# --- polarization-mode dispersion surrogate ---


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with phases fixed from R's diagonal."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def pmd_apply(
    cfg: PMDConfig, rho: DensityMatrix, rng: np.random.Generator
) -> DensityMatrix:
    """Concatenated-section PMD: per section, dephase by the section's
    coherence factor in a Haar-random polarization basis.

    The per-section delay is dgd / sqrt(n_sections) so section delays add
    in quadrature to the configured total, and the coherence factor for a
    Gaussian spectrum is exp(-(sigma_omega * tau_sec)^2 / 2).
    """
    if rho.dim != 2:
        raise ValueError(f"PMD map is defined on qubits, got dim {rho.dim}")
    tau_sec = cfg.dgd / np.sqrt(cfg.n_sections)
    nu = float(np.exp(-((cfg.sigma_omega * tau_sec) ** 2) / 2.0))
    out = rho.mat.copy()
    for _ in range(cfg.n_sections):
        u = haar_unitary(2, rng)
        rot = u.conj().T @ out @ u
        rot[0, 1] *= nu
        rot[1, 0] *= nu
        out = u @ rot @ u.conj().T
    return validate_density(hermitize(out))


class Channel:
    """Config-dispatched channel with fixed input and output dimensions.

    Deterministic channels ignore the ``rng`` argument; stochastic ones
    (turbulence, PMD) require it so the caller controls every random
    stream explicitly.
    """

    def __init__(self, config: ChannelConfig, input_dim: int = 2):
        if isinstance(config, BosonicConfig):
            if input_dim != config.fock_dim:
                raise ValueError(
                    f"bosonic channel needs input_dim == fock_dim "
                    f"({config.fock_dim}), got {input_dim}"
                )
            # The unitary and environment state are reused for every symbol.
            self._unitary = beamsplitter_unitary(config.eta, config.fock_dim)
            self._env = thermal_state(config.n_th, config.fock_dim)
        elif input_dim != 2:
            raise ValueError(
                f"{config.kind} channel is defined on qubits, got input_dim {input_dim}"
            )
        self.config = config
        self.input_dim = input_dim
        self.output_dim = input_dim + 1 if isinstance(config, ErasureConfig) else input_dim

    @property
    def is_stochastic(self) -> bool:
        return isinstance(self.config, (TurbulenceConfig, PMDConfig))

    def apply(self, rho: DensityMatrix, rng: np.random.Generator | None = None) -> DensityMatrix:
        if rho.dim != self.input_dim:
            raise ValueError(
                f"channel expects dim {self.input_dim} input, got dim {rho.dim}"
            )
        cfg = self.config
        if isinstance(cfg, DepolarizingConfig):
            return depolarizing_apply(cfg.p, rho)
        if isinstance(cfg, DephasingConfig):
            return dephasing_apply(cfg.p, rho)
        if isinstance(cfg, ErasureConfig):
            return erasure_apply(cfg.p, rho)
        if isinstance(cfg, BosonicConfig):
            return _bosonic_step(self._unitary, self._env, rho, cfg.fock_dim)
        if rng is None:
            raise ValueError(f"{cfg.kind} channel is stochastic and requires an rng")
        if isinstance(cfg, TurbulenceConfig):
            return turbulence_apply(cfg, rho, rng)
        return pmd_apply(cfg, rho, rng)
