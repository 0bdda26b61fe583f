"""Square-root-measurement detection.

The detector for a codebook {p_i, rho_i} is the pretty-good measurement

    E_i = p_i  S rho_i S,   S = rhobar^(-1/2),   rhobar = sum_i p_i rho_i,

completed on the support of rhobar.  Decisions are the argmax of the
outcome probabilities Tr(E_i rho) by default; Born-rule sampling is
available as an explicit opt-in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modulation import DetectorCodebook
from .states import DensityMatrix, hermitize, inv_sqrt_psd

_PSD_TOL = 1e-9


@dataclass(frozen=True)
class POVM:
    """Validated measurement: PSD elements summing to the identity.

    ``labels[i]`` is the symbol decision reported when element i fires;
    the erasure outcome carries the label -1.
    """

    elements: tuple[np.ndarray, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.elements) == 0:
            raise ValueError("POVM needs at least one element")
        if len(self.labels) != len(self.elements):
            raise ValueError("one label per element required")
        dim = self.elements[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for e in self.elements:
            if e.shape != (dim, dim):
                raise ValueError("POVM elements must share one square shape")
            herm_dev = float(np.max(np.abs(e - e.conj().T)))
            if herm_dev > _PSD_TOL:
                raise ValueError(f"POVM element not Hermitian (deviation {herm_dev:.3e})")
            min_eig = float(np.linalg.eigvalsh(hermitize(e))[0])
            if min_eig < -_PSD_TOL:
                raise ValueError(
                    f"POVM element not PSD (min eigenvalue {min_eig:.3e})"
                )
            total += e
        comp_dev = float(np.max(np.abs(total - np.eye(dim))))
        if comp_dev > _PSD_TOL:
            raise ValueError(
                f"POVM does not resolve the identity (deviation {comp_dev:.3e})"
            )
        # Stacked copy for vectorized scoring; kept alongside the tuple.
        object.__setattr__(self, "_stack", np.stack([hermitize(e) for e in self.elements]))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)


def measurement_scores(povm: POVM, rho: DensityMatrix) -> np.ndarray:
    """Outcome probabilities Tr(E_i rho) as a real vector."""
    if rho.dim != povm.dim:
        raise ValueError(f"state dim {rho.dim} does not match POVM dim {povm.dim}")
    stack: np.ndarray = povm._stack  # noqa: SLF001 - own class attribute
    scores = np.einsum("kij,ji->k", stack, rho.mat)
    imag = float(np.max(np.abs(scores.imag)))
    if imag > _PSD_TOL:
        raise ValueError(f"non-real outcome probabilities (imaginary part {imag:.3e})")
    return scores.real


def build_pgm(codebook: DetectorCodebook, eig_cut: float = 1e-10) -> POVM:
    """Pretty-good measurement for the codebook's states and priors."""
    dim = codebook.dim
    rhobar = np.zeros((dim, dim), dtype=complex)
    for p, state in zip(codebook.priors, codebook.states):
        rhobar += p * state.mat
    s = inv_sqrt_psd(rhobar, eig_cut=eig_cut)
    elements = tuple(
        hermitize(p * (s @ state.mat @ s))
        for p, state in zip(codebook.priors, codebook.states)
    )
    try:
        return POVM(elements=elements, labels=tuple(range(codebook.M)))
    except ValueError as err:
        # Completeness fails exactly when rhobar is rank-deficient, i.e. the
        # reference states do not span the space the detector acts on.
        raise ValueError(
            "pretty-good measurement is incomplete: the codebook states do not "
            f"span the full {dim}-dimensional space ({err})"
        ) from err


def embed_povm_with_erasure(povm: POVM, out_dim: int) -> POVM:
    """Zero-pad a POVM to a larger space; the residual becomes the erasure outcome.

    The padded elements act as before on the original subspace and vanish
    on the new directions, so E_era = I - sum_i E_i is automatically PSD
    (up to roundoff, which is clipped).
    """
    if out_dim <= povm.dim:
        raise ValueError(
            f"target dim {out_dim} must exceed current POVM dim {povm.dim}"
        )
    padded = []
    for e in povm.elements:
        big = np.zeros((out_dim, out_dim), dtype=complex)
        big[: povm.dim, : povm.dim] = e
        padded.append(big)
    residual = np.eye(out_dim, dtype=complex) - sum(padded)
    vals, vecs = np.linalg.eigh(hermitize(residual))
    if float(vals[0]) < -_PSD_TOL:
        raise ValueError(
            f"erasure completion is not PSD (min eigenvalue {vals[0]:.3e})"
        )
    residual = hermitize((vecs * np.clip(vals, 0.0, None)) @ vecs.conj().T)
    return POVM(
        elements=tuple(padded) + (residual,),
        labels=povm.labels + (-1,),
    )


def decide(povm: POVM, rho: DensityMatrix) -> int:
    """Hard decision: label of the highest-probability outcome.

    np.argmax returns the first maximum, so exact ties resolve to the
    lowest-index element deterministically.
    """
    return povm.labels[int(np.argmax(measurement_scores(povm, rho)))]


def decide_sampled(povm: POVM, rho: DensityMatrix, rng: np.random.Generator) -> int:
    """Born-rule decision: sample the outcome from its probability vector."""
    scores = measurement_scores(povm, rho)
    if float(scores.min()) < -_PSD_TOL:
        raise ValueError(f"negative outcome probability {scores.min():.3e}")
    scores = np.clip(scores, 0.0, None)
    total = float(scores.sum())
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"outcome probabilities sum to {total!r}, not 1")
    return povm.labels[int(rng.choice(len(scores), p=scores / total))]
