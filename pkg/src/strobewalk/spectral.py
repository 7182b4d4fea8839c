"""Hermitian eigendecomposition, eigenphase sectors and resonance detection.

Repeated detection every ``tau`` time units only sees the evolution operator
``U(tau) = exp(-i * tau * H)``, whose spectrum consists of phases
``E * tau mod 2*pi``.  Two energy levels whose phases coincide at a given
``tau`` are dynamically indistinguishable and must be merged into one
sector; ``fold_sectors`` performs that grouping, ``energy_sectors`` groups
by energy alone (the generic, off-resonance sector structure).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpectralError

__all__ = [
    "EigenSystem",
    "Sector",
    "SpectralDecomposition",
    "ResonantPeriod",
    "diagonalize",
    "energy_sectors",
    "fold_sectors",
    "evolution_operator",
    "resonant_periods",
    "is_resonant",
]

TWO_PI = 2.0 * math.pi

#: Absolute tolerance on eigenphase gaps when folding sectors.
PHASE_GROUP_TOL = 1e-8
#: Relative tolerance on eigenvalue gaps when grouping degenerate levels.
ENERGY_GROUP_RTOL = 1e-8
#: Phase gaps in (tolerance, NEAR_DEGENERATE_FACTOR * tolerance) produce a warning.
NEAR_DEGENERATE_FACTOR = 100.0
#: |phase gap mod 2pi| below this counts as a resonance.
RESONANCE_TOL = 1e-9

DEFAULT_DIM_CAP = 512


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True, eq=False)
class Sector:
    """One quasienergy sector: eigenvectors sharing an evolution phase.

    ``energies`` lists the member eigenvalues and ``vectors`` holds the
    matching orthonormal columns.  ``phase`` is the shared phase in
    [0, 2*pi), or None when the sector was grouped by energy alone.
    """

    energies: np.ndarray
    vectors: np.ndarray
    phase: float | None

    @property
    def degeneracy(self) -> int:
        return self.vectors.shape[1]

    @property
    def energy(self) -> float:
        """Representative (lowest) member energy."""
        return float(self.energies[0])

    def projector(self) -> np.ndarray:
        v = self.vectors
        return v @ v.conj().T


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Partition of an eigensystem into quasienergy sectors.

    ``tau`` is the detection period used for phase folding, or None for a
    plain energy grouping.  ``warnings`` lists near-degenerate gaps that
    fell between the grouping tolerance and 100x that tolerance.
    """

    sectors: tuple[Sector, ...]
    tau: float | None
    warnings: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return sum(s.degeneracy for s in self.sectors)

    @property
    def degeneracies(self) -> tuple[int, ...]:
        return tuple(s.degeneracy for s in self.sectors)


@dataclass(frozen=True)
class ResonantPeriod:
    """A detection period at which two energy levels fold together.

    ``pairs`` holds ``(l, l_prime, k)`` entries: the indices of the two
    distinct levels (in ascending-energy order) and the positive integer
    harmonic with ``tau * |E_l - E_l'| = 2*pi*k``.
    """

    tau: float
    pairs: tuple[tuple[int, int, int], ...]


def _fix_eigenvector_signs(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant component is positive real."""
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        col = fixed[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            pivot = col[idx[0]]
            fixed[:, k] = col * (np.conj(pivot) / abs(pivot))
    return fixed


def diagonalize(h: np.ndarray, *, dim_cap: int = DEFAULT_DIM_CAP) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix.

    Eigenvalues come out ascending; each eigenvector is rotated so that its
    first nonzero component is positive real, which makes the output
    deterministic for identical input bits.  The residual
    ``||H v - E v|| <= 1e-10 * ||H||`` and pairwise orthonormality within
    1e-10 are verified before returning.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {h.shape}")
    dim = h.shape[0]
    if dim > dim_cap:
        raise SpectralError(f"matrix dimension {dim} exceeds the cap {dim_cap}")
    scale = float(np.max(np.abs(h))) if dim else 0.0
    if not np.allclose(h, h.conj().T, atol=1e-12 * max(1.0, scale), rtol=0.0):
        raise SpectralError("matrix is not Hermitian")
    try:
        eigenvalues, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigendecomposition of {dim}x{dim} matrix did not converge: {exc}") from exc
    vectors = _fix_eigenvector_signs(vectors.astype(complex))

    hnorm = float(np.max(np.abs(eigenvalues))) if dim else 0.0
    residual = float(np.max(np.abs(h @ vectors - vectors * eigenvalues))) if dim else 0.0
    if residual > 1e-10 * max(hnorm, 1e-300):
        raise SpectralError(
            f"eigendecomposition residual {residual:.3e} exceeds 1e-10 * ||H|| = {1e-10 * hnorm:.3e}"
        )
    gram = vectors.conj().T @ vectors
    ortho = float(np.max(np.abs(gram - np.eye(dim))))
    if ortho > 1e-10:
        raise SpectralError(f"eigenvectors not orthonormal: deviation {ortho:.3e}")
    return EigenSystem(eigenvalues=eigenvalues, eigenvectors=vectors)


def _group_indices(keys: np.ndarray, tol: float) -> list[list[int]]:
    """Cluster ascending keys: break wherever the gap exceeds tol."""
    groups: list[list[int]] = []
    for idx in range(keys.shape[0]):
        if groups and keys[idx] - keys[groups[-1][-1]] <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def _near_degenerate_warnings(keys: np.ndarray, groups: list[list[int]], tol: float, what: str) -> list[str]:
    notes = []
    for g0, g1 in zip(groups, groups[1:]):
        gap = float(keys[g1[0]] - keys[g0[-1]])
        if gap < NEAR_DEGENERATE_FACTOR * tol:
            notes.append(
                f"near-degenerate {what} gap {gap:.3e} between groups at "
                f"{float(keys[g0[-1]]):.12g} and {float(keys[g1[0]]):.12g}"
            )
    return notes


def energy_sectors(es: EigenSystem, *, rtol: float = ENERGY_GROUP_RTOL) -> SpectralDecomposition:
    """Group eigenpairs into degenerate energy levels.

    The grouping tolerance is ``rtol`` relative to the spectral scale
    ``max(1, max|E|)``.
    """
    ev = es.eigenvalues
    scale = max(1.0, float(np.max(np.abs(ev))) if ev.size else 0.0)
    tol = rtol * scale
    groups = _group_indices(ev, tol)
    sectors = tuple(
        Sector(energies=ev[g].copy(), vectors=es.eigenvectors[:, g].copy(), phase=None)
        for g in groups
    )
    warnings = tuple(_near_degenerate_warnings(ev, groups, tol, "energy"))
    return SpectralDecomposition(sectors=sectors, tau=None, warnings=warnings)


def fold_sectors(es: EigenSystem, tau: float, *, phase_tol: float = PHASE_GROUP_TOL) -> SpectralDecomposition:
    """Group eigenpairs by their evolution phase ``E * tau mod 2*pi``.

    Levels whose phases agree within ``phase_tol`` merge into one sector,
    including pairs that meet across the 0 / 2*pi seam.  Merging happens
    exactly at the resonant detection periods; away from them the sectors
    coincide with the degenerate energy levels.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    ev = es.eigenvalues
    phases = np.mod(ev * tau, TWO_PI)
    order = np.lexsort((ev, phases))
    sorted_phases = phases[order]
    groups_sorted = _group_indices(sorted_phases, phase_tol)
    warnings = _near_degenerate_warnings(sorted_phases, groups_sorted, phase_tol, "phase")
    # Merge across the wraparound seam: last group joins the first when the
    # circular gap closes.
    if len(groups_sorted) > 1:
        seam_gap = (sorted_phases[groups_sorted[0][0]] + TWO_PI) - sorted_phases[groups_sorted[-1][-1]]
        if seam_gap <= phase_tol:
            groups_sorted[0] = groups_sorted.pop() + groups_sorted[0]
        elif seam_gap < NEAR_DEGENERATE_FACTOR * phase_tol:
            warnings.append(
                f"near-degenerate phase gap {seam_gap:.3e} across the 0/2pi seam"
            )

    sectors = []
    for g in groups_sorted:
        idx = order[g]
        idx = idx[np.argsort(es.eigenvalues[idx], kind="stable")]
        phase = float(np.min(np.mod(es.eigenvalues[idx] * tau, TWO_PI)))
        sectors.append(
            Sector(
                energies=es.eigenvalues[idx].copy(),
                vectors=es.eigenvectors[:, idx].copy(),
                phase=phase,
            )
        )
    sectors.sort(key=lambda s: s.phase)
    return SpectralDecomposition(sectors=tuple(sectors), tau=float(tau), warnings=tuple(warnings))


def evolution_operator(es: EigenSystem, tau: float) -> np.ndarray:
    """Unitary one-period evolution ``exp(-i * tau * H)`` from the eigensystem."""
    v = es.eigenvectors
    phases = np.exp(-1j * es.eigenvalues * tau)
    return (v * phases) @ v.conj().T


def _distinct_levels(es: EigenSystem) -> np.ndarray:
    sd = energy_sectors(es)
    return np.array([s.energy for s in sd.sectors])


def resonant_periods(es: EigenSystem, tau_max: float) -> list[ResonantPeriod]:
    """All resonant detection periods up to ``tau_max``.

    A period is resonant when ``tau * |E_l - E_l'|`` is a multiple of
    2*pi for some pair of distinct levels; every such period (including
    harmonics) is returned sorted ascending, with coinciding periods from
    different level pairs merged into one entry.
    """
    if tau_max <= 0:
        raise ValueError(f"tau_max must be positive, got {tau_max}")
    levels = _distinct_levels(es)
    hits: list[tuple[float, tuple[int, int, int]]] = []
    for l0 in range(levels.shape[0]):
        for l1 in range(l0 + 1, levels.shape[0]):
            gap = abs(levels[l1] - levels[l0])
            base = TWO_PI / gap
            k = 1
            while k * base <= tau_max * (1.0 + 1e-12):
                hits.append((k * base, (l0, l1, k)))
                k += 1
    hits.sort(key=lambda t: t[0])
    merged: list[ResonantPeriod] = []
    for tau_c, pair in hits:
        if merged and abs(tau_c - merged[-1].tau) <= 1e-9 * max(1.0, tau_c):
            merged[-1] = ResonantPeriod(tau=merged[-1].tau, pairs=merged[-1].pairs + (pair,))
        else:
            merged.append(ResonantPeriod(tau=tau_c, pairs=(pair,)))
    return merged


def is_resonant(es: EigenSystem, tau: float, *, tol: float = RESONANCE_TOL) -> bool:
    """Whether some pair of distinct levels folds together at this period."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    levels = _distinct_levels(es)
    for l0 in range(levels.shape[0]):
        for l1 in range(l0 + 1, levels.shape[0]):
            phase = math.fmod(abs(levels[l1] - levels[l0]) * tau, TWO_PI)
            if phase < tol or TWO_PI - phase < tol:
                return True
    return False
