"""Shared cached builders and independent oracles for the test suite."""

from functools import cache

import numpy as np
import scipy.linalg

import strobewalk as sw


@cache
def graph(spec: str) -> sw.WeightedGraph:
    return sw.build_named(spec)


@cache
def ham(spec: str, gamma: float = 1.0) -> np.ndarray:
    return sw.hamiltonian(graph(spec), gamma)


@cache
def eigensystem(spec: str) -> sw.EigenSystem:
    return sw.diagonalize(ham(spec))


@cache
def group(spec: str) -> sw.SymmetryGroup:
    return sw.automorphisms(graph(spec))


@cache
def node_stabilizer(spec: str, node: int) -> sw.StabilizerGroup:
    g = graph(spec)
    return sw.stabilizer(group(spec), sw.localized_state(g.node_count, node))


def sectors(spec: str, tau: float | None = None) -> sw.SpectralDecomposition:
    es = eigensystem(spec)
    return sw.energy_sectors(es) if tau is None else sw.fold_sectors(es, tau)


def basis(spec: str, node: int) -> np.ndarray:
    return sw.localized_state(graph(spec).node_count, node)


def ring_eigenstate(length: int, k: int) -> np.ndarray:
    """Free-wave eigenstate of the ring Hamiltonian with wavenumber k."""
    x = np.arange(length)
    return np.exp(1j * 2.0 * np.pi * k * x / length) / np.sqrt(length)


def expm_evolution(h: np.ndarray, tau: float) -> np.ndarray:
    """Independent evolution operator via scipy's matrix exponential."""
    return scipy.linalg.expm(-1j * tau * np.asarray(h, dtype=complex))


def protocol_amplitudes_expm(h, detect_state, initial_state, tau, n_max):
    """Reference protocol iteration built only on the matrix exponential."""
    u = expm_evolution(h, tau)
    psi = np.asarray(initial_state, dtype=complex).copy()
    amps = []
    for _ in range(n_max):
        psi = u @ psi
        amp = complex(np.vdot(detect_state, psi))
        amps.append(amp)
        psi = psi - amp * np.asarray(detect_state)
    return np.array(amps), psi


def random_hermitian(rng: np.random.Generator, dim: int, complex_entries: bool = True) -> np.ndarray:
    a = rng.normal(size=(dim, dim))
    if complex_entries:
        a = a + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0


def random_graph(rng: np.random.Generator, max_nodes: int = 10) -> sw.WeightedGraph:
    n = int(rng.integers(3, max_nodes + 1))
    p = rng.uniform(0.3, 0.9)
    edges = [
        (i, j, 1.0)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return sw.WeightedGraph(node_count=n, edges=tuple(edges), onsite=(0.0,) * n)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)
