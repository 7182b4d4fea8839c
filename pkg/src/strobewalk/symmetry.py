"""Graph symmetries and what they imply for the detection probability.

The permutations that preserve the weighted adjacency structure and the
on-site energies commute with the walk Hamiltonian.  The subgroup that
additionally fixes the detection state (up to a unit phase factor) maps
initial states onto partners with identical detection statistics.  From
that subgroup follow, without any spectral information about the initial
state:

* the dimension ``orbit_rank`` of the span of a state's symmetry orbit,
* the projector onto the symmetric subspace and the symmetric component
  of any state,
* an upper bound ``<psi|P|psi>`` on the total detection probability
  (``1/orbit_rank`` for localized states),
* an explicit orthonormal set of never-detected states built from any
  orbit of equivalent basis states,
* a saturation test telling when the bound is an equality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .detection import bright_eigenstates
from .errors import AsymmetricStateError, GroupSearchError, StateError, StrobewalkError
from .graphs import WeightedGraph
from .spectral import SpectralDecomposition
from .states import as_state

__all__ = [
    "Permutation",
    "SymmetryGroup",
    "StabilizerGroup",
    "automorphisms",
    "stabilizer",
    "orbit_rank",
    "symmetry_projector",
    "symmetric_part",
    "equivalent_dark_basis",
    "upper_bound",
    "saturation_check",
    "node_orbits",
]

#: ||S psi_d - p psi_d|| below this admits S into the stabilizer.
STABILIZER_TOL = 1e-10
#: Relative singular-value cutoff for orbit span ranks.
RANK_TOL = 1e-10

DEFAULT_NODE_CAP = 64
DEFAULT_ORDER_CAP = 10**6


@dataclass(frozen=True)
class Permutation:
    """Node relabeling acting on states as ``(S psi)[image[r]] = psi[r]``."""

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a permutation of 0..{len(self.image) - 1}: {self.image}")

    @property
    def size(self) -> int:
        return len(self.image)

    @property
    def is_identity(self) -> bool:
        return all(i == r for r, i in enumerate(self.image))

    def compose(self, other: "Permutation") -> "Permutation":
        """Apply ``other`` first, then this permutation."""
        return Permutation(tuple(self.image[i] for i in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for r, i in enumerate(self.image):
            inv[i] = r
        return Permutation(tuple(inv))

    def apply(self, state: np.ndarray) -> np.ndarray:
        out = np.empty_like(np.asarray(state))
        out[list(self.image)] = state
        return out

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        m[list(self.image), range(self.size)] = 1.0
        return m


def identity_permutation(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def _compose_images(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[i] for i in q)


def _closure_of(generators: list[tuple[int, ...]], n: int) -> set[tuple[int, ...]]:
    """Subgroup generated by the given images, by breadth-first products."""
    ident = tuple(range(n))
    known = {ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for a in frontier:
            for g in generators:
                prod = _compose_images(g, a)
                if prod not in known:
                    known.add(prod)
                    fresh.append(prod)
        frontier = fresh
    return known


def _generating_set(images: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Greedy small generating set, verified to reproduce the element set.

    The reconstruction doubles as a closure proof: the generated subgroup
    is closed by construction, so equality with the element set certifies
    that the input was a group.
    """
    target = set(images)
    gens: list[tuple[int, ...]] = []
    known: set[tuple[int, ...]] = {tuple(range(n))}
    for img in images:
        if img not in known:
            gens.append(img)
            known = _closure_of(gens, n)
    if known != target:
        raise StrobewalkError("element set is not closed under composition")
    return gens


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """All graph automorphisms, with a small generating subset.

    Every element, viewed as a permutation matrix, commutes with the walk
    Hamiltonian of the graph it was computed from (for any coupling
    constant), since it preserves weights and on-site energies.
    """

    elements: tuple[Permutation, ...]
    generators: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].size


@dataclass(frozen=True, eq=False)
class StabilizerGroup:
    """Symmetries fixing the detection state up to a unit phase.

    Each entry pairs a permutation S with the phase p = <psi_d|S|psi_d>,
    so that ``S psi_d = p psi_d``.  For a detection state localized on a
    node every phase is 1.
    """

    elements: tuple[tuple[Permutation, complex], ...]
    dim: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def permutations(self) -> tuple[Permutation, ...]:
        return tuple(perm for perm, _ in self.elements)

    @property
    def has_trivial_phases(self) -> bool:
        return all(abs(phase - 1.0) <= 1e-9 for _, phase in self.elements)


def _adjacency_dicts(graph: WeightedGraph) -> list[dict[int, float]]:
    adj: list[dict[int, float]] = [dict() for _ in range(graph.node_count)]
    for i, j, w in graph.edges:
        adj[i][j] = w
        adj[j][i] = w
    return adj


def _refined_colors(graph: WeightedGraph, adj: list[dict[int, float]]) -> list[int]:
    """Equitable-partition node coloring.

    Starts from (on-site energy, incident weight multiset) and repeatedly
    appends the multiset of (weight, neighbor color) pairs until the
    partition stops splitting.  Weights compare exactly, matching the
    exact-preservation requirement on automorphisms.
    """
    n = graph.node_count
    initial = [
        (graph.onsite[v], tuple(sorted(adj[v].values())))
        for v in range(n)
    ]
    palette: dict = {}
    colors = [palette.setdefault(key, len(palette)) for key in initial]
    while True:
        keys = [
            (colors[v], tuple(sorted((w, colors[u]) for u, w in adj[v].items())))
            for v in range(n)
        ]
        palette = {}
        new_colors = [palette.setdefault(key, len(palette)) for key in keys]
        if len(set(new_colors)) == len(set(colors)):
            return new_colors
        colors = new_colors


def automorphisms(
    graph: WeightedGraph,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> SymmetryGroup:
    """Full automorphism group of a weighted graph with on-site energies.

    An automorphism must preserve edge weights and on-site energies
    exactly.  The search colors nodes by equitable-partition refinement and
    backtracks over color-compatible assignments; elements come out in
    lexicographic order of their image tuples.

    Raises :class:`GroupSearchError` when the graph exceeds ``node_cap``
    nodes or the group grows past ``order_cap`` elements; groups that large
    call for a generator-based workflow rather than full enumeration.
    """
    n = graph.node_count
    if n > node_cap:
        raise GroupSearchError(f"graph has {n} nodes, above the cap of {node_cap}")
    adj = _adjacency_dicts(graph)
    colors = _refined_colors(graph, adj)
    candidates = [[v for v in range(n) if colors[v] == colors[u]] for u in range(n)]

    found: list[tuple[int, ...]] = []
    mapping = [-1] * n
    used = [False] * n

    def extend(u: int):
        if u == n:
            found.append(tuple(mapping))
            if len(found) > order_cap:
                raise GroupSearchError(
                    f"automorphism group order exceeds the cap of {order_cap}; "
                    "use a generator-based workflow for groups this large"
                )
            return
        adj_u = adj[u]
        mapped_neighbors = [(x, w) for x, w in adj_u.items() if x < u]
        for v in candidates[u]:
            if used[v]:
                continue
            adj_v = adj[v]
            ok = True
            count = 0
            for y in adj_v:
                if used[y]:
                    count += 1
            if count != len(mapped_neighbors):
                continue
            for x, w in mapped_neighbors:
                if adj_v.get(mapping[x]) != w:
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = v
            used[v] = True
            extend(u + 1)
            mapping[u] = -1
            used[v] = False

    extend(0)
    generators = _generating_set(found, n)
    return SymmetryGroup(
        elements=tuple(Permutation(img) for img in found),
        generators=tuple(Permutation(img) for img in generators),
    )


def _brute_force_automorphisms(graph: WeightedGraph) -> list[Permutation]:
    """Filter all n! permutations; test oracle for small graphs only."""
    if graph.node_count > 8:
        raise GroupSearchError("brute force is limited to 8 nodes")
    adj = _adjacency_dicts(graph)
    out = []
    for perm in itertools.permutations(range(graph.node_count)):
        if any(graph.onsite[perm[v]] != graph.onsite[v] for v in range(graph.node_count)):
            continue
        good = True
        for v, nbrs in enumerate(adj):
            mapped = {perm[u]: w for u, w in nbrs.items()}
            if mapped != adj[perm[v]]:
                good = False
                break
        if good:
            out.append(Permutation(perm))
    return out


def _images_array(perms: Sequence[Permutation]) -> np.ndarray:
    return np.array([p.image for p in perms], dtype=np.intp)


def stabilizer(
    group: SymmetryGroup,
    detect_state: np.ndarray,
    *,
    tol: float = STABILIZER_TOL,
) -> StabilizerGroup:
    """Subgroup whose elements fix the detection state up to a unit phase.

    Membership requires ``||S psi_d - p psi_d|| < tol`` with
    ``p = <psi_d|S|psi_d>`` of unit modulus; ``p`` is stored with the
    element.  The surviving set is re-verified to be closed under
    composition.
    """
    psi_d = as_state(detect_state, group.dim)
    images = _images_array(group.elements)
    inverse_images = np.argsort(images, axis=1)
    transformed = psi_d[inverse_images]  # row k holds S_k psi_d
    phases = transformed @ np.conj(psi_d)
    residuals = np.linalg.norm(transformed - phases[:, None] * psi_d[None, :], axis=1)
    keep = (residuals < tol) & (np.abs(np.abs(phases) - 1.0) < tol)

    members = []
    for k in np.flatnonzero(keep):
        phase = complex(phases[k] / abs(phases[k]))
        members.append((group.elements[k], phase))
    _generating_set([perm.image for perm, _ in members], group.dim)
    return StabilizerGroup(elements=tuple(members), dim=group.dim)


def orbit_rank(stab: StabilizerGroup, initial_state: np.ndarray, *, rank_tol: float = RANK_TOL) -> int:
    """Dimension of the span of the state's orbit under the stabilizer.

    This counts how many linearly independent states share the initial
    state's detection statistics; the total detection probability is
    bounded by the reciprocal of this number for localized states.
    """
    psi = as_state(initial_state, stab.dim)
    images = _images_array(stab.permutations)
    inverse_images = np.argsort(images, axis=1)
    orbit = psi[inverse_images]
    svals = np.linalg.svd(orbit, compute_uv=False)
    return int(np.sum(svals > rank_tol * max(1.0, float(svals[0]))))


def symmetry_projector(stab: StabilizerGroup) -> np.ndarray:
    """Projector onto the stabilizer-symmetric subspace.

    Averages the group elements weighted by their conjugated detection
    phases, which fixes the detection state exactly.  The result is
    Hermitian and idempotent and commutes with any Hamiltonian the group
    commutes with.
    """
    dim = stab.dim
    p = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for perm, phase in stab.elements:
        p[list(perm.image), cols] += np.conj(phase)
    p /= stab.order
    return (p + p.conj().T) / 2.0


def symmetric_part(
    stab: StabilizerGroup,
    initial_state: np.ndarray,
    *,
    projector: np.ndarray | None = None,
) -> tuple[np.ndarray, float]:
    """Normalized symmetric component of a state and its weight.

    Returns ``(u, weight)`` with ``u`` the unit vector along the projection
    of the state onto the symmetric subspace and ``weight`` the squared
    projection.  All detectable content of the state lives in ``u``:
    the total detection probability factorizes as ``weight * pdet(u)``.

    For a localized state with trivial stabilizer phases the weight is
    ``1/orbit_rank`` and ``u`` is the uniform superposition of the orbit.

    Raises :class:`AsymmetricStateError` when the state is orthogonal to
    the symmetric subspace (it is then never detected, and no uniform
    component exists).
    """
    psi = as_state(initial_state, stab.dim)
    p = symmetry_projector(stab) if projector is None else projector
    projected = p @ psi
    weight = float(np.real(np.vdot(psi, projected)))
    if weight < 1e-12:
        raise AsymmetricStateError(
            "symmetric component undefined: initial state is orthogonal to the symmetric subspace"
        )
    return projected / math.sqrt(weight), weight


def equivalent_dark_basis(orbit_states: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Orthonormal never-detected states built from an equivalent orbit.

    Given nu orthonormal, pairwise physically equivalent states
    r_0..r_{nu-1}, returns the nu-1 states

        (j * r_j - (r_0 + ... + r_{j-1})) / sqrt(j * (j + 1)),

    each normalized, orthogonal to the others and to the uniform orbit
    superposition, and each with vanishing detection amplitude at every
    attempt (the equal transition amplitudes cancel pairwise).
    """
    states = [np.asarray(s, dtype=complex) for s in orbit_states]
    if not states:
        return []
    mat = np.column_stack(states)
    gram = mat.conj().T @ mat
    if np.max(np.abs(gram - np.eye(len(states)))) > 1e-10:
        raise StateError("orbit states must be orthonormal")
    dark = []
    for j in range(1, len(states)):
        vec = j * states[j] - np.sum(states[:j], axis=0)
        dark.append(vec / math.sqrt(j * (j + 1)))
    return dark


def upper_bound(stab: StabilizerGroup, initial_state: np.ndarray) -> float:
    """Symmetry bound on the total detection probability.

    Equals the initial state's weight in the symmetric subspace,
    ``<psi|P|psi>``; for a localized state with trivial phases this is
    ``1/orbit_rank``.  The exact detection probability never exceeds it.
    """
    psi = as_state(initial_state, stab.dim)
    p = symmetry_projector(stab)
    value = float(np.real(np.vdot(psi, p @ psi)))
    return min(max(value, 0.0), 1.0)


def saturation_check(
    sd: SpectralDecomposition,
    stab: StabilizerGroup,
    detect_state: np.ndarray,
) -> tuple[bool, int]:
    """Whether the symmetry bound is exact, and the symmetric dark count.

    Compares the dimension of the symmetric subspace with the number of
    bright states.  When they agree the symmetric subspace is entirely
    bright, and the bound ``<psi|P|psi>`` equals the detection probability
    for every initial state; each missing dimension is a symmetric dark
    state that makes the bound strict for some states.
    """
    psi_d = as_state(detect_state, stab.dim)
    p = symmetry_projector(stab)
    trace = float(np.real(np.trace(p)))
    sym_dim = round(trace)
    if abs(trace - sym_dim) > 1e-8:
        raise StrobewalkError(f"projector trace {trace} is not near an integer")
    bright_count = len(bright_eigenstates(sd, psi_d))
    symmetric_dark_dim = sym_dim - bright_count
    return symmetric_dark_dim == 0, symmetric_dark_dim


def node_orbits(stab: StabilizerGroup) -> list[tuple[int, ...]]:
    """Orbits of the node set under the stabilizer, ordered by least member."""
    images = _images_array(stab.permutations)
    seen = [False] * stab.dim
    orbits = []
    for v in range(stab.dim):
        if seen[v]:
            continue
        orbit = sorted(set(int(x) for x in images[:, v]))
        for x in orbit:
            seen[x] = True
        orbits.append(tuple(orbit))
    return orbits
