"""Reduction of the walk to the symmetric subspace: the quotient graph.

For a detection state localized on a node, the stabilizer orbits of the
node set define equivalence classes.  Replacing each class by the uniform
superposition of its members turns the Hamiltonian into a smaller matrix
on the class space, which is again a (weighted) graph walk.  All bright
states live in that subspace, so the total detection probability computed
there matches the full-space value exactly, at a fraction of the
diagonalization cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .detection import DARK_OVERLAP_TOL, DetectionReport, _pdet_from_sectors
from .errors import NonLocalizedDetectionError, StrobewalkError
from .graphs import WeightedGraph
from .spectral import EigenSystem, diagonalize, energy_sectors, fold_sectors
from .states import as_state, localized_node
from .symmetry import StabilizerGroup, node_orbits

__all__ = [
    "NodeClass",
    "QuotientSystem",
    "symmetrize",
    "pdet_symmetrized",
    "symmetric_eigensystem",
    "quotient_graph",
]


class NodeClass(NamedTuple):
    """One equivalence class of nodes: id, members, and multiplicity."""

    id: int
    members: tuple[int, ...]
    multiplicity: int


@dataclass(frozen=True, eq=False)
class QuotientSystem:
    """Symmetrized Hamiltonian on the space of node equivalence classes.

    ``lift`` has one orthonormal column per class: the uniform
    superposition of the class members in the original space.  By
    construction ``lift.T @ H @ lift == h_s`` entrywise (within roundoff),
    and lifting any eigenvector of ``h_s`` gives an eigenvector of the
    original Hamiltonian with the same eigenvalue.
    """

    h_s: np.ndarray
    classes: tuple[NodeClass, ...]
    lift: np.ndarray
    detect_class: int

    @property
    def original_dim(self) -> int:
        return self.lift.shape[0]

    @property
    def reduced_dim(self) -> int:
        return self.h_s.shape[0]


def symmetrize(h: np.ndarray, stab: StabilizerGroup, detect_state: np.ndarray) -> QuotientSystem:
    """Fold a Hamiltonian onto the stabilizer orbits of the node basis.

    Requires the detection state to be localized on a node (the class
    construction groups basis nodes, and a delocalized detection state is
    not fixed by node orbits).  Classes are ordered by their least member;
    the class of the detection node is always a singleton.

    The entry between classes A and B sums the original couplings over all
    member pairs, scaled by ``1/sqrt(|A| * |B|)``; couplings internal to a
    class fold into its diagonal (on-site) entry.
    """
    h = np.asarray(h)
    psi_d = as_state(detect_state, stab.dim)
    detect_node = localized_node(psi_d)
    if detect_node is None:
        raise NonLocalizedDetectionError(
            "quotient construction requires a detection state localized on a single node"
        )
    if not stab.has_trivial_phases:
        raise StrobewalkError("localized detection state must have trivial stabilizer phases")

    orbits = node_orbits(stab)
    classes = tuple(
        NodeClass(id=c, members=members, multiplicity=len(members))
        for c, members in enumerate(orbits)
    )
    k = len(classes)
    n = stab.dim

    lift = np.zeros((n, k))
    for cls in classes:
        lift[list(cls.members), cls.id] = 1.0 / math.sqrt(cls.multiplicity)

    h_s = np.zeros((k, k), dtype=np.result_type(h.dtype, np.float64))
    for a in range(k):
        mem_a = classes[a].members
        for b in range(a, k):
            mem_b = classes[b].members
            scale = math.sqrt(classes[a].multiplicity * classes[b].multiplicity)
            total = sum(h[x, y] for x in mem_a for y in mem_b)
            h_s[a, b] = total / scale
            h_s[b, a] = np.conj(h_s[a, b])

    detect_class = next(c.id for c in classes if detect_node in c.members)
    if classes[detect_class].multiplicity != 1:
        raise StrobewalkError("detection node is not fixed by the stabilizer")
    return QuotientSystem(h_s=h_s, classes=classes, lift=lift, detect_class=detect_class)


def symmetric_eigensystem(q: QuotientSystem) -> EigenSystem:
    """Eigendecomposition of the symmetrized Hamiltonian."""
    return diagonalize(q.h_s)


def pdet_symmetrized(
    q: QuotientSystem,
    initial_state: np.ndarray,
    tau: float | None = None,
    *,
    dark_tol: float = DARK_OVERLAP_TOL,
) -> DetectionReport:
    """Total detection probability evaluated in the class space.

    The initial state is projected onto the symmetric subspace via the
    lift map; any orthogonal remainder can never be detected and its
    weight is recorded in the report as ``discarded_weight``.  With
    ``tau`` given, sectors are folded at that detection period, otherwise
    they are grouped by energy (the off-resonance structure).

    The result equals the full-space spectral value for every initial
    state.
    """
    psi_in = as_state(initial_state, q.original_dim)
    reduced = q.lift.T.conj() @ psi_in
    discarded = max(0.0, 1.0 - float(np.real(np.vdot(reduced, reduced))))
    es = diagonalize(q.h_s)
    sd = energy_sectors(es) if tau is None else fold_sectors(es, tau)
    detect_reduced = np.zeros(q.reduced_dim, dtype=complex)
    detect_reduced[q.detect_class] = 1.0
    return _pdet_from_sectors(
        sd,
        detect_reduced,
        reduced,
        method="symmetrized",
        dark_tol=dark_tol,
        discarded_weight=discarded,
    )


def quotient_graph(q: QuotientSystem) -> tuple[WeightedGraph, dict[int, tuple[int, ...]]]:
    """Weighted graph realizing the symmetrized Hamiltonian, plus class map.

    The graph satisfies ``hamiltonian(graph, 1.0) == q.h_s``: edge weights
    are the negated off-diagonal entries (carrying the sqrt-multiplicity
    factors) and class-internal couplings appear as on-site energies.
    Labels list the member nodes of each class.
    """
    k = q.reduced_dim
    edges = []
    for a in range(k):
        for b in range(a + 1, k):
            w = float(np.real(q.h_s[a, b]))
            if w != 0.0:
                edges.append((a, b, -w))
    onsite = tuple(float(np.real(q.h_s[c, c])) for c in range(k))
    labels = tuple(",".join(str(m) for m in cls.members) for cls in q.classes)
    graph = WeightedGraph(node_count=k, edges=tuple(edges), onsite=onsite, labels=labels)
    return graph, {cls.id: cls.members for cls in q.classes}
