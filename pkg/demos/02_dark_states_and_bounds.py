"""Dark states from symmetry, and the reciprocal-orbit upper bound.

On a four-armed cross with the detector at the hub, the four arm states are
interchangeable: any two of them interfere destructively into a state the
detector never sees.  Counting the independent partners of the start state
bounds the detection probability by the reciprocal of that count, and here
the bound is exact.
"""

import numpy as np

import strobewalk as sw

graph = sw.build_named("cross:4")
h = sw.hamiltonian(graph, gamma=1.0)
psi_d = sw.localized_state(5, 0)

group = sw.automorphisms(graph)
stab = sw.stabilizer(group, psi_d)
print(f"cross:4 automorphisms: {group.order}, hub stabilizer: {stab.order}")

psi_in = sw.localized_state(5, 1)
rank = sw.orbit_rank(stab, psi_in)
print(f"orbit rank of |1>: {rank}  ->  pdet <= 1/{rank}")

# Decompose |1> into the uniform orbit state plus explicit dark states.
orbit = [sw.localized_state(5, r) for r in (1, 2, 3, 4)]
uniform, weight = sw.symmetric_part(stab, psi_in)
dark = sw.equivalent_dark_basis(orbit)
print(f"\nsymmetric weight of |1>: {weight}  (uniform state amplitude {np.sqrt(weight):.3f})")
for j, state in enumerate(dark, start=1):
    setup = sw.DetectionSetup(hamiltonian=h, detect_state=psi_d, initial_state=state, tau=1.1)
    total = float(np.sum(np.abs(sw.first_detection_amplitudes(setup, 200)) ** 2))
    print(f"  dark state {j}: sum of F_n over 200 attempts = {total:.2e}")

sd = sw.fold_sectors(sw.diagonalize(h), 1.1)
print(f"\npdet(uniform state) = {sw.pdet_spectral(sd, psi_d, uniform).pdet:.9f}")
print(f"pdet(|1>)           = {sw.pdet_spectral(sd, psi_d, psi_in).pdet:.9f}  (= weight * 1)")

# The same bound machinery across a small zoo of graphs, detector on node 0.
print("\nbound vs exact value, detector on node 0, start on node 1:")
print(f"  {'graph':<14} {'bound':>10} {'pdet':>10}  saturated")
for spec in ("ring:6", "hypercube:3", "complete:8", "square_center", "tree:2"):
    g = sw.build_named(spec)
    hg = sw.hamiltonian(g, 1.0)
    d0 = sw.localized_state(g.node_count, 0)
    st = sw.stabilizer(sw.automorphisms(g), d0)
    sdg = sw.energy_sectors(sw.diagonalize(hg))
    start = sw.localized_state(g.node_count, 1)
    bound = sw.upper_bound(st, start)
    exact = sw.pdet_spectral(sdg, d0, start).pdet
    saturated, _ = sw.saturation_check(sdg, st, d0)
    print(f"  {spec:<14} {bound:>10.6f} {exact:>10.6f}  {saturated}")
