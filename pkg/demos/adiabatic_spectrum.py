"""Spectral gaps of the adiabatic interpolation for three small instances.

The interpolated Hamiltonian (1 - tau) H_B + tau H_f starts with the
transverse field and ends at the detection Hamiltonian. A slow sweep lands in
the ML solution when the gap between the two lowest levels stays open; the
runtime needed scales like 1 / g^2.

The script prints the minimum gap for each instance and then runs a
Trotterised sweep on the one-symbol instance for several total times. With
matplotlib installed it also saves ``spectrum.png``.
"""
import numpy as np

from qaoa_mld import encode_mimo, runtime_bound, spectrum_trace, trotter_evolve
from qaoa_mld.instances import single_qubit_example, three_qubit_example, two_qubit_example

instances = {
    "one symbol": single_qubit_example(),
    "two symbols": two_qubit_example(),
    "three symbols": three_qubit_example(),
}
traces = {}
for name, inst in instances.items():
    trace = spectrum_trace(encode_mimo(inst, "full"), grid_points=201)
    traces[name] = trace
    print(f"{name:>13}: min gap {trace.min_gap:.4f} at tau = {trace.gap_location:.3f}, "
          f"runtime bound ~ {runtime_bound(trace):.3f}")

# A slow enough sweep ends in the ground state; a fast one does not.
model = encode_mimo(single_qubit_example(), "full")
print("\n   T   ground overlap")
for total in (0.5, 1, 2, 5, 10, 50):
    res = trotter_evolve(model, total, slices=500, substeps=2)
    print(f"{total:5g}   {res.ground_overlap:.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharex=True)
    for ax, (name, trace) in zip(axes, traces.items()):
        ax.plot(trace.tau_grid, trace.eigenvalues, lw=1)
        ax.axvline(trace.gap_location, color="k", ls=":", lw=0.8)
        ax.set_title(f"{name}, g = {trace.min_gap:.2f}")
        ax.set_xlabel("tau")
    axes[0].set_ylabel("eigenvalue")
    fig.tight_layout()
    fig.savefig("spectrum.png", dpi=120)
    print("\nwrote spectrum.png")
