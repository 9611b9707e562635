"""The level-1 QAOA energy landscape and what the optimizer finds.

For one symbol the simplified Hamiltonian is -b Z and the level-1 energy has
the closed form b sin(2 beta) sin(2 b gamma), whose minimum -|b| is the
exact ground energy. For more symbols the landscape is no longer a product of
sines and has several local minima, which is why the optimizer uses
multiple starts.
"""
import numpy as np

from qaoa_mld import (
    IsingModel,
    OptimizerConfig,
    analytic_f1_single,
    detect_cml,
    encode_mimo,
    landscape,
    minimize_fp,
    run_qml,
)
from qaoa_mld.instances import single_qubit_example, three_qubit_example

inst = single_qubit_example()
model = encode_mimo(inst, "simplified")
b = float(model.fields[0])
grid = landscape(model, points=101)
gg, bb = np.meshgrid(grid.gamma_axis, grid.beta_axis, indexing="ij")
print(f"b = {b:.5f}")
print("max |simulated - closed form| on the grid:",
      np.abs(grid.values - analytic_f1_single(b, gg, bb)).max())

res = minimize_fp(model, level=1)
print(f"optimised F1 = {res.best_value:.10f} (ground energy {-abs(b):.10f}) "
      f"after {res.evaluations} evaluations")
print("accepted values of the winning start:", [round(v, 4) for _, v in res.trace[:8]], "...")

# Three symbols at level 3: the optimised state concentrates on the ML answer.
inst3 = three_qubit_example()
out = run_qml(inst3, level=3, optimizer=OptimizerConfig(multistarts=25), shots=1024, seed=1)
top = sorted(out.counts.items(), key=lambda kv: -kv[1])[:4]
print("\nthree symbols, most frequent samples:", top)
print("QML:", out.symbols, " CML:", detect_cml(inst3), " sent:", inst3.true_symbols)

# A zero model has a flat landscape: nothing to optimise.
flat = minimize_fp(IsingModel(np.zeros((2, 2)), np.zeros(2)), level=1)
print("\nflat model optimum:", flat.best_value)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.pcolormesh(grid.beta_axis, grid.gamma_axis, grid.values, shading="auto",
                       cmap="RdBu_r")
    ax.set_xlabel("beta")
    ax.set_ylabel("gamma")
    fig.colorbar(im, label="F1")
    fig.tight_layout()
    fig.savefig("landscape.png", dpi=120)
    print("wrote landscape.png")
