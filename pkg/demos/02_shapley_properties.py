"""See the Shapley engine's guarantees in action.

Efficiency (attributions + base value recover the prediction), the
dummy and symmetry axioms, and how the permutation-sampling estimator
converges to the exact enumeration as the permutation budget grows.
"""

import numpy as np

import cfshap as cf

ds = cf.load_builtin("iris")
split = cf.split(ds, 0.8, 42)
std = cf.standardize(ds, split)
X_train = std.points[split.train_indices]
y_train = std.labels[split.train_indices]
model = cf.fit("knn", X_train, y_train, seed=42)
background = cf.select_background(X_train, y_train, 100, 42)
spec = cf.ValueFunctionSpec(model=model, background=background)

point = std.points[split.test_indices[0]]
exact = cf.shapley_exact(spec, point)

# --- efficiency ------------------------------------------------------------
recovered = exact.base_values + exact.phi.sum(axis=1)
target = model.predict_proba(point)
print("efficiency: base + sum(phi) vs model output")
print(f"  recovered: {np.round(recovered, 6).tolist()}")
print(f"  target:    {np.round(target, 6).tolist()}")
print(f"  max error: {np.abs(recovered - target).max():.2e}")

# --- dummy axiom ------------------------------------------------------------
bg_dummy = background.copy()
bg_dummy[:, 1] = point[1]  # feature 1 identical everywhere -> no influence
sv_dummy = cf.shapley_exact(cf.ValueFunctionSpec(model=model, background=bg_dummy), point)
print(f"\ndummy axiom: |phi| of the constant feature = {np.abs(sv_dummy.phi[:, 1]).max():.2e}")

# --- sampling convergence ----------------------------------------------------
print("\npermutation sampling converges to the exact values:")
for n in (50, 200, 1000, 5000):
    sampled = cf.shapley_sampled(spec, point, n_permutations=n, seed=1)
    print(f"  n={n:>5}: max |sampled - exact| = {np.abs(sampled.phi - exact.phi).max():.4f}")
