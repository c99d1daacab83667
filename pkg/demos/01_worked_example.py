"""Walk the full pipeline on one iris flower.

The flower [4.4, 2.9, 1.4, 0.2] is a setosa; we ask the classifier
"Why setosa (0) and not versicolor (1)?", read the two-part answer and
inspect the counterfactual datapoints that would flip the prediction.
"""

import numpy as np

import cfshap as cf

# --- data and model -------------------------------------------------------
ds = cf.load_builtin("iris")
split = cf.split(ds, ratio=0.8, seed=42)
std = cf.standardize(ds, split)
X_train = std.points[split.train_indices]
y_train = std.labels[split.train_indices]

model = cf.fit("svm", X_train, y_train, seed=42)
background = cf.select_background(X_train, y_train, size=100, seed=42)

# --- the question ---------------------------------------------------------
raw_point = np.array([4.4, 2.9, 1.4, 0.2])
point = std.to_standardized(raw_point)
print(f"flower (raw units):        {raw_point.tolist()}")
print(f"model prediction:          {ds.class_names[model.predict(point)]}")
print(f"class probabilities:       {np.round(model.predict_proba(point), 3).tolist()}")

p, q, sv = cf.identify_pq(
    model, point, desired=1, shapley_config=cf.ShapleyConfig(mode="exact", seed=42),
    background=background,
)
print(f"\nquery: Why {ds.class_names[p]} not {ds.class_names[q]}?")

# --- the contrastive answer -----------------------------------------------
explanation = cf.build_contrastive(sv, p, q, ds.feature_names)
print(f"  {explanation.nl_why_p}")
print(f"  {explanation.nl_not_q}")

print("\nper-class attributions (rows: classes, columns: features):")
for c, name in enumerate(ds.class_names):
    print(f"  {name:>12}: {np.round(sv.phi[c], 4).tolist()}  base={sv.base_values[c]:.3f}")

# --- counterfactual datapoints --------------------------------------------
index = cf.NeighborIndex(X_train)
result = cf.find_counterfactuals(model, point, q, sv, index)
mutated = [n for n, flag in zip(ds.feature_names, result.mutate_mask) if flag]
print(f"\nmutable features (phi[{q}] < 0): {mutated}")
print(f"searched {result.neighbor_budget_used} nearest training points")
print(f"counterfactual datapoints now classified {ds.class_names[q]!r}:")
for row in result.points:
    print(f"  {np.round(std.to_raw(row), 2).tolist()}")
