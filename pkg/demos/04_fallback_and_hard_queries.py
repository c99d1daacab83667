"""When mutation cannot reach the desired class.

A tiny two-class dataset where one class can never win a kNN vote shows
the two degenerate paths: the nearest-desired-class fallback and the
no-candidate error. Then a real iris query demonstrates the budget
expanding past 50 neighbors before the first counterfactual appears.
"""

import numpy as np

import cfshap as cf
from cfshap.errors import NoCounterfactualError

# --- a model that can never be argued into class 1 -------------------------
rng = np.random.default_rng(0)
X = np.vstack([rng.normal(0, 0.4, size=(30, 2)), [[0.1, 0.0], [0.0, 0.1]]])
y = np.array([0] * 30 + [1, 1])
model = cf.fit("knn", X, y, seed=0)  # a lone class-1 vote can't win k=5
print("class-1 training points the model predicts as 1:",
      int(np.sum(model.predict(X) == 1)))

index = cf.NeighborIndex(X)
phi = np.zeros((2, 2))
phi[1] = [-1.0, -1.0]  # pretend both features work against class 1
sv = cf.ShapleyMatrix(
    phi=phi, base_values=np.array([0.9, 0.1]),
    method=cf.AttributionMethod(kind="exact"), point=X[0],
)
try:
    cf.find_counterfactuals(model, X[0], 1, sv, index)
except NoCounterfactualError as exc:
    print(f"no counterfactual and no fallback: {exc}")

# --- budget expansion on a real query ---------------------------------------
ds = cf.load_builtin("iris")
split = cf.split(ds, 0.8, 42)
std = cf.standardize(ds, split)
X_train = std.points[split.train_indices]
y_train = std.labels[split.train_indices]
iris_model = cf.fit("knn", X_train, y_train, seed=42)
background = cf.select_background(X_train, y_train, 100, 42)
spec = cf.ValueFunctionSpec(model=iris_model, background=background)
iris_index = cf.NeighborIndex(X_train)

# a setosa flower asked to become virginica: the nearest 50 neighbors are
# all setosa/versicolor, so the search widens before succeeding
point = std.to_standardized(np.array([4.4, 2.9, 1.4, 0.2]))
sv = cf.shapley_exact(spec, point)
result = cf.find_counterfactuals(iris_model, point, 2, sv, iris_index)
print(f"\nWhy 0 not 2: first keeper batch at budget {result.neighbor_budget_used}, "
      f"{result.points.shape[0]} counterfactuals")
