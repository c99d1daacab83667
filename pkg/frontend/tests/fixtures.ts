/** Shared payload fixtures mirroring the iris worked example. */

import type {
  DatasetDescriptor,
  ExplainPayload,
  ResamplePayload,
  SessionPayload,
} from '../src/types.js';

export const IRIS_DESCRIPTOR: DatasetDescriptor = {
  name: 'iris',
  d: 4,
  C: 3,
  class_names: ['setosa', 'versicolor', 'virginica'],
  sizes: { total: 150, train: 120, test: 30 },
};

export const FEATURE_NAMES = [
  'sepal length (cm)',
  'sepal width (cm)',
  'petal length (cm)',
  'petal width (cm)',
];

export function sessionFixture(): SessionPayload {
  return {
    id: 'session-1',
    dataset: 'iris',
    model: 'svm',
    model_fingerprint: 'abc123',
    seed: 42,
    created_at: 1700000000.0,
    point: {
      index: 8,
      values: [4.4, 2.9, 1.4, 0.2],
      feature_names: [...FEATURE_NAMES],
    },
    predicted: 0,
    predicted_class_name: 'setosa',
    probabilities: [0.894, 0.106, 0.0],
    class_names: ['setosa', 'versicolor', 'virginica'],
  };
}

export function resampleFixture(): ResamplePayload {
  return {
    id: 'session-1',
    point: {
      index: 77,
      values: [6.7, 3.0, 5.0, 1.7],
      feature_names: [...FEATURE_NAMES],
    },
    predicted: 2,
    predicted_class_name: 'virginica',
    probabilities: [0.0, 0.2, 0.8],
    class_names: ['setosa', 'versicolor', 'virginica'],
  };
}

export function explainFixture(): ExplainPayload {
  return {
    why_p: [
      ['petal length (cm)', 0.3376],
      ['sepal length (cm)', 0.1143],
      ['petal width (cm)', 0.0914],
    ],
    not_q: [
      ['petal length (cm)', -0.1523],
      ['sepal length (cm)', -0.14],
    ],
    nl_why_p:
      'Algorithms Pro classification was primarily influenced by petal length (cm), ' +
      'also influenced by sepal length (cm), petal width (cm)',
    nl_not_q:
      'Algorithms Anti classification was primarily influenced by petal length (cm), ' +
      'also influenced by sepal length (cm)',
    shapley: {
      phi: [
        [0.1143, -0.0138, 0.3376, 0.0914],
        [-0.14, 0.0113, -0.1523, 0.1086],
        [0.0257, 0.0025, -0.1853, -0.2001],
      ],
      base_values: [0.3645, 0.2783, 0.3572],
      method: { kind: 'exact', n_permutations: null, seed: null },
    },
    counterfactuals: [
      [5.2, 2.9, 3.9, 0.2],
      [5.6, 2.9, 3.6, 0.2],
    ],
    is_fallback: false,
    fallback_point: null,
    neighbor_budget_used: 50,
  };
}

export function fallbackFixture(): ExplainPayload {
  return {
    ...explainFixture(),
    counterfactuals: [],
    is_fallback: true,
    fallback_point: [5.0, 3.4, 1.5, 0.2],
    neighbor_budget_used: 150,
  };
}
