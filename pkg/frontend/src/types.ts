/** JSON payload shapes of the explanation service. */

export type ModelFamily = 'knn' | 'rf' | 'nn' | 'svm';

export const MODEL_FAMILIES: ModelFamily[] = ['knn', 'rf', 'nn', 'svm'];

export interface DatasetDescriptor {
  name: string;
  d: number;
  C: number;
  class_names: string[];
  sizes: { total: number; train: number; test: number };
}

export interface PointPayload {
  index: number;
  values: number[];
  feature_names: string[];
}

export interface SessionPayload {
  id: string;
  dataset: string;
  model: ModelFamily;
  model_fingerprint: string;
  seed: number;
  created_at: number;
  point: PointPayload;
  predicted: number;
  predicted_class_name: string;
  probabilities: number[];
  class_names: string[];
}

export interface ResamplePayload {
  id: string;
  point: PointPayload;
  predicted: number;
  predicted_class_name: string;
  probabilities: number[];
  class_names: string[];
}

export interface ShapleyPayload {
  phi: number[][];
  base_values: number[];
  method: { kind: string; n_permutations: number | null; seed: number | null };
}

export interface ExplainPayload {
  why_p: Array<[string, number]>;
  not_q: Array<[string, number]>;
  nl_why_p: string;
  nl_not_q: string;
  shapley: ShapleyPayload;
  counterfactuals: number[][];
  is_fallback: boolean;
  fallback_point: number[] | null;
  neighbor_budget_used: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: string;
}
