/** Thin typed client over the explanation service endpoints. */

import type {
  ApiErrorBody,
  DatasetDescriptor,
  ExplainPayload,
  ModelFamily,
  ResamplePayload,
  SessionPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  const response = await fetch(input, init);
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body as ApiErrorBody);
  }
  return body as T;
}

export function listDatasets(): Promise<DatasetDescriptor[]> {
  return request<DatasetDescriptor[]>('/datasets');
}

export function createSession(
  dataset: string,
  model: ModelFamily,
  seed?: number,
): Promise<SessionPayload> {
  const payload: Record<string, unknown> = { dataset, model };
  if (seed !== undefined) payload.seed = seed;
  return request<SessionPayload>('/sessions', {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify(payload),
  });
}

export function explain(sessionId: string, desired: number): Promise<ExplainPayload> {
  return request<ExplainPayload>(`/sessions/${sessionId}/explain`, {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify({ desired }),
  });
}

export function resample(sessionId: string): Promise<ResamplePayload> {
  return request<ResamplePayload>(`/sessions/${sessionId}/resample`);
}
