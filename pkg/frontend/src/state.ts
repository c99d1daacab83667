/** Dashboard state machine.
 *
 * Phases advance dataset-select -> model-select -> querying -> answered;
 * resampling returns to querying. The desired-class selector never offers
 * the predicted class, and no attribution math happens here: every number
 * shown downstream is copied from a service payload.
 */

import type {
  DatasetDescriptor,
  ExplainPayload,
  ModelFamily,
  ResamplePayload,
  SessionPayload,
} from './types.js';

export type Phase = 'dataset-select' | 'model-select' | 'querying' | 'answered';

export interface UiSessionState {
  phase: Phase;
  datasets: DatasetDescriptor[];
  chosenDataset: string | null;
  session: SessionPayload | null;
  answer: ExplainPayload | null;
  lastDesired: number | null;
  busy: boolean;
  error: string | null;
}

export function initialState(): UiSessionState {
  return {
    phase: 'dataset-select',
    datasets: [],
    chosenDataset: null,
    session: null,
    answer: null,
    lastDesired: null,
    busy: false,
    error: null,
  };
}

export function withDatasets(
  state: UiSessionState,
  datasets: DatasetDescriptor[],
): UiSessionState {
  return { ...state, datasets, error: null };
}

export function chooseDataset(state: UiSessionState, name: string): UiSessionState {
  if (!state.datasets.some((d) => d.name === name)) {
    return withError(state, `unknown dataset ${name}`);
  }
  return { ...state, chosenDataset: name, phase: 'model-select', error: null };
}

export function backToDatasets(state: UiSessionState): UiSessionState {
  return {
    ...initialState(),
    datasets: state.datasets,
    error: state.error,
  };
}

export function sessionCreated(
  state: UiSessionState,
  session: SessionPayload,
): UiSessionState {
  return {
    ...state,
    session,
    answer: null,
    lastDesired: null,
    phase: 'querying',
    busy: false,
    error: null,
  };
}

export function answered(
  state: UiSessionState,
  desired: number,
  answer: ExplainPayload,
): UiSessionState {
  if (state.session === null) return withError(state, 'no active session');
  return { ...state, answer, lastDesired: desired, phase: 'answered', busy: false, error: null };
}

export function resampled(state: UiSessionState, payload: ResamplePayload): UiSessionState {
  if (state.session === null) return withError(state, 'no active session');
  const session: SessionPayload = {
    ...state.session,
    point: payload.point,
    predicted: payload.predicted,
    predicted_class_name: payload.predicted_class_name,
    probabilities: payload.probabilities,
  };
  return {
    ...state,
    session,
    answer: null,
    lastDesired: null,
    phase: 'querying',
    busy: false,
    error: null,
  };
}

export function sessionLost(state: UiSessionState): UiSessionState {
  return {
    ...initialState(),
    datasets: state.datasets,
    error: 'The session expired; pick a dataset to start over.',
  };
}

export function withBusy(state: UiSessionState, busy: boolean): UiSessionState {
  return { ...state, busy };
}

export function withError(state: UiSessionState, message: string): UiSessionState {
  return { ...state, error: message, busy: false };
}

/** Class ids offered by the desired-class selector: all except the prediction. */
export function selectableDesired(state: UiSessionState): number[] {
  if (state.session === null) return [];
  return state.session.class_names
    .map((_, id) => id)
    .filter((id) => id !== state.session!.predicted);
}
