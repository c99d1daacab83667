/** DOM wiring: one render loop plus delegated click handling.
 *
 * A single request may be in flight per session; controls are disabled
 * (via the busy flag) until the response lands.
 */

import * as api from './api.js';
import {
  answered,
  backToDatasets,
  chooseDataset,
  initialState,
  resampled,
  sessionCreated,
  sessionLost,
  withBusy,
  withDatasets,
  withError,
  type UiSessionState,
} from './state.js';
import type { ModelFamily } from './types.js';
import { renderApp } from './view.js';

let state: UiSessionState = initialState();

function setState(next: UiSessionState): void {
  state = next;
  const root = document.getElementById('app');
  if (root) root.innerHTML = renderApp(state);
}

function failure(error: unknown): void {
  if (error instanceof api.ApiError && error.body.code === 'session_not_found') {
    setState(sessionLost(state));
    return;
  }
  const message = error instanceof Error ? error.message : String(error);
  setState(withError(state, message));
}

async function boot(): Promise<void> {
  setState(withBusy(state, true));
  try {
    const datasets = await api.listDatasets();
    setState(withDatasets(withBusy(state, false), datasets));
  } catch (error) {
    failure(error);
  }
}

async function onChooseModel(family: ModelFamily): Promise<void> {
  if (state.chosenDataset === null || state.busy) return;
  setState(withBusy(state, true));
  try {
    const session = await api.createSession(state.chosenDataset, family);
    setState(sessionCreated(state, session));
  } catch (error) {
    failure(error);
  }
}

async function onAsk(desired: number): Promise<void> {
  if (state.session === null || state.busy) return;
  setState(withBusy(state, true));
  try {
    const answer = await api.explain(state.session.id, desired);
    setState(answered(state, desired, answer));
  } catch (error) {
    failure(error);
  }
}

async function onResample(): Promise<void> {
  if (state.session === null || state.busy) return;
  setState(withBusy(state, true));
  try {
    const payload = await api.resample(state.session.id);
    setState(resampled(state, payload));
  } catch (error) {
    failure(error);
  }
}

function onClick(event: Event): void {
  const target = (event.target as HTMLElement).closest('[data-action]');
  if (!(target instanceof HTMLElement)) return;
  const action = target.dataset.action;
  if (action === 'choose-dataset' && target.dataset.dataset) {
    setState(chooseDataset(state, target.dataset.dataset));
  } else if (action === 'choose-model' && target.dataset.model) {
    void onChooseModel(target.dataset.model as ModelFamily);
  } else if (action === 'ask' && target.dataset.desired !== undefined) {
    void onAsk(Number(target.dataset.desired));
  } else if (action === 'resample') {
    void onResample();
  } else if (action === 'back-to-datasets') {
    setState(backToDatasets(state));
  }
}

export function start(): void {
  document.addEventListener('click', onClick);
  void boot();
}

start();
