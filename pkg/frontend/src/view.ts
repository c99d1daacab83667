/** Pure HTML renderers for each dashboard phase.
 *
 * All numbers are formatted with one shared formatter and taken directly
 * from service payloads; mutated-cell highlighting is a per-cell
 * comparison of the displayed strings, never a recomputation.
 */

import { selectableDesired, type UiSessionState } from './state.js';
import { MODEL_FAMILIES, type ExplainPayload, type SessionPayload } from './types.js';

export function fmt(value: number): string {
  // trim float noise but keep the payload value recognizable
  const rounded = Number(value.toPrecision(10));
  return String(rounded);
}

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderError(message: string | null): string {
  if (!message) return '';
  return `<div class="banner error" data-testid="error-banner">${esc(message)}</div>`;
}

export function renderDatasetScreen(state: UiSessionState): string {
  const cards = state.datasets
    .map(
      (d) => `
      <button class="card" data-action="choose-dataset" data-dataset="${esc(d.name)}">
        <h3>${esc(d.name)}</h3>
        <p>${d.sizes.total} points, ${d.d} features, ${d.C} classes</p>
      </button>`,
    )
    .join('');
  return `
    <section data-phase="dataset-select">
      <h2>1. Pick a dataset</h2>
      <div class="cards" data-testid="dataset-list">${cards}</div>
    </section>`;
}

export function renderModelScreen(state: UiSessionState): string {
  const buttons = MODEL_FAMILIES.map(
    (family) => `
      <button class="card" data-action="choose-model" data-model="${family}">
        <h3>${family.toUpperCase()}</h3>
      </button>`,
  ).join('');
  return `
    <section data-phase="model-select">
      <h2>2. Pick a model for ${esc(state.chosenDataset ?? '')}</h2>
      <div class="cards" data-testid="model-list">${buttons}</div>
      <button data-action="back-to-datasets">&larr; datasets</button>
    </section>`;
}

export function renderPointTable(session: SessionPayload): string {
  const rows = session.point.feature_names
    .map(
      (name, j) => `
      <tr><th>${esc(name)}</th><td data-testid="point-value">${fmt(
        session.point.values[j]!,
      )}</td></tr>`,
    )
    .join('');
  return `<table class="point" data-testid="point-table"><tbody>${rows}</tbody></table>`;
}

export function renderDesiredSelector(state: UiSessionState): string {
  const session = state.session!;
  const options = selectableDesired(state)
    .map(
      (id) => `
      <button data-action="ask" data-desired="${id}" data-testid="desired-option">
        Why ${esc(session.class_names[session.predicted]!)} not ${esc(
          session.class_names[id]!,
        )}?
      </button>`,
    )
    .join('');
  return `<div class="desired" data-testid="desired-selector">${options}</div>`;
}

export function renderQueryScreen(state: UiSessionState): string {
  const session = state.session!;
  return `
    <section data-phase="querying">
      <h2>3. Sampled test point</h2>
      <p>
        Model <strong>${session.model.toUpperCase()}</strong> on
        <strong>${esc(session.dataset)}</strong> predicts
        <strong data-testid="predicted-class">${esc(session.predicted_class_name)}</strong>
      </p>
      ${renderPointTable(session)}
      <h2>4. Ask a contrastive question</h2>
      ${renderDesiredSelector(state)}
      <button data-action="resample">Sample another point</button>
      <button data-action="back-to-datasets">&larr; start over</button>
    </section>`;
}

/** Signed horizontal bar chart for one class row of the attribution matrix. */
export function renderBarChart(
  names: string[],
  phi: number[],
  testid: string,
): string {
  const maxAbs = Math.max(...phi.map(Math.abs), 1e-12);
  const bars = names
    .map((name, j) => {
      const value = phi[j]!;
      const width = Math.max(1, Math.round((Math.abs(value) / maxAbs) * 100));
      const sign = value > 0 ? 'positive' : value < 0 ? 'negative' : 'zero';
      return `
        <div class="bar-row">
          <span class="bar-label">${esc(name)}</span>
          <span class="bar ${sign}" data-sign="${sign}" style="width:${width}px"></span>
          <span class="bar-value" data-testid="${testid}-value">${fmt(value)}</span>
        </div>`;
    })
    .join('');
  return `<div class="chart" data-testid="${testid}">${bars}</div>`;
}

/** Per-cell highlighting: a cell is marked mutated exactly when its
 * displayed value differs from the displayed original value. */
export function counterfactualCellMutated(
  original: number[],
  counterfactual: number[],
): boolean[] {
  return counterfactual.map((value, j) => fmt(value) !== fmt(original[j]!));
}

export function renderCounterfactualTable(
  session: SessionPayload,
  answer: ExplainPayload,
): string {
  if (answer.counterfactuals.length === 0) return '';
  const header = session.point.feature_names
    .map((name) => `<th>${esc(name)}</th>`)
    .join('');
  const original = session.point.values;
  const body = answer.counterfactuals
    .map((row) => {
      const mutated = counterfactualCellMutated(original, row);
      const cells = row
        .map(
          (value, j) =>
            `<td class="${mutated[j] ? 'mutated' : ''}" data-mutated="${mutated[j]}">${fmt(
              value,
            )}</td>`,
        )
        .join('');
      return `<tr>${cells}</tr>`;
    })
    .join('');
  return `
    <h3>Counterfactual datapoints (searched ${answer.neighbor_budget_used} neighbors)</h3>
    <table class="counterfactuals" data-testid="counterfactual-table">
      <thead><tr>${header}</tr></thead>
      <tbody>${body}</tbody>
    </table>`;
}

export function renderFallbackBanner(
  session: SessionPayload,
  answer: ExplainPayload,
): string {
  if (!answer.is_fallback) return '';
  if (answer.fallback_point === null) {
    return `
      <div class="banner fallback" data-testid="fallback-banner">
        No counterfactual datapoint could be generated and no training point
        is predicted as the desired class.
      </div>`;
  }
  const cells = answer.fallback_point
    .map((value) => `<td data-testid="fallback-value">${fmt(value)}</td>`)
    .join('');
  return `
    <div class="banner fallback" data-testid="fallback-banner">
      No mutant reached the desired class; showing the nearest datapoint the
      model assigns to it.
      <table><tbody><tr>${cells}</tr></tbody></table>
    </div>`;
}

export function renderAnswerScreen(state: UiSessionState): string {
  const session = state.session!;
  const answer = state.answer!;
  const desired = state.lastDesired!;
  const names = session.point.feature_names;
  return `
    <section data-phase="answered">
      <h2>Why ${esc(session.predicted_class_name)} not ${esc(
        session.class_names[desired]!,
      )}?</h2>
      <p data-testid="nl-why-p">${esc(answer.nl_why_p)}</p>
      <p data-testid="nl-not-q">${esc(answer.nl_not_q)}</p>
      <h3>Attributions toward ${esc(session.predicted_class_name)} (predicted)</h3>
      ${renderBarChart(names, answer.shapley.phi[session.predicted]!, 'chart-p')}
      <h3>Attributions toward ${esc(session.class_names[desired]!)} (desired)</h3>
      ${renderBarChart(names, answer.shapley.phi[desired]!, 'chart-q')}
      ${renderFallbackBanner(session, answer)}
      ${renderCounterfactualTable(session, answer)}
      <h3>Original point</h3>
      ${renderPointTable(session)}
      ${renderDesiredSelector(state)}
      <button data-action="resample">Sample another point</button>
      <button data-action="back-to-datasets">&larr; start over</button>
    </section>`;
}

export function renderApp(state: UiSessionState): string {
  const busy = state.busy ? '<div class="banner busy" data-testid="busy">Working&hellip;</div>' : '';
  let screen: string;
  switch (state.phase) {
    case 'dataset-select':
      screen = renderDatasetScreen(state);
      break;
    case 'model-select':
      screen = renderModelScreen(state);
      break;
    case 'querying':
      screen = renderQueryScreen(state);
      break;
    case 'answered':
      screen = renderAnswerScreen(state);
      break;
  }
  return `${renderError(state.error)}${busy}${screen}`;
}
