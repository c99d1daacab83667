import { describe, expect, it } from 'vitest';

import {
  chooseDataset,
  initialState,
  sessionCreated,
  answered,
  withDatasets,
} from '../src/state.js';
import {
  counterfactualCellMutated,
  fmt,
  renderAnswerScreen,
  renderBarChart,
  renderCounterfactualTable,
  renderDesiredSelector,
  renderFallbackBanner,
  renderApp,
} from '../src/view.js';
import {
  FEATURE_NAMES,
  IRIS_DESCRIPTOR,
  explainFixture,
  fallbackFixture,
  sessionFixture,
} from './fixtures.js';

function answeredState(answer = explainFixture()) {
  let state = withDatasets(initialState(), [IRIS_DESCRIPTOR]);
  state = chooseDataset(state, 'iris');
  state = sessionCreated(state, sessionFixture());
  return answered(state, 1, answer);
}

describe('bar chart', () => {
  it('bar signs reproduce why_p membership for the predicted class', () => {
    const answer = explainFixture();
    const session = sessionFixture();
    const html = renderBarChart(FEATURE_NAMES, answer.shapley.phi[0]!, 'chart-p');
    const rows = [...html.matchAll(/data-sign="(\w+)"/g)].map((m) => m[1]);
    const expected = answer.shapley.phi[0]!.map((v) =>
      v > 0 ? 'positive' : v < 0 ? 'negative' : 'zero',
    );
    expect(rows).toEqual(expected);
    // positive bars are exactly the why_p features
    const positives = FEATURE_NAMES.filter((_, j) => rows[j] === 'positive');
    expect(new Set(positives)).toEqual(new Set(answer.why_p.map(([name]) => name)));
    expect(session.predicted).toBe(0);
  });

  it('displays payload values verbatim, no recomputation', () => {
    const phi = [0.1234567, -0.7654321];
    const html = renderBarChart(['a', 'b'], phi, 'chart-x');
    expect(html).toContain(fmt(0.1234567));
    expect(html).toContain(fmt(-0.7654321));
  });
});

describe('counterfactual highlighting', () => {
  it('marks exactly the cells whose displayed value differs', () => {
    const original = [4.4, 2.9, 1.4, 0.2];
    expect(counterfactualCellMutated(original, [5.2, 2.9, 3.9, 0.2])).toEqual([
      true,
      false,
      true,
      false,
    ]);
    expect(counterfactualCellMutated(original, [4.4, 2.9, 1.4, 0.2])).toEqual([
      false,
      false,
      false,
      false,
    ]);
  });

  it('renders highlight flags into the table cells', () => {
    const html = renderCounterfactualTable(sessionFixture(), explainFixture());
    const flags = [...html.matchAll(/data-mutated="(\w+)"/g)].map((m) => m[1]);
    // two rows of the fixture mutate features 0 and 2 only
    expect(flags).toEqual([
      'true', 'false', 'true', 'false',
      'true', 'false', 'true', 'false',
    ]);
  });

  it('is empty when there are no counterfactuals', () => {
    expect(renderCounterfactualTable(sessionFixture(), fallbackFixture())).toBe('');
  });
});

describe('fallback banner', () => {
  it('renders the nearest desired point when present', () => {
    const html = renderFallbackBanner(sessionFixture(), fallbackFixture());
    expect(html).toContain('fallback-banner');
    expect(html).toContain(fmt(5.0));
  });

  it('absent for non-fallback answers', () => {
    expect(renderFallbackBanner(sessionFixture(), explainFixture())).toBe('');
  });

  it('explains the empty-result case', () => {
    const answer = { ...fallbackFixture(), fallback_point: null };
    const html = renderFallbackBanner(sessionFixture(), answer);
    expect(html).toContain('No counterfactual datapoint could be generated');
  });
});

describe('desired selector', () => {
  it('never offers the predicted class', () => {
    let state = withDatasets(initialState(), [IRIS_DESCRIPTOR]);
    state = chooseDataset(state, 'iris');
    state = sessionCreated(state, sessionFixture());
    const html = renderDesiredSelector(state);
    const offered = [...html.matchAll(/data-desired="(\d+)"/g)].map((m) => Number(m[1]));
    expect(offered).toEqual([1, 2]);
    expect(html).not.toContain('not setosa?');
  });
});

describe('answer screen', () => {
  it('shows both NL sentences from the payload', () => {
    const html = renderAnswerScreen(answeredState());
    expect(html).toContain('Algorithms Pro classification was primarily influenced by');
    expect(html).toContain('Algorithms Anti classification was primarily influenced by');
  });

  it('every displayed number traces to a payload field', () => {
    const answer = explainFixture();
    const session = sessionFixture();
    const html = renderAnswerScreen(answeredState(answer));
    const shown = [...html.matchAll(/data-testid="chart-[pq]-value">([^<]+)</g)].map(
      (m) => m[1],
    );
    const allowed = new Set(
      [...answer.shapley.phi[session.predicted]!, ...answer.shapley.phi[1]!].map(fmt),
    );
    for (const value of shown) {
      expect(allowed.has(value!)).toBe(true);
    }
  });
});

describe('top-level render', () => {
  it('renders each phase exactly once', () => {
    let state = withDatasets(initialState(), [IRIS_DESCRIPTOR]);
    expect(renderApp(state)).toContain('data-phase="dataset-select"');
    state = chooseDataset(state, 'iris');
    expect(renderApp(state)).toContain('data-phase="model-select"');
    state = sessionCreated(state, sessionFixture());
    expect(renderApp(state)).toContain('data-phase="querying"');
    state = answered(state, 1, explainFixture());
    expect(renderApp(state)).toContain('data-phase="answered"');
  });
});
