import { describe, expect, it, vi } from 'vitest';

import {
  acceptEvaluation,
  acceptReason,
  debounce,
  initialState,
  issueRequest,
  requestReason,
} from '../src/state';
import type { EvalResult, ProveResponse } from '../src/types';
import villach from './fixtures/evaluate-villach.json';
import legalUnknown from './fixtures/evaluate-villach-legal-unknown.json';
import proof from './fixtures/prove-steiermark.json';

const RESULTS_A = villach as EvalResult[];
const RESULTS_B = legalUnknown as EvalResult[];

describe('request sequencing', () => {
  it('applies a response matching the newest request', () => {
    let { state, seq } = issueRequest(initialState());
    state = acceptEvaluation(state, seq, RESULTS_A);
    expect(state.results).toBe(RESULTS_A);
    expect(state.resultsSeq).toBe(seq);
  });

  it('drops a stale response once a newer request was issued', () => {
    const first = issueRequest(initialState());
    const second = issueRequest(first.state);
    let state = acceptEvaluation(second.state, second.seq, RESULTS_B);
    const afterStale = acceptEvaluation(state, first.seq, RESULTS_A);
    expect(afterStale).toBe(state); // unchanged: the older answer is ignored
    expect(afterStale.results).toBe(RESULTS_B);
  });

  it('drops a stale response even before the newer one arrives', () => {
    const first = issueRequest(initialState());
    const second = issueRequest(first.state);
    const state = acceptEvaluation(second.state, first.seq, RESULTS_A);
    expect(state.results).toBeNull();
    const settled = acceptEvaluation(state, second.seq, RESULTS_B);
    expect(settled.results).toBe(RESULTS_B);
  });
});

describe('reason tab guard and history', () => {
  it('blocks identical grant pairs with a hint', () => {
    const { state, blocked } = requestReason(initialState(), 'G', 'G');
    expect(blocked).toBe(true);
    expect(state.reasonNotice).toMatch(/different grants/i);
  });

  it('keeps a session history, newest first', () => {
    let state = initialState();
    const asked = requestReason(state, 'A', 'B');
    expect(asked.blocked).toBe(false);
    state = acceptReason(asked.state, 'A', 'B', proof as ProveResponse);
    state = acceptReason(state, 'B', 'A', {
      derivable: false,
      derivation: null,
      html: null,
    });
    expect(state.reasonHistory.map((h) => h.derivable)).toEqual([false, true]);
  });
});

describe('debounce', () => {
  it('fires once on the trailing edge', () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const bump = debounce((n: number) => calls.push(n), 300);
    bump(1);
    bump(2);
    vi.advanceTimersByTime(299);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([2]);
    bump(3);
    vi.advanceTimersByTime(300);
    expect(calls).toEqual([2, 3]);
    vi.useRealTimers();
  });
});
