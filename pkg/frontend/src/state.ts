/**
 * View state and the stale-response guard.
 *
 * Every evaluation request gets a sequence number; a response is applied
 * only if no newer request was issued meanwhile, so results always
 * correspond to the profile that produced them. Pure functions over a
 * state object: the DOM layer owns nothing but rendering.
 */

import type { ProfileDraft } from './profile';
import { villachExampleDraft } from './profile';
import type { EvalResult, ProveResponse } from './types';

export type Tab = 'evaluate' | 'reason' | 'kb';

export interface ReasonEntry {
  from: string;
  to: string;
  derivable: boolean;
}

export interface ViewState {
  tab: Tab;
  draft: ProfileDraft;
  issuedSeq: number; // last request sequence handed out
  resultsSeq: number; // sequence of the displayed results
  results: EvalResult[] | null;
  selectedGrant: string | null;
  categoryFilter: string;
  dateFilter: string;
  sortByDate: boolean;
  reasonFrom: string;
  reasonTo: string;
  reasonResult: ProveResponse | null;
  reasonNotice: string | null;
  reasonHistory: ReasonEntry[];
}

export function initialState(): ViewState {
  return {
    tab: 'evaluate',
    draft: villachExampleDraft(),
    issuedSeq: 0,
    resultsSeq: 0,
    results: null,
    selectedGrant: null,
    categoryFilter: '',
    dateFilter: '',
    sortByDate: false,
    reasonFrom: '',
    reasonTo: '',
    reasonResult: null,
    reasonNotice: null,
    reasonHistory: [],
  };
}

/** Hand out the next request sequence number. */
export function issueRequest(state: ViewState): { state: ViewState; seq: number } {
  const seq = state.issuedSeq + 1;
  return { state: { ...state, issuedSeq: seq }, seq };
}

/**
 * Apply an evaluation response unless a newer request is already in flight
 * or applied; stale responses are dropped wholesale.
 */
export function acceptEvaluation(
  state: ViewState,
  seq: number,
  results: EvalResult[],
): ViewState {
  if (seq < state.issuedSeq || seq <= state.resultsSeq) {
    return state; // stale: a newer request was issued or already answered
  }
  return { ...state, results, resultsSeq: seq };
}

export function selectGrant(state: ViewState, name: string | null): ViewState {
  return { ...state, selectedGrant: name };
}

const SAME_GRANT_HINT =
  'Pick two different grants: implication between structurally identical ' +
  'conditions is filtered out by the engine.';

/** Guard for the reason tab; identical picks are blocked client-side with a hint. */
export function requestReason(
  state: ViewState,
  from: string,
  to: string,
): { state: ViewState; blocked: boolean } {
  if (from === to) {
    return {
      state: { ...state, reasonFrom: from, reasonTo: to, reasonNotice: SAME_GRANT_HINT },
      blocked: true,
    };
  }
  return {
    state: { ...state, reasonFrom: from, reasonTo: to, reasonNotice: null },
    blocked: false,
  };
}

export function acceptReason(
  state: ViewState,
  from: string,
  to: string,
  result: ProveResponse,
): ViewState {
  const entry: ReasonEntry = { from, to, derivable: result.derivable };
  return {
    ...state,
    reasonResult: result,
    reasonNotice: null,
    reasonHistory: [entry, ...state.reasonHistory].slice(0, 20),
  };
}

/** Trailing-edge debouncer; 300 ms default per the profile-edit contract. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs = 300,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } = {
    set: setTimeout,
    clear: clearTimeout,
  },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) {
      timers.clear(handle);
    }
    handle = timers.set(() => {
      handle = null;
      fn(...args);
    }, waitMs);
  };
}
