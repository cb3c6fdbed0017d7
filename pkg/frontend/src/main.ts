/**
 * Browser bootstrap: wires the profile editor, tab switching and API calls
 * onto the pure state/render modules. Profile edits re-evaluate after a
 * 300 ms debounce; responses carry their request sequence so a slow older
 * answer can never overwrite a newer one.
 */

import { ApiClient } from './api';
import { setField, toProfileJson, type ProfileDraft } from './profile';
import {
  acceptEvaluation,
  acceptReason,
  debounce,
  initialState,
  issueRequest,
  requestReason,
  selectGrant,
  type Tab,
  type ViewState,
} from './state';
import { evaluateViewHtml, kbViewHtml, reasonViewHtml } from './render';
import type {
  ConceptEntry,
  ConsistencyEntry,
  GrantDetail,
  GrantMeta,
  ImplicationsResponse,
} from './types';

const api = new ApiClient('');

let state: ViewState = initialState();
let grants: GrantMeta[] = [];
let grantDetails: GrantDetail[] = [];
let concepts: ConceptEntry[] = [];
let implications: ImplicationsResponse | null = null;
let consistency: ConsistencyEntry[] | null = null;

function $(selector: string): HTMLElement {
  const el = document.querySelector(selector);
  if (!el) throw new Error(`missing element: ${selector}`);
  return el as HTMLElement;
}

async function evaluateNow(): Promise<void> {
  const issued = issueRequest(state);
  state = issued.state;
  const seq = issued.seq;
  const filters = {
    category: state.categoryFilter || undefined,
    date: state.dateFilter || undefined,
  };
  try {
    const results = await api.evaluate(toProfileJson(state.draft), filters);
    state = acceptEvaluation(state, seq, results);
    renderCurrentTab();
  } catch (err) {
    $('#view').innerHTML = `<p class="notice">evaluation failed: ${String(err)}</p>`;
  }
}

const evaluateDebounced = debounce(() => void evaluateNow(), 300);

function onProfileEdit(field: keyof ProfileDraft, patch: { unknown?: boolean; value?: string }): void {
  state = { ...state, draft: setField(state.draft, field, patch) };
  syncProfileInputs();
  evaluateDebounced();
}

function profileRow(field: keyof ProfileDraft, label: string, hint: string): string {
  return (
    `<div class="field" data-field="${field}">` +
    `<label>${label}</label>` +
    `<input type="text" class="field-value" placeholder="${hint}">` +
    `<label class="unknown-toggle"><input type="checkbox" class="field-unknown"> unknown</label>` +
    `</div>`
  );
}

function syncProfileInputs(): void {
  for (const field of ['seat', 'sites', 'legalForm', 'oenace'] as const) {
    const row = $(`.field[data-field="${field}"]`);
    const value = row.querySelector('.field-value') as HTMLInputElement;
    const unknown = row.querySelector('.field-unknown') as HTMLInputElement;
    const draft = state.draft[field];
    if (value.value !== draft.value) value.value = draft.value;
    unknown.checked = draft.unknown;
    value.disabled = draft.unknown;
  }
}

function wireProfileEditor(): void {
  $('#profile').innerHTML =
    profileRow('seat', 'Unternehmenssitz (GKZ)', 'e.g. 20201') +
    profileRow('sites', 'Betriebsstandorte', 'comma-separated GKZ') +
    profileRow('legalForm', 'Rechtsform', 'e.g. Einzelunternehmen') +
    profileRow('oenace', 'ÖNACE', 'comma-separated codes') +
    `<div class="field"><label>Fördergebiet filter</label>` +
    `<input type="text" id="category-filter"></div>` +
    `<div class="field"><label>Application date</label>` +
    `<input type="date" id="date-filter"></div>` +
    `<label class="sort-toggle"><input type="checkbox" id="sort-by-date"> ` +
    `sort by valid-from (undated grants last)</label>`;

  for (const field of ['seat', 'sites', 'legalForm', 'oenace'] as const) {
    const row = $(`.field[data-field="${field}"]`);
    row.querySelector('.field-value')!.addEventListener('input', (ev) => {
      onProfileEdit(field, { value: (ev.target as HTMLInputElement).value });
    });
    row.querySelector('.field-unknown')!.addEventListener('change', (ev) => {
      onProfileEdit(field, { unknown: (ev.target as HTMLInputElement).checked });
    });
  }
  $('#category-filter').addEventListener('input', (ev) => {
    state = { ...state, categoryFilter: (ev.target as HTMLInputElement).value };
    evaluateDebounced();
  });
  $('#date-filter').addEventListener('change', (ev) => {
    state = { ...state, dateFilter: (ev.target as HTMLInputElement).value };
    evaluateDebounced();
  });
  $('#sort-by-date').addEventListener('change', (ev) => {
    state = { ...state, sortByDate: (ev.target as HTMLInputElement).checked };
    renderCurrentTab();
  });
  syncProfileInputs();
}

function renderCurrentTab(): void {
  const view = $('#view');
  document.querySelectorAll('nav button').forEach((b) => {
    b.classList.toggle('active', (b as HTMLElement).dataset.tab === state.tab);
  });
  $('#profile').style.display = state.tab === 'evaluate' ? '' : 'none';
  if (state.tab === 'evaluate') {
    view.innerHTML = evaluateViewHtml(state);
    view.querySelectorAll('.grant-row').forEach((row) => {
      row.addEventListener('click', () => {
        const name = (row as HTMLElement).dataset.grant ?? null;
        state = selectGrant(state, state.selectedGrant === name ? null : name);
        renderCurrentTab();
      });
    });
  } else if (state.tab === 'reason') {
    view.innerHTML = reasonViewHtml(state, grants);
    $('#reason-run').addEventListener('click', () => void runReason());
  } else {
    view.innerHTML = kbViewHtml(grantDetails, concepts, implications, consistency);
  }
}

async function runReason(): Promise<void> {
  const from = ($('#reason-from') as HTMLSelectElement).value;
  const to = ($('#reason-to') as HTMLSelectElement).value;
  const guarded = requestReason(state, from, to);
  state = guarded.state;
  if (guarded.blocked) {
    renderCurrentTab();
    return;
  }
  const result = await api.prove(from, to);
  state = acceptReason(state, from, to, result);
  renderCurrentTab();
}

async function switchTab(tab: Tab): Promise<void> {
  state = { ...state, tab };
  if (tab === 'kb' && grantDetails.length === 0) {
    grantDetails = await Promise.all(grants.map((g) => api.grantDetail(g.id)));
    concepts = await api.concepts();
    implications = await api.implications();
    consistency = await api.consistency();
  }
  renderCurrentTab();
}

async function boot(): Promise<void> {
  grants = await api.grants();
  if (grants.length > 1) {
    state = { ...state, reasonFrom: grants[0].name, reasonTo: grants[1].name };
  }
  document.querySelectorAll('nav button').forEach((b) => {
    b.addEventListener('click', () => {
      void switchTab((b as HTMLElement).dataset.tab as Tab);
    });
  });
  wireProfileEditor();
  renderCurrentTab();
  await evaluateNow();
}

void boot();
