/**
 * HTML builders for the three tabs. Pure string functions over API payloads
 * so they test without a DOM; main.ts owns insertion and event wiring.
 *
 * Server-rendered derivation HTML is embedded verbatim (it is produced and
 * escaped by the engine); all other interpolated text goes through esc().
 */

import type {
  ConceptEntry,
  ConsistencyEntry,
  EvalResult,
  GrantDetail,
  GrantMeta,
  ImplicationsResponse,
  TraceNode,
  VerdictValue,
} from './types';
import type { ViewState } from './state';

export function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export const BUCKET_ORDER: VerdictValue[] = ['satisfied', 'undecided', 'not_satisfied'];

export const BUCKET_LABELS: Record<VerdictValue, string> = {
  satisfied: 'Criteria satisfied',
  undecided: 'Not decidable from the available data',
  not_satisfied: 'Criteria not satisfied',
};

export interface Buckets {
  satisfied: EvalResult[];
  undecided: EvalResult[];
  not_satisfied: EvalResult[];
}

/** Group results by verdict, optionally date-sorted (undated grants last). */
export function groupBuckets(results: EvalResult[], sortByDate = false): Buckets {
  const buckets: Buckets = { satisfied: [], undecided: [], not_satisfied: [] };
  for (const r of results) {
    buckets[r.verdict].push(r);
  }
  if (sortByDate) {
    for (const key of BUCKET_ORDER) {
      buckets[key].sort((a, b) => {
        if (a.valid_from === null && b.valid_from === null) return 0;
        if (a.valid_from === null) return 1; // undated grants sort last
        if (b.valid_from === null) return -1;
        return a.valid_from.localeCompare(b.valid_from);
      });
    }
  }
  return buckets;
}

function grantRow(r: EvalResult, selected: boolean): string {
  const cats = r.categories.length
    ? `<span class="tags">${r.categories.map(esc).join(', ')}</span>`
    : '';
  const dates =
    r.valid_from || r.valid_to
      ? `<span class="dates">${esc(r.valid_from ?? '…')} – ${esc(r.valid_to ?? '…')}</span>`
      : '';
  const cls = selected ? 'grant-row selected' : 'grant-row';
  return (
    `<li class="${cls}" data-grant="${esc(r.name)}">` +
    `<span class="grant-name">${esc(r.name)}</span>${cats}${dates}</li>`
  );
}

export function traceHtml(t: TraceNode): string {
  const note = t.explanation
    ? `<div class="trace-note">${esc(t.explanation)}</div>`
    : '';
  const children = t.children.map(traceHtml).join('');
  return (
    `<div class="trace-node value-${t.value}">` +
    `<code>${esc(t.formula)}</code><span class="trace-value">${t.value}</span>` +
    `${note}${children}</div>`
  );
}

export function evaluateViewHtml(state: ViewState): string {
  if (state.results === null) {
    return '<p class="placeholder">Evaluating…</p>';
  }
  const buckets = groupBuckets(state.results, state.sortByDate);
  const sections = BUCKET_ORDER.map((key) => {
    const rows = buckets[key].map((r) => grantRow(r, r.name === state.selectedGrant));
    const body = rows.length ? `<ul>${rows.join('')}</ul>` : '<p class="empty">none</p>';
    return (
      `<section class="bucket bucket-${key}" data-bucket="${key}">` +
      `<h3>${BUCKET_LABELS[key]} (${rows.length})</h3>${body}</section>`
    );
  });
  let detail = '';
  if (state.selectedGrant !== null) {
    const match = state.results.find((r) => r.name === state.selectedGrant);
    if (match) {
      detail =
        `<section class="trace-panel"><h3>Why: ${esc(match.name)}</h3>` +
        `${traceHtml(match.trace)}</section>`;
    }
  }
  return sections.join('') + detail;
}

export function reasonViewHtml(state: ViewState, grants: GrantMeta[]): string {
  const options = (chosen: string) =>
    grants
      .map(
        (g) =>
          `<option value="${esc(g.name)}"${g.name === chosen ? ' selected' : ''}>` +
          `${esc(g.name)}</option>`,
      )
      .join('');
  const picker =
    `<div class="reason-picker">` +
    `<label>if the conditions of <select id="reason-from">${options(state.reasonFrom)}</select></label>` +
    `<label>hold, do those of <select id="reason-to">${options(state.reasonTo)}</select>?</label>` +
    `<button id="reason-run">Ask the prover</button></div>`;

  let panel = '';
  if (state.reasonNotice) {
    panel = `<p class="notice">${esc(state.reasonNotice)}</p>`;
  } else if (state.reasonResult) {
    panel = state.reasonResult.derivable
      ? `<div class="derivation">${state.reasonResult.html ?? ''}</div>`
      : '<p class="notice">Not derivable: the first grant\'s conditions do not imply the second\'s.</p>';
  }
  const history = state.reasonHistory
    .map(
      (h) =>
        `<li>${esc(h.from)} ⇒ ${esc(h.to)}: ${h.derivable ? 'derivable' : 'not derivable'}</li>`,
    )
    .join('');
  const historyBlock = history ? `<h3>Session history</h3><ol class="history">${history}</ol>` : '';
  return picker + panel + historyBlock;
}

export function kbViewHtml(
  grants: GrantDetail[],
  concepts: ConceptEntry[],
  implications: ImplicationsResponse | null,
  consistency: ConsistencyEntry[] | null,
): string {
  const consistentByName = new Map(
    (consistency ?? []).map((c) => [c.grant, c.consistent]),
  );
  const grantCards = grants
    .map((g) => {
      const badge = consistentByName.get(g.name) === false
        ? '<span class="badge inconsistent">inconsistent</span>'
        : '';
      return (
        `<article class="grant-card">` +
        `<h3>${esc(g.name)} ${badge}</h3>` +
        `<p class="description">${esc(g.description)}</p>` +
        `${formulaTree(g)}</article>`
      );
    })
    .join('');
  const conceptList = concepts
    .map(
      (c) =>
        `<li class="concept" data-concept="${esc(c.name)}"><code>${esc(c.name)}</code>` +
        `<div class="concept-pop">${esc(c.definition)}` +
        (c.explanation ? `<p>${esc(c.explanation)}</p>` : '') +
        `</div></li>`,
    )
    .join('');
  let edgeRows = '';
  if (implications) {
    edgeRows = implications.edges
      .map((e) => `<tr><td>${esc(e.source)}</td><td>⇒</td><td>${esc(e.target)}</td></tr>`)
      .join('');
    for (const [a, b] of implications.duplicates) {
      edgeRows += `<tr class="dup"><td>${esc(a)}</td><td>=</td><td>${esc(b)}</td></tr>`;
    }
  }
  const matrix = implications
    ? `<h3>Implications between grants</h3><table class="matrix">${edgeRows || '<tr><td>none</td></tr>'}</table>`
    : '';
  return (
    `<section class="kb-grants">${grantCards}</section>` +
    `<section class="kb-concepts"><h3>Defined concepts</h3><ul>${conceptList}</ul></section>` +
    `<section class="kb-matrix">${matrix}</section>`
  );
}

function formulaTree(g: GrantDetail): string {
  const walk = (node: GrantDetail['conditions']): string => {
    const note = node.explanation
      ? `<div class="formula-note">${esc(node.explanation)}</div>`
      : '';
    const kids = node.children.map(walk).join('');
    const label = node.children.length ? esc(node.kind) : `<code>${esc(node.text)}</code>`;
    return `<div class="formula-node">${label}${note}${kids}</div>`;
  };
  return `<div class="formula-tree">${walk(g.conditions)}</div>`;
}
