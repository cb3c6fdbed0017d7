import { describe, expect, it } from 'vitest';

import { emptyDraft, setField, toProfileJson, villachExampleDraft } from '../src/profile';
import cliVerdicts from './fixtures/cli-verdicts-villach.json';
import apiResults from './fixtures/evaluate-villach.json';

describe('profile serialization', () => {
  it('serializes unknown toggles to null', () => {
    expect(toProfileJson(emptyDraft())).toEqual({
      seat: null,
      sites: null,
      legal_form: null,
      oenace: null,
    });
  });

  it('serializes known fields to the exact wire format', () => {
    expect(toProfileJson(villachExampleDraft())).toEqual({
      seat: '20201',
      sites: ['20201'],
      legal_form: 'Einzelunternehmen',
      oenace: null,
    });
  });

  it('splits comma-separated code lists and drops blanks', () => {
    const draft = setField(emptyDraft(), 'oenace', {
      unknown: false,
      value: ' 55.10, 56 ,, ',
    });
    expect(toProfileJson(draft).oenace).toEqual(['55.10', '56']);
  });

  it('present-but-empty code list stays [] (known-empty, not unknown)', () => {
    const draft = setField(emptyDraft(), 'sites', { unknown: false, value: '' });
    expect(toProfileJson(draft).sites).toEqual([]);
  });

  it('setField leaves other fields untouched', () => {
    const draft = setField(villachExampleDraft(), 'legalForm', { unknown: true });
    expect(draft.legalForm.unknown).toBe(true);
    expect(draft.seat).toEqual({ unknown: false, value: '20201' });
  });
});

describe('round-trip fidelity against the engine', () => {
  it('the API verdicts for the example draft equal the CLI verdicts', () => {
    // both fixtures were produced from the exact JSON the draft serializes to
    const apiByName = new Map(apiResults.map((r) => [r.name, r.verdict]));
    for (const entry of cliVerdicts) {
      expect(apiByName.get(entry.name)).toBe(entry.verdict);
    }
    expect(cliVerdicts.length).toBe(apiResults.length);
  });
});
