/**
 * What-if profile editing. Each register field carries an "unknown" toggle;
 * toggled-off fields serialize to null, which the engine reads as the
 * register being unavailable.
 */

import type { ProfileJson } from './types';

export interface FieldDraft {
  unknown: boolean;
  value: string;
}

export interface ProfileDraft {
  seat: FieldDraft;
  sites: FieldDraft; // comma-separated codes
  legalForm: FieldDraft;
  oenace: FieldDraft; // comma-separated codes
}

export function emptyDraft(): ProfileDraft {
  return {
    seat: { unknown: true, value: '' },
    sites: { unknown: true, value: '' },
    legalForm: { unknown: true, value: '' },
    oenace: { unknown: true, value: '' },
  };
}

export function villachExampleDraft(): ProfileDraft {
  return {
    seat: { unknown: false, value: '20201' },
    sites: { unknown: false, value: '20201' },
    legalForm: { unknown: false, value: 'Einzelunternehmen' },
    oenace: { unknown: true, value: '' },
  };
}

function splitCodes(value: string): string[] {
  return value
    .split(',')
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

/** Serialize to the exact profile JSON format the API and CLI share. */
export function toProfileJson(draft: ProfileDraft): ProfileJson {
  return {
    seat: draft.seat.unknown ? null : draft.seat.value.trim(),
    sites: draft.sites.unknown ? null : splitCodes(draft.sites.value),
    legal_form: draft.legalForm.unknown ? null : draft.legalForm.value.trim(),
    oenace: draft.oenace.unknown ? null : splitCodes(draft.oenace.value),
  };
}

export function setField(
  draft: ProfileDraft,
  field: keyof ProfileDraft,
  patch: Partial<FieldDraft>,
): ProfileDraft {
  return { ...draft, [field]: { ...draft[field], ...patch } };
}
