/**
 * Wire types for the grant-engine JSON API. These mirror the server's
 * serializer one to one; the console never derives verdicts or derivations
 * itself, it only displays these payloads.
 */

export type VerdictValue = 'satisfied' | 'undecided' | 'not_satisfied';
export type TruthValue = 'true' | 'false' | 'unknown';

export interface GrantMeta {
  id: string;
  name: string;
  href: string | null;
  tp_ref_nr: number | null;
  categories: string[];
  valid_from: string | null;
  valid_to: string | null;
}

export interface TraceNode {
  formula: string;
  value: TruthValue;
  explanation: string | null;
  children: TraceNode[];
}

export interface EvalResult extends GrantMeta {
  verdict: VerdictValue;
  trace: TraceNode;
}

export interface FormulaNode {
  kind: string;
  text: string;
  explanation: string | null;
  children: FormulaNode[];
}

export interface GrantDetail extends GrantMeta {
  description: string;
  conditions: FormulaNode;
  conditions_text: string;
}

export interface DerivationNode {
  rule: string;
  conclusion: string;
  principal: { side: string; formula: string } | null;
  premises: DerivationNode[];
}

export interface ProveResponse {
  derivable: boolean;
  derivation: DerivationNode | null;
  html: string | null;
}

export interface ImplicationEdge {
  source: string;
  target: string;
  derivation: DerivationNode;
}

export interface ImplicationsResponse {
  edges: ImplicationEdge[];
  duplicates: string[][];
}

export interface ConsistencyEntry {
  grant: string;
  consistent: boolean;
  refutation?: DerivationNode;
}

export interface ConceptEntry {
  name: string;
  definition: string;
  explanation: string | null;
}

/** Company profile exactly as the server expects it; null marks Unknown. */
export interface ProfileJson {
  seat: string | null;
  sites: string[] | null;
  legal_form: string | null;
  oenace: string[] | null;
}

export interface EvaluateFilters {
  category?: string;
  date?: string;
}
