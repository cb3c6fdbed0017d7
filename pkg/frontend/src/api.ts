/**
 * Thin typed client for the engine's JSON API. The fetch function is
 * injectable so tests can feed recorded responses.
 */

import type {
  ConceptEntry,
  ConsistencyEntry,
  EvalResult,
  EvaluateFilters,
  GrantDetail,
  GrantMeta,
  ImplicationsResponse,
  ProfileJson,
  ProveResponse,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`API error ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl = '',
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const detail =
        body && typeof body === 'object' && 'detail' in body
          ? String((body as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }

  grants(): Promise<GrantMeta[]> {
    return this.request('/api/grants');
  }

  grantDetail(id: string): Promise<GrantDetail> {
    return this.request(`/api/grants/${encodeURIComponent(id)}`);
  }

  concepts(): Promise<ConceptEntry[]> {
    return this.request('/api/concepts');
  }

  evaluate(profile: ProfileJson, filters?: EvaluateFilters): Promise<EvalResult[]> {
    const payload: Record<string, unknown> = { profile };
    if (filters && (filters.category || filters.date)) {
      payload.filters = filters;
    }
    return this.post('/api/evaluate', payload);
  }

  prove(from: string, to: string): Promise<ProveResponse> {
    return this.post('/api/prove', { from, to });
  }

  implications(): Promise<ImplicationsResponse> {
    return this.request('/api/implications');
  }

  consistency(): Promise<ConsistencyEntry[]> {
    return this.request('/api/consistency');
  }
}
