// Thin fetch client for the search service. Every number the UI shows
// comes back through these calls; nothing is computed locally.

import type {
  DatasetCreated,
  MidResponse,
  PatternCreated,
  Point,
  SearchRequestBody,
  SearchResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

function extractDetail(body: unknown): string {
  if (body && typeof body === 'object' && 'detail' in body) {
    const detail = (body as { detail: unknown }).detail;
    if (typeof detail === 'string') return detail;
    return JSON.stringify(detail);
  }
  return JSON.stringify(body);
}

export class PatredClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      throw new ApiError(response.status, extractDetail(body));
    }
    return body as T;
  }

  uploadDataset(csv: string, name = ''): Promise<DatasetCreated> {
    const query = name ? `?name=${encodeURIComponent(name)}` : '';
    return this.request(`/datasets${query}`, {
      method: 'POST',
      headers: { 'content-type': 'text/csv' },
      body: csv,
    });
  }

  createPattern(points: Point[], name = ''): Promise<PatternCreated> {
    return this.request('/patterns', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ name, points: points.map((p) => [p.x, p.y]) }),
    });
  }

  search(body: SearchRequestBody): Promise<SearchResponse> {
    return this.request('/search', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  mid(resultId: number): Promise<MidResponse> {
    return this.request(`/results/${resultId}/mid`);
  }

  result(resultId: number): Promise<SearchResponse> {
    return this.request(`/results/${resultId}`);
  }
}
