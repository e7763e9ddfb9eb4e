// Thin typed client for the cartometer service. Every number the UI shows
// comes from these responses; nothing is recomputed client-side.

import type {
  CalibrationResult,
  ControlPointPayload,
  FitPayload,
  MeasurementPayload,
  SessionDoc,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.base + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let code = 'internal-error';
      let message = text;
      try {
        const parsed = JSON.parse(text);
        code = parsed?.error?.code ?? code;
        message = parsed?.error?.message ?? message;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(resp.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request('GET', '/api/sessions');
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request('GET', `/api/sessions/${encodeURIComponent(id)}`);
  }

  putSession(id: string, doc: SessionDoc): Promise<SessionDoc> {
    return this.request('PUT', `/api/sessions/${encodeURIComponent(id)}`, doc);
  }

  calibrate(
    id: string,
    pairs: ControlPointPayload[],
    kind: 'similarity' | 'affine' = 'similarity',
  ): Promise<CalibrationResult> {
    return this.request('POST', `/api/sessions/${encodeURIComponent(id)}/calibrate`, {
      pairs,
      kind,
    });
  }

  addPoint(id: string, featureId: string, u: number, v: number) {
    return this.request<{ id: string; points: [number, number][] }>(
      'POST',
      `/api/sessions/${encodeURIComponent(id)}/features/${encodeURIComponent(featureId)}/points`,
      { u, v },
    );
  }

  measure(id: string, featureId: string, unit?: string): Promise<MeasurementPayload> {
    return this.request(
      'POST',
      `/api/sessions/${encodeURIComponent(id)}/features/${encodeURIComponent(featureId)}/measure`,
      unit ? { unit } : {},
    );
  }

  fit(id: string, featureId: string, n?: number): Promise<FitPayload> {
    return this.request(
      'POST',
      `/api/sessions/${encodeURIComponent(id)}/features/${encodeURIComponent(featureId)}/fit`,
      n === undefined ? {} : { n },
    );
  }
}
