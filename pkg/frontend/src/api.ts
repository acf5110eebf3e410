/** Typed client for the sampling service endpoints. */

export interface MeshSummary {
  sessionId: string;
  vertexCount: number;
  triangleCount: number;
  aabb: {min: number[]; max: number[]};
  surfaceArea: number;
}

export interface SampleSummary {
  particleCount: number;
  spacing: number | null;
  elapsedMs: number;
}

export interface ParticlePayload {
  spacing: number | null;
  kind: string;
  positions: number[][];
}

export type SamplingKind = 'surface' | 'volumeGrid' | 'volumeRandom';
export type ResultFormat = 'json' | 'csv' | 'rawf64';

export interface SampleRequest {
  sessionId: string;
  kind: SamplingKind;
  params: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorName: string,
    readonly detail: string,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

const POLL_INTERVAL_MS = 250;

async function errorFrom(response: Response): Promise<ApiError> {
  let name = `HTTP ${response.status}`;
  let detail = '';
  try {
    const body = (await response.json()) as {error?: string; detail?: string};
    if (body.error) name = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
    detail = response.statusText;
  }
  return new ApiError(response.status, name, detail);
}

export class MeshSampleApi {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
    private readonly sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ) {}

  async uploadMesh(body: ArrayBuffer | Uint8Array | string, contentType: string): Promise<MeshSummary> {
    const response = await this.fetchFn(`${this.baseUrl}/api/mesh`, {
      method: 'POST',
      headers: {'content-type': contentType},
      body: body as BodyInit,
    });
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as MeshSummary;
  }

  /** Runs a sampling request, transparently polling if the service answers 202. */
  async sample(request: SampleRequest): Promise<SampleSummary> {
    const response = await this.fetchFn(`${this.baseUrl}/api/sample`, {
      method: 'POST',
      headers: {'content-type': 'application/json'},
      body: JSON.stringify(request),
    });
    if (response.status === 202) {
      const {pollToken} = (await response.json()) as {pollToken: string};
      return this.pollUntilDone(pollToken);
    }
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as SampleSummary;
  }

  private async pollUntilDone(token: string): Promise<SampleSummary> {
    for (;;) {
      const response = await this.fetchFn(`${this.baseUrl}/api/poll?token=${encodeURIComponent(token)}`);
      if (!response.ok) throw await errorFrom(response);
      const body = (await response.json()) as {status: string} & SampleSummary;
      if (body.status === 'done') return body;
      await this.sleep(POLL_INTERVAL_MS);
    }
  }

  async resultBytes(sessionId: string, format: ResultFormat): Promise<ArrayBuffer> {
    const url = `${this.baseUrl}/api/result?sessionId=${encodeURIComponent(sessionId)}&format=${format}`;
    const response = await this.fetchFn(url);
    if (!response.ok) throw await errorFrom(response);
    return response.arrayBuffer();
  }

  async resultJson(sessionId: string): Promise<ParticlePayload> {
    const bytes = await this.resultBytes(sessionId, 'json');
    return JSON.parse(new TextDecoder().decode(bytes)) as ParticlePayload;
  }
}
