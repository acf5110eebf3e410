/** Panel values, validation, and the request payload they map to.
 *
 * The display radius only affects rendering; it never enters the request.
 */

import type {SampleRequest, SamplingKind} from './api';

export type PanelTab = 'surface' | 'volume';

export interface TransformParams {
  normalize: boolean;
  scale: [number, number, number];
}

export interface SurfaceParams {
  minDist: number;
  density: number;
  trials: number;
  norm: 'euclidean' | 'geodesic';
}

export interface VolumeParams {
  radius: number;
  mode: 'grid' | 'random';
  invert: boolean;
  sdfResolution: number;
  /** Candidate multiplier per cell; null means "equal to trials". */
  density: number | null;
  trials: number;
  margin: number;
}

export const TRANSFORM_DEFAULTS: TransformParams = {normalize: true, scale: [1, 1, 1]};

export const SURFACE_DEFAULTS: SurfaceParams = {
  minDist: 0.02,
  density: 40,
  trials: 10,
  norm: 'euclidean',
};

export const VOLUME_DEFAULTS: VolumeParams = {
  radius: 0.02,
  mode: 'grid',
  invert: false,
  sdfResolution: 30,
  density: null,
  trials: 10,
  margin: 0,
};

export function volumeDensity(params: VolumeParams): number {
  return params.density ?? params.trials;
}

export function validateTransform(t: TransformParams): string | null {
  if (t.scale.some((f) => !(f > 0) || !Number.isFinite(f))) {
    return 'scale factors must be positive';
  }
  return null;
}

export function validateSurface(p: SurfaceParams): string | null {
  if (!(p.minDist > 0)) return 'min dist must be positive';
  if (!(p.density > 0)) return 'density must be positive';
  if (!(p.trials >= 1)) return 'trials must be at least 1';
  return null;
}

export function validateVolume(p: VolumeParams): string | null {
  if (!(p.radius > 0)) return 'radius must be positive';
  if (!(p.sdfResolution >= 2)) return 'SDF resolution must be at least 2';
  if (!(p.trials >= 1)) return 'trials must be at least 1';
  if (p.density !== null && !(p.density > 0)) return 'density must be positive';
  if (!(p.margin >= 0)) return 'margin must not be negative';
  return null;
}

export function buildSampleRequest(
  sessionId: string,
  tab: PanelTab,
  transform: TransformParams,
  surface: SurfaceParams,
  volume: VolumeParams,
  seed: number,
): SampleRequest {
  const base = {
    normalize: transform.normalize,
    scale: transform.scale,
    seed,
  };
  if (tab === 'surface') {
    return {
      sessionId,
      kind: 'surface',
      params: {
        ...base,
        minDist: surface.minDist,
        density: surface.density,
        trials: surface.trials,
        norm: surface.norm,
      },
    };
  }
  const kind: SamplingKind = volume.mode === 'grid' ? 'volumeGrid' : 'volumeRandom';
  const params: Record<string, unknown> = {
    ...base,
    radius: volume.radius,
    sdfResolution: volume.sdfResolution,
    invert: volume.invert,
    margin: volume.margin,
    trials: volume.trials,
  };
  if (volume.mode === 'random') {
    params['density'] = volumeDensity(volume);
  }
  return {sessionId, kind, params};
}

/** Session + in-flight bookkeeping: at most one sampling request at a time. */
export class ViewerState {
  sessionId: string | null = null;
  busy = false;
  activeTab: PanelTab = 'surface';
  transform: TransformParams = {...TRANSFORM_DEFAULTS};
  surface: SurfaceParams = {...SURFACE_DEFAULTS};
  volume: VolumeParams = {...VOLUME_DEFAULTS};
  seed = 0;
  displayRadius = 0.02;
  lastCount: number | null = null;
  lastElapsedMs: number | null = null;

  get hasResult(): boolean {
    return this.lastCount !== null;
  }

  /** Returns false (and does nothing) when no session exists or one is in flight. */
  beginSampling(): boolean {
    if (this.busy || this.sessionId === null) return false;
    this.busy = true;
    return true;
  }

  finishSampling(count: number, elapsedMs: number): void {
    this.busy = false;
    this.lastCount = count;
    this.lastElapsedMs = elapsedMs;
  }

  failSampling(): void {
    this.busy = false;
  }

  resetSession(sessionId: string): void {
    this.sessionId = sessionId;
    this.lastCount = null;
    this.lastElapsedMs = null;
    this.busy = false;
  }

  currentRequest(): SampleRequest {
    if (this.sessionId === null) throw new Error('no session');
    return buildSampleRequest(
      this.sessionId,
      this.activeTab,
      this.transform,
      this.surface,
      this.volume,
      this.seed,
    );
  }

  validateActive(): string | null {
    const transformError = validateTransform(this.transform);
    if (transformError) return transformError;
    return this.activeTab === 'surface'
      ? validateSurface(this.surface)
      : validateVolume(this.volume);
  }
}

export function csvLineCount(text: string): number {
  return text.split('\n').filter((line) => line.length > 0).length;
}
