import {describe, expect, it} from 'vitest';

import {
  buildSampleRequest,
  csvLineCount,
  SURFACE_DEFAULTS,
  TRANSFORM_DEFAULTS,
  validateSurface,
  validateVolume,
  ViewerState,
  VOLUME_DEFAULTS,
  volumeDensity,
} from '../src/state';

describe('panel defaults', () => {
  it('match the published defaults', () => {
    expect(SURFACE_DEFAULTS.density).toBe(40);
    expect(SURFACE_DEFAULTS.trials).toBe(10);
    expect(SURFACE_DEFAULTS.norm).toBe('euclidean');
    expect(VOLUME_DEFAULTS.sdfResolution).toBe(30);
    expect(VOLUME_DEFAULTS.trials).toBe(10);
  });

  it('volume density defaults to the trial count', () => {
    expect(volumeDensity(VOLUME_DEFAULTS)).toBe(VOLUME_DEFAULTS.trials);
    expect(volumeDensity({...VOLUME_DEFAULTS, trials: 7})).toBe(7);
    expect(volumeDensity({...VOLUME_DEFAULTS, density: 3})).toBe(3);
  });
});

describe('validation', () => {
  it('rejects a zero min dist without a round trip', () => {
    expect(validateSurface({...SURFACE_DEFAULTS, minDist: 0})).toMatch(/min dist/);
    expect(validateSurface(SURFACE_DEFAULTS)).toBeNull();
  });

  it('rejects bad volume parameters', () => {
    expect(validateVolume({...VOLUME_DEFAULTS, radius: -1})).toMatch(/radius/);
    expect(validateVolume({...VOLUME_DEFAULTS, sdfResolution: 1})).toMatch(/resolution/);
    expect(validateVolume(VOLUME_DEFAULTS)).toBeNull();
  });
});

describe('request payloads', () => {
  it('surface request carries the wire parameter names', () => {
    const request = buildSampleRequest(
      's1', 'surface', TRANSFORM_DEFAULTS, SURFACE_DEFAULTS, VOLUME_DEFAULTS, 0,
    );
    expect(request).toEqual({
      sessionId: 's1',
      kind: 'surface',
      params: {
        normalize: true,
        scale: [1, 1, 1],
        seed: 0,
        minDist: 0.02,
        density: 40,
        trials: 10,
        norm: 'euclidean',
      },
    });
  });

  it('volume grid request maps mode to the sampling kind', () => {
    const request = buildSampleRequest(
      's1', 'volume', {normalize: false, scale: [1, 1, 1]},
      SURFACE_DEFAULTS, {...VOLUME_DEFAULTS, radius: 0.25}, 0,
    );
    expect(request.kind).toBe('volumeGrid');
    expect(request.params['radius']).toBe(0.25);
    expect(request.params['sdfResolution']).toBe(30);
    expect(request.params).not.toHaveProperty('minDist');
  });

  it('volume random request carries the density default', () => {
    const request = buildSampleRequest(
      's1', 'volume', TRANSFORM_DEFAULTS, SURFACE_DEFAULTS,
      {...VOLUME_DEFAULTS, mode: 'random', trials: 6}, 9,
    );
    expect(request.kind).toBe('volumeRandom');
    expect(request.params['density']).toBe(6);
    expect(request.params['seed']).toBe(9);
  });
});

describe('in-flight bookkeeping', () => {
  it('allows at most one sampling at a time', () => {
    const state = new ViewerState();
    expect(state.beginSampling()).toBe(false); // no session yet
    state.resetSession('s1');
    expect(state.beginSampling()).toBe(true);
    expect(state.beginSampling()).toBe(false); // busy
    state.finishSampling(8, 3.5);
    expect(state.lastCount).toBe(8);
    expect(state.beginSampling()).toBe(true);
    state.failSampling();
    expect(state.beginSampling()).toBe(true);
  });

  it('a new session clears the previous result', () => {
    const state = new ViewerState();
    state.resetSession('s1');
    state.beginSampling();
    state.finishSampling(8, 1);
    expect(state.hasResult).toBe(true);
    state.resetSession('s2');
    expect(state.hasResult).toBe(false);
  });
});

describe('csv helper', () => {
  it('counts header plus data rows', () => {
    expect(csvLineCount('x,y,z\n1,2,3\n')).toBe(2);
    expect(csvLineCount('x,y,z\n1,2,3')).toBe(2);
  });
});
