/** The UI round trip: cube upload, grid volume r=0.25, count 8 shown and
 * rendered, CSV export of 9 lines. Exercises the service contract end to end
 * against the in-memory fake. */

import {describe, expect, it} from 'vitest';

import {MeshSampleApi} from '../src/api';
import {ViewerScene} from '../src/scene';
import {csvLineCount, ViewerState, VOLUME_DEFAULTS} from '../src/state';
import {CUBE_OBJ, makeFakeService} from './fake_service';

const noSleep = () => Promise.resolve();

describe('cube round trip', () => {
  it('shows count 8, renders 8 instances, exports 9 CSV lines', async () => {
    const {fetchFn, log} = makeFakeService();
    const api = new MeshSampleApi('', fetchFn, noSleep);
    const state = new ViewerState();
    const scene = new ViewerScene();

    // load the mesh
    const summary = await api.uploadMesh(CUBE_OBJ, 'model/obj');
    state.resetSession(summary.sessionId);
    expect(summary.triangleCount).toBe(12);

    // request a grid volume sampling at r = 0.25
    state.activeTab = 'volume';
    state.volume = {...VOLUME_DEFAULTS, radius: 0.25};
    state.transform = {normalize: false, scale: [1, 1, 1]};
    expect(state.validateActive()).toBeNull();
    expect(state.beginSampling()).toBe(true);
    const sampled = await api.sample(state.currentRequest());
    const payload = await api.resultJson(state.sessionId!);
    scene.setParticles(payload.positions, state.displayRadius);
    state.finishSampling(sampled.particleCount, sampled.elapsedMs);

    // the count shown equals the service count equals the rendered instances
    expect(state.lastCount).toBe(8);
    expect(payload.positions).toHaveLength(8);
    expect(scene.particleCount()).toBe(8);

    // CSV download has header + 8 rows
    const csv = new TextDecoder().decode(
      await api.resultBytes(state.sessionId!, 'csv'),
    );
    expect(csvLineCount(csv)).toBe(9);

    // RAWF64 download is exactly 8 + 8 * 24 bytes
    const raw = await api.resultBytes(state.sessionId!, 'rawf64');
    expect(raw.byteLength).toBe(200);

    // no network request happened outside the documented endpoints
    for (const url of log.requests) {
      expect(url).toMatch(/\/api\/(mesh|sample|poll|result)/);
    }
  });

  it('export is meaningless without a result', async () => {
    const {fetchFn} = makeFakeService();
    const api = new MeshSampleApi('', fetchFn, noSleep);
    const state = new ViewerState();
    const summary = await api.uploadMesh(CUBE_OBJ, 'model/obj');
    state.resetSession(summary.sessionId);
    expect(state.hasResult).toBe(false); // controls stay disabled
    await expect(api.resultBytes(state.sessionId!, 'csv')).rejects.toMatchObject({
      status: 404,
    });
  });
});
