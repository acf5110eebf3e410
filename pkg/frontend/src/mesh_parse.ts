/** Client-side OBJ/STL parsing, display-only (the service parses authoritatively). */

export interface ParsedMesh {
  positions: Float32Array; // xyz per vertex
  indices: Uint32Array; // 3 per triangle
}

export function parseObj(text: string): ParsedMesh {
  const positions: number[] = [];
  const indices: number[] = [];
  for (const raw of text.split('\n')) {
    const tokens = raw.trim().split(/\s+/);
    if (tokens[0] === 'v' && tokens.length >= 4) {
      positions.push(Number(tokens[1]), Number(tokens[2]), Number(tokens[3]));
    } else if (tokens[0] === 'f' && tokens.length >= 4) {
      const idx = tokens.slice(1).map((t) => {
        const i = Number(t.split('/')[0]);
        return i - 1;
      });
      for (let k = 1; k + 1 < idx.length; k++) {
        indices.push(idx[0], idx[k], idx[k + 1]);
      }
    }
  }
  if (indices.length === 0) throw new Error('OBJ contains no faces');
  return {positions: new Float32Array(positions), indices: new Uint32Array(indices)};
}

export function parseStl(data: ArrayBuffer): ParsedMesh {
  const view = new DataView(data);
  if (data.byteLength >= 84) {
    const count = view.getUint32(80, true);
    if (data.byteLength === 84 + 50 * count) {
      return parseBinaryStl(view, count);
    }
  }
  const head = new TextDecoder().decode(data.slice(0, 5)).toLowerCase();
  if (head === 'solid') {
    return parseAsciiStl(new TextDecoder().decode(data));
  }
  throw new Error('not a valid STL file');
}

function parseBinaryStl(view: DataView, count: number): ParsedMesh {
  const positions = new Float32Array(count * 9);
  const indices = new Uint32Array(count * 3);
  for (let t = 0; t < count; t++) {
    const base = 84 + 50 * t + 12; // skip the facet normal
    for (let v = 0; v < 3; v++) {
      for (let c = 0; c < 3; c++) {
        positions[t * 9 + v * 3 + c] = view.getFloat32(base + v * 12 + c * 4, true);
      }
      indices[t * 3 + v] = t * 3 + v;
    }
  }
  return {positions, indices};
}

function parseAsciiStl(text: string): ParsedMesh {
  const positions: number[] = [];
  for (const raw of text.split('\n')) {
    const tokens = raw.trim().split(/\s+/);
    if (tokens[0] === 'vertex' && tokens.length >= 4) {
      positions.push(Number(tokens[1]), Number(tokens[2]), Number(tokens[3]));
    }
  }
  if (positions.length === 0 || positions.length % 9 !== 0) {
    throw new Error('malformed ASCII STL');
  }
  const indices = new Uint32Array(positions.length / 3);
  for (let i = 0; i < indices.length; i++) indices[i] = i;
  return {positions: new Float32Array(positions), indices};
}

export function sniffFormat(fileName: string): 'obj' | 'stl' | null {
  const lower = fileName.toLowerCase();
  if (lower.endsWith('.obj')) return 'obj';
  if (lower.endsWith('.stl')) return 'stl';
  return null;
}
