import { describe, expect, it } from 'vitest';

import { cvec, matVec, matVecAdj, maxAbsDiff, vdot } from '../src/complex.js';
import { GateTensor, HEADER_BYTES, parse, serialize } from '../src/fgt1.js';

function sample(cutoff: number, modes: number): GateTensor {
  const n = cutoff ** (2 * modes);
  const data = new Float64Array(2 * n);
  for (let i = 0; i < data.length; i++) data[i] = Math.sin(i + 0.25) * (i % 3 === 0 ? -1 : 1);
  return { modes, cutoff, selectionRule: 'none', data };
}

describe('FGT1 container', () => {
  it('round trips through serialize and parse', () => {
    for (const t of [sample(4, 1), sample(3, 2), { ...sample(5, 1), selectionRule: 'particle_conserving' as const }]) {
      const back = parse(serialize(t));
      expect(back.modes).toBe(t.modes);
      expect(back.cutoff).toBe(t.cutoff);
      expect(back.selectionRule).toBe(t.selectionRule);
      expect(maxAbsDiff(back.data, t.data)).toBe(0);
    }
  });

  it('rejects a blob shorter than the header', () => {
    expect(() => parse(new Uint8Array(HEADER_BYTES - 1))).toThrow(/shorter/);
  });

  it('rejects a bad magic', () => {
    const blob = serialize(sample(3, 1));
    blob[0] = 0x58;
    expect(() => parse(blob)).toThrow(/bad magic/);
  });

  it('rejects an unknown selection-rule tag', () => {
    const blob = serialize(sample(3, 1));
    blob[12] = 7;
    expect(() => parse(blob)).toThrow(/selection-rule tag/);
  });

  it('rejects a payload size mismatch', () => {
    const blob = serialize(sample(3, 1));
    expect(() => parse(blob.subarray(0, blob.length - 16))).toThrow(/size/);
  });

  it('rejects serializing inconsistent data lengths', () => {
    const t = sample(3, 1);
    expect(() => serialize({ ...t, cutoff: 4 })).toThrow(/data length/);
  });
});

describe('interleaved complex helpers', () => {
  // A = [[1+2i, 3], [0, -i]], v = [1-i, 2i]
  const A = new Float64Array([1, 2, 3, 0, 0, 0, 0, -1]);
  const v = new Float64Array([1, -1, 0, 2]);

  it('vdot conjugates the left argument', () => {
    const d = vdot(v, v);
    expect(d.re).toBeCloseTo(6, 12);
    expect(d.im).toBeCloseTo(0, 12);
  });

  it('matVec multiplies rows into the vector', () => {
    const out = matVec(A, 2, v);
    // row 0: (1+2i)(1-i) + 3*2i = 3+i+6i = 3+7i; row 1: -i*2i = 2
    expect(Array.from(out)).toEqual([3, 7, 2, 0]);
  });

  it('matVecAdj agrees with vdot(A v, w) = vdot(v, A^dagger w)', () => {
    const w = new Float64Array([0.5, 1, -2, 0.25]);
    const lhs = vdot(matVec(A, 2, v), w);
    const rhs = vdot(v, matVecAdj(A, 2, w));
    expect(lhs.re).toBeCloseTo(rhs.re, 12);
    expect(lhs.im).toBeCloseTo(rhs.im, 12);
  });

  it('cvec allocates interleaved zeros', () => {
    expect(Array.from(cvec(3))).toEqual([0, 0, 0, 0, 0, 0]);
  });
});
