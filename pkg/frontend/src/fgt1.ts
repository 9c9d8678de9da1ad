/**
 * FGT1 binary container.
 *
 * Layout: 4-byte magic "FGT1", uint32 mode count, uint32 cutoff, uint8
 * selection-rule tag, then the row-major complex-double payload. All fields
 * little-endian. Complex values are stored interleaved [re, im, re, im, ...].
 */

export const MAGIC = 'FGT1';
export const HEADER_BYTES = 13;

export const SELECTION_RULES = ['none', 'particle_conserving', 'pair_difference_conserving'] as const;
export type SelectionRule = (typeof SELECTION_RULES)[number];

export interface GateTensor {
  modes: number;
  cutoff: number;
  selectionRule: SelectionRule;
  /** interleaved complex payload, length 2 * cutoff^(2 * modes) */
  data: Float64Array;
}

export function parse(blob: Uint8Array): GateTensor {
  const view = new DataView(blob.buffer, blob.byteOffset, blob.byteLength);
  if (blob.byteLength < HEADER_BYTES) {
    throw new Error(`blob of ${blob.byteLength} bytes is shorter than the FGT1 header`);
  }
  const magic = String.fromCharCode(blob[0], blob[1], blob[2], blob[3]);
  if (magic !== MAGIC) {
    throw new Error(`bad magic ${JSON.stringify(magic)}, expected ${MAGIC}`);
  }
  const modes = view.getUint32(4, true);
  const cutoff = view.getUint32(8, true);
  const tag = view.getUint8(12);
  if (tag >= SELECTION_RULES.length) {
    throw new Error(`unknown selection-rule tag ${tag}`);
  }
  const nElem = cutoff ** (2 * modes);
  const expected = HEADER_BYTES + 16 * nElem;
  if (blob.byteLength !== expected) {
    throw new Error(`payload size ${blob.byteLength} != expected ${expected}`);
  }
  const data = new Float64Array(2 * nElem);
  for (let i = 0; i < 2 * nElem; i++) {
    data[i] = view.getFloat64(HEADER_BYTES + 8 * i, true);
  }
  return { modes, cutoff, selectionRule: SELECTION_RULES[tag], data };
}

export function serialize(t: GateTensor): Uint8Array {
  const nElem = t.cutoff ** (2 * t.modes);
  if (t.data.length !== 2 * nElem) {
    throw new Error(`data length ${t.data.length} != ${2 * nElem}`);
  }
  const out = new Uint8Array(HEADER_BYTES + 16 * nElem);
  const view = new DataView(out.buffer);
  for (let i = 0; i < 4; i++) out[i] = MAGIC.charCodeAt(i);
  view.setUint32(4, t.modes, true);
  view.setUint32(8, t.cutoff, true);
  view.setUint8(12, SELECTION_RULES.indexOf(t.selectionRule));
  for (let i = 0; i < 2 * nElem; i++) {
    view.setFloat64(HEADER_BYTES + 8 * i, t.data[i], true);
  }
  return out;
}

export function fromBase64(b64: string): GateTensor {
  return parse(new Uint8Array(Buffer.from(b64, 'base64')));
}
