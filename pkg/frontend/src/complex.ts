/**
 * Minimal complex linear algebra on interleaved Float64Arrays.
 *
 * A vector of length n is a Float64Array of 2n doubles [re0, im0, re1, ...];
 * an n x n matrix is the row-major interleaving of its entries. Just enough
 * for the gradient chain rule, nothing general-purpose.
 */

export interface Complex {
  re: number;
  im: number;
}

export function cvec(n: number): Float64Array {
  return new Float64Array(2 * n);
}

/** <a|b> = sum conj(a_i) b_i */
export function vdot(a: Float64Array, b: Float64Array): Complex {
  if (a.length !== b.length) throw new Error('vector lengths differ');
  let re = 0;
  let im = 0;
  for (let i = 0; i < a.length; i += 2) {
    const ar = a[i];
    const ai = a[i + 1];
    const br = b[i];
    const bi = b[i + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return { re, im };
}

export function norm(a: Float64Array): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) s += a[i] * a[i];
  return Math.sqrt(s);
}

/** out = M v for an n x n interleaved matrix */
export function matVec(M: Float64Array, n: number, v: Float64Array, out?: Float64Array): Float64Array {
  const res = out ?? cvec(n);
  for (let i = 0; i < n; i++) {
    let re = 0;
    let im = 0;
    const row = 2 * n * i;
    for (let j = 0; j < n; j++) {
      const mr = M[row + 2 * j];
      const mi = M[row + 2 * j + 1];
      const vr = v[2 * j];
      const vi = v[2 * j + 1];
      re += mr * vr - mi * vi;
      im += mr * vi + mi * vr;
    }
    res[2 * i] = re;
    res[2 * i + 1] = im;
  }
  return res;
}

/** out = M^dagger v */
export function matVecAdj(M: Float64Array, n: number, v: Float64Array, out?: Float64Array): Float64Array {
  const res = out ?? cvec(n);
  res.fill(0);
  for (let i = 0; i < n; i++) {
    const vr = v[2 * i];
    const vi = v[2 * i + 1];
    const row = 2 * n * i;
    for (let j = 0; j < n; j++) {
      // conj(M_ij) contributes to component j
      const mr = M[row + 2 * j];
      const mi = M[row + 2 * j + 1];
      res[2 * j] += mr * vr + mi * vi;
      res[2 * j + 1] += mr * vi - mi * vr;
    }
  }
  return res;
}

export function maxAbsDiff(a: Float64Array, b: Float64Array): number {
  if (a.length !== b.length) throw new Error('array lengths differ');
  let worst = 0;
  for (let i = 0; i < a.length; i += 2) {
    const dr = a[i] - b[i];
    const di = a[i + 1] - b[i + 1];
    worst = Math.max(worst, Math.hypot(dr, di));
  }
  return worst;
}
