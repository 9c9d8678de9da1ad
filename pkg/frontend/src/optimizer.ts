/**
 * Host-side state-preparation optimizer driven by bound gate gradients.
 *
 * The circuit is M layers of a Kerr gate followed by a single-mode Gaussian
 * gate acting on the vacuum; the loss is minus the absolute overlap with a
 * target vector. Every tensor and every gradient tensor comes from the
 * gate server; only the chain rule and Adam live on this side.
 */

import { BoundGateHandle } from './bindings.js';
import { ServeClient } from './client.js';
import { Complex, cvec, matVec, matVecAdj, vdot } from './complex.js';

export const COORDS_PER_LAYER = 6; // gamma_x, gamma_y, phi, r, delta, kappa

export interface StepResult {
  loss: number;
  fidelity: number;
  grads: Float64Array;
}

export interface DemoOptions {
  cutoff?: number;
  seed?: number;
  lr?: number;
  targetFidelity?: number;
  initScale?: number;
}

export interface DemoResult {
  fidelities: number[];
  losses: number[];
  stepsRun: number;
  finalParams: Float64Array;
}

/** Deterministic 32-bit PRNG so demo runs are reproducible across hosts. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function layerHandles(client: ServeClient, vec: Float64Array, cutoff: number): BoundGateHandle[][] {
  const out: BoundGateHandle[][] = [];
  for (let i = 0; i * COORDS_PER_LAYER < vec.length; i++) {
    const [gx, gy, phi, r, delta, kappa] = vec.subarray(6 * i, 6 * i + 6);
    out.push([
      new BoundGateHandle(client, 'kerr', { kappa }, cutoff),
      new BoundGateHandle(
        client,
        'single_mode_gaussian',
        { gamma: [gx, gy], phi, zeta: [r * Math.cos(delta), r * Math.sin(delta)] },
        cutoff,
      ),
    ]);
  }
  return out;
}

/**
 * One forward + backward pass: loss, fidelity and the gradient per real
 * coordinate of every layer. ``target`` is an interleaved complex vector.
 */
export async function forwardBackward(
  client: ServeClient,
  vec: Float64Array,
  cutoff: number,
  target: Float64Array,
): Promise<StepResult> {
  if (vec.length % COORDS_PER_LAYER !== 0) {
    throw new Error('coordinate vector length is not a multiple of 6');
  }
  const layers = layerHandles(client, vec, cutoff);
  const n = cutoff;

  // forward, caching the per-layer intermediate states
  let psi = cvec(n);
  psi[0] = 1;
  const cache: { psiIn: Float64Array; psiK: Float64Array; K: Float64Array; G: Float64Array }[] = [];
  for (const [kerr, gauss] of layers) {
    const K = (await kerr.tensor()).data;
    const G = (await gauss.tensor()).data;
    const psiK = matVec(K, n, psi);
    cache.push({ psiIn: psi, psiK, K, G });
    psi = matVec(G, n, psiK);
  }

  const o = vdot(target, psi);
  const absO = Math.hypot(o.re, o.im);
  const grads = new Float64Array(vec.length);
  if (absO === 0) {
    // not differentiable at zero overlap; return the zero subgradient
    return { loss: 0, fidelity: 0, grads };
  }

  // u = dL/dpsi* = -o * target / (2 |o|)
  let u = cvec(n);
  for (let i = 0; i < n; i++) {
    const tr = target[2 * i];
    const ti = target[2 * i + 1];
    u[2 * i] = (-1 / (2 * absO)) * (o.re * tr - o.im * ti);
    u[2 * i + 1] = (-1 / (2 * absO)) * (o.re * ti + o.im * tr);
  }

  for (let i = layers.length - 1; i >= 0; i--) {
    const [kerr, gauss] = layers[i];
    const { psiIn, psiK, K, G } = cache[i];
    // with U = outer(u, conj(psiK)), contracting a gradient tensor dG
    // against U reduces to vdot(u, dG psiK)
    const gjacs = new Map<string, Float64Array>();
    for (const g of await gauss.gradients()) gjacs.set(g.param, g.tensor.data);
    const pair = (name: string): Complex => vdot(u, matVec(gjacs.get(name)!, n, psiK));
    const hol = pair('gamma');
    const anti = pair('gamma*');
    // dL/dgamma* = conj(<u|dG_gamma psiK>) + <u|dG_gamma* psiK>
    const dGammaStarRe = hol.re + anti.re;
    const dGammaStarIm = -hol.im + anti.im;
    grads[6 * i + 0] = 2 * dGammaStarRe;
    grads[6 * i + 1] = 2 * dGammaStarIm;
    grads[6 * i + 2] = 2 * pair('phi').re;
    grads[6 * i + 3] = 2 * pair('r').re;
    grads[6 * i + 4] = 2 * pair('delta').re;

    const uK = matVecAdj(G, n, u);
    const kjacs = await kerr.gradients();
    const dKappa = vdot(uK, matVec(kjacs[0].tensor.data, n, psiIn));
    grads[6 * i + 5] = 2 * dKappa.re;
    u = matVecAdj(K, n, uK);
  }
  return { loss: -absO, fidelity: absO, grads };
}

export interface AdamState {
  lr: number;
  beta1: number;
  beta2: number;
  eps: number;
  step: number;
  m: Float64Array;
  v: Float64Array;
}

export function adamInit(dim: number, lr = 0.01): AdamState {
  return { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, step: 0, m: new Float64Array(dim), v: new Float64Array(dim) };
}

export function adamStep(state: AdamState, vec: Float64Array, grads: Float64Array): Float64Array {
  for (const g of grads) {
    if (!Number.isFinite(g)) throw new Error('non-finite gradient');
  }
  state.step += 1;
  const out = new Float64Array(vec.length);
  const c1 = 1 - state.beta1 ** state.step;
  const c2 = 1 - state.beta2 ** state.step;
  for (let i = 0; i < vec.length; i++) {
    state.m[i] = state.beta1 * state.m[i] + (1 - state.beta1) * grads[i];
    state.v[i] = state.beta2 * state.v[i] + (1 - state.beta2) * grads[i] ** 2;
    out[i] = vec[i] - (state.lr * (state.m[i] / c1)) / (Math.sqrt(state.v[i] / c2) + state.eps);
  }
  // squeezing amplitudes stay non-negative
  for (let i = 3; i < out.length; i += COORDS_PER_LAYER) {
    out[i] = Math.max(out[i], 0);
  }
  return out;
}

/**
 * Re-run the state-preparation task with this host's optimizer and the
 * server's custom gradients. Stops once ``targetFidelity`` is reached.
 */
export async function customGradientDemo(
  client: ServeClient,
  target: Float64Array,
  layers: number,
  steps: number,
  opts: DemoOptions = {},
): Promise<DemoResult> {
  const cutoff = opts.cutoff ?? target.length / 2;
  const seed = opts.seed ?? 0;
  const initScale = opts.initScale ?? 0.01;
  const targetFidelity = opts.targetFidelity ?? 1.0;

  const rand = mulberry32(seed);
  let vec: Float64Array = new Float64Array(COORDS_PER_LAYER * layers);
  for (let i = 0; i < vec.length; i++) vec[i] = initScale * (2 * rand() - 1);
  for (let i = 3; i < vec.length; i += COORDS_PER_LAYER) vec[i] = Math.abs(vec[i]);

  const adam = adamInit(vec.length, opts.lr ?? 0.01);
  const fidelities: number[] = [];
  const losses: number[] = [];
  for (let s = 0; s < steps; s++) {
    const { loss, fidelity, grads } = await forwardBackward(client, vec, cutoff, target);
    fidelities.push(fidelity);
    losses.push(loss);
    if (fidelity >= targetFidelity) break;
    vec = adamStep(adam, vec, grads);
  }
  return { fidelities, losses, stepsRun: fidelities.length, finalParams: vec };
}
