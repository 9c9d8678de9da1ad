/**
 * Bound gate handles: cached tensor + gradient views for one parameter set.
 *
 * Gradient convention: the host supplies the upstream cotangent dL/dG* and
 * combines it with the returned per-parameter tensors. For a complex
 * parameter xi the server returns the Wirtinger pair (dG/dxi, dG/dxi*) and
 * the host forms dL/dxi* = sum(dL/dG * conj(dG/dxi)) + sum(dL/dG* * dG/dxi*);
 * for a real parameter x the single tensor gives dL/dx = 2 Re sum(dL/dG* * dG/dx).
 */

import { GateTensor } from './fgt1.js';
import { GateParams, GradientEntry, ServeClient } from './client.js';

export const GATE_KINDS = [
  'displacement',
  'squeezer',
  'single_mode_gaussian',
  'beamsplitter',
  'two_mode_squeezer',
  'kerr',
  'cubic',
] as const;

export type GateKind = (typeof GATE_KINDS)[number];

export class BoundGateHandle {
  readonly kind: GateKind;
  readonly cutoff: number;
  private params: GateParams;
  private cachedTensor: Promise<GateTensor> | null = null;
  private cachedGrads: Promise<GradientEntry[]> | null = null;

  constructor(
    private client: ServeClient,
    kind: GateKind,
    params: GateParams,
    cutoff: number,
  ) {
    if (!GATE_KINDS.includes(kind)) {
      throw new Error(`unknown gate kind ${JSON.stringify(kind)}`);
    }
    this.kind = kind;
    this.cutoff = cutoff;
    this.params = { ...params };
  }

  getParams(): GateParams {
    return { ...this.params };
  }

  /** Any parameter change invalidates the cached tensor and gradients. */
  setParams(params: GateParams): void {
    this.params = { ...params };
    this.cachedTensor = null;
    this.cachedGrads = null;
  }

  tensor(): Promise<GateTensor> {
    if (!this.cachedTensor) {
      this.cachedTensor = this.client.tensor(this.kind, this.params, this.cutoff);
    }
    return this.cachedTensor;
  }

  gradients(): Promise<GradientEntry[]> {
    if (!this.cachedGrads) {
      this.cachedGrads = this.client.gradients(this.kind, this.params, this.cutoff);
    }
    return this.cachedGrads;
  }
}

export async function bindGate(
  client: ServeClient,
  kind: GateKind,
  params: GateParams,
  cutoff: number,
): Promise<{ handle: BoundGateHandle; tensor: GateTensor; gradients: GradientEntry[] }> {
  const handle = new BoundGateHandle(client, kind, params, cutoff);
  const [tensor, gradients] = await Promise.all([handle.tensor(), handle.gradients()]);
  for (const g of gradients) {
    if (g.tensor.data.length !== tensor.data.length) {
      throw new Error(`gradient ${g.param} shape differs from the tensor shape`);
    }
  }
  return { handle, tensor, gradients };
}
