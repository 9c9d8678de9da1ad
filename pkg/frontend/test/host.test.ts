import { execFile } from 'node:child_process';
import { mkdtemp, readFile, rm } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { promisify } from 'node:util';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { GATE_KINDS, bindGate } from '../src/bindings.js';
import { DEFAULT_COMMAND, ServeClient, ServeError, hostAvailable } from '../src/client.js';
import { maxAbsDiff, vdot, matVec } from '../src/complex.js';
import { parse } from '../src/fgt1.js';

const run = promisify(execFile);
const available = await hostAvailable();
if (!available) {
  console.warn(`notice: gate server '${DEFAULT_COMMAND} serve' is unavailable; skipping host-backed tests`);
}

describe.skipIf(!available)('gate server bindings', () => {
  let client: ServeClient;

  beforeAll(() => {
    client = new ServeClient();
  });
  afterAll(() => {
    client.close();
  });

  it('ping reports every bindable gate kind', async () => {
    const kinds = await client.ping();
    for (const kind of GATE_KINDS) expect(kinds).toContain(kind);
  });

  it('served displacement tensor equals the dumped FGT1 container byte for byte', async () => {
    const dir = await mkdtemp(join(tmpdir(), 'fgt1-'));
    try {
      const out = join(dir, 'disp.fgt1');
      const [cmd, ...extra] = DEFAULT_COMMAND.split(' ');
      await run(cmd, [...extra, 'gate', 'dump', 'displacement', '-N', '8', '--gamma', '0.4+0.3j', '--out', out]);
      const dumped = parse(new Uint8Array(await readFile(out)));
      const served = await client.tensor('displacement', { gamma: [0.4, 0.3] }, 8);
      expect(served.modes).toBe(dumped.modes);
      expect(served.cutoff).toBe(dumped.cutoff);
      expect(served.selectionRule).toBe(dumped.selectionRule);
      expect(maxAbsDiff(served.data, dumped.data)).toBe(0);
    } finally {
      await rm(dir, { recursive: true, force: true });
    }
  });

  it('zero displacement is the identity', async () => {
    const t = await client.tensor('displacement', { gamma: [0, 0] }, 6);
    for (let i = 0; i < 6; i++) {
      for (let j = 0; j < 6; j++) {
        const re = t.data[2 * (6 * i + j)];
        const im = t.data[2 * (6 * i + j) + 1];
        expect(Math.hypot(re - (i === j ? 1 : 0), im)).toBeLessThan(1e-14);
      }
    }
  });

  it('bindGate returns gradients matching the tensor shape', async () => {
    const { tensor, gradients } = await bindGate(
      client,
      'single_mode_gaussian',
      { gamma: [0.2, -0.1], phi: 0.3, zeta: [0.25, 0.1] },
      7,
    );
    const names = gradients.map((g) => g.param);
    expect(names).toEqual(['gamma', 'gamma*', 'phi', 'r', 'delta']);
    for (const g of gradients) {
      expect(g.tensor.data.length).toBe(tensor.data.length);
    }
    const wirtinger = gradients.filter((g) => g.kind === 'complex_holomorphic_pair');
    expect(wirtinger.map((g) => g.param)).toEqual(['gamma', 'gamma*']);
  });

  it('setParams invalidates the cached tensor', async () => {
    const { handle, tensor } = await bindGate(client, 'kerr', { kappa: 0.1 }, 6);
    expect(await handle.tensor()).toBe(await handle.tensor());
    handle.setParams({ kappa: 0.4 });
    const fresh = await handle.tensor();
    expect(maxAbsDiff(fresh.data, tensor.data)).toBeGreaterThan(1e-3);
  });

  it('errors come back as data without killing the connection', async () => {
    await expect(client.tensor('no_such_gate', {}, 4)).rejects.toThrow(ServeError);
    await expect(client.gradients('quartic', { eta: 0.1 }, 4)).rejects.toThrow(/quartic/);
    const kinds = await client.ping();
    expect(kinds.length).toBeGreaterThan(0);
  });

  it('Wirtinger pair reproduces a finite-difference displacement gradient', async () => {
    // toy loss L = Re(<w| G |v>) for fixed vectors w, v
    const n = 8;
    const v = new Float64Array(2 * n);
    const w = new Float64Array(2 * n);
    for (let i = 0; i < n; i++) {
      v[2 * i] = Math.cos(i);
      v[2 * i + 1] = 0.2 * Math.sin(2 * i);
      w[2 * i] = 0.5 / (1 + i);
      w[2 * i + 1] = 0.1 * i;
    }
    const loss = async (gx: number, gy: number) => {
      const t = await client.tensor('displacement', { gamma: [gx, gy] }, n);
      return vdot(w, matVec(t.data, n, v)).re;
    };
    const g = [0.3, -0.2] as [number, number];
    const grads = await client.gradients('displacement', { gamma: g }, n);
    const byName = new Map(grads.map((e) => [e.param, e.tensor.data]));
    // with f = <w|G v>, dL/dgx = Re(f_gamma + f_gamma*) and
    // dL/dgy = -Im(f_gamma) + Im(f_gamma*)
    const hol = vdot(w, matVec(byName.get('gamma')!, n, v));
    const anti = vdot(w, matVec(byName.get('gamma*')!, n, v));
    const dgx = hol.re + anti.re;
    const dgy = -hol.im + anti.im;
    const h = 1e-5;
    const fdx = ((await loss(g[0] + h, g[1])) - (await loss(g[0] - h, g[1]))) / (2 * h);
    const fdy = ((await loss(g[0], g[1] + h)) - (await loss(g[0], g[1] - h))) / (2 * h);
    expect(Math.abs(dgx - fdx)).toBeLessThan(1e-5);
    expect(Math.abs(dgy - fdy)).toBeLessThan(1e-5);
  });
});
