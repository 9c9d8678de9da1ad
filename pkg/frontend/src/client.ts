/**
 * Line-JSON client for the gate-tensor server.
 *
 * The server (`fockgates serve`) reads one JSON request per stdin line and
 * answers one JSON line per request, in order. Tensors travel as base64
 * FGT1 blobs; errors come back as data ({ok: false, error}), so a bad
 * request never kills the connection.
 */

import { spawn, ChildProcessWithoutNullStreams } from 'node:child_process';
import { createInterface, Interface } from 'node:readline';

import { GateTensor, fromBase64 } from './fgt1.js';

export const DEFAULT_COMMAND = process.env.FOCKGATES_CMD ?? 'fockgates';

export type ParamValue = number | [number, number];
export type GateParams = Record<string, ParamValue>;

export interface GradientEntry {
  param: string;
  /** 'real' or 'complex_holomorphic_pair' */
  kind: string;
  tensor: GateTensor;
}

interface Pending {
  resolve: (value: any) => void;
  reject: (err: Error) => void;
}

export class ServeError extends Error {}

export class ServeClient {
  private child: ChildProcessWithoutNullStreams;
  private lines: Interface;
  private pending: Pending[] = [];
  private closed = false;

  constructor(command: string = DEFAULT_COMMAND) {
    const [cmd, ...extra] = command.split(' ');
    this.child = spawn(cmd, [...extra, 'serve'], { stdio: ['pipe', 'pipe', 'pipe'] });
    this.lines = createInterface({ input: this.child.stdout });
    this.lines.on('line', (line) => {
      const waiter = this.pending.shift();
      if (!waiter) return;
      try {
        waiter.resolve(JSON.parse(line));
      } catch (err) {
        waiter.reject(err as Error);
      }
    });
    const fail = (err: Error) => {
      this.closed = true;
      for (const w of this.pending.splice(0)) w.reject(err);
    };
    this.child.on('error', fail);
    this.child.on('close', () => fail(new ServeError('server exited')));
  }

  request(req: object): Promise<any> {
    if (this.closed) return Promise.reject(new ServeError('client is closed'));
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.child.stdin.write(JSON.stringify(req) + '\n');
    });
  }

  async ping(): Promise<string[]> {
    const resp = await this.request({ op: 'ping' });
    if (!resp.ok) throw new ServeError(resp.error);
    return resp.kinds;
  }

  async tensor(kind: string, params: GateParams, cutoff: number): Promise<GateTensor> {
    const resp = await this.request({ op: 'tensor', kind, params, cutoff });
    if (!resp.ok) throw new ServeError(resp.error);
    return fromBase64(resp.fgt1);
  }

  async gradients(kind: string, params: GateParams, cutoff: number): Promise<GradientEntry[]> {
    const resp = await this.request({ op: 'gradients', kind, params, cutoff });
    if (!resp.ok) throw new ServeError(resp.error);
    return resp.grads.map((g: any) => ({ param: g.param, kind: g.kind, tensor: fromBase64(g.fgt1) }));
  }

  close(): void {
    this.closed = true;
    this.child.stdin.end();
    this.child.kill();
  }
}

/**
 * Probe whether the gate-tensor server can be spawned. Used by the test
 * suite to skip (with a notice) when the host package is not installed.
 */
export async function hostAvailable(command: string = DEFAULT_COMMAND, timeoutMs = 15000): Promise<boolean> {
  const client = new ServeClient(command);
  try {
    const kinds = await Promise.race([
      client.ping(),
      new Promise<never>((_, rej) => setTimeout(() => rej(new ServeError('ping timeout')), timeoutMs)),
    ]);
    return kinds.includes('displacement');
  } catch {
    return false;
  } finally {
    client.close();
  }
}
