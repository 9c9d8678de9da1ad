export { MAGIC, HEADER_BYTES, SELECTION_RULES, parse, serialize, fromBase64 } from './fgt1.js';
export type { GateTensor, SelectionRule } from './fgt1.js';
export { cvec, vdot, norm, matVec, matVecAdj, maxAbsDiff } from './complex.js';
export type { Complex } from './complex.js';
export { DEFAULT_COMMAND, ServeClient, ServeError, hostAvailable } from './client.js';
export type { GateParams, GradientEntry, ParamValue } from './client.js';
export { GATE_KINDS, BoundGateHandle, bindGate } from './bindings.js';
export type { GateKind } from './bindings.js';
export {
  COORDS_PER_LAYER,
  mulberry32,
  forwardBackward,
  adamInit,
  adamStep,
  customGradientDemo,
} from './optimizer.js';
export type { AdamState, DemoOptions, DemoResult, StepResult } from './optimizer.js';
