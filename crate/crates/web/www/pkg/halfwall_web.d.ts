/* tslint:disable */
/* eslint-disable */

/**
 * Channel profiles at `n + 1` nodes, flattened as rows
 * `x1, no-slip, slip, FD no-slip, FD with slip length `slip``.
 */
export function channel_profiles(n: number, slip: number): Float64Array;

/**
 * Row-major entries of `G(x, y)`.
 */
export function greens_eval(x1: number, x2: number, x3: number, y1: number, y2: number, y3: number): Float64Array;

/**
 * Upward wall velocity of a homogeneous suspension in SI units, as
 * `[direct, via settling speed, settling speed]`.
 */
export function intrinsic_convection(radius: number, rho_p: number, rho_f: number, gravity: number, viscosity: number, eps: number, phi: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly channel_profiles: (a: number, b: number) => [number, number, number, number];
    readonly greens_eval: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly intrinsic_convection: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
