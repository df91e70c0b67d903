/* tslint:disable */
/* eslint-disable */

/**
 * Husimi function at time `t`, row-major over `grid` θ nodes × `grid` φ nodes.
 */
export function husimi_snapshot(n: number, gamma: number, lambda: number, beta_bath: number, t: number, grid: number): Float64Array;

/**
 * `[x₀, V(x₀), x₁, V(x₁), …]` on `points` nodes of `[−x_max, x_max]`.
 */
export function potential(cal_e: number, w: number, t: number, x_max: number, points: number): Float64Array;

/**
 * Lowest `count` eigenvalues of the truncated spin Hamiltonian at time `t`.
 */
export function spin_levels(n: number, kappa: number, cal_e: number, w: number, t: number, count: number): Float64Array;

/**
 * Rows of `t, S_Q, dS_Q/dt, Π_th, Φ_th, Π_lc` for a spin relaxing from the
 * default initial state.
 */
export function spin_relaxation(n: number, gamma: number, lambda: number, beta_bath: number, t_end: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly husimi_snapshot: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly potential: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly spin_levels: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly spin_relaxation: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
