/* tslint:disable */
/* eslint-disable */

/**
 * `[opt, pgm, holevo, cubic]` failure rates of the two-state ensemble.
 */
export function binary_rates(p: number, theta: number): Float64Array;

/**
 * Failure ratio of the power weighting `W = p^r` to the optimum on a
 * `resolution²` grid, `p` varying slowest; NaN where undefined.
 */
export function ratio_landscape(r: number, resolution: number): Float64Array;

/**
 * `[pgm, holevo, cubic, opt, certified]` for `ψ_{1,2} = (cos θ, ±sin θ)`,
 * `ψ_3 = (1, 0)` with priors `(p1, p1, 1 - 2 p1)`; `certified` is 1 when
 * the optimum passed its certificate.
 */
export function three_state(theta: number, p1: number): Float64Array;

/**
 * Prior at which the three-state family has the undetected optimum.
 */
export function tilted_prior(theta: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly binary_rates: (a: number, b: number) => [number, number, number, number];
    readonly ratio_landscape: (a: number, b: number) => [number, number, number, number];
    readonly three_state: (a: number, b: number) => [number, number, number, number];
    readonly tilted_prior: (a: number) => number;
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
