/* tslint:disable */
/* eslint-disable */

/**
 * Rejection rate at each shift in `epsilons` (a JSON array of numbers).
 */
export function power_curve(n_g: number, n_h: number, m: number, k: number, p: number, q: number, epsilons: string, d: number, tau: number, replicates: number, seed: bigint): string;

/**
 * One planted SBM draw with balanced communities.
 */
export function sample_heatmap(n: number, k: number, p: number, q: number, seed: bigint): string;

/**
 * Draws `m` graphs per side from planted models `(p, q)` and
 * `(p + epsilon, q + epsilon)` and runs one test with the true labels.
 */
export function single_test(n_g: number, n_h: number, m: number, k: number, p: number, q: number, epsilon: number, d: number, tau: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly power_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: bigint) => [number, number, number, number];
    readonly sample_heatmap: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly single_test: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
