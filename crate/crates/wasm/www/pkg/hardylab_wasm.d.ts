/* tslint:disable */
/* eslint-disable */

/**
 * `params` is `{"form": ..., "n": ..., ...}`; missing fields take the
 * form's defaults.
 */
export function constant(params: string): string;

/**
 * JSON of the default parameters of `form`.
 */
export function defaults(form: string): string;

/**
 * JSON array of form names.
 */
export function forms(): string;

/**
 * Rows of `quotient/constant/gap` along `values` of `param` (a, b, gamma).
 */
export function sweep(params: string, param: string, values: string, delta: number): string;

/**
 * Chart images of a bump and the three-chart integral residuals.
 */
export function transplant(n: number, p: number, alpha: number, beta: number, lo: number, hi: number, samples: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly constant: (a: number, b: number) => [number, number, number, number];
    readonly defaults: (a: number, b: number) => [number, number, number, number];
    readonly forms: () => [number, number];
    readonly sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly transplant: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
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
