/* tslint:disable */
/* eslint-disable */

/**
 * Isometry classes among all `n`-dimensional forms over GF(q).
 */
export function census(q: number, n: number): string;

/**
 * Classifies the form in a form JSON document.
 */
export function classify_form(text: string): string;

/**
 * Minimal ambient space of a degenerate form, as a JSON document.
 */
export function embed_form(text: string): string;

/**
 * Closed-formula group orders next to enumerated ones, when small enough.
 * `kind` is `"+"` or `"-"` for even `dim` and ignored otherwise.
 */
export function group_orders(q: number, dim: number, kind: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly census: (a: number, b: number) => [number, number];
    readonly classify_form: (a: number, b: number) => [number, number];
    readonly embed_form: (a: number, b: number) => [number, number];
    readonly group_orders: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
