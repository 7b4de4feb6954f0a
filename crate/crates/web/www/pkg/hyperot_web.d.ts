/* tslint:disable */
/* eslint-disable */

export class Run {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    summary: string;
    svg: string;
}

export function parametrizeSurface(genus: number, subdivision: number, seed: number, cover: boolean): Run;

export function powerDiagram(coords: Float64Array, radii: Float64Array): Run;

export function solveDisk(target: string, rings: number): Run;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_run_summary: (a: number) => [number, number];
    readonly __wbg_get_run_svg: (a: number) => [number, number];
    readonly __wbg_run_free: (a: number, b: number) => void;
    readonly __wbg_set_run_summary: (a: number, b: number, c: number) => void;
    readonly __wbg_set_run_svg: (a: number, b: number, c: number) => void;
    readonly parametrizeSurface: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly powerDiagram: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly solveDisk: (a: number, b: number, c: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
