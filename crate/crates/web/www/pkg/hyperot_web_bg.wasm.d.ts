/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_run_summary: (a: number) => [number, number];
export const __wbg_get_run_svg: (a: number) => [number, number];
export const __wbg_run_free: (a: number, b: number) => void;
export const __wbg_set_run_summary: (a: number, b: number, c: number) => void;
export const __wbg_set_run_svg: (a: number, b: number, c: number) => void;
export const parametrizeSurface: (a: number, b: number, c: number, d: number) => [number, number, number];
export const powerDiagram: (a: number, b: number, c: number, d: number) => [number, number, number];
export const solveDisk: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
