/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_binarize: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const demo_edge_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const demo_from_rgba: (a: number, b: number, c: number, d: number) => [number, number, number];
export const demo_has_truth: (a: number) => number;
export const demo_height: (a: number) => number;
export const demo_input_rgba: (a: number) => [number, number];
export const demo_last_converged: (a: number) => number;
export const demo_last_drd: (a: number) => number;
export const demo_last_fm: (a: number) => number;
export const demo_last_iterations: (a: number) => number;
export const demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const demo_shifted_truth_drd: (a: number, b: number) => [number, number, number];
export const demo_width: (a: number) => number;
export const gl_weights: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
