/* tslint:disable */
/* eslint-disable */

/**
 * One document page plus the outcome of the last binarization.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Full pipeline; returns the binary result as RGBA. Scores against the
     * clean mask are available afterwards when the page is synthetic.
     */
    binarize(cs: number, ce: number, cd: number, alpha: number, nonlinear: boolean, iters: number): Uint8Array;
    /**
     * Combined edge map of the attenuated page, as RGBA.
     */
    edge_map(mix: number, radius: number, nonlinear: boolean): Uint8Array;
    /**
     * A user image taken from canvas RGBA pixels; no ground truth.
     */
    static from_rgba(width: number, height: number, rgba: Uint8Array): Demo;
    has_truth(): boolean;
    height(): number;
    input_rgba(): Uint8Array;
    last_converged(): boolean;
    /**
     * NaN without ground truth.
     */
    last_drd(): number;
    /**
     * NaN without ground truth.
     */
    last_fm(): number;
    last_iterations(): number;
    /**
     * A synthetic stained page with a known clean mask.
     */
    constructor(width: number, height: number, seed: number, stain: number, noise: number);
    /**
     * DRD of the clean mask against itself shifted right by `dx` pixels;
     * shows how the measure grows with displacement.
     */
    shifted_truth_drd(dx: number): number;
    width(): number;
}

/**
 * Grünwald-Letnikov weights `w_0..=w_depth` for order `alpha`.
 */
export function gl_weights(alpha: number, depth: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_binarize: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly demo_edge_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_from_rgba: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly demo_has_truth: (a: number) => number;
    readonly demo_height: (a: number) => number;
    readonly demo_input_rgba: (a: number) => [number, number];
    readonly demo_last_converged: (a: number) => number;
    readonly demo_last_drd: (a: number) => number;
    readonly demo_last_fm: (a: number) => number;
    readonly demo_last_iterations: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly demo_shifted_truth_drd: (a: number, b: number) => [number, number, number];
    readonly demo_width: (a: number) => number;
    readonly gl_weights: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
