/* tslint:disable */
/* eslint-disable */

export class BlobRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly labels: Uint32Array;
    /**
     * Largest of the four residuals per iteration.
     */
    readonly residuals: Float64Array;
    readonly truth: Uint32Array;
    /**
     * First view projected on its two leading principal axes, interleaved x, y.
     */
    readonly xy: Float64Array;
    acc: number;
    converged: boolean;
    iterations: number;
    nmi: number;
    purity: number;
}

export function anchorWeights(sq_distances: Float64Array, k: number): Float64Array;

export function clusterBlobs(samples: number, separation: number, bridge: number, lambda: number, p: number, max_iter: number, seed: number): BlobRun;

export function shrinkageCurve(tau: number, p: number, sigma_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_blobrun_free: (a: number, b: number) => void;
    readonly __wbg_get_blobrun_acc: (a: number) => number;
    readonly __wbg_get_blobrun_converged: (a: number) => number;
    readonly __wbg_get_blobrun_iterations: (a: number) => number;
    readonly __wbg_get_blobrun_nmi: (a: number) => number;
    readonly __wbg_get_blobrun_purity: (a: number) => number;
    readonly __wbg_set_blobrun_acc: (a: number, b: number) => void;
    readonly __wbg_set_blobrun_converged: (a: number, b: number) => void;
    readonly __wbg_set_blobrun_iterations: (a: number, b: number) => void;
    readonly __wbg_set_blobrun_nmi: (a: number, b: number) => void;
    readonly __wbg_set_blobrun_purity: (a: number, b: number) => void;
    readonly anchorWeights: (a: number, b: number, c: number) => [number, number, number, number];
    readonly blobrun_labels: (a: number) => [number, number];
    readonly blobrun_residuals: (a: number) => [number, number];
    readonly blobrun_truth: (a: number) => [number, number];
    readonly blobrun_xy: (a: number) => [number, number];
    readonly clusterBlobs: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly shrinkageCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
