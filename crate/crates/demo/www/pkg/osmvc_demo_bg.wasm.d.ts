/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_blobrun_free: (a: number, b: number) => void;
export const __wbg_get_blobrun_acc: (a: number) => number;
export const __wbg_get_blobrun_converged: (a: number) => number;
export const __wbg_get_blobrun_iterations: (a: number) => number;
export const __wbg_get_blobrun_nmi: (a: number) => number;
export const __wbg_get_blobrun_purity: (a: number) => number;
export const __wbg_set_blobrun_acc: (a: number, b: number) => void;
export const __wbg_set_blobrun_converged: (a: number, b: number) => void;
export const __wbg_set_blobrun_iterations: (a: number, b: number) => void;
export const __wbg_set_blobrun_nmi: (a: number, b: number) => void;
export const __wbg_set_blobrun_purity: (a: number, b: number) => void;
export const anchorWeights: (a: number, b: number, c: number) => [number, number, number, number];
export const blobrun_labels: (a: number) => [number, number];
export const blobrun_residuals: (a: number) => [number, number];
export const blobrun_truth: (a: number) => [number, number];
export const blobrun_xy: (a: number) => [number, number];
export const clusterBlobs: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const shrinkageCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
