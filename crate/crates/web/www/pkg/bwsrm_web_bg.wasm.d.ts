/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const binary_rates: (a: number, b: number) => [number, number, number, number];
export const ratio_landscape: (a: number, b: number) => [number, number, number, number];
export const three_state: (a: number, b: number) => [number, number, number, number];
export const tilted_prior: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
