/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const campaign: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number, number];
export const demo_advance: (a: number, b: number) => number;
export const demo_agents: (a: number) => [number, number];
export const demo_cells: (a: number) => [number, number];
export const demo_finished: (a: number) => number;
export const demo_height: (a: number) => number;
export const demo_new: (a: number, b: number, c: bigint, d: bigint, e: number, f: number) => [number, number, number];
export const demo_status: (a: number) => [number, number];
export const demo_width: (a: number) => number;
export const landscape: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
