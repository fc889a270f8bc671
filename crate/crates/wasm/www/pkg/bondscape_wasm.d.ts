/* tslint:disable */
/* eslint-disable */

/**
 * One epoch that the page advances step by step.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Advances up to `n` steps; returns how many were taken.
     */
    advance(n: number): number;
    /**
     * `[x, y, bonds, cash, alive]` per agent.
     */
    agents(): Float64Array;
    cells(): Float64Array;
    finished(): boolean;
    height(): number;
    constructor(preset: string, seed: bigint, epoch: bigint, peak: number, radius: number);
    /**
     * JSON with the step counter and the running event counts.
     */
    status(): string;
    width(): number;
}

/**
 * Runs `epochs` epochs of a preset and returns JSON with summary
 * statistics and a histogram of per-epoch trade percentages.
 */
export function campaign(preset: string, epochs: number, seed: bigint, bins: number): string;

/**
 * Client grid of the default layout with the given mound peak and radius.
 * Returns interleaved bond/cash levels per cell, row-major.
 */
export function landscape(peak: number, radius: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly campaign: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number, number];
    readonly demo_advance: (a: number, b: number) => number;
    readonly demo_agents: (a: number) => [number, number];
    readonly demo_cells: (a: number) => [number, number];
    readonly demo_finished: (a: number) => number;
    readonly demo_height: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: bigint, d: bigint, e: number, f: number) => [number, number, number];
    readonly demo_status: (a: number) => [number, number];
    readonly demo_width: (a: number) => number;
    readonly landscape: (a: number, b: number) => [number, number, number, number];
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
