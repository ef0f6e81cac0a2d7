/* tslint:disable */
/* eslint-disable */

/**
 * Chern numbers of the two-step driven Haldane model over
 * T₁, T₂ ∈ [lo, hi], row-major with T₁ along rows.
 */
export function chern_map(lo: number, hi: number, n: number, grid: number): Float64Array;

/**
 * Majorana pair counts of the driven Kitaev chain on a (period, t₁) grid,
 * two entries per point: pairs at quasienergy 0, then at π/T.
 */
export function kitaev_phase(t2: number, period_max: number, t1_max: number, n: number): Float64Array;

/**
 * Emitter population |u(t)|² in an Ohmic bath, in units of ω₀.
 *
 * Returns `[energy, residue, t₀, p₀, t₁, p₁, …]`; the first two are NaN
 * without a bound state. At most `points` samples are returned.
 */
export function population(eta: number, s: number, cutoff: number, t_end: number, step: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly chern_map: (a: number, b: number, c: number, d: number) => [number, number];
    readonly kitaev_phase: (a: number, b: number, c: number, d: number) => [number, number];
    readonly population: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
