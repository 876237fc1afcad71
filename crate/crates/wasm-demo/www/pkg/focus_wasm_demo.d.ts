/* tslint:disable */
/* eslint-disable */

/**
 * Gain in dB over a `resolution²` grid of half-width `extent`, row-major
 * from (−extent, −extent), focusing at the left ear. The span follows the
 * OSD rule, clamped to 180° when infeasible. Skipped cells are NaN.
 */
export function osd_field_db(mu: number, resolution: number, extent: number, plane_wave: boolean): Float64Array;

/**
 * Optimal span in degrees at `μ = ka`, or NaN below the low-frequency limit.
 */
export function osd_span_deg(mu: number): number;

/**
 * Control angles in degrees for a 20-element, 12 mm ULA.
 */
export function ula_angles_deg(frequency_hz: number, offsets: Float64Array): Float64Array;

/**
 * Directivity over `points` angles in [−90°, 90°] when focusing at each
 * control angle in turn, concatenated per control point.
 */
export function ula_directivity_curves(frequency_hz: number, offsets: Float64Array, points: number): Float64Array;

/**
 * UPDA crosstalk `R²g₁₂` against `kη_max ∈ [0, k_eta_max]`, interleaved
 * as (sum form, closed form) pairs.
 */
export function upda_crosstalk_curve(l: number, k_eta_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly osd_field_db: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly osd_span_deg: (a: number) => [number, number, number];
    readonly ula_angles_deg: (a: number, b: number, c: number) => [number, number, number, number];
    readonly ula_directivity_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly upda_crosstalk_curve: (a: number, b: number, c: number) => [number, number, number, number];
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
