/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const osd_field_db: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const osd_span_deg: (a: number) => [number, number, number];
export const ula_angles_deg: (a: number, b: number, c: number) => [number, number, number, number];
export const ula_directivity_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const upda_crosstalk_curve: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
