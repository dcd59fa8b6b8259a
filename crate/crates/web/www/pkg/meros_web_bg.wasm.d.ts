/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_protocolsession_free: (a: number, b: number) => void;
export const check_model: (a: number, b: number) => [number, number];
export const protocolsession_client_state: (a: number) => [number, number];
export const protocolsession_log: (a: number) => [number, number];
export const protocolsession_new: () => number;
export const protocolsession_push: (a: number, b: number, c: number) => [number, number];
export const protocolsession_reset: (a: number) => void;
export const protocolsession_server_state: (a: number) => [number, number];
export const protocolsession_undo: (a: number) => void;
export const render_model: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
