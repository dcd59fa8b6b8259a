/* tslint:disable */
/* eslint-disable */

/**
 * One goal stepped event by event. Events that have no transition are
 * refused and leave the session unchanged.
 */
export class ProtocolSession {
    free(): void;
    [Symbol.dispose](): void;
    client_state(): string;
    /**
     * Step log plus a final status line.
     */
    log(): string;
    constructor();
    /**
     * Appends `event` (for example `SendGoal` or `StatusUpdate:Active`).
     * Returns an error naming the undefined transition on refusal.
     */
    push(event: string): void;
    reset(): void;
    server_state(): string;
    undo(): void;
}

/**
 * Diagnostics followed by element counts, or the parse errors.
 */
export function check_model(text: string): string;

/**
 * DOT for the named running system, or the first one when `system` is empty.
 */
export function render_model(text: string, system: string, mode: string, level: string, expand_actions: boolean, infrastructure: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_protocolsession_free: (a: number, b: number) => void;
    readonly check_model: (a: number, b: number) => [number, number];
    readonly protocolsession_client_state: (a: number) => [number, number];
    readonly protocolsession_log: (a: number) => [number, number];
    readonly protocolsession_new: () => number;
    readonly protocolsession_push: (a: number, b: number, c: number) => [number, number];
    readonly protocolsession_reset: (a: number) => void;
    readonly protocolsession_server_state: (a: number) => [number, number];
    readonly protocolsession_undo: (a: number) => void;
    readonly render_model: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
