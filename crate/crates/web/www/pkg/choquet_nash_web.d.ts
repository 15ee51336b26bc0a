/* tslint:disable */
/* eslint-disable */

/**
 * Preferences of both agents; agent 1 explores with a normal law and
 * agent 2 with a uniform one.
 */
export class Game {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Rows `(u, density)` of agent `agent`'s equilibrium law at `(t, y)`.
     */
    densityCurve(agent: number, t: number, y: number, points: number): Float64Array;
    /**
     * Rows `(t, μ₁, μ₂)` of the equilibrium means at fixed `y`.
     */
    meanCurves(y: number, points: number): Float64Array;
    constructor(gamma1: number, k1: number, gamma2: number, k2: number, lambda0: number, horizon: number);
    /**
     * Rows `(n, err a₁, err a₂, bound)` of agent `agent`'s response
     * iteration under correlation `rho` and volatility `v`.
     */
    responseErrors(agent: number, rho: number, v: number, iterations: number): Float64Array;
    gamma1: number;
    gamma2: number;
    horizon: number;
    k1: number;
    k2: number;
    lambda0: number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_game_free: (a: number, b: number) => void;
    readonly __wbg_get_game_gamma1: (a: number) => number;
    readonly __wbg_get_game_gamma2: (a: number) => number;
    readonly __wbg_get_game_horizon: (a: number) => number;
    readonly __wbg_get_game_k1: (a: number) => number;
    readonly __wbg_get_game_k2: (a: number) => number;
    readonly __wbg_get_game_lambda0: (a: number) => number;
    readonly __wbg_set_game_gamma1: (a: number, b: number) => void;
    readonly __wbg_set_game_gamma2: (a: number, b: number) => void;
    readonly __wbg_set_game_horizon: (a: number, b: number) => void;
    readonly __wbg_set_game_k1: (a: number, b: number) => void;
    readonly __wbg_set_game_k2: (a: number, b: number) => void;
    readonly __wbg_set_game_lambda0: (a: number, b: number) => void;
    readonly game_densityCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly game_meanCurves: (a: number, b: number, c: number) => [number, number, number, number];
    readonly game_new: (a: number, b: number, c: number, d: number, e: number, f: number) => number;
    readonly game_responseErrors: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
