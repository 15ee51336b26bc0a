/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_game_free: (a: number, b: number) => void;
export const __wbg_get_game_gamma1: (a: number) => number;
export const __wbg_get_game_gamma2: (a: number) => number;
export const __wbg_get_game_horizon: (a: number) => number;
export const __wbg_get_game_k1: (a: number) => number;
export const __wbg_get_game_k2: (a: number) => number;
export const __wbg_get_game_lambda0: (a: number) => number;
export const __wbg_set_game_gamma1: (a: number, b: number) => void;
export const __wbg_set_game_gamma2: (a: number, b: number) => void;
export const __wbg_set_game_horizon: (a: number, b: number) => void;
export const __wbg_set_game_k1: (a: number, b: number) => void;
export const __wbg_set_game_k2: (a: number, b: number) => void;
export const __wbg_set_game_lambda0: (a: number, b: number) => void;
export const game_densityCurve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const game_meanCurves: (a: number, b: number, c: number) => [number, number, number, number];
export const game_new: (a: number, b: number, c: number, d: number, e: number, f: number) => number;
export const game_responseErrors: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
