/* @ts-self-types="./choquet_nash_web.d.ts" */

/**
 * Preferences of both agents; agent 1 explores with a normal law and
 * agent 2 with a uniform one.
 */
export class Game {
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        GameFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_game_free(ptr, 0);
    }
    /**
     * Rows `(u, density)` of agent `agent`'s equilibrium law at `(t, y)`.
     * @param {number} agent
     * @param {number} t
     * @param {number} y
     * @param {number} points
     * @returns {Float64Array}
     */
    densityCurve(agent, t, y, points) {
        const ret = wasm.game_densityCurve(this.__wbg_ptr, agent, t, y, points);
        if (ret[3]) {
            throw takeFromExternrefTable0(ret[2]);
        }
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Rows `(t, μ₁, μ₂)` of the equilibrium means at fixed `y`.
     * @param {number} y
     * @param {number} points
     * @returns {Float64Array}
     */
    meanCurves(y, points) {
        const ret = wasm.game_meanCurves(this.__wbg_ptr, y, points);
        if (ret[3]) {
            throw takeFromExternrefTable0(ret[2]);
        }
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @param {number} gamma1
     * @param {number} k1
     * @param {number} gamma2
     * @param {number} k2
     * @param {number} lambda0
     * @param {number} horizon
     */
    constructor(gamma1, k1, gamma2, k2, lambda0, horizon) {
        const ret = wasm.game_new(gamma1, k1, gamma2, k2, lambda0, horizon);
        this.__wbg_ptr = ret;
        GameFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
    /**
     * Rows `(n, err a₁, err a₂, bound)` of agent `agent`'s response
     * iteration under correlation `rho` and volatility `v`.
     * @param {number} agent
     * @param {number} rho
     * @param {number} v
     * @param {number} iterations
     * @returns {Float64Array}
     */
    responseErrors(agent, rho, v, iterations) {
        const ret = wasm.game_responseErrors(this.__wbg_ptr, agent, rho, v, iterations);
        if (ret[3]) {
            throw takeFromExternrefTable0(ret[2]);
        }
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get gamma1() {
        const ret = wasm.__wbg_get_game_gamma1(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gamma2() {
        const ret = wasm.__wbg_get_game_gamma2(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get horizon() {
        const ret = wasm.__wbg_get_game_horizon(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get k1() {
        const ret = wasm.__wbg_get_game_k1(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get k2() {
        const ret = wasm.__wbg_get_game_k2(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda0() {
        const ret = wasm.__wbg_get_game_lambda0(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set gamma1(arg0) {
        wasm.__wbg_set_game_gamma1(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set gamma2(arg0) {
        wasm.__wbg_set_game_gamma2(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set horizon(arg0) {
        wasm.__wbg_set_game_horizon(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set k1(arg0) {
        wasm.__wbg_set_game_k1(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set k2(arg0) {
        wasm.__wbg_set_game_k2(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda0(arg0) {
        wasm.__wbg_set_game_lambda0(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Game.prototype[Symbol.dispose] = Game.prototype.free;
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./choquet_nash_web_bg.js": import0,
    };
}

const GameFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_game_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('choquet_nash_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
