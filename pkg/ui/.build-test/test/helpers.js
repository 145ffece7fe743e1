/** Shared test plumbing: recorded fixtures + a scripted fake fetch. */
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
const here = dirname(fileURLToPath(import.meta.url));
export function loadFixture(name) {
    // compiled tests live in .build-test/test/, fixtures stay in test/fixtures/
    const path = join(here, "..", "..", "test", "fixtures", name);
    return JSON.parse(readFileSync(path, "utf-8"));
}
/** Fake fetch that serves scripted responses and records every call. */
export function fakeFetch(script) {
    const calls = [];
    const fetch = async (url, init) => {
        const method = init?.method ?? "GET";
        calls.push({
            url,
            method,
            headers: init?.headers ?? {},
            body: init?.body ? JSON.parse(init.body) : undefined,
        });
        const hit = script.find((s) => s.match(url, method));
        if (!hit) {
            throw new Error(`no scripted response for ${method} ${url}`);
        }
        const response = {
            status: hit.status,
            json: async () => hit.body,
        };
        return response;
    };
    return { fetch, calls };
}
