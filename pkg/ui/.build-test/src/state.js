/**
 * Queue state machine.
 *
 * The rendered UI is a pure function of (server responses, in-flight
 * optimistic deltas): every transition here returns a fresh state object,
 * verdicts are applied optimistically and reverted on rejection, and a
 * reload simply replaces everything with server truth.
 */
const MAX_NOTICES = 5;
export function initialState(runId) {
    return {
        runId,
        items: [],
        cursor: null,
        total: 0,
        inFlight: {},
        notices: [],
        status: null,
        error: null,
    };
}
function pushNotice(notices, notice) {
    return [...notices, notice].slice(-MAX_NOTICES);
}
export function applyQueuePage(state, page, append = false) {
    const items = append ? [...state.items, ...page.items] : page.items.slice();
    return {
        ...state,
        items,
        cursor: page.cursor,
        total: page.total,
        inFlight: append ? state.inFlight : {},
        error: null,
    };
}
export function applyStatus(state, status) {
    return { ...state, status, error: null };
}
export function applyError(state, error) {
    return {
        ...state,
        error: { status: error.status, code: error.code, message: error.message },
    };
}
/** Optimistically remove the row; stash it so a rejection can restore it. */
export function beginVerdict(state, domain, verdict) {
    const index = state.items.findIndex((item) => item.domain === domain);
    if (index < 0 || state.inFlight[domain]) {
        return state;
    }
    const item = state.items[index];
    const items = state.items.slice();
    items.splice(index, 1);
    return {
        ...state,
        items,
        inFlight: { ...state.inFlight, [domain]: { item, index, verdict } },
    };
}
/** Server accepted the verdict: drop the stash, surface the frontier effect. */
export function completeVerdict(state, domain, response) {
    const inFlight = { ...state.inFlight };
    delete inFlight[domain];
    let notices = state.notices;
    if (response.frontier_delta > 0) {
        notices = pushNotice(notices, {
            kind: "harvest-queued",
            text: `${domain} confirmed: new site queued for harvest`,
        });
    }
    else {
        notices = pushNotice(notices, {
            kind: "removed",
            text: `${domain} marked ${response.item.verdict.replace("_", " ")}`,
        });
    }
    return { ...state, inFlight, notices, total: Math.max(0, state.total - 1) };
}
/** Server rejected the verdict: restore the row where it was and explain. */
export function failVerdict(state, domain, error) {
    const stash = state.inFlight[domain];
    if (!stash) {
        return applyError(state, error);
    }
    const inFlight = { ...state.inFlight };
    delete inFlight[domain];
    const items = state.items.slice();
    items.splice(Math.min(stash.index, items.length), 0, stash.item);
    return {
        ...state,
        items,
        inFlight,
        notices: pushNotice(state.notices, {
            kind: "error",
            text: `${domain}: ${error.message} (${error.code})`,
        }),
    };
}
