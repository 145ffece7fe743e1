/**
 * Queue state machine.
 *
 * The rendered UI is a pure function of (server responses, in-flight
 * optimistic deltas): every transition here returns a fresh state object,
 * verdicts are applied optimistically and reverted on rejection, and a
 * reload simply replaces everything with server truth.
 */

import type { ApiError } from "./api.js";
import type { CandidatesPage, RunStatus, TriageItem } from "./api.js";
import type { VerdictResponse } from "./api.js";

export interface Notice {
  kind: "harvest-queued" | "removed" | "error";
  text: string;
}

export interface InFlight {
  item: TriageItem;
  index: number;
  verdict: string;
}

export interface QueueState {
  runId: string;
  items: TriageItem[];
  cursor: string | null;
  total: number;
  inFlight: Record<string, InFlight>;
  notices: Notice[];
  status: RunStatus | null;
  error: { status: number; code: string; message: string } | null;
}

const MAX_NOTICES = 5;

export function initialState(runId: string): QueueState {
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

function pushNotice(notices: Notice[], notice: Notice): Notice[] {
  return [...notices, notice].slice(-MAX_NOTICES);
}

export function applyQueuePage(
  state: QueueState,
  page: CandidatesPage,
  append = false,
): QueueState {
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

export function applyStatus(state: QueueState, status: RunStatus): QueueState {
  return { ...state, status, error: null };
}

export function applyError(state: QueueState, error: ApiError): QueueState {
  return {
    ...state,
    error: { status: error.status, code: error.code, message: error.message },
  };
}

/** Optimistically remove the row; stash it so a rejection can restore it. */
export function beginVerdict(
  state: QueueState,
  domain: string,
  verdict: string,
): QueueState {
  const index = state.items.findIndex((item) => item.domain === domain);
  if (index < 0 || state.inFlight[domain]) {
    return state;
  }
  const item = state.items[index]!;
  const items = state.items.slice();
  items.splice(index, 1);
  return {
    ...state,
    items,
    inFlight: { ...state.inFlight, [domain]: { item, index, verdict } },
  };
}

/** Server accepted the verdict: drop the stash, surface the frontier effect. */
export function completeVerdict(
  state: QueueState,
  domain: string,
  response: VerdictResponse,
): QueueState {
  const inFlight = { ...state.inFlight };
  delete inFlight[domain];
  let notices = state.notices;
  if (response.frontier_delta > 0) {
    notices = pushNotice(notices, {
      kind: "harvest-queued",
      text: `${domain} confirmed: new site queued for harvest`,
    });
  } else {
    notices = pushNotice(notices, {
      kind: "removed",
      text: `${domain} marked ${response.item.verdict.replace("_", " ")}`,
    });
  }
  return { ...state, inFlight, notices, total: Math.max(0, state.total - 1) };
}

/** Server rejected the verdict: restore the row where it was and explain. */
export function failVerdict(
  state: QueueState,
  domain: string,
  error: ApiError,
): QueueState {
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
