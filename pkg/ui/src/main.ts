/**
 * Browser bootstrap: pick a run, render the queue and graph panels, route
 * clicks to the controller, and poll run status so server-side iterations
 * show up without a reload.
 */

import { ApiClient, ApiError } from "./api.js";
import type { GraphPayload } from "./api.js";
import { QueueController } from "./controller.js";
import { renderGraphPanel } from "./graphview.js";
import { renderQueue } from "./render.js";

const POLL_MS = 5000;

interface ViewState {
  graph: GraphPayload | null;
  selectedEdge: [string, string] | null;
}

function tokenStore(): { get(): string | undefined; set(token: string): void } {
  return {
    get: () => window.sessionStorage.getItem("clonewatch-token") ?? undefined,
    set: (token: string) => window.sessionStorage.setItem("clonewatch-token", token),
  };
}

async function pickRun(api: ApiClient): Promise<string | null> {
  const fromQuery = new URLSearchParams(window.location.search).get("run");
  if (fromQuery) return fromQuery;
  const { runs } = await api.listRuns();
  return runs.length ? runs[runs.length - 1]! : null;
}

function makeClient(): ApiClient {
  return new ApiClient("", undefined, tokenStore().get());
}

async function boot(): Promise<void> {
  const queueEl = document.getElementById("queue")!;
  const graphEl = document.getElementById("graph")!;
  const view: ViewState = { graph: null, selectedEdge: null };

  let api = makeClient();
  let runId: string | null = null;
  try {
    runId = await pickRun(api);
  } catch (error) {
    if (error instanceof ApiError && error.status === 401) {
      runId = null;
    } else {
      throw error;
    }
  }
  if (!runId) {
    queueEl.innerHTML =
      '<div class="empty-state">No runs yet. Start one with ' +
      "<code>clonewatch snowball --serve</code>.</div>";
  }

  let controller = new QueueController(api, runId ?? "", (state) => {
    queueEl.innerHTML = renderQueue(state);
  });

  const refreshGraph = async () => {
    if (!runId) return;
    try {
      view.graph = await api.getGraph(runId);
      graphEl.innerHTML = renderGraphPanel(view.graph, view.selectedEdge);
    } catch {
      // graph pane is best-effort; the queue shows API errors
    }
  };

  const fullRefresh = async () => {
    if (!runId) return;
    await controller.refreshStatus();
    await controller.loadQueue();
    await refreshGraph();
  };

  document.body.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset["action"];
    if (action === "verdict") {
      const domain = target.dataset["domain"]!;
      const verdict = target.dataset["verdict"]!;
      void controller.submitVerdict(domain, verdict).then(refreshGraph);
    } else if (action === "load-more") {
      void controller.loadMore();
    } else if (action === "retry") {
      void fullRefresh();
    } else if (action === "iterate") {
      void controller.triggerIteration();
    } else if (action === "select-edge") {
      view.selectedEdge = [target.dataset["a"]!, target.dataset["b"]!];
      if (view.graph) graphEl.innerHTML = renderGraphPanel(view.graph, view.selectedEdge);
    } else if (action === "set-token") {
      const input = document.getElementById("token-input") as HTMLInputElement | null;
      if (input && input.value) {
        tokenStore().set(input.value);
        api = makeClient();
        controller = new QueueController(api, runId ?? "", (state) => {
          queueEl.innerHTML = renderQueue(state);
        });
        void fullRefresh();
      }
    }
  });

  await fullRefresh();
  window.setInterval(() => {
    void controller.refreshStatus();
    void refreshGraph();
  }, POLL_MS);
}

void boot();
