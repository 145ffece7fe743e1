/**
 * Browser bootstrap: pick a run, render the queue and graph panels, route
 * clicks to the controller, and poll run status so server-side iterations
 * show up without a reload.
 */
import { ApiClient, ApiError } from "./api.js";
import { QueueController } from "./controller.js";
import { renderGraphPanel } from "./graphview.js";
import { renderQueue } from "./render.js";
const POLL_MS = 5000;
function tokenStore() {
    return {
        get: () => window.sessionStorage.getItem("clonewatch-token") ?? undefined,
        set: (token) => window.sessionStorage.setItem("clonewatch-token", token),
    };
}
async function pickRun(api) {
    const fromQuery = new URLSearchParams(window.location.search).get("run");
    if (fromQuery)
        return fromQuery;
    const { runs } = await api.listRuns();
    return runs.length ? runs[runs.length - 1] : null;
}
function makeClient() {
    return new ApiClient("", undefined, tokenStore().get());
}
async function boot() {
    const queueEl = document.getElementById("queue");
    const graphEl = document.getElementById("graph");
    const view = { graph: null, selectedEdge: null };
    let api = makeClient();
    let runId = null;
    try {
        runId = await pickRun(api);
    }
    catch (error) {
        if (error instanceof ApiError && error.status === 401) {
            runId = null;
        }
        else {
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
        if (!runId)
            return;
        try {
            view.graph = await api.getGraph(runId);
            graphEl.innerHTML = renderGraphPanel(view.graph, view.selectedEdge);
        }
        catch {
            // graph pane is best-effort; the queue shows API errors
        }
    };
    const fullRefresh = async () => {
        if (!runId)
            return;
        await controller.refreshStatus();
        await controller.loadQueue();
        await refreshGraph();
    };
    document.body.addEventListener("click", (event) => {
        const target = event.target.closest("[data-action]");
        if (!target)
            return;
        const action = target.dataset["action"];
        if (action === "verdict") {
            const domain = target.dataset["domain"];
            const verdict = target.dataset["verdict"];
            void controller.submitVerdict(domain, verdict).then(refreshGraph);
        }
        else if (action === "load-more") {
            void controller.loadMore();
        }
        else if (action === "retry") {
            void fullRefresh();
        }
        else if (action === "iterate") {
            void controller.triggerIteration();
        }
        else if (action === "select-edge") {
            view.selectedEdge = [target.dataset["a"], target.dataset["b"]];
            if (view.graph)
                graphEl.innerHTML = renderGraphPanel(view.graph, view.selectedEdge);
        }
        else if (action === "set-token") {
            const input = document.getElementById("token-input");
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
