/** Wires the API client to the queue state machine and notifies the view. */
import { ApiError } from "./api.js";
import { applyError, applyQueuePage, applyStatus, beginVerdict, completeVerdict, failVerdict, initialState, } from "./state.js";
export class QueueController {
    constructor(api, runId, onChange = () => { }) {
        this.api = api;
        this.onChange = onChange;
        this.state = initialState(runId);
    }
    set(next) {
        this.state = next;
        this.onChange(next);
    }
    async loadQueue() {
        try {
            const page = await this.api.listCandidates(this.state.runId);
            this.set(applyQueuePage(this.state, page));
        }
        catch (error) {
            if (error instanceof ApiError)
                this.set(applyError(this.state, error));
            else
                throw error;
        }
    }
    async loadMore() {
        if (!this.state.cursor)
            return;
        try {
            const page = await this.api.listCandidates(this.state.runId, {
                cursor: this.state.cursor,
            });
            this.set(applyQueuePage(this.state, page, true));
        }
        catch (error) {
            if (error instanceof ApiError)
                this.set(applyError(this.state, error));
            else
                throw error;
        }
    }
    async refreshStatus() {
        try {
            const status = await this.api.getStatus(this.state.runId);
            this.set(applyStatus(this.state, status));
        }
        catch (error) {
            if (error instanceof ApiError)
                this.set(applyError(this.state, error));
            else
                throw error;
        }
    }
    /**
     * Optimistic verdict: the row disappears immediately, exactly one POST
     * goes out, and a rejection puts the row back with an explanation.
     * A second submit for a domain already in flight is ignored.
     */
    async submitVerdict(domain, verdict, rationale = "") {
        if (this.state.inFlight[domain])
            return;
        const before = this.state;
        const optimistic = beginVerdict(before, domain, verdict);
        if (optimistic === before)
            return; // row not visible
        this.set(optimistic);
        try {
            const response = await this.api.postVerdict(this.state.runId, domain, verdict, rationale);
            this.set(completeVerdict(this.state, domain, response));
        }
        catch (error) {
            if (error instanceof ApiError) {
                this.set(failVerdict(this.state, domain, error));
            }
            else {
                throw error;
            }
        }
    }
    async triggerIteration() {
        try {
            await this.api.triggerIteration(this.state.runId);
            await this.refreshStatus();
        }
        catch (error) {
            if (error instanceof ApiError)
                this.set(applyError(this.state, error));
            else
                throw error;
        }
    }
}
