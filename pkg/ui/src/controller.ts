/** Wires the API client to the queue state machine and notifies the view. */

import { ApiClient, ApiError } from "./api.js";
import type { QueueState } from "./state.js";
import {
  applyError,
  applyQueuePage,
  applyStatus,
  beginVerdict,
  completeVerdict,
  failVerdict,
  initialState,
} from "./state.js";

export class QueueController {
  state: QueueState;

  constructor(
    private api: ApiClient,
    runId: string,
    private onChange: (state: QueueState) => void = () => {},
  ) {
    this.state = initialState(runId);
  }

  private set(next: QueueState): void {
    this.state = next;
    this.onChange(next);
  }

  async loadQueue(): Promise<void> {
    try {
      const page = await this.api.listCandidates(this.state.runId);
      this.set(applyQueuePage(this.state, page));
    } catch (error) {
      if (error instanceof ApiError) this.set(applyError(this.state, error));
      else throw error;
    }
  }

  async loadMore(): Promise<void> {
    if (!this.state.cursor) return;
    try {
      const page = await this.api.listCandidates(this.state.runId, {
        cursor: this.state.cursor,
      });
      this.set(applyQueuePage(this.state, page, true));
    } catch (error) {
      if (error instanceof ApiError) this.set(applyError(this.state, error));
      else throw error;
    }
  }

  async refreshStatus(): Promise<void> {
    try {
      const status = await this.api.getStatus(this.state.runId);
      this.set(applyStatus(this.state, status));
    } catch (error) {
      if (error instanceof ApiError) this.set(applyError(this.state, error));
      else throw error;
    }
  }

  /**
   * Optimistic verdict: the row disappears immediately, exactly one POST
   * goes out, and a rejection puts the row back with an explanation.
   * A second submit for a domain already in flight is ignored.
   */
  async submitVerdict(domain: string, verdict: string, rationale = ""): Promise<void> {
    if (this.state.inFlight[domain]) return;
    const before = this.state;
    const optimistic = beginVerdict(before, domain, verdict);
    if (optimistic === before) return; // row not visible
    this.set(optimistic);
    try {
      const response = await this.api.postVerdict(
        this.state.runId,
        domain,
        verdict,
        rationale,
      );
      this.set(completeVerdict(this.state, domain, response));
    } catch (error) {
      if (error instanceof ApiError) {
        this.set(failVerdict(this.state, domain, error));
      } else {
        throw error;
      }
    }
  }

  async triggerIteration(): Promise<void> {
    try {
      await this.api.triggerIteration(this.state.runId);
      await this.refreshStatus();
    } catch (error) {
      if (error instanceof ApiError) this.set(applyError(this.state, error));
      else throw error;
    }
  }
}
