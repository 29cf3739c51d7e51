/** Client state machine for one session.
 *
 * Server-authoritative throughout: every number shown comes from a
 * service payload, projected values come from the preview endpoint,
 * and every state change round-trips through an action endpoint
 * followed by an event pull. Nothing is computed optimistically.
 */

import type {
  ClientGameView,
  CreateSessionSpec,
  GameEvent,
  LedgerEntry,
  Phase,
  PreviewResult,
  SessionView,
  WireOffer,
} from "./types.js";
import { ServiceError, type ServiceTransport } from "./transport.js";
import { describeEvent } from "./ledger.js";

export type PreviewState =
  | { status: "idle" }
  | { status: "pending" }
  | { status: "ok"; result: PreviewResult }
  | { status: "invalid"; code: string; message: string };

export class GameClient {
  private sessionId_ = "";
  private view_: SessionView | null = null;
  private ledger_: LedgerEntry[] = [];
  private lastApplied = 0;
  private composer_: WireOffer | null = null;
  private preview_: PreviewState = { status: "idle" };
  private previewToken = 0;
  private payout_: number[] | null = null;
  private actionError_: string | null = null;

  constructor(private readonly transport: ServiceTransport) {}

  get sessionId(): string {
    return this.sessionId_;
  }

  get ledger(): readonly LedgerEntry[] {
    return this.ledger_;
  }

  get previewState(): PreviewState {
    return this.preview_;
  }

  get composer(): WireOffer | null {
    return this.composer_;
  }

  /** Server rejection text for the last submitted action, shown inline. */
  get actionError(): string | null {
    return this.actionError_;
  }

  async start(spec: CreateSessionSpec): Promise<void> {
    const created = await this.transport.createSession(spec);
    this.sessionId_ = created.session_id;
    this.view_ = created.view;
    await this.sync();
  }

  /** Pull new events and refresh the view. Safe to call on a timer. */
  async sync(): Promise<void> {
    const page = await this.transport.events(this.sessionId_, this.lastApplied);
    await this.ingest(page.events);
    this.view_ = await this.transport.view(this.sessionId_);
  }

  /** Drop local state and rebuild the ledger from the full event replay. */
  async reconnect(): Promise<void> {
    this.ledger_ = [];
    this.lastApplied = 0;
    this.inReplay = true;
    try {
      await this.sync();
    } finally {
      this.inReplay = false;
    }
  }

  private inReplay = false;

  private async ingest(events: GameEvent[]): Promise<void> {
    for (const event of events) {
      if (event.seq <= this.lastApplied) {
        continue; // already applied
      }
      if (event.seq !== this.lastApplied + 1) {
        if (this.inReplay) {
          throw new Error(`event stream skips from ${this.lastApplied} to ${event.seq}`);
        }
        // a hole in the stream: trust only a full replay
        await this.reconnect();
        return;
      }
      this.applyEvent(event);
    }
  }

  private applyEvent(event: GameEvent): void {
    this.lastApplied = event.seq;
    const ownSeat = this.view_?.human_seat ?? 0;
    this.ledger_.push({ seq: event.seq, text: describeEvent(event, ownSeat) });
    if (event.type === "GameEnded") {
      this.payout_ = event.payout_cents as number[];
    }
  }

  get phase(): Phase {
    const view = this.view_;
    if (!view || view.status !== "active" || !view.pending) {
      return "waiting";
    }
    if (view.pending.seat !== view.human_seat) {
      return "waiting";
    }
    return view.pending.kind === "proposal" ? "your-proposal" : "your-response";
  }

  // ----- proposal composer -----

  /** Replace the draft offer; the projected value comes back from the
   * preview endpoint, never from client arithmetic. */
  async setComposer(offer: WireOffer | null): Promise<void> {
    this.composer_ = offer;
    this.actionError_ = null;
    const token = ++this.previewToken;
    if (offer === null) {
      this.preview_ = { status: "idle" };
      return;
    }
    this.preview_ = { status: "pending" };
    try {
      const result = await this.transport.preview(this.sessionId_, offer);
      if (token === this.previewToken) {
        this.preview_ = { status: "ok", result };
      }
    } catch (err) {
      if (token !== this.previewToken) {
        return;
      }
      if (err instanceof ServiceError) {
        this.preview_ = { status: "invalid", code: err.code, message: err.message };
      } else {
        throw err;
      }
    }
  }

  get canSubmit(): boolean {
    return (
      this.phase === "your-proposal" &&
      this.composer_ !== null &&
      this.preview_.status === "ok" &&
      this.preview_.result.feasible
    );
  }

  /** Why submit is disabled, for display next to the composer. */
  get submitHint(): string | null {
    if (this.phase !== "your-proposal" || this.composer_ === null) {
      return null;
    }
    if (this.preview_.status === "invalid") {
      return this.preview_.message;
    }
    if (this.preview_.status === "ok" && !this.preview_.result.feasible) {
      const offer = this.composer_;
      return this.preview_.result.reason === "insufficient-inventory"
        ? `you cannot offer ${offer.give_qty} ${offer.give_color} chips`
        : this.preview_.result.reason;
    }
    return null;
  }

  async submitProposal(): Promise<void> {
    if (!this.canSubmit || this.composer_ === null) {
      throw new Error("submit is disabled");
    }
    await this.act(() => this.transport.proposal(this.sessionId_, this.composer_));
    this.composer_ = null;
    this.preview_ = { status: "idle" };
  }

  async pass(): Promise<void> {
    if (this.phase !== "your-proposal") {
      throw new Error("it is not your turn to propose");
    }
    await this.act(() => this.transport.proposal(this.sessionId_, null));
    this.composer_ = null;
    this.preview_ = { status: "idle" };
  }

  // ----- response panel -----

  get activeOffer(): WireOffer | null {
    const pending = this.view_?.pending;
    return pending && pending.kind === "response" ? pending.offer : null;
  }

  get canAccept(): boolean {
    const pending = this.view_?.pending;
    return (
      this.phase === "your-response" &&
      pending !== null &&
      pending !== undefined &&
      pending.kind === "response" &&
      pending.can_accept
    );
  }

  async respond(accept: boolean): Promise<void> {
    if (this.phase !== "your-response") {
      throw new Error("no offer is waiting for you");
    }
    if (accept && !this.canAccept) {
      throw new Error("accept is disabled");
    }
    await this.act(() => this.transport.response(this.sessionId_, accept));
  }

  /** Run one action; server rejections surface inline instead of throwing. */
  private async act(send: () => Promise<unknown>): Promise<void> {
    this.actionError_ = null;
    try {
      await send();
    } catch (err) {
      if (err instanceof ServiceError) {
        this.actionError_ = err.message;
      } else {
        throw err;
      }
    }
    await this.sync();
  }

  // ----- assembled view -----

  get clientView(): ClientGameView | null {
    const view = this.view_;
    if (!view) {
      return null;
    }
    return {
      seat: view.human_seat,
      seats: view.seats,
      colors: view.colors,
      valuations: view.your_valuations,
      holdings: view.holdings,
      valueCents: view.your_value_cents,
      surplusCents: view.your_surplus_cents,
      roundIndex: view.round_index,
      turnIndex: view.turn_index,
      nTurns: view.n_turns,
      phase: this.phase,
      activeOffer: this.activeOffer,
      ledger: this.ledger_,
      status: view.status,
      payoutCents: this.payout_,
    };
  }
}
