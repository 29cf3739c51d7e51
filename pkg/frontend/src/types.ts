/** Wire schemas for the play service (schema_version 1) and the
 * view model the client renders from them. */

export type SessionStatus = "active" | "completed" | "abandoned";

export interface WireOffer {
  give_color: string;
  give_qty: number;
  get_color: string;
  get_qty: number;
}

export interface PendingProposal {
  kind: "proposal";
  seat: number;
}

export interface PendingResponse {
  kind: "response";
  seat: number;
  turn_index: number;
  proposer: number;
  offer: WireOffer;
  can_accept: boolean;
  accept_delta_cents: number;
  accept_delta_dollars: string;
}

export type Pending = PendingProposal | PendingResponse;

export interface SessionView {
  schema_version: number;
  session_id: string;
  status: SessionStatus;
  human_seat: number;
  seats: string[];
  colors: string[];
  numeraire: string;
  endowment: number;
  rounds: number;
  turn_order: number[];
  round_index: number;
  turn_index: number;
  n_turns: number;
  holdings: number[][];
  your_valuations: Record<string, number>;
  your_value_cents: number;
  your_surplus_cents: number;
  pending: Pending | null;
  last_seq: number;
}

export interface PreviewResult {
  schema_version: number;
  give: { color: string; qty: number };
  get: { color: string; qty: number };
  feasible: boolean;
  reason: string | null;
  value_change_cents: number;
  value_change_dollars: string;
  projected_value_cents: number;
}

export interface GameEvent {
  seq: number;
  type: string;
  [field: string]: unknown;
}

export interface EventsPage {
  schema_version: number;
  session_id: string;
  status: SessionStatus;
  last_seq: number;
  events: GameEvent[];
}

export interface CreateSessionResult {
  schema_version: number;
  session_id: string;
  view: SessionView;
}

export interface ActionResult {
  schema_version: number;
  session_id: string;
  status: SessionStatus;
  events: GameEvent[];
  pending: Pending | null;
  last_seq: number;
}

export interface CreateSessionSpec {
  variant?: number;
  seed?: number | null;
  human_seat?: number;
  agents?: string[] | null;
}

// ----- client-side view model -----

export type Phase = "your-proposal" | "your-response" | "waiting";

export interface LedgerEntry {
  seq: number;
  text: string;
}

/** Everything the page renders, assembled strictly from server payloads. */
export interface ClientGameView {
  seat: number;
  seats: string[];
  colors: string[];
  valuations: Record<string, number>;
  holdings: number[][];
  valueCents: number;
  surplusCents: number;
  roundIndex: number;
  turnIndex: number;
  nTurns: number;
  phase: Phase;
  activeOffer: WireOffer | null;
  ledger: LedgerEntry[];
  status: SessionStatus;
  /** per-seat surplus from the GameEnded event, null while running */
  payoutCents: number[] | null;
}
