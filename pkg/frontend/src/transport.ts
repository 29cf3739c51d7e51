/** HTTP access to the play service. Everything the client knows arrives
 * through this interface, so tests can substitute a scripted service. */

import type {
  ActionResult,
  CreateSessionResult,
  CreateSessionSpec,
  EventsPage,
  PreviewResult,
  SessionView,
  WireOffer,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export interface ServiceTransport {
  createSession(spec: CreateSessionSpec): Promise<CreateSessionResult>;
  view(sessionId: string): Promise<SessionView>;
  preview(sessionId: string, offer: WireOffer): Promise<PreviewResult>;
  proposal(sessionId: string, offer: WireOffer | null): Promise<ActionResult>;
  response(sessionId: string, accept: boolean): Promise<ActionResult>;
  events(sessionId: string, since: number): Promise<EventsPage>;
}

export function encodeOffer(offer: WireOffer): string {
  return `${offer.give_qty}:${offer.give_color}:${offer.get_qty}:${offer.get_color}`;
}

export class HttpTransport implements ServiceTransport {
  constructor(private readonly base: string = "") {}

  private async call<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    let body: unknown = null;
    try {
      body = await res.json();
    } catch {
      // non-JSON error bodies fall through to the status text below
    }
    if (!res.ok) {
      const detail = (body as { detail?: { code?: string; message?: string } })
        ?.detail;
      throw new ServiceError(
        res.status,
        detail?.code ?? "Unknown",
        detail?.message ?? res.statusText,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.call<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(spec: CreateSessionSpec): Promise<CreateSessionResult> {
    return this.post("/sessions", spec);
  }

  view(sessionId: string): Promise<SessionView> {
    return this.call(`/sessions/${sessionId}/view`);
  }

  preview(sessionId: string, offer: WireOffer): Promise<PreviewResult> {
    const encoded = encodeURIComponent(encodeOffer(offer));
    return this.call(`/sessions/${sessionId}/preview?offer=${encoded}`);
  }

  proposal(sessionId: string, offer: WireOffer | null): Promise<ActionResult> {
    return this.post(`/sessions/${sessionId}/proposal`, { offer });
  }

  response(sessionId: string, accept: boolean): Promise<ActionResult> {
    return this.post(`/sessions/${sessionId}/response`, { accept });
  }

  events(sessionId: string, since: number): Promise<EventsPage> {
    return this.call(`/sessions/${sessionId}/events?since=${since}`);
  }
}
