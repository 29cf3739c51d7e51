/** DOM painting for the session page. Reads the client's assembled view
 * and writes it into the page; all inputs call back into the client. */

import type { GameClient } from "./client.js";
import { dollars, seatLabel } from "./labels.js";
import { describeOffer } from "./ledger.js";

export interface PageRefs {
  statusLine: HTMLElement;
  table: HTMLElement;
  composer: HTMLElement;
  giveQty: HTMLInputElement;
  giveColor: HTMLSelectElement;
  getQty: HTMLInputElement;
  getColor: HTMLSelectElement;
  previewLine: HTMLElement;
  submitButton: HTMLButtonElement;
  passButton: HTMLButtonElement;
  composerError: HTMLElement;
  response: HTMLElement;
  responseOffer: HTMLElement;
  acceptButton: HTMLButtonElement;
  declineButton: HTMLButtonElement;
  responseError: HTMLElement;
  payout: HTMLElement;
  ledger: HTMLOListElement;
}

export function collectRefs(root: Document): PageRefs {
  const pick = <T extends Element>(id: string): T => {
    const el = root.getElementById(id);
    if (!el) {
      throw new Error(`missing element #${id}`);
    }
    return el as unknown as T;
  };
  return {
    statusLine: pick("status-line"),
    table: pick("table"),
    composer: pick("composer"),
    giveQty: pick("give-qty"),
    giveColor: pick("give-color"),
    getQty: pick("get-qty"),
    getColor: pick("get-color"),
    previewLine: pick("preview-line"),
    submitButton: pick("submit-button"),
    passButton: pick("pass-button"),
    composerError: pick("composer-error"),
    response: pick("response"),
    responseOffer: pick("response-offer"),
    acceptButton: pick("accept-button"),
    declineButton: pick("decline-button"),
    responseError: pick("response-error"),
    payout: pick("payout"),
    ledger: pick("ledger"),
  };
}

export function fillColorOptions(refs: PageRefs, colors: string[]): void {
  for (const select of [refs.giveColor, refs.getColor]) {
    select.innerHTML = "";
    for (const color of colors) {
      const option = document.createElement("option");
      option.value = color;
      option.textContent = color;
      select.appendChild(option);
    }
  }
  refs.getColor.selectedIndex = colors.length > 1 ? 1 : 0;
}

function holdingsTable(
  holdings: number[][],
  colors: string[],
  valuations: Record<string, number>,
  ownSeat: number,
): string {
  const head = colors.map((c) => `<th>${c}</th>`).join("");
  const rows = holdings
    .map((row, seat) => {
      const cells = row.map((n) => `<td>${n}</td>`).join("");
      return `<tr><th>${seatLabel(seat, ownSeat)}</th>${cells}</tr>`;
    })
    .join("");
  const values = colors
    .map((c) => `<td>${dollars(valuations[c] ?? 0)}</td>`)
    .join("");
  return (
    `<table><thead><tr><th></th>${head}</tr></thead>` +
    `<tbody>${rows}<tr class="values"><th>worth to you</th>${values}</tr></tbody></table>`
  );
}

export function render(client: GameClient, refs: PageRefs): void {
  const view = client.clientView;
  if (!view) {
    return;
  }

  const phaseText = {
    "your-proposal": "your turn: make an offer or pass",
    "your-response": "an offer is on the table for you",
    waiting: "waiting for the other players",
  }[view.phase];
  refs.statusLine.textContent =
    view.status === "active"
      ? `round ${view.roundIndex + 1} of 3, turn ${view.turnIndex + 1} of ${view.nTurns}. ${phaseText}`
      : `session ${view.status}`;

  refs.table.innerHTML = holdingsTable(
    view.holdings,
    view.colors,
    view.valuations,
    view.seat,
  );

  // proposal composer
  refs.composer.hidden = view.phase !== "your-proposal";
  refs.submitButton.disabled = !client.canSubmit;
  const preview = client.previewState;
  if (preview.status === "ok" && preview.result.feasible) {
    refs.previewLine.textContent =
      `value change ${preview.result.value_change_dollars}, ` +
      `projected total ${dollars(preview.result.projected_value_cents)}`;
  } else if (preview.status === "pending") {
    refs.previewLine.textContent = "checking...";
  } else {
    refs.previewLine.textContent = "";
  }
  refs.composerError.textContent = client.submitHint ?? client.actionError ?? "";

  // response panel
  refs.response.hidden = view.phase !== "your-response";
  if (view.activeOffer) {
    refs.responseOffer.textContent = `take ${describeOffer(view.activeOffer)}?`;
  }
  refs.acceptButton.disabled = !client.canAccept;
  refs.responseError.textContent =
    view.phase === "your-response" && !client.canAccept
      ? "you cannot pay for this trade"
      : (client.actionError ?? "");

  // end screen
  refs.payout.hidden = view.payoutCents === null;
  if (view.payoutCents) {
    const lines = view.payoutCents
      .map(
        (cents, seat) =>
          `<li>${seatLabel(seat, view.seat)}: ${dollars(cents)} surplus</li>`,
      )
      .join("");
    refs.payout.innerHTML = `<h2>final payouts</h2><ul>${lines}</ul>`;
  }

  // public ledger, newest last
  refs.ledger.innerHTML = view.ledger
    .map((entry) => `<li value="${entry.seq}">${entry.text}</li>`)
    .join("");
}
