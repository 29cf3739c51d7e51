/** Page entry: session setup form, polling loop, and control wiring. */

import { GameClient } from "./client.js";
import { HttpTransport } from "./transport.js";
import type { WireOffer } from "./types.js";
import { collectRefs, fillColorOptions, render } from "./ui.js";

const POLL_MS = 700;

function serviceBase(): string {
  // same origin by default; ?service=http://host:port overrides
  const param = new URLSearchParams(window.location.search).get("service");
  return param ?? "";
}

function readComposer(refs: ReturnType<typeof collectRefs>): WireOffer | null {
  const giveQty = Number(refs.giveQty.value);
  const getQty = Number(refs.getQty.value);
  if (!Number.isInteger(giveQty) || !Number.isInteger(getQty) || giveQty < 1 || getQty < 1) {
    return null;
  }
  return {
    give_color: refs.giveColor.value,
    give_qty: giveQty,
    get_color: refs.getColor.value,
    get_qty: getQty,
  };
}

async function startSession(variant: number): Promise<void> {
  const client = new GameClient(new HttpTransport(serviceBase()));
  await client.start({ variant });

  document.getElementById("setup")!.hidden = true;
  document.getElementById("game")!.hidden = false;

  const refs = collectRefs(document);
  fillColorOptions(refs, client.clientView?.colors ?? []);

  const repaint = () => render(client, refs);

  const onComposerInput = async () => {
    await client.setComposer(readComposer(refs));
    repaint();
  };
  for (const control of [refs.giveQty, refs.giveColor, refs.getQty, refs.getColor]) {
    control.addEventListener("input", () => void onComposerInput());
  }

  refs.submitButton.addEventListener("click", () => {
    void client.submitProposal().then(repaint);
  });
  refs.passButton.addEventListener("click", () => {
    void client.pass().then(repaint);
  });
  refs.acceptButton.addEventListener("click", () => {
    void client.respond(true).then(repaint);
  });
  refs.declineButton.addEventListener("click", () => {
    void client.respond(false).then(repaint);
  });

  let polling = false;
  setInterval(() => {
    if (polling) {
      return;
    }
    polling = true;
    void client
      .sync()
      .then(repaint)
      .finally(() => {
        polling = false;
      });
  }, POLL_MS);

  repaint();
}

document.getElementById("start-button")!.addEventListener("click", () => {
  const select = document.getElementById("variant") as HTMLSelectElement;
  void startSession(Number(select.value)).catch((err) => {
    document.getElementById("setup-error")!.textContent = String(err);
  });
});
