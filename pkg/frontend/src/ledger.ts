/** Pure rendering of service events into public ledger lines. */

import type { GameEvent, WireOffer } from "./types.js";
import { dollars, seatLabel } from "./labels.js";

export function describeOffer(offer: WireOffer): string {
  return `${offer.give_qty} ${offer.give_color} for ${offer.get_qty} ${offer.get_color}`;
}

interface RevealedResponse {
  accepted: boolean;
  coerced: boolean;
  effective: boolean;
}

export function describeEvent(event: GameEvent, ownSeat: number): string {
  const who = (seat: unknown) => seatLabel(Number(seat), ownSeat);
  switch (event.type) {
    case "TurnOpened":
      return `round ${Number(event.round) + 1}: ${who(event.proposer)} to propose`;
    case "ProposalMade": {
      if (event.offer === null) {
        return event.invalid
          ? `${who(event.proposer)} made an invalid offer, counted as a pass`
          : `${who(event.proposer)} passed`;
      }
      return `${who(event.proposer)} offered ${describeOffer(event.offer as WireOffer)}`;
    }
    case "ResponsesRevealed": {
      const responses = event.responses as Record<string, RevealedResponse>;
      const parts = Object.keys(responses)
        .sort((a, b) => Number(a) - Number(b))
        .map((seat) => {
          const r = responses[seat]!;
          if (r.accepted) {
            return `${who(seat)} accepted`;
          }
          return r.coerced
            ? `${who(seat)} could not pay`
            : `${who(seat)} declined`;
        });
      return parts.join(", ");
    }
    case "TradeExecuted":
      return `trade executed between ${who(event.proposer)} and ${who(event.acceptor)}`;
    case "TradeFailed":
      return "no trade this turn";
    case "GameEnded": {
      const payout = event.payout_cents as number[];
      const parts = payout.map(
        (cents, seat) => `${seatLabel(seat, ownSeat)} ${dollars(cents)}`,
      );
      return `game over (${event.status}), surplus: ${parts.join(", ")}`;
    }
    default:
      return `${event.type}`;
  }
}
