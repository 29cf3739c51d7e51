"""Drive a complete interactive session over the play service HTTP API.

A scripted stand-in for the human plays one short game against two
belief-tracking agents, exercising session creation, previews, invalid
input handling, proposals, responses, the event ledger, and the log
that the service writes when the game ends.

    python3 demos/play_service_session.py [seed]
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from chiptrade.gamelog import read_game_log
from chiptrade.service import create_app

VARIANT = 2
DEFAULT_SEED = 2
HUMAN = 0


def pick_offer(client, sid, view):
    """Scan small offers through the preview endpoint and keep the
    cheapest one that still pays, so trades actually happen."""
    colors = view["colors"]
    best = None
    for give in colors:
        for get in colors:
            if get == give:
                continue
            for give_qty in (1, 2, 3):
                for get_qty in (1, 2, 3):
                    encoded = f"{give_qty}:{give}:{get_qty}:{get}"
                    r = client.get(f"/sessions/{sid}/preview",
                                   params={"offer": encoded})
                    p = r.json()
                    if not p["feasible"] or p["value_change_cents"] <= 0:
                        continue
                    key = (p["value_change_cents"], -give_qty)
                    if best is None or key < best[0]:
                        best = (key, dict(give_color=give, give_qty=give_qty,
                                          get_color=get, get_qty=get_qty))
    return None if best is None else best[1]


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_SEED
    log_dir = Path(tempfile.mkdtemp(prefix="chiptrade-demo-"))
    app = create_app(agent_delay_ms=0, log_dir=str(log_dir))
    client = TestClient(app)

    created = client.post("/sessions", json={
        "variant": VARIANT, "seed": seed, "human_seat": HUMAN,
        "agents": ["bayesian", "bayesian"],
    }).json()
    sid = created["session_id"]
    view = created["view"]
    print(f"session {sid}: colors {view['colors']}, seed {seed}, "
          f"you are seat {HUMAN}")
    print(f"your valuations: {view['your_valuations']}")
    print(f"turn order {view['turn_order']}")
    print()

    showed_rejection = False
    while True:
        view = client.get(f"/sessions/{sid}/view").json()
        if view["status"] != "active":
            break
        pending = view["pending"]
        if pending["seat"] != HUMAN:
            continue  # agents move on their own

        if pending["kind"] == "proposal":
            if not showed_rejection:
                # same color on both sides is never a legal trade
                bad = {"give_color": view["colors"][0], "give_qty": 1,
                       "get_color": view["colors"][0], "get_qty": 1}
                r = client.post(f"/sessions/{sid}/proposal",
                                json={"offer": bad})
                detail = r.json()["detail"]
                print(f"tried a nonsense offer, got {r.status_code} "
                      f"{detail['code']}: {detail['message']}")
                showed_rejection = True
            offer = pick_offer(client, sid, view)
            if offer is None:
                print("nothing profitable to offer, passing")
                client.post(f"/sessions/{sid}/proposal", json={"offer": None})
            else:
                print(f"proposing {offer['give_qty']} {offer['give_color']} "
                      f"for {offer['get_qty']} {offer['get_color']}")
                client.post(f"/sessions/{sid}/proposal", json={"offer": offer})
        else:
            offer = pending["offer"]
            take = pending["can_accept"] and pending["accept_delta_cents"] > 0
            if take:
                verdict = "accepting"
            elif not pending["can_accept"]:
                verdict = "declining (cannot pay)"
            else:
                verdict = "declining"
            print(f"seat {pending['proposer']} offers "
                  f"{offer['give_qty']} {offer['give_color']} for "
                  f"{offer['get_qty']} {offer['get_color']} "
                  f"(worth {pending['accept_delta_dollars']} to you), {verdict}")
            client.post(f"/sessions/{sid}/response", json={"accept": take})

    print()
    print("event ledger:")
    events = client.get(f"/sessions/{sid}/events",
                        params={"since": 0}).json()["events"]
    for event in events:
        tail = {k: v for k, v in event.items() if k not in ("seq", "type")}
        print(f"  {event['seq']:>3} {event['type']:<17} {json.dumps(tail)}")

    ended = events[-1]
    print()
    print(f"final value {view['your_value_cents']} cents, "
          f"payout {ended['payout_cents'][HUMAN]} cents above your endowment")

    log_path = log_dir / f"{sid}.jsonl"
    log = read_game_log(log_path)
    print(f"service wrote {log_path.name}: {len(log.records)} turns, "
          f"population {log.population}")


if __name__ == "__main__":
    main()
