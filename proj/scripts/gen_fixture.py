#!/usr/bin/env python3
"""Generate the bundled two-match sample in the open-data event layout.

Writes data/fixture/events/<match_id>.json (one event object per line) and
data/fixture/players.csv. The output is fully determined by --seed.
"""

import argparse
import csv
import json
import random
from pathlib import Path

PITCH_X, PITCH_Y = 120.0, 80.0

TEAMS = {
    1: "Northbridge",
    2: "Eastvale",
    3: "Harrow Town",
}
MATCHES = [
    (100001, 1, 2),
    (100002, 3, 1),
]
POSITIONS = ["GK", "DF", "DF", "DF", "DF", "MF", "MF", "MF", "FW", "FW", "FW"]
# rough pitch zone (own-goal x fraction) per position
POSITION_X = {"GK": 0.05, "DF": 0.28, "MF": 0.5, "FW": 0.72}

FIRST = ["Alex", "Ben", "Carlos", "Dan", "Eli", "Finn", "Gabe", "Hugo", "Ivan", "Jon", "Kai",
         "Leo", "Max", "Nico", "Omar", "Pete", "Quinn", "Rui", "Sam", "Tom", "Umar", "Vic", "Will"]
LAST = ["Adams", "Berg", "Costa", "Dias", "Evans", "Ford", "Gomez", "Hall", "Ito", "Jones",
        "Klein", "Lopez", "Moss", "Nunes", "Ortiz", "Park", "Quist", "Reyes", "Silva", "Toth"]


def player_id(team, slot):
    return team * 100 + slot + 1


def clamp(v, lo, hi):
    return max(lo, min(hi, v))


class Match:
    def __init__(self, rng, match_id, home, away):
        self.rng = rng
        self.match_id = match_id
        self.teams = (home, away)
        self.events = []
        self.clock = 0.0
        self.period = 1
        self.index = 0

    def timestamp(self):
        t = self.clock
        h = int(t // 3600)
        m = int(t % 3600 // 60)
        s = t % 60
        return f"{h:02d}:{m:02d}:{s:06.3f}"

    def add(self, etype, team, player, loc=None, **extra):
        self.index += 1
        ev = {
            "id": f"{self.match_id}-{self.index:04d}",
            "index": self.index,
            "period": self.period,
            "timestamp": self.timestamp(),
            "type": {"name": etype},
            "team": {"id": team, "name": TEAMS[team]},
        }
        if player is not None:
            ev["player"] = {"id": player, "name": f"Player {player}"}
        if loc is not None:
            ev["location"] = [round(loc[0], 1), round(loc[1], 1)]
        ev.update(extra)
        self.events.append(ev)

    def tick(self, lo=1.0, hi=5.0):
        self.clock += self.rng.uniform(lo, hi)

    def pick_player(self, team, x, exclude=None):
        # players whose usual zone is close to x are more likely on the ball
        weights = []
        for slot, pos in enumerate(POSITIONS):
            pid = player_id(team, slot)
            if pid == exclude:
                weights.append(0.0)
                continue
            d = abs(POSITION_X[pos] - x / PITCH_X)
            weights.append(0.05 if pos == "GK" and x > 30 else 1.0 / (0.08 + d))
        return self.rng.choices([player_id(team, s) for s in range(11)], weights)[0]

    def possession(self, team, start):
        """One possession for `team`, coordinates in its own attacking frame."""
        rng = self.rng
        opp = self.teams[1] if team == self.teams[0] else self.teams[0]
        x, y = start
        carrier = self.pick_player(team, x)
        for _ in range(rng.randint(2, 9)):
            self.tick()
            roll = rng.random()
            if roll < 0.12 and x > 35:
                # carry forward
                ex = clamp(x + rng.uniform(3, 12), 0, PITCH_X)
                ey = clamp(y + rng.uniform(-6, 6), 0, PITCH_Y)
                self.add("Carry", team, carrier, (x, y), carry={"end_location": [round(ex, 1), round(ey, 1)]})
                x, y = ex, ey
                continue
            if roll < 0.2 and x > 60:
                ok = rng.random() < 0.55
                self.add("Dribble", team, carrier, (x, y),
                         dribble={"outcome": {"name": "Complete" if ok else "Incomplete"}})
                if not ok:
                    self.tick()
                    tackler = self.pick_player(opp, PITCH_X - x)
                    self.add("Duel", opp, tackler, (PITCH_X - x, PITCH_Y - y),
                             duel={"type": {"name": "Tackle"}, "outcome": {"name": "Won"}})
                    return opp, (PITCH_X - x, PITCH_Y - y)
                x = clamp(x + rng.uniform(2, 6), 0, PITCH_X)
                continue
            if x > 95 and rng.random() < 0.45:
                return self.shot(team, opp, carrier, x, y)
            # pass
            length = rng.uniform(6, 28)
            ex = clamp(x + rng.uniform(-0.3, 0.9) * length, 1, PITCH_X - 1)
            ey = clamp(y + rng.uniform(-0.7, 0.7) * length, 1, PITCH_Y - 1)
            recipient = self.pick_player(team, ex, exclude=carrier)
            ok = rng.random() < 0.8
            cross = ex > 100 and (ey < 18 or ey > 62) and rng.random() < 0.4
            pass_obj = {
                "end_location": [round(ex, 1), round(ey, 1)],
                "body_part": {"name": rng.choice(["Right Foot", "Right Foot", "Left Foot", "Head"])},
                "length": round(length, 2),
            }
            if cross:
                pass_obj["cross"] = True
            if ok:
                pass_obj["recipient"] = {"id": recipient, "name": f"Player {recipient}"}
            else:
                pass_obj["outcome"] = {"name": "Incomplete"}
            self.add("Pass", team, carrier, (x, y), **{"pass": pass_obj})
            if ok:
                self.tick(0.5, 1.5)
                self.add("Ball Receipt*", team, recipient, (ex, ey))
                if rng.random() < 0.3:
                    self.add("Pressure", opp, self.pick_player(opp, PITCH_X - ex), (PITCH_X - ex, PITCH_Y - ey))
                carrier, x, y = recipient, ex, ey
                continue
            # lost the ball
            self.tick()
            ox, oy = PITCH_X - ex, PITCH_Y - ey
            winner = self.pick_player(opp, ox)
            if ox < 25 and rng.random() < 0.5:
                self.add("Clearance", opp, winner, (ox, oy),
                         clearance={"body_part": {"name": rng.choice(["Head", "Right Foot"])}})
                return team, (clamp(ex - 25, 30, 80), rng.uniform(10, 70))
            self.add("Interception", opp, winner, (ox, oy), interception={"outcome": {"name": "Won"}})
            return opp, (ox, oy)
        # possession fizzles out: opponent recovers
        self.tick()
        ox, oy = PITCH_X - x, PITCH_Y - y
        self.add("Ball Recovery", opp, self.pick_player(opp, ox), (ox, oy))
        return opp, (ox, oy)

    def shot(self, team, opp, shooter, x, y):
        rng = self.rng
        goal = rng.random() < 0.25
        outcome = "Goal" if goal else rng.choice(["Saved", "Off T", "Blocked"])
        ey = clamp(40 + rng.uniform(-5, 5), 0, PITCH_Y)
        self.add("Shot", team, shooter, (x, y), shot={
            "end_location": [120.0, round(ey, 1), round(rng.uniform(0, 2.4), 1)],
            "outcome": {"name": outcome},
            "body_part": {"name": rng.choice(["Right Foot", "Left Foot", "Head"])},
            "type": {"name": "Open Play"},
        })
        self.tick()
        keeper = player_id(opp, 0)
        if outcome == "Saved":
            self.add("Goal Keeper", opp, keeper, (2.0, PITCH_Y - ey),
                     goalkeeper={"type": {"name": "Shot Saved"}, "end_location": [4.0, round(PITCH_Y - ey, 1)]})
            return opp, (8.0, PITCH_Y - ey)
        if goal:
            return opp, (60.0, 40.0)  # kick-off
        return opp, (6.0, rng.uniform(30, 50))  # goal kick position

    def play(self, n_possessions):
        team = self.teams[0]
        start = (60.0, 40.0)
        # lineups and half markers are off-ball rows the parser must drop
        for t in self.teams:
            self.add("Starting XI", t, None)
        self.add("Half Start", self.teams[0], None)
        for i in range(n_possessions):
            if i == n_possessions // 2:
                self.period = 2
                self.clock = 0.0
                self.add("Half End", self.teams[0], None)
                self.add("Half Start", self.teams[1], None)
                team, start = self.teams[1], (60.0, 40.0)
            team, start = self.possession(team, start)
        # one on-ball row without a location, dropped by the parser
        self.add("Miscontrol", team, player_id(team, 6))
        self.add("Half End", self.teams[1], None)


def write_events(path, events):
    with open(path, "w") as f:
        f.write("[\n")
        for i, ev in enumerate(events):
            f.write(json.dumps(ev, separators=(",", ":")))
            f.write(",\n" if i + 1 < len(events) else "\n")
        f.write("]\n")


def write_players(path, rng):
    cols = ["player_id", "name", "team_id", "position", "goals", "successful_dribbles", "tackles",
            "accurate_pass_pct", "rating", "goal_conversion_pct", "interceptions", "clearances",
            "accurate_passes", "key_passes", "minutes_played"]
    rows = []
    for team in sorted(TEAMS):
        for slot, pos in enumerate(POSITIONS):
            pid = player_id(team, slot)
            if team == 3 and slot == 10:
                continue  # no season stats: exercises population-mean imputation
            attack = {"GK": 0.0, "DF": 0.2, "MF": 0.6, "FW": 1.0}[pos]
            minutes = rng.randint(900, 3420)
            games = minutes / 90
            goals = round(attack * rng.uniform(0, 0.5) * games)
            shots = max(goals, round(goals * rng.uniform(2.5, 6)))
            rows.append({
                "player_id": pid,
                "name": f"{rng.choice(FIRST)} {rng.choice(LAST)}",
                "team_id": team,
                "position": pos,
                "goals": goals,
                "successful_dribbles": round(attack * rng.uniform(0.2, 2.0) * games),
                "tackles": round((1.2 - attack) * rng.uniform(0.5, 2.5) * games),
                "accurate_pass_pct": round(rng.uniform(0.62, 0.91), 3),
                "rating": round(rng.uniform(6.2, 7.6), 2),
                "goal_conversion_pct": round(goals / shots, 3) if shots else 0.0,
                "interceptions": round((1.2 - attack) * rng.uniform(0.3, 2.0) * games),
                "clearances": round((1.0 - attack) * rng.uniform(0.5, 4.0) * games),
                "accurate_passes": round(rng.uniform(15, 55) * games),
                "key_passes": round(attack * rng.uniform(0.3, 2.0) * games),
                "minutes_played": minutes,
            })
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "fixture"))
    ap.add_argument("--seed", type=int, default=2015)
    ap.add_argument("--possessions", type=int, default=50)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    (out / "events").mkdir(parents=True, exist_ok=True)
    for match_id, home, away in MATCHES:
        m = Match(rng, match_id, home, away)
        m.play(args.possessions)
        write_events(out / "events" / f"{match_id}.json", m.events)
    write_players(out / "players.csv", rng)


if __name__ == "__main__":
    main()
