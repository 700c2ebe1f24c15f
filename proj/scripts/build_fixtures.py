#!/usr/bin/env python3
"""Regenerate the sample season CSVs under data/fixtures/.

The fixtures are synthetic seasons in the Football-Data CSV layout
(Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR,HTHG,HTAG,HTR, CRLF line
endings). Each season is built so that every team's final points total --
and the final table order under the points/goal-difference/goals-for
tie-break -- matches the published end-of-season table listed below.
Individual scorelines, dates and win/draw splits are generated, not
historical. The committed CSVs are canonical; this script is kept so the
construction is reproducible (fixed RNG seed).

Usage: python3 scripts/build_fixtures.py [out_dir]
"""

import random
import sys
from collections import deque
from datetime import date, timedelta
from pathlib import Path

# Published final tables: (team, points) in final order, top first.
SEASONS = {
    ("D1", "1314"): {
        "start": date(2013, 8, 10),
        "winter_break_after": 17,
        "break_weeks": 4,
        "year_digits": 2,
        "table": [
            ("Bayern Munich", 90), ("Dortmund", 71), ("Schalke 04", 64),
            ("Leverkusen", 61), ("Wolfsburg", 60), ("M'gladbach", 55),
            ("Mainz", 53), ("Augsburg", 52), ("Hoffenheim", 44),
            ("Hannover", 42), ("Hertha", 41), ("Werder Bremen", 39),
            ("Ein Frankfurt", 36), ("Freiburg", 36), ("Stuttgart", 32),
            ("Hamburg", 27), ("Nurnberg", 26), ("Braunschweig", 25),
        ],
    },
    ("E0", "1213"): {
        "start": date(2012, 8, 18),
        "winter_break_after": 0,
        "break_weeks": 0,
        "year_digits": 2,
        "table": [
            ("Man United", 89), ("Man City", 78), ("Chelsea", 75),
            ("Arsenal", 73), ("Tottenham", 72), ("Everton", 63),
            ("Liverpool", 61), ("West Brom", 49), ("Swansea", 46),
            ("West Ham", 46), ("Norwich", 44), ("Fulham", 43),
            ("Stoke", 42), ("Southampton", 41), ("Aston Villa", 41),
            ("Newcastle", 41), ("Sunderland", 39), ("Wigan", 36),
            ("Reading", 28), ("QPR", 25),
        ],
    },
    ("I1", "1415"): {
        "start": date(2014, 8, 30),
        "winter_break_after": 17,
        "break_weeks": 2,
        "year_digits": 4,
        "table": [
            ("Juventus", 87), ("Roma", 70), ("Lazio", 69),
            ("Fiorentina", 64), ("Napoli", 63), ("Genoa", 59),
            ("Sampdoria", 56), ("Inter", 55), ("Torino", 54),
            ("Milan", 52), ("Palermo", 49), ("Sassuolo", 49),
            ("Verona", 46), ("Chievo", 43), ("Empoli", 42),
            ("Udinese", 41), ("Atalanta", 37), ("Cagliari", 34),
            ("Cesena", 24), ("Parma", 19),
        ],
    },
}


def round_robin_schedule(m):
    """Circle-method double round robin. Returns list of matchdays,
    each a list of (home, away) index pairs."""
    teams = list(range(m))
    half = []
    for r in range(m - 1):
        rot = [teams[0]] + teams[1 + r:] + teams[1:1 + r] if r else teams[:]
        # standard rotation: fix teams[0], rotate the rest
        rest = teams[1:]
        rot = [teams[0]] + rest[r:] + rest[:r]
        day = []
        for k in range(m // 2):
            a, b = rot[k], rot[m - 1 - k]
            if k == 0 and r % 2 == 1:
                a, b = b, a
            elif k > 0 and k % 2 == 0:
                a, b = b, a
            day.append((a, b))
        half.append(day)
    second = [[(b, a) for (a, b) in day] for day in half]
    return half + second


def split_points(points, matches, total_draw_degree, rng):
    """Pick per-team (wins, draws, losses) with 3w+d = points, w+d+l = matches,
    and sum(d) == total_draw_degree. Returns list of (w, d)."""
    base = [p % 3 for p in points]
    need = total_draw_degree - sum(base)
    assert need >= 0 and need % 3 == 0
    bumps = need // 3
    d = base[:]
    order = list(range(len(points)))
    # Distribute draw bumps, midtable-heavy, respecting w,l >= 0.
    weights = [1.0 + 1.5 * min(i, len(points) - 1 - i) for i in order]
    for _ in range(bumps):
        while True:
            t = rng.choices(order, weights=weights, k=1)[0]
            nd = d[t] + 3
            w = (points[t] - nd) // 3
            if w >= 0 and w + nd <= matches:
                d[t] = nd
                break
    return [((points[t] - d[t]) // 3, d[t]) for t in range(len(points))]


def realize_draw_graph(degrees, rng, max_mult=2):
    """Multigraph with the given draw degrees, edge multiplicity <= max_mult."""
    m = len(degrees)
    for _ in range(4000):
        rem = degrees[:]
        used = {}
        ok = True
        while sum(rem) > 0:
            t = max(range(m), key=lambda i: rem[i])
            cands = [j for j in range(m)
                     if j != t and rem[j] > 0 and used.get((min(t, j), max(t, j)), 0) < max_mult]
            if not cands:
                ok = False
                break
            cands.sort(key=lambda j: -rem[j])
            pool = cands[:max(3, len(cands) // 2)]
            j = rng.choice(pool)
            key = (min(t, j), max(t, j))
            used[key] = used.get(key, 0) + 1
            rem[t] -= 1
            rem[j] -= 1
        if ok:
            return used
    raise RuntimeError("draw graph realization failed")


def orient_wins(legs, wins, m):
    """Max-flow assignment: each leg gets exactly one winner, team t wins
    exactly wins[t] legs. Returns dict leg_index -> winner team."""
    # nodes: 0 source, 1..m teams, m+1..m+len(legs) legs, sink last
    nl = len(legs)
    sink = m + nl + 1
    cap = {}

    def add(u, v, c):
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)

    for t in range(m):
        add(0, 1 + t, wins[t])
    for e, (a, b) in enumerate(legs):
        add(1 + a, m + 1 + e, 1)
        add(1 + b, m + 1 + e, 1)
        add(m + 1 + e, sink, 1)
    adj = {}
    for (u, v) in cap:
        adj.setdefault(u, []).append(v)
    flow = 0
    while True:
        parent = {0: None}
        q = deque([0])
        while q:
            u = q.popleft()
            if u == sink:
                break
            for v in adj.get(u, []):
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    q.append(v)
        if sink not in parent:
            break
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1
    if flow != nl:
        return None
    winner = {}
    for e, (a, b) in enumerate(legs):
        if cap[(1 + a, m + 1 + e)] == 0:
            winner[e] = a
        else:
            winner[e] = b
    return winner


def build_season(division, season_code, cfg, rng):
    table = cfg["table"]
    names = [t for t, _ in table]
    points = [p for _, p in table]
    m = len(names)
    rounds = 2 * (m - 1)
    total_matches = m * rounds // 2
    total_points = sum(points)
    total_wins = total_points - 2 * total_matches
    total_draws = 3 * total_matches - total_points
    assert 0 <= total_draws <= total_matches, "infeasible table"

    schedule = round_robin_schedule(m)
    legs = []          # (home, away)
    leg_day = []
    for day, matches in enumerate(schedule):
        for (h, a) in matches:
            legs.append((h, a))
            leg_day.append(day)
    leg_index = {(h, a): e for e, (h, a) in enumerate(legs)}

    for attempt in range(200):
        wd = split_points(points, rounds, 2 * total_draws, rng)
        draw_edges = realize_draw_graph([d for (_, d) in wd], rng)
        # pick concrete legs for each drawn pairing
        draw_legs = set()
        for (i, j), cnt in draw_edges.items():
            pair_legs = [leg_index[(i, j)], leg_index[(j, i)]]
            rng.shuffle(pair_legs)
            for c in range(cnt):
                draw_legs.add(pair_legs[c])
        decisive = [e for e in range(len(legs)) if e not in draw_legs]
        sub = {e: k for k, e in enumerate(decisive)}
        winner_sub = orient_wins([legs[e] for e in decisive],
                                 [w for (w, _) in wd], m)
        if winner_sub is not None:
            break
    else:
        raise RuntimeError("win orientation failed")
    winner = {e: winner_sub[sub[e]] for e in decisive}

    # sanity: recompute points
    got = [0] * m
    for e in range(len(legs)):
        if e in draw_legs:
            got[legs[e][0]] += 1
            got[legs[e][1]] += 1
        else:
            got[winner[e]] += 3
    assert got == points, (got, points)

    # goals
    strength = [(m - i) / m for i in range(m)]
    fthg = [0] * len(legs)
    ftag = [0] * len(legs)
    for e, (h, a) in enumerate(legs):
        if e in draw_legs:
            g = rng.choices([0, 1, 2, 3], weights=[22, 45, 24, 9], k=1)[0]
            fthg[e] = ftag[e] = g
        else:
            wteam = winner[e]
            lteam = a if wteam == h else h
            edge = strength[names.index(names[wteam])] - strength[names.index(names[lteam])]
            margin = 1 + rng.choices([0, 1, 2, 3], weights=[58 - 30 * edge, 28, 10 + 20 * edge, 4 + 10 * edge], k=1)[0]
            lg = rng.choices([0, 1, 2], weights=[52, 36, 12], k=1)[0]
            wg = min(lg + margin, 6)
            if wteam == h:
                fthg[e], ftag[e] = wg, lg
            else:
                fthg[e], ftag[e] = lg, wg

    # enforce strictly decreasing goal difference within equal-points groups,
    # and (for flavour) generally table-ordered GD.
    def gds():
        g = [0] * m
        for e, (h, a) in enumerate(legs):
            g[h] += fthg[e] - ftag[e]
            g[a] += ftag[e] - fthg[e]
        return g

    groups = []
    i = 0
    while i < m:
        j = i
        while j + 1 < m and points[j + 1] == points[i]:
            j += 1
        if j > i:
            groups.append(list(range(i, j + 1)))
        i = j + 1
    for grp in groups:
        for _ in range(200):
            g = gds()
            fixed = True
            for x, y in zip(grp, grp[1:]):
                if g[x] <= g[y]:
                    fixed = False
                    # bump a win margin of x against a team outside the group
                    cands = [e for e in decisive
                             if winner[e] == x and max(fthg[e], ftag[e]) < 6
                             and (legs[e][0] not in grp or legs[e][0] == x)
                             and (legs[e][1] not in grp or legs[e][1] == x)]
                    e = rng.choice(cands)
                    if legs[e][0] == x:
                        fthg[e] += 1
                    else:
                        ftag[e] += 1
            if fixed:
                break
        else:
            raise RuntimeError("gd repair failed")

    # Sequence the matchdays so every team's running total stays close to its
    # own end-of-season pace, the way real seasons do; unbalanced sequencing
    # produces random-walk-like series instead. Greedy with a small random
    # tie pool so trajectories keep some local noise.
    day_delta = []
    for day in range(rounds):
        delta = [0] * m
        for (h, a) in schedule[day]:
            e = leg_index[(h, a)]
            if e in draw_legs:
                delta[h] += 1
                delta[a] += 1
            elif winner[e] == h:
                delta[h] += 3
            else:
                delta[a] += 3
        day_delta.append(delta)
    pace = [p / rounds for p in points]
    remaining = list(range(rounds))
    order = []
    cum = [0] * m
    for step in range(1, rounds + 1):
        def cost(day):
            return sum((cum[t] + day_delta[day][t] - pace[t] * step) ** 2 for t in range(m))
        remaining.sort(key=cost)
        pick = remaining.pop(rng.randrange(min(3, len(remaining))))
        order.append(pick)
        for t in range(m):
            cum[t] += day_delta[pick][t]
    day_slot = {day: slot for slot, day in enumerate(order)}

    # dates: weekly matchdays, small Fri..Sun scatter, optional winter break
    day0 = cfg["start"]
    break_after = cfg["winter_break_after"]
    break_weeks = cfg["break_weeks"]
    dates = []
    for slot in range(rounds):
        w = slot + (break_weeks if break_after and slot >= break_after else 0)
        dates.append(day0 + timedelta(weeks=w))

    def fmt(d):
        if cfg["year_digits"] == 2:
            return d.strftime("%d/%m/%y")
        return d.strftime("%d/%m/%Y")

    rows = []
    for e, (h, a) in enumerate(legs):
        d = dates[day_slot[leg_day[e]]] + timedelta(days=rng.choices([-1, 0, 1], weights=[15, 70, 15], k=1)[0])
        hg, ag = fthg[e], ftag[e]
        hth = rng.randint(0, hg) if hg else 0
        hta = rng.randint(0, ag) if ag else 0
        htr = "H" if hth > hta else ("A" if hta > hth else "D")
        ftr = "H" if hg > ag else ("A" if ag > hg else "D")
        rows.append((day_slot[leg_day[e]], d, names[h], names[a], hg, ag, ftr, hth, hta, htr))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    out = ["Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR,HTHG,HTAG,HTR"]
    for (_, d, hn, an, hg, ag, ftr, hth, hta, htr) in rows:
        out.append(f"{division},{fmt(d)},{hn},{an},{hg},{ag},{ftr},{hth},{hta},{htr}")
    return "\r\n".join(out) + "\r\n"


def main():
    out_root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "fixtures"
    rng = random.Random(20240214)
    for (division, season_code), cfg in SEASONS.items():
        season_dir = out_root / season_code
        season_dir.mkdir(parents=True, exist_ok=True)
        csv = build_season(division, season_code, cfg, rng)
        path = season_dir / f"{division}.csv"
        path.write_bytes(csv.encode("ascii"))
        print(f"wrote {path} ({csv.count(chr(10)) - 1} match rows)")


if __name__ == "__main__":
    main()
