#!/usr/bin/env python3
"""Independent recount of data/fixtures/*.

Re-derives, with plain CSV splitting and numpy only, the quantities the C++
test suites assert about the shipped fixtures: match-row counts, cumulative
points series, final tables under the (points, goal diff, goals for, name)
tie-break, conservation totals, per-degree prediction errors and standing
distances. Run it to refresh the frozen constants quoted in tests/.
"""

import sys
from pathlib import Path

import numpy as np

FIXTURES = [("1314", "D1"), ("1213", "E0"), ("1415", "I1")]


def load(path):
    raw = path.read_bytes().decode("ascii")
    lines = [ln for ln in raw.replace("\r\n", "\n").split("\n") if ln.strip()]
    head = lines[0].split(",")
    idx = {c: head.index(c) for c in ("Div", "Date", "HomeTeam", "AwayTeam", "FTHG", "FTAG", "FTR")}
    rows = []
    for ln in lines[1:]:
        f = ln.split(",")
        d, m, y = f[idx["Date"]].split("/")
        y = int(y)
        if y < 100:
            y += 1900 if y >= 70 else 2000
        key = (y, int(m), int(d))
        rows.append((key, f[idx["HomeTeam"]], f[idx["AwayTeam"]],
                     int(f[idx["FTHG"]]), int(f[idx["FTAG"]])))
    rows.sort(key=lambda r: r[0])  # python sort is stable: file order preserved on ties
    return rows


def series(rows):
    teams = {}
    for (_, h, a, hg, ag) in rows:
        for t in (h, a):
            teams.setdefault(t, {"pts": [], "gd": [], "gf": []})
        hp = 3 if hg > ag else (1 if hg == ag else 0)
        ap = 3 if ag > hg else (1 if hg == ag else 0)
        for t, p, gf, ga in ((h, hp, hg, ag), (a, ap, ag, hg)):
            s = teams[t]
            s["pts"].append((s["pts"][-1] if s["pts"] else 0) + p)
            s["gd"].append((s["gd"][-1] if s["gd"] else 0) + gf - ga)
            s["gf"].append((s["gf"][-1] if s["gf"] else 0) + gf)
    return teams

def final_table(teams):
    rows = [(t, s["pts"][-1], s["gd"][-1], s["gf"][-1]) for t, s in teams.items()]
    rows.sort(key=lambda r: (-r[1], -r[2], -r[3], r[0]))
    return rows


def ols_predict(pts, n, ts, deg):
    k = n - ts
    c = np.polyfit(np.arange(1, k + 1, dtype=float), np.asarray(pts[:k], dtype=float), deg)
    return float(np.polyval(c, n))


def standing_distance(actual_order, predicted_order):
    rank_a = {t: i + 1 for i, t in enumerate(actual_order)}
    rank_p = {t: i + 1 for i, t in enumerate(predicted_order)}
    D = sum(abs(rank_a[t] - rank_p[t]) for t in rank_a)
    m = len(actual_order)
    return D, D / (m * m // 2)


def predicted_final_order(teams, ts, deg):
    scored = []
    for t, s in teams.items():
        n = len(s["pts"])
        raw = ols_predict(s["pts"], n, ts, deg)
        k = n - ts
        scored.append((t, raw, s["pts"][k - 1], s["gd"][k - 1]))
    scored.sort(key=lambda r: (-r[1], -r[2], -r[3], r[0]))
    return [t for (t, _, _, _) in scored]


def main():
    root = Path(__file__).resolve().parent.parent / "data" / "fixtures"
    all_teams = {}
    for season, div in FIXTURES:
        rows = load(root / season / f"{div}.csv")
        teams = series(rows)
        all_teams[(season, div)] = teams
        tbl = final_table(teams)
        wins = sum(1 for (_, h, a, hg, ag) in rows if hg != ag)
        draws = len(rows) - wins
        total_pts = sum(r[1] for r in tbl)
        print(f"== {div}/{season}: {len(rows)} rows, teams={len(teams)}, "
              f"W={wins} D={draws}, sum_pts={total_pts} (3W+2D={3*wins+2*draws})")
        for pos, (t, p, gd, gf) in enumerate(tbl, 1):
            print(f"   {pos:2d} {t:15s} {p:3d}  gd={gd:+d} gf={gf}")

    # D1/1314 detail used by unit tests
    d1 = all_teams[("1314", "D1")]
    champ = final_table(d1)[0][0]
    print(f"D1 champion: {champ}, T34={d1[champ]['pts'][-1]}")
    print("Schalke 04 points series:", d1["Schalke 04"]["pts"])
    sch = d1["Schalke 04"]["pts"]
    raw = ols_predict(sch, 34, 10, 1)
    print(f"Schalke ts=10 deg1: raw={raw!r} floor={int(np.floor(raw))} actual={sch[-1]}")

    # distances of linear prediction vs actual final standing, per fixture
    for season, div in FIXTURES:
        teams = all_teams[(season, div)]
        actual = [t for (t, _, _, _) in final_table(teams)]
        ds = []
        for ts in range(1, 8):
            pred = predicted_final_order(teams, ts, 1)
            D, d = standing_distance(actual, pred)
            ds.append((ts, D, round(d, 6)))
        print(f"{div}/{season} linear d by ts:", ds)
        print("   perfect (d=0) count ts 1..7:", sum(1 for (_, D, _) in ds if D == 0))

    # degree ordering across the three fixtures (mean abs err per ts per degree)
    print("\nmean |pred-actual| by ts, degree (pooled over all fixture teams):")
    from scipy import stats as st
    for ts in range(1, 21):
        errs = {1: [], 2: [], 3: []}
        for teams in all_teams.values():
            for t, s in teams.items():
                n = len(s["pts"])
                for deg in (1, 2, 3):
                    pred = int(np.floor(ols_predict(s["pts"], n, ts, deg)))
                    errs[deg].append(abs(pred - s["pts"][-1]))
        m1, m2, m3 = (np.mean(errs[d]) for d in (1, 2, 3))
        flag = "" if m1 <= m2 <= m3 else "   <-- ORDER VIOLATION"
        print(f"  ts={ts:2d}  lin={m1:7.3f}  quad={m2:7.3f}  cub={m3:7.3f}{flag}")
    # pooled paired one-sided t-tests over all (series, ts) cells
    pool = {1: [], 2: [], 3: []}
    for ts in range(1, 21):
        for teams in all_teams.values():
            for t, s in teams.items():
                n = len(s["pts"])
                for deg in (1, 2, 3):
                    pred = int(np.floor(ols_predict(s["pts"], n, ts, deg)))
                    pool[deg].append(abs(pred - s["pts"][-1]))
    for (x, y) in ((1, 2), (2, 3), (1, 3)):
        t, p = st.ttest_rel(pool[x], pool[y], alternative="less")
        print(f"paired t (deg{x} < deg{y}): t={t:.4f} p={p:.3e}")


if __name__ == "__main__":
    main()
