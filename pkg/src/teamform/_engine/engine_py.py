"""Pure-Python annealing kernel.

This module and the compiled twin (_speedups.pyx) implement the same frozen
execution protocol: one xoshiro256** stream seeded via splitmix64, a fixed
draw order for neighborhood sampling, and fixed floating-point evaluation
order for all objective arithmetic.  Given identical inputs the two backends
produce bit-identical outputs, so tests and benchmarks may compare them
directly.  Any change here must be mirrored in the .pyx file.

The kernel runs the full multi-stage annealing loop (or hill climbing) over
0-based packed arrays; the public API in teamform.anneal does the packing.
"""

from __future__ import annotations

import math
import time

MASK = 0xFFFFFFFFFFFFFFFF

BACKEND_NAME = "python"


class EngineError(RuntimeError):
    """Internal consistency check failed (incremental sums drifted)."""


def _seed_state(seed: int) -> list[int]:
    s = []
    x = seed & MASK
    for _ in range(4):
        x = (x + 0x9E3779B97F4A7C15) & MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        s.append(z ^ (z >> 31))
    if not any(s):
        s[0] = 1
    return s


def run_kernel(
    n: int,
    m: int,
    K: int,
    l: int,
    adj_indptr,
    adj_nbr,
    adj_w,
    skills,
    costs,
    reqs,
    budgets,
    init_teams,
    mode: int,
    alpha: float,
    beta: float,
    t0: float,
    runs: int,
    levels: int,
    sweeps_per_level: int,
    time_budget: float,
    smoothing_on: bool,
    retry_cap: int,
    seed: int,
    check_every: int,
) -> dict:
    """Execute the annealing (mode 0) or hill-climbing (mode 1) loop.

    Iteration mode when time_budget <= 0 (sweeps_per_level sweeps per level,
    runs x levels levels); otherwise wall-clock mode with time_budget split
    as budget/runs per run and budget/(runs*levels) per level.
    """
    adj_indptr = list(adj_indptr)
    adj_nbr = list(adj_nbr)
    adj_w = list(adj_w)
    skills = list(skills)
    costs = list(costs)
    reqs = list(reqs)
    budgets = list(budgets)

    # Per-node weight maps for O(1) pair lookups.
    wmap: list[dict[int, float]] = [dict() for _ in range(n)]
    for u in range(n):
        for idx in range(adj_indptr[u], adj_indptr[u + 1]):
            wmap[u][adj_nbr[idx]] = adj_w[idx]

    hop_rows: list[list[int] | None] = [None] * n

    def hop_row(u: int) -> list[int]:
        row = hop_rows[u]
        if row is None:
            row = [-1] * n
            row[u] = 0
            queue = [u]
            head = 0
            while head < len(queue):
                x = queue[head]
                head += 1
                dx = row[x] + 1
                for idx in range(adj_indptr[x], adj_indptr[x + 1]):
                    y = adj_nbr[idx]
                    if row[y] < 0:
                        row[y] = dx
                        queue.append(y)
            hop_rows[u] = row
        return row

    # RNG (xoshiro256**), inlined for speed.
    s0, s1, s2, s3 = _seed_state(seed)

    def next_u64() -> int:
        nonlocal s0, s1, s2, s3
        r = (s1 * 5) & MASK
        r = ((r << 7) | (r >> 57)) & MASK
        r = (r * 9) & MASK
        t = (s1 << 17) & MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK
        return r

    def next_double() -> float:
        return (next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def next_below(bound: int) -> int:
        threshold = ((1 << 64) - bound) % bound
        x = next_u64()
        while x < threshold:
            x = next_u64()
        return x % bound

    # Mutable team state.
    team = [list(t) for t in init_teams]
    team_of = [-1] * n
    for j in range(m):
        for wid in team[j]:
            team_of[wid] = j
    free = [wid for wid in range(n) if team_of[wid] < 0]
    free_pos = [-1] * n
    for pos, wid in enumerate(free):
        free_pos[wid] = pos

    team_cost = [0] * m
    team_skill = [[0] * l for _ in range(m)]
    raw_sum = [0.0] * m
    smooth_sum = [0.0] * m
    for j in range(m):
        cost = 0
        sk = team_skill[j]
        for wid in team[j]:
            cost += costs[wid]
            base = wid * l
            for kk in range(l):
                sk[kk] += skills[base + kk]
        team_cost[j] = cost

    def scratch_raw(j: int) -> float:
        members = team[j]
        size = len(members)
        total = 0.0
        for a in range(size):
            wa = wmap[members[a]]
            for b in range(a + 1, size):
                total += wa.get(members[b], 0.0)
        return total

    def scratch_smooth(j: int, coeff: float) -> float:
        members = team[j]
        size = len(members)
        total = 0.0
        for a in range(size):
            ua = members[a]
            wa = wmap[ua]
            row = hop_row(ua)
            for b in range(a + 1, size):
                vb = members[b]
                e = wa.get(vb, 0.0)
                if e > 0.0:
                    total += e
                else:
                    p = row[vb]
                    if p > 0:
                        total += coeff / p
        return total

    for j in range(m):
        raw_sum[j] = scratch_raw(j)

    best_team = [list(t) for t in team]
    best_total = 0.0
    for j in range(m):
        size = len(team[j])
        best_total += raw_sum[j] / size if size > 0 else 0.0

    trace_run: list[int] = []
    trace_level: list[int] = []
    trace_temp: list[float] = []
    trace_best: list[float] = []
    trace_acc: list[int] = []
    trace_rej: list[int] = []
    run_seconds: list[float] = []
    sweeps_done = 0

    time_mode = time_budget > 0.0
    run_limit = time_budget / runs if time_mode else 0.0
    level_limit = time_budget / (runs * levels) if time_mode else 0.0

    # Per-level accept/reject counters live in the sweep closure.
    counters = [0, 0]

    # Candidate slots: kind, new size, objective sums, removal positions,
    # and added worker ids.
    cand_kind = [0, 0, 0]
    cand_size = [0, 0, 0]
    cand_raw = [0.0, 0.0, 0.0]
    cand_smooth = [0.0, 0.0, 0.0]
    cand_p1 = [0, 0, 0]  # removed member positions
    cand_p2 = [-1, -1, -1]
    cand_a1 = [-1, -1, -1]  # added worker ids
    cand_a2 = [-1, -1, -1]

    def sweep(coeff: float, active: bool, T: float) -> None:
        nonlocal best_total, sweeps_done
        for j in range(m):
            members = team[j]
            size = len(members)
            free_n = len(free)
            n_cand = 0
            # N1: swap one member for one free worker.
            if size >= 1 and free_n >= 1:
                got = _try_kind(j, 1, size, free_n, coeff, active, n_cand)
                if got:
                    n_cand += 1
            # N2: drop two members, add one free worker.
            if size >= 2 and free_n >= 1:
                got = _try_kind(j, 2, size, free_n, coeff, active, n_cand)
                if got:
                    n_cand += 1
            # N3: drop one member, add two free workers (size must stay <= K).
            if size >= 1 and free_n >= 2 and size + 1 <= K:
                got = _try_kind(j, 3, size, free_n, coeff, active, n_cand)
                if got:
                    n_cand += 1
            if n_cand == 0:
                continue
            pick = next_below(n_cand)
            new_size = cand_size[pick]
            raw_new = cand_raw[pick]
            smooth_new = cand_smooth[pick]
            if mode == 1:
                accept = raw_new / new_size > raw_sum[j] / size
            else:
                f_old = smooth_sum[j] / size
                f_new = smooth_new / new_size
                d = f_new - f_old
                u = next_double()
                accept = d >= 0.0 or u < math.exp(d / T)
            if accept:
                _apply(j, pick, raw_new, smooth_new)
                counters[0] += 1
            else:
                counters[1] += 1
        total = 0.0
        for j in range(m):
            size = len(team[j])
            total += raw_sum[j] / size if size > 0 else 0.0
        if total > best_total:
            best_total = total
            for j in range(m):
                best_team[j][:] = team[j]
        sweeps_done += 1

    def _try_kind(j: int, kind: int, size: int, free_n: int, coeff: float, active: bool, slot: int) -> bool:
        members = team[j]
        budget = budgets[j]
        base_cost = team_cost[j]
        sk = team_skill[j]
        req_base = j * l
        for _ in range(retry_cap):
            if kind == 1:
                p1 = next_below(size)
                p2 = -1
                a1 = free[next_below(free_n)]
                a2 = -1
                new_size = size
            elif kind == 2:
                p1 = next_below(size)
                q = next_below(size - 1)
                p2 = q + 1 if q >= p1 else q
                a1 = free[next_below(free_n)]
                a2 = -1
                new_size = size - 1
            else:
                p1 = next_below(size)
                p2 = -1
                fa = next_below(free_n)
                fb = next_below(free_n - 1)
                if fb >= fa:
                    fb += 1
                a1 = free[fa]
                a2 = free[fb]
                new_size = size + 1
            x1 = members[p1]
            x2 = members[p2] if p2 >= 0 else -1
            # Constraint screen: skills then budget (team size is structural).
            ok = True
            b1 = x1 * l
            b2 = x2 * l if x2 >= 0 else 0
            ba1 = a1 * l
            ba2 = a2 * l if a2 >= 0 else 0
            for kk in range(l):
                level = sk[kk] - skills[b1 + kk]
                if x2 >= 0:
                    level -= skills[b2 + kk]
                level += skills[ba1 + kk]
                if a2 >= 0:
                    level += skills[ba2 + kk]
                if level < reqs[req_base + kk]:
                    ok = False
                    break
            if ok:
                new_cost = base_cost - costs[x1] + costs[a1]
                if x2 >= 0:
                    new_cost -= costs[x2]
                if a2 >= 0:
                    new_cost += costs[a2]
                if new_cost > budget:
                    ok = False
            if not ok:
                continue
            # Objective deltas, evaluated in frozen order.
            raw_new = raw_sum[j]
            smooth_new = smooth_sum[j]
            if kind == 1:
                out_r, out_s = _pair_sums(x1, members, p1, -1, coeff, active)
                in_r, in_s = _pair_sums(a1, members, p1, -1, coeff, active)
                raw_new = raw_new - out_r + in_r
                if active:
                    smooth_new = smooth_new - out_s + in_s
                else:
                    smooth_new = raw_new
            elif kind == 2:
                out1_r, out1_s = _pair_sums(x1, members, p1, -1, coeff, active)
                out2_r, out2_s = _pair_sums(x2, members, p1, p2, coeff, active)
                in_r, in_s = _pair_sums(a1, members, p1, p2, coeff, active)
                raw_new = raw_new - out1_r - out2_r + in_r
                if active:
                    smooth_new = smooth_new - out1_s - out2_s + in_s
                else:
                    smooth_new = raw_new
            else:
                out_r, out_s = _pair_sums(x1, members, p1, -1, coeff, active)
                in1_r, in1_s = _pair_sums(a1, members, p1, -1, coeff, active)
                in2_r, in2_s = _pair_sums(a2, members, p1, -1, coeff, active)
                e = wmap[a1].get(a2, 0.0)
                in2_r += e
                if active:
                    if e > 0.0:
                        in2_s += e
                    else:
                        p = hop_row(a1)[a2]
                        if p > 0:
                            in2_s += coeff / p
                raw_new = raw_new - out_r + in1_r + in2_r
                if active:
                    smooth_new = smooth_new - out_s + in1_s + in2_s
                else:
                    smooth_new = raw_new
            cand_kind[slot] = kind
            cand_size[slot] = new_size
            cand_raw[slot] = raw_new
            cand_smooth[slot] = smooth_new
            cand_p1[slot] = p1
            cand_p2[slot] = p2
            cand_a1[slot] = a1
            cand_a2[slot] = a2
            return True
        return False

    def _pair_sums(u: int, members: list[int], skip1: int, skip2: int, coeff: float, active: bool) -> tuple[float, float]:
        wa = wmap[u]
        raw = 0.0
        if not active:
            for pos in range(len(members)):
                if pos == skip1 or pos == skip2:
                    continue
                raw += wa.get(members[pos], 0.0)
            return raw, raw
        smooth = 0.0
        row = hop_row(u)
        for pos in range(len(members)):
            if pos == skip1 or pos == skip2:
                continue
            v = members[pos]
            e = wa.get(v, 0.0)
            raw += e
            if e > 0.0:
                smooth += e
            else:
                p = row[v]
                if p > 0:
                    smooth += coeff / p
        return raw, smooth

    def _remove_from_team(j: int, pos: int) -> None:
        members = team[j]
        wid = members[pos]
        last = members.pop()
        if pos < len(members):
            members[pos] = last
        team_of[wid] = -1
        free_pos[wid] = len(free)
        free.append(wid)
        team_cost[j] -= costs[wid]
        sk = team_skill[j]
        base = wid * l
        for kk in range(l):
            sk[kk] -= skills[base + kk]

    def _remove_from_free(wid: int) -> None:
        pos = free_pos[wid]
        last = free.pop()
        if pos < len(free):
            free[pos] = last
            free_pos[last] = pos
        free_pos[wid] = -1

    def _add_to_team(j: int, wid: int) -> None:
        _remove_from_free(wid)
        team[j].append(wid)
        team_of[wid] = j
        team_cost[j] += costs[wid]
        sk = team_skill[j]
        base = wid * l
        for kk in range(l):
            sk[kk] += skills[base + kk]

    def _apply(j: int, slot: int, raw_new: float, smooth_new: float) -> None:
        p1 = cand_p1[slot]
        p2 = cand_p2[slot]
        # Remove by descending position so swap-removal keeps indices valid.
        if p2 >= 0:
            if p1 < p2:
                _remove_from_team(j, p2)
                _remove_from_team(j, p1)
            else:
                _remove_from_team(j, p1)
                _remove_from_team(j, p2)
        else:
            _remove_from_team(j, p1)
        _add_to_team(j, cand_a1[slot])
        if cand_a2[slot] >= 0:
            _add_to_team(j, cand_a2[slot])
        raw_sum[j] = raw_new
        smooth_sum[j] = smooth_new

    def _consistency_check(coeff: float, active: bool) -> None:
        for j in range(m):
            ref = scratch_raw(j)
            if abs(raw_sum[j] - ref) > 1e-9 * max(1.0, abs(ref)):
                raise EngineError(f"raw sum drift on team {j}: {raw_sum[j]} vs {ref}")
            ref_s = scratch_smooth(j, coeff) if active else ref
            if abs(smooth_sum[j] - ref_s) > 1e-9 * max(1.0, abs(ref_s)):
                raise EngineError(f"smooth sum drift on team {j}: {smooth_sum[j]} vs {ref_s}")

    level_counter = 0
    for run in range(runs):
        run_start = time.monotonic()
        stage = runs - 1 - run
        coeff = beta * (stage / 5.0)
        active = mode == 0 and smoothing_on and beta != 0.0 and stage != 0
        for j in range(m):
            smooth_sum[j] = scratch_smooth(j, coeff) if active else raw_sum[j]
        T = t0
        if time_mode:
            level = 0
            while True:
                level_start = time.monotonic()
                acc0, rej0 = counters
                while True:
                    sweep(coeff, active, T)
                    if time.monotonic() - level_start >= level_limit:
                        break
                trace_run.append(run)
                trace_level.append(level)
                trace_temp.append(0.0 if mode == 1 else T)
                trace_best.append(best_total)
                trace_acc.append(counters[0] - acc0)
                trace_rej.append(counters[1] - rej0)
                if mode == 0:
                    T = alpha * T
                level += 1
                level_counter += 1
                if check_every > 0 and level_counter % check_every == 0:
                    _consistency_check(coeff, active)
                if time.monotonic() - run_start >= run_limit:
                    break
        elif sweeps_per_level > 0:
            for level in range(levels):
                acc0, rej0 = counters
                for _ in range(sweeps_per_level):
                    sweep(coeff, active, T)
                trace_run.append(run)
                trace_level.append(level)
                trace_temp.append(0.0 if mode == 1 else T)
                trace_best.append(best_total)
                trace_acc.append(counters[0] - acc0)
                trace_rej.append(counters[1] - rej0)
                if mode == 0:
                    T = alpha * T
                level_counter += 1
                if check_every > 0 and level_counter % check_every == 0:
                    _consistency_check(coeff, active)
        run_seconds.append(time.monotonic() - run_start)

    return {
        "best_teams": [sorted(t) for t in best_team],
        "best_total": best_total,
        "final_teams": [sorted(t) for t in team],
        "trace_run": trace_run,
        "trace_level": trace_level,
        "trace_temp": trace_temp,
        "trace_best": trace_best,
        "trace_acc": trace_acc,
        "trace_rej": trace_rej,
        "run_seconds": run_seconds,
        "sweeps": sweeps_done,
        "accepts": counters[0],
        "rejects": counters[1],
    }
