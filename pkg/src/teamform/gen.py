"""Synthetic instance generation.

Produces problem instances from an 8-parameter recipe: an LFR-style social
network topology (power-law degrees, planted communities, mixing parameter),
integer edge weights in [1,5], Poisson-sampled worker skills and costs, and
task requirements whose across-task means are nudged onto their targets.

All sampling flows through a single numpy Generator, so one seed fully
determines an instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .model import Instance, SocialNetwork, Task, Worker

SKILL_TYPES = 20

# (name, lo, hi) for the seven integer-range parameters; L is categorical.
PARAM_RANGES = (
    ("n", 100, 1000),
    ("m", 1, 10),
    ("K", 1, 50),
    ("k", 5, 30),
    ("m_SN", 2, 10),
    ("m_SL", 5, 45),
    ("b_extra", 0, 500),
)
L_VALUES = (300, 450, 600)


class ConfigError(ValueError):
    """A generator parameter is outside its allowed range."""


class GenerationError(RuntimeError):
    """The graph sampler failed to realize a valid topology."""


@dataclass(frozen=True)
class GenParams:
    """The 8 experiment-level knobs that define one synthetic condition."""

    n: int
    m: int
    K: int
    k: int
    m_SN: int
    m_SL: int
    b_extra: int
    L: int = 300

    def __post_init__(self):
        for name, lo, hi in PARAM_RANGES:
            value = getattr(self, name)
            if not (lo <= value <= hi):
                raise ConfigError(f"{name}={value} outside [{lo},{hi}]")
        if self.L not in L_VALUES:
            raise ConfigError(f"L={self.L} not in {L_VALUES}")

    def as_tuple(self) -> tuple[int, ...]:
        return (self.n, self.m, self.K, self.k, self.m_SN, self.m_SL, self.b_extra, self.L)


@dataclass(frozen=True)
class LfrConfig:
    """Topology knobs the recipe leaves open; defaults are conventional."""

    tau1: float = 2.5
    tau2: float = 1.5
    mu: float = 0.3
    min_community: int = 10
    max_community: int | None = None  # defaults to n // 4
    max_degree: int | None = None  # defaults to min(n - 1, 3k)
    max_retries: int = 8

    def __post_init__(self):
        if not self.tau1 > 1:
            raise ConfigError(f"tau1={self.tau1} must be > 1")
        if not self.tau2 >= 1:
            raise ConfigError(f"tau2={self.tau2} must be >= 1")
        if not (0 < self.mu < 1):
            raise ConfigError(f"mu={self.mu} must be in (0,1)")


@dataclass(frozen=True)
class Topology:
    """An unweighted simple graph: node count plus canonical edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def mean_degree(self) -> float:
        return 2.0 * len(self.edges) / self.n if self.n else 0.0


def _truncated_mass(mean: float, lo: int, hi: int | None) -> float:
    """P(lo <= X <= hi) for X ~ Poisson(mean), computed analytically."""
    if mean == 0.0:
        return 1.0 if lo <= 0 and (hi is None or hi >= 0) else 0.0
    # Below-lo tail is a short sum; above-hi handled via the complement.
    log_mean = math.log(mean)

    def pmf(j: int) -> float:
        return math.exp(-mean + j * log_mean - math.lgamma(j + 1))

    below = sum(pmf(j) for j in range(0, lo))
    if hi is None:
        return max(0.0, 1.0 - below)
    upto = sum(pmf(j) for j in range(0, hi + 1))
    return max(0.0, upto - below)


def truncated_poisson(mean: float, lo: int, hi: int | None, rng: np.random.Generator) -> int:
    """Poisson draw resampled until it lands in [lo, hi].

    Rejection keeps the in-window distribution exactly proportional to the
    Poisson pmf (clamping would pile mass on the bounds).  A window holding
    less than 1e-6 of the mass is a configuration error.
    """
    if mean <= 0:
        raise ConfigError(f"truncated_poisson mean must be > 0, got {mean}")
    if hi is not None and lo > hi:
        raise ConfigError(f"truncated_poisson window [{lo},{hi}] is empty")
    if _truncated_mass(mean, lo, hi) < 1e-6:
        raise ConfigError(
            f"truncated_poisson({mean}) has vanishing mass in [{lo},{hi}]"
        )
    while True:
        x = int(rng.poisson(mean))
        if x >= lo and (hi is None or x <= hi):
            return x


def _nudge_to_mean(
    values: list[int], target: float, lo: int, hi: int | None, rng: np.random.Generator
) -> list[int]:
    """Shift random entries by +-1 until the mean is as close to target as
    integers allow (|sum - target*count| <= 0.5), respecting [lo, hi]."""
    count = len(values)
    if count == 0:
        return values
    out = list(values)
    goal = target * count
    total = sum(out)
    while abs(total - goal) > 0.5:
        if total < goal:
            eligible = [i for i, v in enumerate(out) if hi is None or v < hi]
            step = 1
        else:
            eligible = [i for i, v in enumerate(out) if v > lo]
            step = -1
        if not eligible:
            break
        idx = eligible[int(rng.integers(len(eligible)))]
        out[idx] += step
        total += step
    return out


def _power_law_values(exponent: float, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    vals = np.arange(lo, hi + 1, dtype=np.int64)
    pmf = vals.astype(np.float64) ** (-exponent)
    pmf /= pmf.sum()
    return vals, pmf


def _sample_power_law(
    exponent: float, lo: int, hi: int, size: int, rng: np.random.Generator
) -> np.ndarray:
    vals, pmf = _power_law_values(exponent, lo, hi)
    return rng.choice(vals, size=size, p=pmf)


def _pick_min_degree(exponent: float, target_mean: float, dmax: int) -> int:
    best, best_gap = 1, math.inf
    for dmin in range(1, dmax + 1):
        vals, pmf = _power_law_values(exponent, dmin, dmax)
        gap = abs(float((vals * pmf).sum()) - target_mean)
        if gap < best_gap:
            best, best_gap = dmin, gap
        if float((vals * pmf).sum()) > target_mean:
            break
    return best


def _match_stubs(
    stubs: list[int],
    taken: set[tuple[int, int]],
    same_group_forbidden: list[int] | None,
    rng: np.random.Generator,
    rounds: int = 12,
) -> list[tuple[int, int]]:
    """Randomly pair stubs into edges, retrying conflicted stubs.

    Conflicts are self-loops, duplicates of existing edges, and (for the
    inter-community stage) pairs inside one community.  Stubs still
    conflicted after the retry rounds are dropped, slightly lowering the
    realized degrees.
    """
    edges: list[tuple[int, int]] = []
    pool = list(stubs)
    for _ in range(rounds):
        if len(pool) < 2:
            break
        rng.shuffle(pool)
        leftover: list[int] = []
        for i in range(0, len(pool) - 1, 2):
            u, v = pool[i], pool[i + 1]
            if u == v:
                leftover.extend((u, v))
                continue
            if same_group_forbidden is not None and (
                same_group_forbidden[u - 1] == same_group_forbidden[v - 1]
            ):
                leftover.extend((u, v))
                continue
            key = (u, v) if u < v else (v, u)
            if key in taken:
                leftover.extend((u, v))
                continue
            taken.add(key)
            edges.append(key)
        if len(pool) % 2 == 1:
            leftover.append(pool[-1])
        if not leftover:
            break
        pool = leftover
    return edges


def _lfr_attempt(n: int, k: int, cfg: LfrConfig, rng: np.random.Generator) -> Topology:
    dmax = cfg.max_degree if cfg.max_degree is not None else min(n - 1, 3 * k)
    dmax = max(1, min(dmax, n - 1))
    dmin = _pick_min_degree(cfg.tau1, float(k), dmax)
    degrees = _sample_power_law(cfg.tau1, dmin, dmax, n, rng).tolist()
    degrees = _nudge_to_mean(degrees, float(k), 1, dmax, rng)
    if sum(degrees) % 2 == 1:
        room = [i for i, d in enumerate(degrees) if d < dmax]
        if room:
            degrees[room[int(rng.integers(len(room)))]] += 1
        else:
            degrees[int(rng.integers(n))] -= 1

    cmin = min(cfg.min_community, n)
    cmax = cfg.max_community if cfg.max_community is not None else max(n // 4, cmin)
    cmax = max(cmin, min(cmax, n))
    sizes: list[int] = []
    while sum(sizes) < n:
        sizes.append(int(_sample_power_law(cfg.tau2, cmin, cmax, 1, rng)[0]))
    excess = sum(sizes) - n
    sizes[-1] -= excess
    if sizes[-1] < cmin and len(sizes) > 1:
        need = sizes.pop()
        i = 0
        while need > 0:
            if sizes[i % len(sizes)] < cmax:
                sizes[i % len(sizes)] += 1
                need -= 1
            i += 1
            if i > 10 * len(sizes) * max(1, need):
                sizes.append(need)  # everything at cmax; tolerate a small community
                break

    # Assign nodes to communities, capping internal degree at size - 1.
    internal = [int(math.floor((1.0 - cfg.mu) * d + 0.5)) for d in degrees]
    community_of = [0] * n
    remaining = list(sizes)
    order = sorted(range(n), key=lambda i: (-internal[i], i))
    for node in order:
        eligible = [c for c, r in enumerate(remaining) if r > 0 and sizes[c] - 1 >= internal[node]]
        if not eligible:
            eligible = [c for c, r in enumerate(remaining) if r > 0]
        c = eligible[int(rng.integers(len(eligible)))]
        community_of[node] = c
        remaining[c] -= 1
        internal[node] = min(internal[node], sizes[c] - 1)

    taken: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    groups = [1 + np.flatnonzero(np.asarray(community_of) == c) for c in range(len(sizes))]
    external = [degrees[i] - internal[i] for i in range(n)]
    for members in groups:
        stubs: list[int] = []
        for wid in members.tolist():
            stubs.extend([wid] * internal[wid - 1])
        if len(stubs) % 2 == 1:
            victim = stubs[int(rng.integers(len(stubs)))]
            stubs.remove(victim)
            external[victim - 1] += 1
        edges.extend(_match_stubs(stubs, taken, None, rng))

    comm_1based = list(community_of)  # indexed by wid - 1 inside _match_stubs
    ext_stubs: list[int] = []
    for i in range(n):
        ext_stubs.extend([i + 1] * max(0, external[i]))
    if len(ext_stubs) % 2 == 1:
        ext_stubs.pop(int(rng.integers(len(ext_stubs))))
    edges.extend(_match_stubs(ext_stubs, taken, comm_1based, rng))

    return Topology(n=n, edges=tuple(sorted(edges)))


def generate_lfr_graph(
    n: int, k: int, cfg: LfrConfig, rng: np.random.Generator
) -> Topology:
    """Simple undirected graph with power-law degrees and planted communities.

    Retries the stochastic realization a bounded number of times until the
    realized mean degree is within 10% of k, then raises GenerationError.
    """
    if k >= n:
        raise ConfigError(f"degree mean k={k} must be < n={n}")
    last = None
    for _ in range(cfg.max_retries):
        topo = _lfr_attempt(n, k, cfg, rng)
        last = topo.mean_degree
        if abs(topo.mean_degree - k) <= 0.1 * k:
            return topo
    raise GenerationError(
        f"could not realize mean degree {k} +-10% in {cfg.max_retries} tries"
        f" (last attempt: {last:.2f})"
    )


def assign_edge_weights(topology: Topology, rng: np.random.Generator) -> SocialNetwork:
    """Give every edge an integer weight in [1,5] from a truncated Poisson(3)."""
    weighted = tuple(
        (u, v, truncated_poisson(3.0, 1, 5, rng)) for u, v in topology.edges
    )
    return SocialNetwork(n=topology.n, edges=weighted)


def generate_workers(n: int, l: int = SKILL_TYPES, *, rng: np.random.Generator) -> list[Worker]:
    """Workers with sparse Poisson skills and cost ~ Poisson(sum of levels)."""
    workers = []
    for wid in range(1, n + 1):
        count = truncated_poisson(5.0, 0, l, rng)
        skills = [0] * l
        if count:
            owned = sorted(int(i) for i in rng.choice(l, size=count, replace=False))
            for idx in owned:
                skills[idx] = truncated_poisson(3.0, 1, 9, rng)
        total = sum(skills)
        cost = int(rng.poisson(total)) if total > 0 else 0
        workers.append(Worker(id=wid, skills=tuple(skills), cost=cost))
    return workers


def generate_tasks(
    m: int,
    m_SN: int,
    m_SL: int,
    b_extra: int,
    l: int = SKILL_TYPES,
    *,
    rng: np.random.Generator,
) -> list[Task]:
    """Tasks whose mean required-skill count and level sit on their targets.

    Budgets are the sum of required levels plus the shared b_extra.
    """
    if m_SN > l:
        raise ConfigError(f"m_SN={m_SN} exceeds the {l} skill types")
    counts = [truncated_poisson(float(m_SN), 1, l, rng) for _ in range(m)]
    counts = _nudge_to_mean(counts, float(m_SN), 1, l, rng)
    indices = [
        sorted(int(i) for i in rng.choice(l, size=c, replace=False)) for c in counts
    ]
    flat_levels = [truncated_poisson(float(m_SL), 1, None, rng) for c in counts for _ in range(c)]
    flat_levels = _nudge_to_mean(flat_levels, float(m_SL), 1, None, rng)
    tasks = []
    pos = 0
    for tid in range(1, m + 1):
        required = [0] * l
        for idx in indices[tid - 1]:
            required[idx] = flat_levels[pos]
            pos += 1
        tasks.append(Task(id=tid, required=tuple(required), budget=sum(required) + b_extra))
    return tasks


def generate_instance(params: GenParams, cfg: LfrConfig, seed: int) -> Instance:
    """Compose the four samplers into one deterministic instance."""
    rng = np.random.default_rng(seed)
    topology = generate_lfr_graph(params.n, params.k, cfg, rng)
    network = assign_edge_weights(topology, rng)
    workers = generate_workers(params.n, SKILL_TYPES, rng=rng)
    tasks = generate_tasks(
        params.m, params.m_SN, params.m_SL, params.b_extra, SKILL_TYPES, rng=rng
    )
    meta = {"params": asdict(params), "lfr": asdict(cfg), "seed": seed}
    return Instance(
        workers=tuple(workers),
        tasks=tuple(tasks),
        network=network,
        l=SKILL_TYPES,
        K=params.K,
        meta=meta,
    )
