"""Domain model: workers, tasks, the weighted social network, and the
density objective with its constraint validator.

Worker and task ids are 1-based.  Skill vectors are dense tuples of length
``l`` (a missing skill is level 0).  All types are immutable once built and
all operations are pure functions, so everything here is safe to share
across threads.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class InputError(ValueError):
    """Raised for out-of-range indices or malformed inputs."""


@dataclass(frozen=True)
class Worker:
    """A worker with a skill-level vector and a hiring cost."""

    id: int
    skills: tuple[int, ...]
    cost: int

    def __post_init__(self):
        if self.id < 1:
            raise InputError(f"worker id must be >= 1, got {self.id}")
        if any(s < 0 for s in self.skills):
            raise InputError(f"worker {self.id}: negative skill level")
        if self.cost < 0:
            raise InputError(f"worker {self.id}: negative cost")


@dataclass(frozen=True)
class Task:
    """A task with required skill levels and a budget."""

    id: int
    required: tuple[int, ...]
    budget: int

    def __post_init__(self):
        if self.id < 1:
            raise InputError(f"task id must be >= 1, got {self.id}")
        if any(t < 0 for t in self.required):
            raise InputError(f"task {self.id}: negative requirement")
        if self.budget < 0:
            raise InputError(f"task {self.id}: negative budget")


@dataclass(frozen=True)
class SocialNetwork:
    """Undirected weighted graph over workers 1..n.

    ``edges`` is a canonical sorted tuple of (u, v, w) with u < v and
    w >= 1.  Absent pairs have weight 0.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    _wmap: dict = field(init=False, repr=False, compare=False, hash=False)
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        wmap: dict[tuple[int, int], int] = {}
        adj: dict[int, list[tuple[int, int]]] = {u: [] for u in range(1, self.n + 1)}
        for u, v, w in self.edges:
            if u == v:
                raise InputError(f"self-loop on worker {u}")
            if not (1 <= u < v <= self.n):
                raise InputError(f"edge ({u},{v}) not canonical or out of range")
            if w < 1:
                raise InputError(f"edge ({u},{v}) has weight {w} < 1")
            if (u, v) in wmap:
                raise InputError(f"duplicate edge ({u},{v})")
            wmap[(u, v)] = w
            adj[u].append((v, w))
            adj[v].append((u, w))
        for nbrs in adj.values():
            nbrs.sort()
        object.__setattr__(self, "_wmap", wmap)
        object.__setattr__(self, "_adj", adj)

    @staticmethod
    def from_weights(n: int, weights: Mapping[tuple[int, int], int]) -> "SocialNetwork":
        canon = sorted((min(u, v), max(u, v), w) for (u, v), w in weights.items())
        return SocialNetwork(n, tuple(canon))

    def weight(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._wmap.get((u, v), 0)

    def neighbors(self, u: int) -> list[tuple[int, int]]:
        return self._adj[u]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Instance:
    """A complete problem input: workers, tasks, and their social network."""

    workers: tuple[Worker, ...]
    tasks: tuple[Task, ...]
    network: SocialNetwork
    l: int
    K: int
    meta: dict | None = None

    def __post_init__(self):
        if self.network.n != len(self.workers):
            raise InputError(
                f"network has {self.network.n} nodes but {len(self.workers)} workers"
            )
        if self.K < 0:
            raise InputError(f"team-size limit K must be >= 0, got {self.K}")
        for w in self.workers:
            if len(w.skills) != self.l:
                raise InputError(f"worker {w.id}: skill vector length != {self.l}")
        for t in self.tasks:
            if len(t.required) != self.l:
                raise InputError(f"task {t.id}: requirement vector length != {self.l}")

    @property
    def n(self) -> int:
        return len(self.workers)

    @property
    def m(self) -> int:
        return len(self.tasks)


@dataclass(frozen=True)
class Assignment:
    """m disjoint teams of worker ids, one per task (by position)."""

    teams: tuple[frozenset[int], ...]

    @staticmethod
    def from_iterables(teams: Iterable[Iterable[int]]) -> "Assignment":
        return Assignment(tuple(frozenset(t) for t in teams))

    @property
    def assigned(self) -> frozenset[int]:
        out: set[int] = set()
        for t in self.teams:
            out |= t
        return frozenset(out)


@dataclass(frozen=True)
class ConstraintReport:
    """Violations found by check_feasible; empty everywhere means feasible."""

    skill_shortfalls: tuple[tuple[int, int, int], ...]  # (task id, skill index, shortfall)
    budget_overruns: tuple[tuple[int, int], ...]  # (task id, amount over budget)
    size_overruns: tuple[tuple[int, int], ...]  # (task id, members beyond K)
    duplicate_workers: tuple[int, ...]  # ids assigned to more than one team

    @property
    def feasible(self) -> bool:
        return not (
            self.skill_shortfalls
            or self.budget_overruns
            or self.size_overruns
            or self.duplicate_workers
        )


def density(team: Iterable[int], network: SocialNetwork) -> float:
    """Sum of intra-team edge weights over the team size.

    Each unordered pair is counted once; an empty team has density 0.
    """
    members = sorted(team)
    size = len(members)
    if size == 0:
        return 0.0
    total = 0.0
    for i in range(size):
        for j in range(i + 1, size):
            total += network.weight(members[i], members[j])
    return total / size


def total_density(assignment: Assignment, network: SocialNetwork) -> float:
    """Sum of the team densities; empty teams contribute 0."""
    return sum(density(team, network) for team in assignment.teams)


def check_feasible(assignment: Assignment, instance: Instance) -> ConstraintReport:
    """Evaluate all four constraint families for an assignment.

    Checks per-task skill coverage, budget, and team size, plus global
    worker disjointness.  Out-of-range worker ids raise InputError.
    """
    if len(assignment.teams) != instance.m:
        raise InputError(
            f"assignment has {len(assignment.teams)} teams for {instance.m} tasks"
        )
    n = instance.n
    shortfalls: list[tuple[int, int, int]] = []
    budget_over: list[tuple[int, int]] = []
    size_over: list[tuple[int, int]] = []
    seen: dict[int, int] = {}
    duplicates: set[int] = set()
    for task, team in zip(instance.tasks, assignment.teams):
        cost = 0
        levels = [0] * instance.l
        for wid in team:
            if not (1 <= wid <= n):
                raise InputError(f"worker id {wid} out of range [1,{n}]")
            if wid in seen:
                duplicates.add(wid)
            seen[wid] = task.id
            worker = instance.workers[wid - 1]
            cost += worker.cost
            for k, s in enumerate(worker.skills):
                levels[k] += s
        for k in range(instance.l):
            if levels[k] < task.required[k]:
                shortfalls.append((task.id, k, task.required[k] - levels[k]))
        if cost > task.budget:
            budget_over.append((task.id, cost - task.budget))
        if len(team) > instance.K:
            size_over.append((task.id, len(team) - instance.K))
    return ConstraintReport(
        skill_shortfalls=tuple(shortfalls),
        budget_overruns=tuple(budget_over),
        size_overruns=tuple(size_over),
        duplicate_workers=tuple(sorted(duplicates)),
    )


def shortest_path_hops(network: SocialNetwork, u: int, v: int) -> int | None:
    """Minimum number of edges on any u-v path, ignoring weights.

    Returns None when u and v are disconnected.  u == v is an input error.
    """
    if u == v:
        raise InputError("hop distance requires distinct endpoints")
    if not (1 <= u <= network.n and 1 <= v <= network.n):
        raise InputError(f"worker ids ({u},{v}) out of range [1,{network.n}]")
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y, _ in network.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y]
                queue.append(y)
    return None


def _dijkstra(network: SocialNetwork, source: int) -> dict[int, float]:
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist.get(x, math.inf):
            continue
        for y, w in network.neighbors(x):
            nd = d + w
            if nd < dist.get(y, math.inf):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def _team_distances(team: list[int], network: SocialNetwork) -> dict[int, dict[int, float]]:
    return {u: _dijkstra(network, u) for u in team}


def cc_diameter(team: Iterable[int], network: SocialNetwork) -> float:
    """Largest weighted shortest-path distance between any two members.

    Reporting-only metric; an unreachable pair yields inf, a singleton or
    empty team yields 0.
    """
    members = sorted(team)
    if len(members) < 2:
        return 0.0
    worst = 0.0
    dists = _team_distances(members, network)
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            worst = max(worst, dists[u].get(v, math.inf))
    return worst


def cc_sd(team: Iterable[int], network: SocialNetwork) -> float:
    """Sum of weighted shortest-path distances over unordered member pairs."""
    members = sorted(team)
    if len(members) < 2:
        return 0.0
    total = 0.0
    dists = _team_distances(members, network)
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            total += dists[u].get(v, math.inf)
    return total


def cc_ld(team: Iterable[int], leader: int, network: SocialNetwork) -> float:
    """Sum of weighted distances from every member to the given leader."""
    members = sorted(team)
    if leader not in members:
        raise InputError(f"leader {leader} is not a team member")
    if len(members) < 2:
        return 0.0
    dists = _dijkstra(network, leader)
    return sum(dists.get(u, math.inf) for u in members if u != leader)


def cc_ld_best(team: Iterable[int], network: SocialNetwork) -> tuple[int, float]:
    """Leader choice minimizing cc_ld, with ties going to the smallest id."""
    members = sorted(team)
    if not members:
        raise InputError("cannot pick a leader for an empty team")
    best = (math.inf, members[0])
    for u in members:
        value = cc_ld(members, u, network)
        if value < best[0]:
            best = (value, u)
    return best[1], best[0]
