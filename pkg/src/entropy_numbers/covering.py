"""Entropy-number oracle: packings give lower bounds, coverings give upper bounds.

All clouds handled here are subsets of the set S being covered, with a
density certificate ``eta``.  The bounds used:

* packing: n+1 points of S pairwise at distance >= s force eps_n(S) >= s/2;
* covering: n balls of radius r covering the cloud give eps_n(S) <= r + eta;
* exact infeasibility: if no n cloud-centered balls of radius r cover a
  subset of the cloud, then eps_n(S) >= r - eta when p = 2 (centers of an
  optimal cover may be projected onto the convex set S, and then moved to
  a cloud point), and eps_n(S) >= (r - eta) / 2 otherwise (a ball meeting S
  at s lies inside the ball of twice the radius around s).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field, replace
from typing import Optional

import numpy as np

from .errors import InvalidParameterError, UnsupportedDimensionError
from .geometry import (
    DEFAULT_POINT_BUDGET,
    MAX_REAL_DIM,
    Field,
    PointCloud,
    discretize_unit_ball,
    distances_to,
    image_cloud,
    row_norms,
)
from .norms import operator_norm
from .operators import DenseOperator, DiagonalSpec

MAX_EXACT_N = 16
MAX_EXACT_CLOUD = 400_000
# the exact search runs on a cloud of at most this many points; a finer
# cloud still supplies the packing and greedy bounds
DEFAULT_EXACT_POINT_BUDGET = 70_000
DEFAULT_NODE_BUDGET = 100_000
# lazy rounds allowed per refinement, across all radii; keeps runs deterministic
DEFAULT_ROUND_BUDGET = 240
MAX_PACKING_SWEEPS = 200
# absorbs rounding in computed distances; every cloud-derived bound is
# widened by it
FP_SLACK = 1e-12
# closed-form bounds go through exp/log, so allow a relative rounding error
FORMULA_RTOL = 1e-12
MAX_LAZY_POINTS = 800
LAZY_POINTS_PER_ROUND = 3
POLISH_ROUNDS = 12
POLISH_STEPS = 40
DECIDE_POLISH_ROUNDS = 3
FAR_SHELL = 0.5
POLISH_SAMPLE = 20_000
FULL_POLISH_ROUNDS = 2


class Effort(str, enum.Enum):
    GREEDY = "greedy"
    EXACT = "exact"

    @classmethod
    def parse(cls, value) -> "Effort":
        if isinstance(value, Effort):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidParameterError(f"unknown effort {value!r}; use 'greedy' or 'exact'") from None


@dataclass(frozen=True)
class Net:
    centers: np.ndarray
    radius: float


@dataclass(frozen=True)
class EntropyBracket:
    n: int
    lower: float
    upper: float
    eta: float = 0.0
    lower_witness: Optional[np.ndarray] = dc_field(default=None, compare=False)
    upper_witness: Optional[Net] = dc_field(default=None, compare=False)
    methods: tuple[str, ...] = ()
    truncated: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"unsound bracket: lower {self.lower} > upper {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def overlaps(self, other: "EntropyBracket") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def to_json(self, witnesses: bool = False) -> dict:
        out = {
            "n": self.n,
            "lower": self.lower,
            "upper": self.upper,
            "eta": self.eta,
            "methods": list(self.methods),
            "truncated": self.truncated,
        }
        if witnesses:
            out["lower_witness"] = None if self.lower_witness is None else self.lower_witness.tolist()
            if self.upper_witness is not None:
                out["upper_witness"] = {
                    "centers": self.upper_witness.centers.tolist(),
                    "radius": self.upper_witness.radius,
                }
            else:
                out["upper_witness"] = None
        return out


# --- farthest-point machinery ----------------------------------------------


def _start_index(cloud: PointCloud) -> int:
    """Largest-norm point, ties broken lexicographically."""
    norms = row_norms(cloud.points, cloud.p, cloud.field)
    tied = np.flatnonzero(norms == norms.max())
    if len(tied) == 1:
        return int(tied[0])
    sub = cloud.points[tied]
    order = np.lexsort(sub.T[::-1])
    return int(tied[order[0]])


def _traversal(cloud: PointCloud, k: int) -> tuple[list[int], np.ndarray, float]:
    """Gonzalez traversal: ``k`` indices, final nearest-center distances, and
    the covering radius of the first ``k`` centers."""
    pts = cloud.points
    idx = [_start_index(cloud)]
    dmin = distances_to(pts, pts[idx[0]], cloud.p, cloud.field)
    while len(idx) < k:
        j = int(np.argmax(dmin))
        if dmin[j] == 0:
            break
        idx.append(j)
        dmin = np.minimum(dmin, distances_to(pts, pts[j], cloud.p, cloud.field))
    return idx, dmin, float(dmin.max())


def _pairwise(points: np.ndarray, p: float, field: Field) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return row_norms(diff, p, field)


def _min_offdiag(D: np.ndarray) -> float:
    if len(D) < 2:
        return 0.0
    return float(D[~np.eye(len(D), dtype=bool)].min())


def _spread_key(D: np.ndarray) -> np.ndarray:
    """Pairwise distances in increasing order; larger is better, compared lexicographically."""
    return np.sort(D[np.triu_indices(len(D), 1)])


def _better(new: np.ndarray, old: np.ndarray) -> bool:
    diff = np.flatnonzero(np.abs(new - old) > 1e-12 * max(1.0, float(old[-1])))
    return len(diff) > 0 and new[diff[0]] > old[diff[0]]


def packing_lower_bound(cloud: PointCloud, n: int) -> tuple[float, Optional[np.ndarray]]:
    """Half the separation of n+1 well-spread cloud points, with the points.

    Farthest-point traversal seeds the packing.  Then a point of the closest
    pair is moved to the cloud point farthest from the others whenever that
    improves the sorted list of pairwise distances.
    """
    if n < 1:
        raise InvalidParameterError("n must be positive")
    if not cloud.subset_certified:
        raise InvalidParameterError("packing bounds need a cloud contained in the set")
    if len(cloud) <= n:
        return 0.0, None
    pts = cloud.points
    idx, _, _ = _traversal(cloud, n + 1)
    if len(idx) < n + 1:
        return 0.0, None
    sel = list(idx)
    # distances from every selected point to the whole cloud
    rows = np.stack([distances_to(pts, pts[s], cloud.p, cloud.field) for s in sel])
    D = rows[:, sel]
    key = _spread_key(D)
    for _ in range(MAX_PACKING_SWEEPS):
        improved = False
        off = D + np.diag(np.full(len(sel), np.inf))
        i, j = np.unravel_index(np.argmin(off), off.shape)
        for a in (int(i), int(j)):
            keep = np.arange(len(sel)) != a
            cand = int(np.argmax(rows[keep].min(axis=0)))
            trial = sel.copy()
            trial[a] = cand
            row = distances_to(pts, pts[cand], cloud.p, cloud.field)
            trial_rows = rows.copy()
            trial_rows[a] = row
            Dt = trial_rows[:, trial]
            kt = _spread_key(Dt)
            if _better(kt, key):
                sel, rows, D, key = trial, trial_rows, Dt, kt
                improved = True
                break
        if not improved:
            break
    sep = _min_offdiag(_pairwise(pts[sel], cloud.p, cloud.field))
    return max(0.0, sep / 2 - FP_SLACK), pts[sel].copy()


def greedy_covering(cloud: PointCloud, n: int) -> Net:
    """Farthest-point traversal for n centers, then minimax polishing.

    The traversal alone is a 2-approximation with centers on the cloud;
    polishing moves each center towards the minimax center of its cluster,
    which keeps it in the convex hull of S.
    """
    if len(cloud) == 0:
        raise InvalidParameterError("cannot cover an empty cloud")
    if n < 1:
        raise InvalidParameterError("n must be positive")
    idx, _, radius = _traversal(cloud, n)
    return polish_covering(cloud, Net(cloud.points[idx].copy(), radius))


# --- minimax polishing ----------------------------------------------------


def _nearest(cloud: PointCloud, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index of the nearest center for every cloud point, and that distance."""
    best = np.full(len(cloud), np.inf)
    owner = np.zeros(len(cloud), dtype=np.int64)
    for j, c in enumerate(centers):
        d = distances_to(cloud.points, c, cloud.p, cloud.field)
        closer = d < best
        best[closer] = d[closer]
        owner[closer] = j
    return owner, best


def _minimax_center(pts: np.ndarray, start: np.ndarray, p: float, field: Field,
                    steps: int = POLISH_STEPS) -> tuple[np.ndarray, float]:
    """Badoiu-Clarkson walk towards the farthest point; best center seen.

    The returned radius is only an estimate (it is measured on the far
    shell of ``pts``).
    """
    c = start.copy()
    d0 = distances_to(pts, c, p, field)
    best_c, best_r = c.copy(), float(d0.max())
    # far points decide the walk; the caller re-measures on every point
    pts = pts[d0 >= FAR_SHELL * best_r]
    for t in range(steps):
        d = distances_to(pts, c, p, field)
        far = int(np.argmax(d))
        if d[far] < best_r:
            best_c, best_r = c.copy(), float(d[far])
        c = c + (pts[far] - c) / (t + 2)
    return best_c, best_r


def polish_covering(cloud: PointCloud, net: Net, rounds: int = POLISH_ROUNDS) -> Net:
    """Alternate nearest-center assignment with per-cluster minimax moves.

    Centers stay in the convex hull of the cloud, hence inside S when S is
    convex.  The returned radius is measured on the whole cloud and never
    exceeds the true radius of the input centers.
    """
    centers = np.array(net.centers, dtype=float)
    if len(cloud) > POLISH_SAMPLE and rounds > FULL_POLISH_ROUNDS:
        # most of the walking happens on an evenly thinned copy
        stride = -(-len(cloud) // POLISH_SAMPLE)
        thin = replace(cloud, points=cloud.points[::stride])
        centers = polish_covering(thin, Net(centers, math.inf), rounds).centers
        rounds = FULL_POLISH_ROUNDS
    owner, dist = _nearest(cloud, centers)
    # measured here rather than trusted from the caller
    best = Net(centers.copy(), float(dist.max()))
    for _ in range(rounds):
        moved = centers.copy()
        for j in range(len(centers)):
            members = cloud.points[owner == j]
            if len(members):
                cand, r_cand = _minimax_center(members, members.mean(axis=0), cloud.p, cloud.field)
                r_old = float(distances_to(members, centers[j], cloud.p, cloud.field).max())
                if r_cand < r_old:
                    moved[j] = cand
        owner, dist = _nearest(cloud, moved)
        radius = float(dist.max())
        if radius >= best.radius * (1 - 1e-9):
            break
        centers = moved
        best = Net(moved.copy(), radius)
    return best


# --- exact decision by branch and bound --------------------------------------


class _NodeBudget:
    def __init__(self, limit: int):
        self.left = limit
        self.exhausted = False

    def spend(self) -> bool:
        if self.left <= 0:
            self.exhausted = True
            return False
        self.left -= 1
        return True


def _maximal(masks: list[int]) -> list[int]:
    """Drop masks contained in another mask (dominance pruning)."""
    uniq = sorted(set(m for m in masks if m), key=lambda m: (-m.bit_count(), m))
    kept: list[int] = []
    for m in uniq:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return kept


def _superset_any(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per row of ``a``: the boolean matrix 'row of b contains it'."""
    sup = np.ones((len(a), len(b)), dtype=bool)
    for w in range(a.shape[1]):
        sup &= (a[:, None, w] & b[None, :, w]) == a[:, None, w]
    return sup


def _maximal_rows(words: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Indices of distinct bit-rows not strictly contained in another row."""
    if len(words) == 0:
        return np.zeros(0, dtype=np.int64)
    _, first = np.unique(words, axis=0, return_index=True)
    pop = np.bitwise_count(words[first]).sum(axis=1)
    # larger rows first: a row can only sit inside a strictly larger one, and
    # it is enough to test against the maximal rows found so far
    first = first[np.lexsort((first, -pop))]
    pop = np.bitwise_count(words[first]).sum(axis=1)
    kept: list[int] = []
    for s in range(0, len(first), chunk):
        ids = first[s:s + chunk]
        a = words[ids]
        inner = _superset_any(a, a) & (pop[s:s + chunk][None, :] > pop[s:s + chunk][:, None])
        dom = inner.any(axis=1)
        if kept:
            dom |= _superset_any(a, words[kept]).any(axis=1)
        kept.extend(int(i) for i in ids[~dom])
    return np.sort(np.array(kept, dtype=np.int64))


def _set_cover(masks: list[int], full: int, n: int, budget: _NodeBudget):
    """Choose <= n masks whose union is ``full``.

    Returns the chosen masks, ``None`` if impossible, or ``False`` when the
    node budget ran out first.
    """
    # a greedy cover settles easy feasible instances without any search
    picked, left = [], full
    while left and len(picked) < n:
        best = max(masks, key=lambda m: (m & left).bit_count(), default=0)
        if not best & left:
            break
        picked.append(best)
        left &= ~best
    if not left:
        return picked
    nbits = full.bit_length()
    covering = [[m for m in masks if m >> b & 1] for b in range(nbits)]
    reach = []
    for ms in covering:
        acc = 0
        for m in ms:
            acc |= m
        reach.append(acc)
    order = sorted(range(nbits), key=lambda b: reach[b].bit_count())
    failed: set[tuple[int, int]] = set()

    def dfs(uncovered: int, depth: int):
        if uncovered == 0:
            return []
        if depth == 0:
            return None
        if (uncovered, depth) in failed:
            return None
        if not budget.spend():
            return False
        # points that pairwise share no mask each need their own center
        need, u = 0, uncovered
        for b in order:
            if u >> b & 1:
                need += 1
                if need > depth:
                    failed.add((uncovered, depth))
                    return None
                u &= ~reach[b]
        # branch on the uncovered point with the fewest covering candidates
        pivot, fewest = -1, None
        u = uncovered
        while u:
            low = u & -u
            b = low.bit_length() - 1
            c = len(covering[b])
            if fewest is None or c < fewest:
                pivot, fewest = b, c
            u ^= low
        options = _maximal([m & uncovered for m in covering[pivot]])
        for opt in options:
            sub = dfs(uncovered & ~opt, depth - 1)
            if sub is False:
                return False
            if sub is not None:
                return [opt] + sub
        failed.add((uncovered, depth))
        return None

    found = dfs(full, n)
    if found is False or found is None:
        return found
    # map restricted options back to some original mask containing them
    chosen = []
    for opt in found:
        chosen.append(next(m for m in masks if m & opt == opt))
    return chosen


class _Decider:
    """Exact test 'can n cloud-centered balls of radius r cover the cloud?'.

    Lazy constraint generation: solve the covering problem for a small set Q
    of cloud points, with candidate centers grouped by their footprint on Q,
    then check the full cloud and move the worst uncovered points into Q.
    Footprints that a neighbouring candidate strictly contains are dropped
    before the search; a globally maximal footprint never is, so the search
    stays exact.  Hard points found at one radius seed the next decision.
    """

    def __init__(self, cloud: PointCloud, n: int, seeds: list[int], node_budget: int,
                 max_q: int = MAX_LAZY_POINTS, round_budget: int = DEFAULT_ROUND_BUDGET):
        self.cloud = cloud
        self.n = n
        # one node pool for the whole search, so total work is bounded
        self.budget = _NodeBudget(node_budget)
        self.max_q = max_q
        self.hard = list(dict.fromkeys(int(s) for s in seeds))
        self.exhausted = False
        self.rounds_left = round_budget
        nb = _neighbor_graph(cloud.points)
        self._edge_src = np.repeat(np.arange(len(cloud)), nb.shape[1])
        self._edge_dst = nb.ravel()

    def _dist(self, i: int) -> np.ndarray:
        c = self.cloud
        return distances_to(c.points, c.points[i], c.p, c.field)

    def _central_members(self, labels: np.ndarray, k: int) -> np.ndarray:
        """Per class, the member nearest the class centroid (Euclidean)."""
        pts = self.cloud.points
        counts = np.bincount(labels, minlength=k).astype(float)
        cent = np.stack(
            [np.bincount(labels, weights=pts[:, j], minlength=k) for j in range(pts.shape[1])], axis=1
        )
        cent /= counts[:, None]
        off = pts - cent[labels]
        d = np.einsum("ij,ij->i", off, off)
        # stable descending order, so the nearest member is written last
        order = np.argsort(-d, kind="stable")
        reps = np.empty(k, dtype=np.int64)
        reps[labels[order]] = order
        return reps

    def _locally_dominated(self, labels: np.ndarray, words: np.ndarray) -> np.ndarray:
        """Classes having a member whose neighbour's footprint is a strict superset."""
        src = labels[self._edge_src]
        dst = labels[self._edge_dst]
        edge = src != dst
        src, dst = src[edge], dst[edge]
        a, b = words[src], words[dst]
        sup = np.all((a & b) == a, axis=1)
        dominated = np.zeros(len(words), dtype=bool)
        dominated[src[sup]] = True
        return dominated

    def decide(self, r: float):
        """('feasible', center indices) | ('infeasible', Q) | ('unknown', None)."""
        N = len(self.cloud)
        budget = self.budget
        Q: list[int] = []
        rows: list[np.ndarray] = []
        labels = np.zeros(N, dtype=np.int64)
        pending = list(self.hard)
        attempt = 0
        try:
            while True:
                for start in range(0, len(pending), 8):
                    chunk = pending[start:start + 8]
                    new_rows = [self._dist(q) <= r for q in chunk]
                    Q.extend(chunk)
                    rows.extend(new_rows)
                    code = np.packbits(np.stack(new_rows), axis=0, bitorder="little")[0]
                    labels = labels * 256 + code
                    labels = np.unique(labels, return_inverse=True)[1].astype(np.int64).ravel()
                self.rounds_left -= 1
                if len(Q) > self.max_q or self.rounds_left < 0:
                    self.exhausted = True
                    return "unknown", None
                k = int(labels.max()) + 1
                reps = self._central_members(labels, k)
                covmat = np.stack(rows)[:, reps]
                packed = np.packbits(covmat, axis=0, bitorder="little")
                pad = (-packed.shape[0]) % 8
                packed = np.ascontiguousarray(np.pad(packed, ((0, pad), (0, 0))).T)
                words = packed.view(np.uint64)
                live = words.any(axis=1) & ~self._locally_dominated(labels, words)
                live_ids = np.flatnonzero(live)
                live_ids = live_ids[_maximal_rows(words[live_ids])]
                masks = [int.from_bytes(packed[c].tobytes(), "little") for c in live_ids]
                rep_of: dict[int, int] = {}
                for m, c in zip(masks, live_ids):
                    rep_of.setdefault(m, int(reps[c]))
                full = (1 << len(Q)) - 1
                chosen = _set_cover(masks, full, self.n, budget)
                if chosen is False:
                    self.exhausted = True
                    return "unknown", None
                if chosen is None:
                    return "infeasible", Q
                centers = [rep_of[m] for m in chosen]
                dmin = np.full(N, np.inf)
                for c in centers:
                    dmin = np.minimum(dmin, self._dist(c))
                pending = []
                for _ in range(LAZY_POINTS_PER_ROUND):
                    worst = int(np.argmax(dmin))
                    if dmin[worst] <= r:
                        break
                    pending.append(worst)
                    dmin = np.minimum(dmin, self._dist(worst))
                if not pending:
                    return "feasible", self.cloud.points[centers].copy()
                attempt += 1
                if attempt & (attempt - 1):
                    continue
                # the search answer may be a near miss that moving centers
                # fixes; tried on rounds 1, 2, 4, 8, ...
                net = polish_covering(self.cloud, Net(self.cloud.points[centers], math.inf),
                                      rounds=DECIDE_POLISH_ROUNDS)
                if net.radius <= r:
                    return "feasible", net.centers
        finally:
            self.hard = list(dict.fromkeys(Q))[: self.max_q // 2]


def _neighbor_graph(points: np.ndarray) -> np.ndarray:
    """Indices of the nearest few cloud points to every cloud point."""
    from scipy.spatial import cKDTree

    k = min(len(points) - 1, 2 * points.shape[1] + 4)
    if k < 1:
        return np.zeros((len(points), 0), dtype=np.int64)
    _, nb = cKDTree(points).query(points, k=k + 1)
    return np.asarray(nb[:, 1:], dtype=np.int64)


def _ordered(lower: float, upper: float) -> float:
    """Return ``upper``; equal-within-rounding crossings are clamped, real ones raise."""
    if lower > upper + 1e-9 * max(1.0, abs(upper)):
        raise RuntimeError(f"unsound bracket: certified lower {lower} exceeds certified upper {upper}")
    return max(upper, lower)


def _infeasible_to_lower(r: float, eta: float, p: float) -> float:
    val = r - eta if p == 2 else (r - eta) / 2
    return max(0.0, val - FP_SLACK)


def exact_covering_refine(
    cloud: PointCloud,
    n: int,
    bracket: EntropyBracket,
    budget: int = DEFAULT_NODE_BUDGET,
    round_budget: int = DEFAULT_ROUND_BUDGET,
) -> EntropyBracket:
    """Binary search on the radius with exact cloud-centered decisions.

    ``budget`` caps branch-and-bound nodes and ``round_budget``
    caps lazy rounds over the whole search.  Running out of either leaves a
    sound but wider bracket flagged ``truncated``.
    """
    if n > MAX_EXACT_N:
        raise UnsupportedDimensionError(f"exact search supports n <= {MAX_EXACT_N}")
    if len(cloud) > MAX_EXACT_CLOUD:
        raise UnsupportedDimensionError(f"exact search supports clouds up to {MAX_EXACT_CLOUD} points")
    if cloud.ambient_dim > MAX_REAL_DIM:
        raise UnsupportedDimensionError(f"exact search supports real dimension <= {MAX_REAL_DIM}")
    eta = cloud.density
    idx, dmin, r_n = _traversal(cloud, n)
    if len(cloud) <= n or r_n == 0:
        # every point can be its own center
        centers = cloud.points[idx].copy()
        upper = min(bracket.upper, eta)
        return replace(bracket, upper=max(upper, bracket.lower), upper_witness=Net(centers, 0.0),
                       methods=bracket.methods + ("exact-cover",))
    # the n centers and the farthest point are pairwise >= r_n apart
    idx = idx + [int(np.argmax(dmin))]
    lo = r_n / 2
    start = polish_covering(cloud, Net(cloud.points[idx[:n]].copy(), r_n))
    hi, hi_centers = start.radius, start.centers
    if bracket.lower_witness is not None and len(bracket.lower_witness) > n:
        sep = _min_offdiag(_pairwise(bracket.lower_witness, cloud.p, cloud.field))
        lo = max(lo, sep / 2)
    tol = max(eta / 2, 1e-12 * max(1.0, hi))
    decider = _Decider(cloud, n, idx, budget, round_budget=round_budget)
    r_infeasible = None
    # an undecided radius caps the search from above; keep probing below it
    ceiling = hi
    while min(hi, ceiling) - lo > tol and decider.rounds_left > 0 and decider.budget.left > 0:
        mid = 0.5 * (lo + min(hi, ceiling))
        status, info = decider.decide(mid)
        if status == "feasible":
            hi, hi_centers = mid, info
        elif status == "infeasible":
            lo = r_infeasible = mid
        else:
            ceiling = mid
    lower, upper = bracket.lower, bracket.upper
    methods = list(bracket.methods)
    lower_witness = bracket.lower_witness
    upper_witness = bracket.upper_witness
    if r_infeasible is not None:
        cand = _infeasible_to_lower(r_infeasible, eta, cloud.p)
        if cand > lower:
            lower = cand
            methods.append("exact-infeasible")
    if hi + eta + FP_SLACK < upper:
        upper = hi + eta + FP_SLACK
        upper_witness = Net(hi_centers, hi)
        methods.append("exact-cover")
    return EntropyBracket(
        n=n,
        lower=lower,
        upper=_ordered(lower, upper),
        eta=bracket.eta,
        lower_witness=lower_witness,
        upper_witness=upper_witness,
        methods=tuple(methods),
        truncated=bracket.truncated or decider.exhausted,
    )


# --- the full oracle ----------------------------------------------------------


def _diagonal_spec_of(op: DenseOperator) -> DiagonalSpec:
    sig = sorted((abs(complex(x)) for x in np.diag(op.entries)), reverse=True)
    return DiagonalSpec(tuple(sig), 0.0, op.p, op.field)


def _embed(points: Optional[np.ndarray], keep_rows: np.ndarray, field: Field) -> Optional[np.ndarray]:
    """Re-insert the zero coordinates dropped by ``DenseOperator.reduced``."""
    if points is None:
        return None
    rf = field.real_factor
    mask = np.repeat(keep_rows, rf)
    out = np.zeros((points.shape[0], len(mask)))
    out[:, mask] = points
    return out


def entropy_bracket(
    op: DenseOperator,
    n: int,
    eta: float = 0.05,
    effort=Effort.GREEDY,
    use_formulas: bool = True,
    point_budget: int = DEFAULT_POINT_BUDGET,
    node_budget: int = DEFAULT_NODE_BUDGET,
    round_budget: int = DEFAULT_ROUND_BUDGET,
    exact_point_budget: int = DEFAULT_EXACT_POINT_BUDGET,
) -> EntropyBracket:
    """Certified bracket for eps_n(op).

    ``eta`` is the target density of the unit-ball cloud; if the point
    budget cannot reach it the finest affordable grid is used and the
    achieved image density is reported in ``bracket.eta``.
    """
    from .bounds import best_volume_lower_bound, delta

    if n < 1:
        raise InvalidParameterError("n must be positive")
    if not eta > 0:
        raise InvalidParameterError("eta must be positive")
    effort = Effort.parse(effort)
    norm = operator_norm(op)
    red = op.reduced()
    if red is None:
        return EntropyBracket(n, 0.0, 0.0, 0.0, methods=("zero-operator",))
    rf = op.field.real_factor
    too_big = max(red.rows, red.cols) * rf > MAX_REAL_DIM
    if too_big and n > 1:
        raise UnsupportedDimensionError(
            f"operator of reduced shape {red.shape} over {op.field.value} exceeds real dimension {MAX_REAL_DIM}"
        )
    if too_big:
        # one ball: eps_1 equals the norm
        return EntropyBracket(1, norm.lower, norm.upper, 0.0, methods=("norm",) + norm.method)

    keep_rows = np.any(op.entries != 0, axis=1)
    ball = discretize_unit_ball(red.cols, op.p, op.field, eta, budget=point_budget, strict=False)
    cloud = image_cloud(red, ball, norm)

    lower, witness = packing_lower_bound(cloud, n)
    methods = ["packing"]
    net = greedy_covering(cloud, n)
    upper = net.radius + cloud.density + FP_SLACK
    methods.append("greedy-cover")
    if norm.upper < upper:
        upper = norm.upper
        methods.append("norm-upper")
    if n == 1 and norm.lower > lower:
        lower = norm.lower
        methods.append("norm-lower")
    bracket = EntropyBracket(
        n=n,
        lower=lower,
        upper=_ordered(lower, upper),
        eta=cloud.density,
        lower_witness=witness,
        upper_witness=net,
        methods=tuple(methods),
    )
    if effort is Effort.EXACT and n > 1:
        exact_cloud = cloud
        if len(ball) > exact_point_budget:
            coarse = discretize_unit_ball(red.cols, op.p, op.field, eta, budget=exact_point_budget, strict=False)
            exact_cloud = image_cloud(red, coarse, norm)
        bracket = exact_covering_refine(exact_cloud, n, bracket, node_budget, round_budget)

    if use_formulas and red.is_diagonal():
        spec = _diagonal_spec_of(red)
        lo_f = best_volume_lower_bound(spec, red.cols, n) * (1 - FORMULA_RTOL)
        lower, upper, methods = bracket.lower, bracket.upper, list(bracket.methods)
        if lo_f > lower:
            lower = lo_f
            methods.append("volume-bound")
        if op.p != math.inf:
            up_f = 4 * delta(spec, n).value * (1 + FORMULA_RTOL)
            if up_f < upper:
                upper = up_f
                methods.append("diagonal-sandwich")
        bracket = replace(bracket, lower=lower, upper=_ordered(lower, upper), methods=tuple(methods))

    uw = bracket.upper_witness
    return replace(
        bracket,
        lower_witness=_embed(bracket.lower_witness, keep_rows, op.field),
        upper_witness=None if uw is None else Net(_embed(uw.centers, keep_rows, op.field), uw.radius),
    )
