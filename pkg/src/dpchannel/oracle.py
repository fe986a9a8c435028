"""Independent verification harness for the bounds and the synthesiser.

Three falsification tools, none of which share code with the closed forms
they attack:

* :func:`grid_search_optimal` exhaustively enumerates every row-stochastic
  matrix on a rational grid (tiny domains only) and keeps the best
  privacy-feasible binary utility.  If the synthesiser were wrong the grid
  would beat it.
* :func:`hillclimb_utility` perturbs a feasible channel with random
  in-row mass transfers, rejecting moves that break the exact ratio
  constraint; starting at the synthesised optimum, ten thousand rejected
  improvement attempts are evidence the boundary really is a maximum.
* :func:`random_dp_sample` streams seeded random channels that pass the
  exact audit, feeding the transformation-pipeline property tests.

All randomness flows from an explicit seed through ``random.Random`` so
every report reproduces bit for bit.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .channels import ChannelMatrix, as_fraction, dp_audit
from .graphs import SizeCapError, UNREACHABLE, distances
from .mechanisms import BaseDependentProfileError, optimal_mechanism

GRID_VERTEX_CAP = 3


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one oracle run; the best matrix always re-passes the audit."""

    method: str
    seed: int
    trials: int
    best_utility: Fraction
    best_matrix: ChannelMatrix

    def to_dict(self):
        return {
            "method": self.method,
            "seed": self.seed,
            "trials": self.trials,
            "best_utility": f"{self.best_utility.numerator}/{self.best_utility.denominator}",
            "best_utility_float": float(self.best_utility),
            "best_matrix": self.best_matrix.to_dict(),
        }


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_search_optimal(graph, pp, step):
    """Exhaustive search over grid-valued square channels, best feasible utility.

    ``step`` must divide 1; every row is a composition of 1/step grid units.
    Square matrices lose no generality for binary utility (column merging
    preserves both feasibility and the column-maxima sum).  Ties keep the
    first assignment in lexicographic candidate order, so the report is
    deterministic.  Domains beyond three vertices are refused: the grid
    simplex explodes combinatorially.
    """
    n = graph.n
    if n > GRID_VERTEX_CAP:
        raise SizeCapError(f"grid search is exhaustive only up to {GRID_VERTEX_CAP} vertices")
    step = as_fraction(step)
    if step <= 0 or (1 / step).denominator != 1:
        raise ValueError("step must be a positive rational that divides 1")
    q = int(1 / step)
    cands = list(_compositions(q, n))
    rn, rd = pp.r.numerator, pp.r.denominator

    def compatible(a, b):
        # both directions of the adjacent-column ratio cap, in integers
        return all(rn * x <= rd * y and rn * y <= rd * x for x, y in zip(a, b))

    k = len(cands)
    compat = [0] * k
    for x in range(k):
        for y in range(x, k):
            if compatible(cands[x], cands[y]):
                compat[x] |= 1 << y
                compat[y] |= 1 << x

    full_mask = (1 << k) - 1
    adj = graph.adjacency
    assign = [-1] * n
    best_total = -1
    best_assign = None
    trials = 0

    def backtrack(v):
        nonlocal best_total, best_assign, trials
        if v == n:
            trials += 1
            total = sum(max(cands[assign[i]][j] for i in range(n)) for j in range(n))
            if total > best_total:
                best_total = total
                best_assign = assign.copy()
            return
        mask = full_mask
        for u in adj[v]:
            if assign[u] != -1:
                mask &= compat[assign[u]]
        while mask:
            low = mask & -mask
            mask ^= low
            assign[v] = low.bit_length() - 1
            backtrack(v + 1)
        assign[v] = -1

    backtrack(0)
    if best_assign is None:
        raise RuntimeError("grid search found no feasible matrix, which cannot happen")
    rows = [[Fraction(cands[c][j], q) for j in range(n)] for c in best_assign]
    matrix = ChannelMatrix.from_rows(rows)
    return SearchReport("grid", 0, trials, Fraction(best_total, q * n), matrix)


def _uniform_start(n):
    return ChannelMatrix.from_rows([[Fraction(1, n)] * n for _ in range(n)])


def hillclimb_utility(graph, pp, iters=10_000, seed=0, start=None):
    """Seeded local search over privacy-feasible channels.

    Each step proposes moving a random rational amount of mass between two
    columns of one row; proposals that violate the exact ratio constraint
    against any neighbouring row are rejected, and surviving proposals are
    accepted when they do not lower the uniform-prior utility.  The best
    matrix seen is reported (max reduction, earliest on ties).

    ``start`` defaults to the synthesised optimum, falling back to the
    uniform channel on graphs the synthesiser refuses.
    """
    if start is None:
        try:
            start = optimal_mechanism(graph, pp).matrix
        except BaseDependentProfileError:
            start = _uniform_start(graph.n)
    if start.rows != graph.n:
        raise ValueError("start matrix rows must match the graph's vertex count")
    rng = random.Random(seed)
    n, m = start.rows, start.cols
    entries = [list(row) for row in start.entries]
    colmax = [max(entries[i][j] for i in range(n)) for j in range(m)]
    success = sum(colmax, Fraction(0))
    best_success = success
    best_entries = [row.copy() for row in entries]
    adj = graph.adjacency
    r = pp.r

    def feasible(i, j, value):
        for h in adj[i]:
            other = entries[h][j]
            if r * value > other or r * other > value:
                return False
        return True

    for _ in range(iters):
        i = rng.randrange(n)
        j = rng.randrange(m)
        k = rng.randrange(m - 1)
        if k >= j:
            k += 1
        delta = Fraction(rng.randint(1, 16), 256)
        if entries[i][j] < delta:
            continue
        new_j = entries[i][j] - delta
        new_k = entries[i][k] + delta
        if not (feasible(i, j, new_j) and feasible(i, k, new_k)):
            continue
        reduced_j = max(new_j, *(entries[h][j] for h in range(n) if h != i)) \
            if n > 1 else new_j
        reduced_k = max(new_k, *(entries[h][k] for h in range(n) if h != i)) \
            if n > 1 else new_k
        new_success = success - colmax[j] - colmax[k] + reduced_j + reduced_k
        if new_success < success:
            continue
        entries[i][j] = new_j
        entries[i][k] = new_k
        colmax[j] = reduced_j
        colmax[k] = reduced_k
        success = new_success
        if success > best_success:
            best_success = success
            best_entries = [row.copy() for row in entries]

    matrix = ChannelMatrix.from_rows(best_entries, start.row_labels, start.col_labels)
    return SearchReport("hillclimb", seed, iters, best_success / n, matrix)


def _components(graph):
    seen = [False] * graph.n
    comps = []
    for s in range(graph.n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in graph.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(comp)
    return comps


def _contraction_towards_uniform(entries, graph, r, m):
    """Smallest blend with the uniform channel that restores feasibility.

    The feasible set is a polytope containing the uniform channel in its
    interior (for r < 1), so for every violated constraint
    M[i][j] <= M[h][j]/r there is a minimal mixing weight that fixes it;
    the max over violations fixes them all, with equality on the worst.
    """
    slack = (1 / r - 1) / m
    needed = Fraction(0)
    for i, h in graph.edge_list:
        for a, b in ((i, h), (h, i)):
            for j in range(m):
                excess = entries[a][j] - entries[b][j] / r
                if excess > 0:
                    t = excess / (excess + slack)
                    if t > needed:
                        needed = t
    return needed


def random_dp_sample(graph, pp, count, seed):
    """Stream ``count`` seeded random channels that pass the exact audit.

    Construction: each column gets a random source vertex and a random
    extra attenuation; entries start as r^(distance to source + shift),
    which keeps every within-column adjacent log-ratio at most epsilon.
    Row normalisation can disturb those ratios, so each candidate is
    audit-checked and, when needed, blended toward the uniform channel by
    the exact minimal amount that restores feasibility before being
    re-audited and emitted.  Every component receives at least one source
    so no row normalises to zero.  Output width varies between n and n+2
    columns to exercise downstream column handling.
    """
    rng = random.Random(seed)
    n = graph.n
    dm = distances(graph)
    comps = _components(graph)
    reps = [comp[0] for comp in comps]
    r = pp.r
    max_shift = 2
    powers = [r ** d for d in range(dm.diameter + max_shift + 1)]

    for _ in range(count):
        m = n + rng.choice((0, 0, 1, 2))
        sources = reps + [rng.randrange(n) for _ in range(m - len(reps))]
        rng.shuffle(sources)
        shifts = [rng.randrange(max_shift + 1) for _ in range(m)]
        weights = []
        for i in range(n):
            row = []
            for j in range(m):
                d = dm.d(i, sources[j])
                row.append(Fraction(0) if d == UNREACHABLE else powers[d + shifts[j]])
            weights.append(row)
        entries = []
        for row in weights:
            total = sum(row, Fraction(0))
            entries.append([x / total for x in row])
        t = _contraction_towards_uniform(entries, graph, r, m)
        if t > 0:
            u = Fraction(1, m)
            entries = [[(1 - t) * x + t * u for x in row] for row in entries]
        matrix = ChannelMatrix.from_rows(entries)
        audit = dp_audit(matrix, graph)
        if audit.max_ratio is None or audit.max_ratio > pp.inv_ratio:
            raise RuntimeError("sampler produced an infeasible channel, which cannot happen")
        yield matrix
