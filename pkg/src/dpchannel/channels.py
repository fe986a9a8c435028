"""Channel matrices over exact rationals and their privacy/leakage measures.

A channel is a row-stochastic matrix of conditional output probabilities.
All probabilities are kept as ``fractions.Fraction`` end to end; logarithms
(entropies, epsilon values) appear only at the reporting boundary.  This
makes audits, the canonical-form transformations and every bound-tightness
check exact, with no tolerance debates about what "attains" means.

The privacy audit follows the discrete ratio formulation: a matrix satisfies
the epsilon constraint for a graph iff every pair of adjacent rows keeps
each column within a factor e^epsilon.  Quotients 0/0 count as ratio 1
(neither input can produce that output); x/0 with x > 0 is an infinite
ratio and the audit reports eps_star = inf.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

from .graphs import UNREACHABLE, distances

DEFAULT_LN_TOL = 1e-9
# Published tables rounded to three decimals can nominally overshoot the
# declared epsilon by a couple of thousandths; audit those with this profile.
ROUNDED_FIXTURE_LN_TOL = 1e-2


def as_fraction(x):
    """Coerce to an exact rational.

    Strings accept both ``p/q`` and decimal literals.  Floats are read
    through their shortest decimal representation, so ``0.25`` means 1/4
    and ``0.535`` means 107/200; pass a string or Fraction to control the
    value precisely.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(repr(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact probability")


def log2_fraction(q):
    """log2 of a positive rational, safe for arbitrarily large terms."""
    q = as_fraction(q)
    if q <= 0:
        raise ValueError("logarithm of a non-positive rational")
    return math.log2(q.numerator) - math.log2(q.denominator)


def format_fraction(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PrivacyParameter:
    """Privacy level as the exact adjacent-row ratio floor r = e^(-epsilon).

    Keeping r rational makes every feasibility comparison exact; epsilon
    itself is derived and used for reporting only.
    """

    r: Fraction

    def __post_init__(self):
        r = as_fraction(self.r)
        if not 0 < r <= 1:
            raise ValueError("ratio must lie in (0, 1]")
        object.__setattr__(self, "r", r)

    @property
    def epsilon(self):
        return math.log(self.r.denominator) - math.log(self.r.numerator)

    @property
    def inv_ratio(self):
        """The pointwise cap e^epsilon as an exact rational."""
        return 1 / self.r

    @classmethod
    def from_ratio(cls, value):
        return cls(as_fraction(value))

    @classmethod
    def from_epsilon(cls, eps):
        if eps < 0:
            raise ValueError("epsilon must be non-negative")
        return cls(Fraction(math.exp(-eps)))


@dataclass(frozen=True)
class Prior:
    """Exact probability distribution over the input index set."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(as_fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be non-negative")
        if sum(probs) != 1:
            raise ValueError("prior must sum exactly to 1")

    @classmethod
    def uniform(cls, n):
        return cls((Fraction(1, n),) * n)

    @property
    def max_prob(self):
        return max(self.probs)

    def __len__(self):
        return len(self.probs)


@dataclass(frozen=True)
class ChannelMatrix:
    """Row-stochastic matrix of exact conditional probabilities p(col | row)."""

    entries: tuple
    row_labels: tuple | None = None
    col_labels: tuple | None = None

    def __post_init__(self):
        entries = tuple(tuple(as_fraction(x) for x in row) for row in self.entries)
        if not entries or not entries[0]:
            raise ValueError("a channel matrix needs at least one row and column")
        m = len(entries[0])
        for row in entries:
            if len(row) != m:
                raise ValueError("all rows must have the same length")
            if any(x < 0 for x in row):
                raise ValueError("probabilities must be non-negative")
            if sum(row) != 1:
                raise ValueError("every row must sum exactly to 1")
        object.__setattr__(self, "entries", entries)
        rl = self.row_labels
        cl = self.col_labels
        rl = tuple(str(x) for x in rl) if rl is not None else tuple(str(i) for i in range(len(entries)))
        cl = tuple(str(x) for x in cl) if cl is not None else tuple(str(j) for j in range(m))
        if len(rl) != len(entries) or len(cl) != m:
            raise ValueError("label counts must match the matrix shape")
        object.__setattr__(self, "row_labels", rl)
        object.__setattr__(self, "col_labels", cl)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0])

    def entry(self, i, j):
        return self.entries[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    @cached_property
    def column_maxima(self):
        return tuple(max(self.column(j)) for j in range(self.cols))

    def with_labels(self, row_labels=None, col_labels=None):
        return replace(self, row_labels=row_labels or self.row_labels,
                       col_labels=col_labels or self.col_labels)

    @classmethod
    def from_rows(cls, rows, row_labels=None, col_labels=None):
        return cls(tuple(tuple(r) for r in rows), row_labels, col_labels)

    @classmethod
    def identity(cls, n, row_labels=None, col_labels=None):
        rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, row_labels, col_labels)

    @classmethod
    def constant_rows(cls, row, n, row_labels=None, col_labels=None):
        return cls.from_rows([tuple(row)] * n, row_labels, col_labels)

    # -- serialization ------------------------------------------------------

    def to_csv(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([""] + list(self.col_labels))
        for label, row in zip(self.row_labels, self.entries):
            writer.writerow([label] + [format_fraction(x) for x in row])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if len(rows) < 2:
            raise ValueError("matrix CSV needs a header row and at least one data row")
        col_labels = [c.strip() for c in rows[0][1:]]
        row_labels = []
        entries = []
        for r in rows[1:]:
            row_labels.append(r[0].strip())
            entries.append([as_fraction(c) for c in r[1:]])
        return cls.from_rows(entries, row_labels, col_labels)

    def to_dict(self):
        return {
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "entries": [[format_fraction(x) for x in row] for row in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls.from_rows(d["entries"], d.get("row_labels"), d.get("col_labels"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def prior_to_csv(prior, labels=None):
    labels = labels or [str(i) for i in range(len(prior))]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for label, p in zip(labels, prior.probs):
        writer.writerow([label, format_fraction(p)])
    return out.getvalue()


def prior_from_csv(text):
    """Parse ``label,value`` lines; returns the prior and the label order."""
    labels = []
    values = []
    for row in csv.reader(io.StringIO(text)):
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ValueError("prior file lines must be 'label,value'")
        labels.append(row[0].strip())
        values.append(as_fraction(row[1]))
    return Prior(tuple(values)), tuple(labels)


# ---------------------------------------------------------------------------
# privacy audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DpAudit:
    """Worst adjacent same-column ratio of a channel over a graph.

    ``eps_star`` is the natural log of the worst ratio (inf when some
    adjacent pair maps one input to an output the other never produces).
    ``max_ratio`` keeps the exact rational behind eps_star, None when
    infinite.  The witness is oriented so that
    ``M[witness[0]][witness[2]] / M[witness[1]][witness[2]]`` realises it.
    """

    eps_star: float
    worst_witness: tuple | None
    max_ratio: Fraction | None

    def is_dp(self, pp, tol=DEFAULT_LN_TOL):
        """Does the audited channel meet the declared privacy level?

        The comparison happens on the log scale with an additive tolerance;
        with ``tol=0`` and a finite audit it is exact rational comparison.
        """
        if self.max_ratio is None:
            return False
        if tol == 0:
            return self.max_ratio <= pp.inv_ratio
        return self.eps_star <= pp.epsilon + tol


def dp_audit(matrix, graph):
    """Audit the ratio constraint of every adjacent row pair in every column."""
    if matrix.rows != graph.n:
        raise ValueError("matrix rows must match the graph's vertex count")
    best = Fraction(1)
    witness = None
    for i, h in graph.edge_list:
        row_i = matrix.entries[i]
        row_h = matrix.entries[h]
        for j in range(matrix.cols):
            a, b = row_i[j], row_h[j]
            if a == b:
                continue
            if a == 0 or b == 0:
                wit = (i, h, j) if a > 0 else (h, i, j)
                return DpAudit(math.inf, wit, None)
            ratio = a / b if a > b else b / a
            if ratio > best:
                best = ratio
                witness = (i, h, j) if a > b else (h, i, j)
    eps_star = 0.0 if best == 1 else math.log(best.numerator) - math.log(best.denominator)
    return DpAudit(eps_star, witness, best)


def is_dp(matrix, graph, pp, tol=DEFAULT_LN_TOL):
    return dp_audit(matrix, graph).is_dp(pp, tol)


@dataclass(frozen=True)
class DistanceRatioAudit:
    """Result of the chained ratio check at every distance, not just 1."""

    ok: bool
    worst_witness: tuple | None


def distance_ratio_audit(matrix, graph, pp):
    """Check M[i][j] <= M[h][j] / r^d(i,h) for every ordered pair and column.

    Any channel passing :func:`dp_audit` at the same level passes here too,
    because the single-step ratio constraint chains along shortest paths.
    Pairs in different components are unconstrained.
    """
    if matrix.rows != graph.n:
        raise ValueError("matrix rows must match the graph's vertex count")
    dm = distances(graph)
    r = pp.r
    powers = [r ** d for d in range(dm.diameter + 1)]
    worst = None
    worst_excess = None
    for i in range(graph.n):
        for h in range(graph.n):
            if i == h:
                continue
            d = dm.d(i, h)
            if d == UNREACHABLE:
                continue
            scale = powers[d]
            for j in range(matrix.cols):
                lhs = matrix.entries[i][j] * scale
                rhs = matrix.entries[h][j]
                if lhs > rhs:
                    excess = lhs - rhs
                    if worst_excess is None or excess > worst_excess:
                        worst_excess = excess
                        worst = (i, h, j)
    return DistanceRatioAudit(worst is None, worst)


# ---------------------------------------------------------------------------
# entropy and leakage
# ---------------------------------------------------------------------------

def min_entropy(prior):
    """Bits of one-try guessing resistance: -log2 of the largest probability."""
    return -log2_fraction(prior.max_prob)


def posterior_success(prior, matrix):
    """Exact probability that a one-try attacker guesses the input after observing.

    Computed as the sum over columns of the largest joint entry
    ``p(row) * p(col | row)``, which equals the expected best posterior.
    """
    if len(prior) != matrix.rows:
        raise ValueError("prior length must match the matrix rows")
    total = Fraction(0)
    for j in range(matrix.cols):
        total += max(matrix.entries[i][j] * prior.probs[i] for i in range(matrix.rows))
    return total


def posterior_min_entropy(prior, matrix):
    return -log2_fraction(posterior_success(prior, matrix))


def leakage(prior, matrix):
    """Min-entropy leakage in bits: prior minus posterior guessing entropy.

    Evaluated as a single log of the exact success ratio, so independence
    gives exactly 0.0.
    """
    ratio = posterior_success(prior, matrix) / prior.max_prob
    return log2_fraction(ratio)


def column_maxima_sum(matrix):
    """Exact sum of the column maxima (the quantity whose log is the capacity)."""
    return sum(matrix.column_maxima, Fraction(0))


def min_capacity(matrix):
    """Largest possible leakage over all priors, in bits.

    Attained at the uniform prior; equals log2 of the column-maxima sum.
    """
    return log2_fraction(column_maxima_sum(matrix))
