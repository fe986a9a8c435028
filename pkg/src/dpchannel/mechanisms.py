"""Noise-mechanism construction and utility evaluation.

The central construction: on a connected graph whose distance profile is
base-independent, scale r^d(i,j) by the shared normaliser
c = 1 / sum_d n_d r^d to get a row-stochastic channel.  Its adjacent-row
ratios are exactly e^epsilon, so privacy holds with equality, and under the
uniform prior its binary utility is exactly c, the theoretical ceiling.
The same kernel applied to the secret domain maximises leakage instead
(attacker's and user's optima coincide in the binary picture).

Graphs whose profile depends on the base vertex are refused rather than
silently row-normalised: per-row normalisation constants break the ratio
constraint between rows.

Utilities are expected gains over a guess strategy; the binary gain with an
optimal guess collapses to the attacker's posterior success probability,
an identity the tests cross-check module against module.
"""

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .channels import (
    ChannelMatrix,
    PrivacyParameter,
    as_fraction,
    posterior_success,
)
from .graphs import DisconnectedGraphError, Graph, distance_profile, distances


class BaseDependentProfileError(ValueError):
    """The graph's distance profile varies with the base vertex.

    A single shared normaliser cannot make the distance kernel
    row-stochastic on such graphs, and per-row constants would break the
    adjacent-ratio guarantee, so synthesis refuses with a diagnostic.
    """


@dataclass(frozen=True)
class GainFunction:
    """Reward for guessing y' when the true answer is y.

    The binary kind pays 1 for exact recovery and 0 otherwise; the table
    kind carries an explicit |Y| x |Y| matrix ``table[guess][truth]``.
    """

    kind: str
    table: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("binary", "table"):
            raise ValueError(f"unknown gain kind {self.kind!r}")
        if (self.kind == "table") != (self.table is not None):
            raise ValueError("a gain table is attached exactly to the table kind")
        if self.table is not None:
            table = tuple(tuple(as_fraction(x) for x in row) for row in self.table)
            if any(len(row) != len(table) for row in table):
                raise ValueError("gain table must be square")
            object.__setattr__(self, "table", table)

    @classmethod
    def binary(cls):
        return cls("binary")

    @classmethod
    def from_table(cls, rows):
        return cls("table", tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class GuessStrategy:
    """Either a fixed total map from outputs to answers, or the optimal marker."""

    mapping: tuple | None = None

    def __post_init__(self):
        if self.mapping is not None:
            object.__setattr__(self, "mapping", tuple(int(x) for x in self.mapping))

    @classmethod
    def optimal(cls):
        return cls(None)

    @classmethod
    def from_map(cls, seq):
        return cls(tuple(seq))

    @property
    def is_optimal(self):
        return self.mapping is None


@dataclass(frozen=True)
class MechanismBundle:
    """A synthesised randomiser: answer graph, channel, level, normaliser."""

    graph: Graph
    matrix: ChannelMatrix
    pp: PrivacyParameter
    c: Fraction

    def to_dict(self):
        return {
            "graph": self.graph.to_dict(),
            "matrix": self.matrix.to_dict(),
            "r_num": self.pp.r.numerator,
            "r_den": self.pp.r.denominator,
            "c_num": self.c.numerator,
            "c_den": self.c.denominator,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(
            Graph.from_dict(d["graph"]),
            ChannelMatrix.from_dict(d["matrix"]),
            PrivacyParameter(Fraction(d["r_num"], d["r_den"])),
            Fraction(d["c_num"], d["c_den"]),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _distance_kernel(graph, pp):
    """The c * r^distance channel, with its normaliser and profile."""
    if not graph.is_connected:
        raise DisconnectedGraphError("mechanism synthesis needs a connected graph")
    base_profile = distance_profile(graph, 0)
    for base in range(1, graph.n):
        if distance_profile(graph, base).counts != base_profile.counts:
            raise BaseDependentProfileError(
                "distance profile differs between vertices "
                f"{graph.label(0)} {tuple(base_profile.counts)} and "
                f"{graph.label(base)} {tuple(distance_profile(graph, base).counts)}; "
                "a shared normaliser cannot make the distance kernel row-stochastic")
    r = pp.r
    core = sum((n_d * r ** d for d, n_d in enumerate(base_profile.counts)), Fraction(0))
    c = 1 / core
    dm = distances(graph)
    powers = [c * r ** d for d in range(dm.diameter + 1)]
    entries = [[powers[dm.d(i, j)] for j in range(graph.n)] for i in range(graph.n)]
    labels = graph.labels or tuple(str(i) for i in range(graph.n))
    matrix = ChannelMatrix.from_rows(entries, labels, labels)
    return matrix, c, base_profile


def optimal_mechanism(graph, pp):
    """Synthesise the maximum-utility channel at the requested privacy level.

    The result is exactly at the privacy boundary (every adjacent ratio is
    e^epsilon when the graph has an edge) and its uniform-prior binary
    utility equals the normaliser c, which is the utility ceiling for the
    graph's profile.
    """
    matrix, c, _ = _distance_kernel(graph, pp)
    return MechanismBundle(graph, matrix, pp, c)


def tight_leakage_matrix(graph, pp):
    """The same distance kernel, viewed as a worst-case channel on the
    secret domain: it meets the posterior-entropy floor with equality."""
    matrix, _, _ = _distance_kernel(graph, pp)
    return matrix


def utility(prior, matrix, gain=None, guess=None):
    """Expected gain of a guess strategy against the channel.

    With the binary gain and the optimal guess this is exactly the
    posterior success probability (guess the most plausible answer per
    output).  A fixed mapping must be total over the output set.  All
    arithmetic is exact.
    """
    gain = gain or GainFunction.binary()
    guess = guess or GuessStrategy.optimal()
    n, m = matrix.rows, matrix.cols
    if len(prior) != n:
        raise ValueError("prior length must match the matrix rows")
    if gain.table is not None and len(gain.table) != n:
        raise ValueError("gain table must be indexed by the answer set")
    if not guess.is_optimal:
        if len(guess.mapping) != m:
            raise ValueError("guess map must be total over the output set")
        if any(not 0 <= y < n for y in guess.mapping):
            raise ValueError("guess map targets unknown answers")

    if gain.kind == "binary":
        if guess.is_optimal:
            return posterior_success(prior, matrix)
        return sum(
            (matrix.entries[y][z] * prior.probs[y]
             for z, y in enumerate(guess.mapping)),
            Fraction(0))

    total = Fraction(0)
    for z in range(m):
        joint = [prior.probs[y] * matrix.entries[y][z] for y in range(n)]
        if guess.is_optimal:
            total += max(
                sum((joint[y] * gain.table[cand][y] for y in range(n)), Fraction(0))
                for cand in range(n))
        else:
            cand = guess.mapping[z]
            total += sum((joint[y] * gain.table[cand][y] for y in range(n)), Fraction(0))
    return total


def compose_oblivious(secret_graph, answer_map, bundle):
    """Chain a query in front of a randomiser that only sees its answer.

    ``answer_map[x]`` is the answer index the query assigns to secret x; it
    must land inside the randomiser's input rows.  The composite channel
    copies the randomiser's row for each secret.  Also returns the graph
    the secret adjacency induces on answers (two answers are adjacent when
    some adjacent secrets produce them), on which the randomiser's audit
    and the composite's audit agree.
    """
    f = tuple(int(x) for x in answer_map)
    if len(f) != secret_graph.n:
        raise ValueError("answer map must be total over the secret domain")
    if any(not 0 <= y < bundle.matrix.rows for y in f):
        raise ValueError("answer map image is not covered by the randomiser's rows")
    rows = [bundle.matrix.entries[f[x]] for x in range(secret_graph.n)]
    labels = secret_graph.labels or tuple(str(i) for i in range(secret_graph.n))
    composite = ChannelMatrix.from_rows(rows, labels, bundle.matrix.col_labels)
    induced = {(f[i], f[j]) for i, j in secret_graph.edge_list if f[i] != f[j]}
    answer_graph = Graph(bundle.graph.n, induced, bundle.graph.labels)
    return composite, answer_graph


def truncated_geometric_fixture():
    """The published truncated-geometric mechanism for the six-city election
    example, transcribed verbatim (three-decimal entries, which happen to
    sum to exactly 1 per row)."""
    labels = ("A", "B", "C", "D", "E", "F")
    rows = [
        ["0.535", "0.060", "0.052", "0.046", "0.040", "0.267"],
        ["0.465", "0.069", "0.060", "0.053", "0.046", "0.307"],
        ["0.405", "0.060", "0.069", "0.060", "0.053", "0.353"],
        ["0.353", "0.053", "0.060", "0.069", "0.060", "0.405"],
        ["0.307", "0.046", "0.053", "0.060", "0.069", "0.465"],
        ["0.267", "0.040", "0.046", "0.052", "0.060", "0.535"],
    ]
    return ChannelMatrix.from_rows(rows, labels, labels)


def f_map_from_csv(text, secret_labels, answer_labels):
    """Parse ``secret_label,answer_label`` lines into an index map."""
    secret_index = {lab: i for i, lab in enumerate(secret_labels)}
    answer_index = {lab: i for i, lab in enumerate(answer_labels)}
    mapping = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ValueError("query map lines must be 'secret,answer'")
        x, y = row[0].strip(), row[1].strip()
        if x not in secret_index:
            raise ValueError(f"unknown secret label {x!r}")
        if y not in answer_index:
            raise ValueError(f"unknown answer label {y!r}")
        if secret_index[x] in mapping:
            raise ValueError(f"secret label {x!r} mapped twice")
        mapping[secret_index[x]] = answer_index[y]
    if len(mapping) != len(secret_labels):
        raise ValueError("query map must cover every secret exactly once")
    return tuple(mapping[i] for i in range(len(secret_labels)))
