"""Canonical-form rewriting of privacy-constrained channels.

A channel with at least as many outputs as inputs can be rewritten, without
losing privacy or changing a uniform-prior attacker's success probability,
into progressively more symmetric shapes:

1. diagonal stage: merge every column into the diagonal position of the row
   holding its maximum (ties to the lowest row index).  Summing columns
   whose maxima share a row adds the maxima, so the column-maxima sum (and
   with it the uniform-prior success) is preserved exactly, and a sum of
   ratios each within e^epsilon stays within e^epsilon.

2. symmetric stage: average the diagonal-stage matrix over the graph's
   symmetry.  For a distance-regular graph each entry becomes the mean of
   its distance class; for a graph with a sharply transitive automorphism
   family each entry becomes the mean over the family's relabelings.
   Either way the diagonal entries all become the global maximum, equal to
   the mean of the previous diagonal.

Both guarantees are exact rational identities, re-verified by the test
suite on seeded random privacy-feasible channels rather than trusted.
"""

from dataclasses import dataclass
from fractions import Fraction

from .channels import ChannelMatrix
from .graphs import (
    DEFAULT_SEARCH_EFFORT,
    distance_profile,
    distances,
    is_distance_regular,
    verify_family,
    vt_plus_certificate,
)

STAGE_DIAGONAL = "diagonal"
STAGE_SYMMETRIC = "symmetric"


class SymmetryRequiredError(ValueError):
    """The graph carries neither symmetry the averaging step relies on."""


@dataclass(frozen=True)
class CanonicalForm:
    """A rewritten channel plus the provenance of how it was obtained.

    ``merge_map[j]`` records the row whose diagonal column absorbed input
    column j.  ``symmetry`` names the averaging used for the symmetric
    stage, None before symmetrisation.
    """

    matrix: ChannelMatrix
    stage: str
    merge_map: tuple | None = None
    symmetry: str | None = None

    def __post_init__(self):
        if self.stage not in (STAGE_DIAGONAL, STAGE_SYMMETRIC):
            raise ValueError(f"unknown stage {self.stage!r}")
        if self.merge_map is not None:
            object.__setattr__(self, "merge_map", tuple(self.merge_map))
        m = self.matrix
        n = m.rows
        if m.cols < n:
            raise ValueError("canonical forms carry at least as many columns as rows")
        for i in range(n):
            if m.entries[i][i] != m.column_maxima[i]:
                raise ValueError("diagonal entries must carry their column maximum")
        for j in range(n, m.cols):
            if any(m.entries[i][j] != 0 for i in range(n)):
                raise ValueError("columns beyond the square block must be zero")
        if self.stage == STAGE_SYMMETRIC:
            diag = {m.entries[i][i] for i in range(n)}
            if len(diag) != 1:
                raise ValueError("symmetric stage requires equal diagonal entries")
            if max(m.column_maxima) != next(iter(diag)):
                raise ValueError("symmetric stage diagonal must be the global maximum")

    @property
    def global_max(self):
        return max(self.matrix.column_maxima)


def to_diagonal_form(matrix, graph):
    """Merge columns onto the diagonal of their maximising row.

    Requires as many outputs as inputs.  Rows keep their order; column j of
    the result is the sum of all input columns whose maximum sits in row j,
    or zero if no column elected row j.  Surplus output columns stay as
    explicit zero columns so the shape is unchanged.
    """
    n, m = matrix.rows, matrix.cols
    if graph.n != n:
        raise ValueError("matrix rows must match the graph's vertex count")
    if n > m:
        raise ValueError("diagonalisation needs at least as many outputs as inputs")
    assign = []
    for j in range(matrix.cols):
        col = matrix.column(j)
        assign.append(col.index(max(col)))
    entries = [[Fraction(0)] * m for _ in range(n)]
    for j, target in enumerate(assign):
        for h in range(n):
            entries[h][target] += matrix.entries[h][j]
    col_labels = list(matrix.row_labels) + [f"z{k}" for k in range(n, m)]
    merged = ChannelMatrix.from_rows(entries, matrix.row_labels, col_labels)
    return CanonicalForm(merged, STAGE_DIAGONAL, merge_map=tuple(assign))


def _require_diagonal(cf):
    if cf.stage != STAGE_DIAGONAL:
        raise ValueError("symmetrisation expects a diagonal-stage canonical form")


def symmetrize_distance_regular(cf, graph, array):
    """Average each entry over its distance class.

    ``array`` is the intersection-array witness; it is re-verified against
    the graph, and a mismatch or a non-distance-regular graph is a
    precondition error.
    """
    _require_diagonal(cf)
    check = is_distance_regular(graph)
    if check is None:
        raise ValueError("the graph is not distance-regular")
    if check != array:
        raise ValueError("intersection array does not match the graph")
    n, m = graph.n, cf.matrix.cols
    dm = distances(graph)
    counts = distance_profile(graph, 0).counts
    sums = [Fraction(0)] * (dm.diameter + 1)
    old = cf.matrix.entries
    for h in range(n):
        drow = dm.dist[h]
        for l in range(n):
            sums[drow[l]] += old[h][l]
    avg = [sums[d] / (n * counts[d]) for d in range(dm.diameter + 1)]
    entries = [[avg[dm.d(i, j)] if j < n else Fraction(0) for j in range(m)]
               for i in range(n)]
    matrix = ChannelMatrix.from_rows(entries, cf.matrix.row_labels, cf.matrix.col_labels)
    return CanonicalForm(matrix, STAGE_SYMMETRIC, cf.merge_map, "distance_regular")


def symmetrize_vt_plus(cf, graph, family):
    """Average each entry over the automorphism family's relabelings.

    The family is re-verified with :func:`verify_family`; an invalid
    certificate is a precondition error.  Because the family moves any
    fixed vertex through every position exactly once, all diagonal entries
    of the result equal the mean of the previous diagonal.
    """
    _require_diagonal(cf)
    if not verify_family(graph, family):
        raise ValueError("automorphism family failed verification")
    n, m = graph.n, cf.matrix.cols
    old = cf.matrix.entries
    entries = [[Fraction(0)] * m for _ in range(n)]
    for perm in family.perms:
        for i in range(n):
            row = old[perm[i]]
            target = entries[i]
            for j in range(n):
                target[j] += row[perm[j]]
    frac_n = Fraction(1, n)
    entries = [[x * frac_n for x in row] for row in entries]
    matrix = ChannelMatrix.from_rows(entries, cf.matrix.row_labels, cf.matrix.col_labels)
    return CanonicalForm(matrix, STAGE_SYMMETRIC, cf.merge_map, "vt_plus")


def canonicalize(matrix, graph, effort=DEFAULT_SEARCH_EFFORT):
    """Full pipeline: diagonalise, then symmetrise with whichever symmetry holds.

    Distance-regularity is preferred because its certificate is cheap to
    recompute; a sharply transitive family is used otherwise.  Raises
    ``SymmetryRequiredError`` when neither applies (or could be certified
    within the search budget).
    """
    cf = to_diagonal_form(matrix, graph)
    array = is_distance_regular(graph)
    if array is not None:
        return symmetrize_distance_regular(cf, graph, array)
    cert = vt_plus_certificate(graph, effort)
    if cert.status == "yes":
        return symmetrize_vt_plus(cf, graph, cert.family)
    raise SymmetryRequiredError(
        "graph is neither distance-regular nor certifiably vertex-transitive "
        f"(certificate search said {cert.status!r})")
