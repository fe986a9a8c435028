"""Graph construction, distances and symmetry classification."""

import itertools
from collections import deque

import pytest

from dpchannel import (
    AutomorphismFamily,
    DisconnectedGraphError,
    Graph,
    SearchBudgetError,
    SizeCapError,
    UNREACHABLE,
    automorphism_group,
    build_clique,
    build_cycle,
    build_family,
    build_hamming,
    build_path,
    build_petersen,
    common_profile,
    distance_profile,
    distances,
    hamming_translation_family,
    is_distance_regular,
    single_orbit_automorphism,
    verify_family,
    vt_plus_certificate,
)

STAR_K13 = Graph(4, {(0, 1), (0, 2), (0, 3)})


def independent_bfs(edges, n, source):
    """Plain BFS written here, independent of the library's implementation."""
    adj = {v: set() for v in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


class TestConstructors:
    def test_hamming_3_2_is_the_cube(self):
        g = build_hamming(3, 2)
        assert g.n == 8
        assert set(g.degrees) == {3}
        assert distances(g).diameter == 3
        assert g.labels[0] == "000" and g.labels[7] == "111"

    def test_hamming_1_2_is_a_single_edge(self):
        g = build_hamming(1, 2)
        assert g.n == 2
        assert g.edge_list == ((0, 1),)

    def test_hamming_2_3_against_brute_force_enumeration(self):
        # oracle: rebuild the product domain from scratch and compare
        g = build_hamming(2, 3)
        tuples = list(itertools.product(range(3), repeat=2))
        expected = set()
        for a, b in itertools.combinations(range(9), 2):
            diff = sum(x != y for x, y in zip(tuples[a], tuples[b]))
            if diff == 1:
                expected.add((a, b))
        assert set(g.edge_list) == expected
        assert g.n == 9
        assert set(g.degrees) == {4}
        reach = independent_bfs(expected, 9, 0)
        assert max(reach.values()) == 2

    def test_hamming_size_cap(self):
        with pytest.raises(SizeCapError):
            build_hamming(13, 2)
        assert build_hamming(13, 2, size_cap=10_000).n == 8192

    @pytest.mark.parametrize("u, v", [(0, 2), (1, 1), (-1, 3)])
    def test_hamming_argument_errors(self, u, v):
        with pytest.raises(ValueError):
            build_hamming(u, v)

    def test_clique_6(self):
        g = build_clique(6)
        assert len(g.edge_list) == 15
        assert distances(g).diameter == 1

    def test_cycle_6(self):
        g = build_cycle(6)
        assert distances(g).diameter == 3
        assert distance_profile(g).counts == (1, 2, 2, 1)

    def test_petersen(self):
        g = build_petersen()
        assert g.n == 10
        assert set(g.degrees) == {3}
        assert distances(g).diameter == 2
        assert distance_profile(g).counts == (1, 3, 6)
        # girth 5: no triangles, no 4-cycles
        adj = [set(a) for a in g.adjacency]
        for i, j in g.edge_list:
            assert not (adj[i] & adj[j])
        for i, j in itertools.combinations(range(10), 2):
            assert len(adj[i] & adj[j]) <= 1

    @pytest.mark.parametrize("builder, n", [(build_clique, 1), (build_cycle, 2)])
    def test_minimum_sizes(self, builder, n):
        with pytest.raises(ValueError):
            builder(n)

    def test_family_specs(self):
        assert build_family("clique:6").n == 6
        assert build_family("hamming:2,3").n == 9
        assert build_family("petersen").n == 10
        assert build_family("path:3").n == 3
        with pytest.raises(ValueError):
            build_family("torus:3")
        with pytest.raises(ValueError):
            build_family("clique:x")

    def test_graph_validation(self):
        with pytest.raises(ValueError):
            Graph(3, {(0, 0)})
        with pytest.raises(ValueError):
            Graph(3, {(0, 5)})
        with pytest.raises(ValueError):
            Graph(2, {(0, 1)}, labels=("a",))

    def test_graph_json_roundtrip(self):
        g = build_hamming(2, 2)
        again = Graph.from_json(g.to_json())
        assert again == g


class TestDistances:
    def test_hamming_distance_is_graph_distance(self):
        g = build_hamming(3, 2)
        assert distances(g).d(0, 7) == 3  # 000 vs 111

    def test_cycle_antipodal(self):
        assert distances(build_cycle(6)).d(0, 3) == 3

    @pytest.mark.parametrize("g", [
        build_hamming(2, 3), build_cycle(5), build_petersen(), STAR_K13,
    ])
    def test_symmetric_zero_diagonal_lipschitz(self, g):
        dm = distances(g)
        for i in range(g.n):
            assert dm.d(i, i) == 0
            for j in range(g.n):
                assert dm.d(i, j) == dm.d(j, i)
        for i, h in g.edge_list:
            for j in range(g.n):
                assert abs(dm.d(i, j) - dm.d(h, j)) <= 1

    def test_disconnected_sentinels(self):
        g = Graph(4, {(0, 1), (2, 3)})
        dm = distances(g)
        assert dm.d(0, 2) == UNREACHABLE
        assert not dm.is_connected
        assert dm.diameter == 1
        with pytest.raises(DisconnectedGraphError):
            distance_profile(g)
        with pytest.raises(DisconnectedGraphError):
            is_distance_regular(g)


class TestProfiles:
    def test_square_profile(self):
        g = build_hamming(2, 2)
        for base in range(4):
            assert distance_profile(g, base).counts == (1, 2, 1)

    @pytest.mark.parametrize("u, v", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3)])
    def test_hamming_profile_is_binomial(self, u, v):
        from math import comb

        g = build_hamming(u, v)
        expected = tuple(comb(u, d) * (v - 1) ** d for d in range(u + 1))
        for base in range(g.n):
            assert distance_profile(g, base).counts == expected

    def test_clique_profile(self):
        assert distance_profile(build_clique(6)).counts == (1, 5)

    def test_common_profile_detects_base_dependence(self):
        assert common_profile(build_path(3)) is None
        assert common_profile(build_cycle(5)).counts == (1, 2, 2)


class TestDistanceRegularity:
    def test_petersen_intersection_array(self):
        array = is_distance_regular(build_petersen())
        assert array is not None
        assert array.b == (3, 2)
        assert array.c == (1, 1)

    @pytest.mark.parametrize("g", [build_petersen(), build_cycle(6), build_hamming(2, 3)])
    def test_returned_array_satisfies_defining_counts(self, g):
        # oracle: recount the strata for every ordered pair from scratch
        array = is_distance_regular(g)
        assert array is not None
        dm = distances(g)
        for x in range(g.n):
            for y in range(g.n):
                i = dm.d(x, y)
                closer = sum(1 for z in g.neighbors(y) if dm.d(x, z) == i - 1)
                further = sum(1 for z in g.neighbors(y) if dm.d(x, z) == i + 1)
                if i >= 1:
                    assert closer == array.c[i - 1]
                if i < dm.diameter:
                    assert further == array.b[i]

    def test_star_is_not_distance_regular(self):
        assert is_distance_regular(STAR_K13) is None

    def test_even_cycle_is_distance_regular_odd_path_is_not(self):
        assert is_distance_regular(build_cycle(6)) is not None
        assert is_distance_regular(build_path(4)) is None

    @pytest.mark.parametrize("u", [1, 2, 3, 4])
    @pytest.mark.parametrize("v", [2, 3])
    def test_hamming_classification(self, u, v):
        g = build_hamming(u, v)
        assert is_distance_regular(g) is not None
        cert = vt_plus_certificate(g)
        assert cert.status == "yes"
        assert verify_family(g, cert.family)


class TestVertexTransitivity:
    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
    def test_cycles_certified_by_rotation(self, n):
        cert = vt_plus_certificate(build_cycle(n))
        assert cert.status == "yes"
        assert cert.method == "single-orbit powers"

    def test_hamming_certified_by_translations(self):
        g = build_hamming(3, 2)
        cert = vt_plus_certificate(g)
        assert cert.status == "yes"
        assert cert.method == "coordinate translations"

    def test_path3_is_ruled_out(self):
        cert = vt_plus_certificate(build_path(3))
        assert cert.status == "no"
        assert cert.family is None

    def test_path3_automorphism_group_is_the_flip(self):
        group = automorphism_group(build_path(3))
        assert sorted(group) == [(0, 1, 2), (2, 1, 0)]

    def test_petersen_automorphism_group_order(self):
        assert len(automorphism_group(build_petersen())) == 120

    def test_petersen_admits_a_sharply_transitive_family(self):
        # not a Cayley graph, yet a sharply transitive *set* exists;
        # the constructive search settles it either way, so pin the answer
        g = build_petersen()
        cert = vt_plus_certificate(g)
        assert cert.status == "yes"
        assert verify_family(g, cert.family)

    def test_yes_answers_always_verify(self):
        for spec in ("clique:5", "cycle:7", "hamming:2,3"):
            g = build_family(spec)
            cert = vt_plus_certificate(g)
            assert cert.status == "yes"
            assert verify_family(g, cert.family)

    def test_budget_exhaustion_reports_unknown(self):
        cert = vt_plus_certificate(build_petersen(), effort=5)
        assert cert.status == "unknown"

    def test_irregular_graph_is_refused_structurally(self):
        assert vt_plus_certificate(STAR_K13).status == "no"


class TestSingleOrbit:
    def test_present_on_small_product_domains(self):
        assert single_orbit_automorphism(build_hamming(1, 2)) is not None
        assert single_orbit_automorphism(build_hamming(2, 2)) is not None
        # single-participant domains are cliques: any rotation works
        assert single_orbit_automorphism(build_hamming(1, 3)) is not None

    @pytest.mark.parametrize("u, v", [(3, 2), (2, 3)])
    def test_absent_on_larger_product_domains(self, u, v):
        assert single_orbit_automorphism(build_hamming(u, v)) is None

    def test_budget_error(self):
        with pytest.raises(SearchBudgetError):
            single_orbit_automorphism(build_cycle(12), effort=2)


class TestVerifyFamily:
    def test_cycle4_rotations(self):
        g = build_cycle(4)
        rot = (1, 2, 3, 0)
        fam = AutomorphismFamily(((0, 1, 2, 3), rot,
                                  tuple(rot[rot[v]] for v in range(4)),
                                  tuple(rot[rot[rot[v]]] for v in range(4))))
        assert verify_family(g, fam)

    def test_repeated_identity_fails_column_property(self):
        g = build_cycle(4)
        fam = AutomorphismFamily(((0, 1, 2, 3),) * 4)
        assert not verify_family(g, fam)

    def test_translations_verify_on_square(self):
        g = build_hamming(2, 2)
        assert verify_family(g, hamming_translation_family(2, 2))

    def test_non_automorphism_fails(self):
        g = build_path(3)
        fam = AutomorphismFamily(((0, 1, 2), (1, 0, 2), (2, 1, 0)))
        assert not verify_family(g, fam)

    def test_length_mismatch_raises(self):
        g = build_cycle(4)
        with pytest.raises(ValueError):
            verify_family(g, AutomorphismFamily(((0, 1, 2, 3),) * 3))
