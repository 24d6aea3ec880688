import random

import pytest

from helpers import badness_middle, projectivefail, random_blowup_spec, random_quiver, thebadcase
from quiverlab import (
    BlowupSpec,
    BlowupWitness,
    Budget,
    BudgetExceeded,
    InvalidSpec,
    Quiver,
    blowup_retraction,
    check_morphism,
    construct_blowup,
    cycle_quiver,
    find_section,
    is_isomorphic,
    is_loaded,
    loaded_quiver,
    path_quiver,
    recognize_blowup,
    verify_blowup_witness,
)
from quiverlab.blowup import identity_witness
from quiverlab.morphisms import verify_retraction_certificate


class TestConstruct:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_c1_gives_loaded(self, k):
        q, w = construct_blowup(BlowupSpec(cycle_quiver(1), {"a_1": k}))
        assert is_loaded(q) and len(q.vertices) == k
        assert is_isomorphic(q, loaded_quiver(k, 1))
        assert not verify_blowup_witness(w)

    def test_unit_sizes_reproduce_base(self):
        g = thebadcase()
        q, _ = construct_blowup(BlowupSpec(g, {v: 1 for v in g.vertices}))
        assert is_isomorphic(q, g)

    def test_p2_doubled_is_projectivefail(self):
        q, _ = construct_blowup(BlowupSpec(path_quiver(2), {"a_1": 2, "a_2": 2}))
        assert len(q.vertices) == 4 and len(q.edges) == 4
        assert is_isomorphic(q, projectivefail())

    def test_id_scheme(self):
        q, w = construct_blowup(BlowupSpec(path_quiver(2), {"a_1": 1, "a_2": 2}, {"x_1": 2}))
        assert q.vertices == ("a_1.1", "a_2.1", "a_2.2")
        assert q.edges == ("x_1.1.1.1", "x_1.1.1.2", "x_1.1.2.1", "x_1.1.2.2")
        assert w.B == {"x_1": q.edges}

    def test_per_pair_multiplicity(self):
        spec = BlowupSpec(path_quiver(2), {"a_1": 1, "a_2": 2}, {"x_1": {"1.2": 3}})
        q, _ = construct_blowup(spec)
        assert len(q.between("a_1.1", "a_2.1")) == 1
        assert len(q.between("a_1.1", "a_2.2")) == 3

    @pytest.mark.parametrize("sizes,mult", [
        ({"a_1": 0, "a_2": 1}, 1),
        ({"a_1": 1}, 1),
        ({"a_1": 1, "a_2": 1}, 0),
        ({"a_1": 1, "a_2": 1}, {"x_9": 1}),
        ({"a_1": 1, "a_2": 1}, {"x_1": {"2.1": 1}}),
    ])
    def test_invalid_spec(self, sizes, mult):
        with pytest.raises(InvalidSpec):
            BlowupSpec(path_quiver(2), sizes, mult)


class TestRecognize:
    def test_badness_middle_not_blowup_of_c2(self):
        assert recognize_blowup(cycle_quiver(2), badness_middle()) is None

    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_loaded_over_c1(self, k, m):
        w = recognize_blowup(cycle_quiver(1), loaded_quiver(k, m))
        assert w is not None and not verify_blowup_witness(w)

    def test_self(self):
        g = thebadcase()
        w = recognize_blowup(g, g)
        assert w is not None and not verify_blowup_witness(w)
        assert all(len(block) == 1 for block in w.A.values())

    def test_empty_base(self):
        assert recognize_blowup(Quiver(), Quiver()) is not None
        assert recognize_blowup(Quiver(), path_quiver(1)) is None

    def test_missing_parallel_edge(self):
        # base has a double edge; h has single edges only
        base = Quiver(["a", "b"], [("e", "a", "b"), ("f", "a", "b")])
        assert recognize_blowup(base, path_quiver(2)) is None

    def test_budget(self):
        h, _ = construct_blowup(BlowupSpec(cycle_quiver(3), {"a_1": 3, "a_2": 3, "a_3": 3}))
        with pytest.raises(BudgetExceeded):
            recognize_blowup(cycle_quiver(3), h, budget=Budget(3))

    def test_round_trip(self):
        rng = random.Random(5)
        for _ in range(200):
            base = random_quiver(rng, 4, 6, min_vertices=1)
            h, _ = construct_blowup(random_blowup_spec(rng, base))
            w = recognize_blowup(base, h)
            assert w is not None
            assert not verify_blowup_witness(w)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cycle_blowups_have_independent_classes(self, n):
        rng = random.Random(n)
        base = cycle_quiver(n)
        for _ in range(20):
            h, _ = construct_blowup(random_blowup_spec(rng, base))
            w = recognize_blowup(base, h)
            for block in w.A.values():
                assert not any(h.between(x, y) for x in block for y in block)


class TestVerifier:
    def test_detects_missing_pair(self):
        h, w = construct_blowup(BlowupSpec(path_quiver(2), {"a_1": 2, "a_2": 2}))
        thinner = h.subquiver(h.vertices, h.edges[1:])
        bad = BlowupWitness(w.base, thinner, w.A, {"x_1": thinner.edges})
        assert any("no edge" in p for p in verify_blowup_witness(bad))

    def test_detects_empty_class(self):
        g = path_quiver(2)
        bad = BlowupWitness(g, g, {"a_1": ("a_1", "a_2"), "a_2": ()}, {"x_1": ("x_1",)})
        assert verify_blowup_witness(bad)

    def test_detects_overlap(self):
        g = cycle_quiver(2)
        bad = BlowupWitness(g, g, {"a_1": ("a_1",), "a_2": ("a_1", "a_2")}, {"x_1": ("x_1",), "x_2": ("x_2",)})
        assert any("lies in" in p for p in verify_blowup_witness(bad))


class TestRetraction:
    def test_c1_collapse(self):
        _, w = construct_blowup(BlowupSpec(cycle_quiver(1), {"a_1": 2}))
        q, j = blowup_retraction(w)
        assert set(q.vmap.values()) == {"a_1"}
        assert j.vmap == {"a_1": "a_1.1"}

    def test_identity_witness(self):
        g = badness_middle()
        q, j = blowup_retraction(identity_witness(g))
        assert all(q.vmap[v] == v for v in g.vertices)
        assert all(j.emap[e] == e for e in g.edges)

    def test_projectivefail_columns(self):
        h = projectivefail()
        w = recognize_blowup(path_quiver(2), h)
        q, _ = blowup_retraction(w)
        assert q.vmap == {"l1": "a_1", "l2": "a_1", "r1": "a_2", "r2": "a_2"}

    def test_random_retractions_pass_find_section(self):
        rng = random.Random(9)
        for _ in range(100):
            base = random_quiver(rng, 4, 6, min_vertices=1)
            _, w = construct_blowup(random_blowup_spec(rng, base))
            q, j = blowup_retraction(w)
            assert check_morphism(q).ok and check_morphism(j).ok
            assert all(q.vmap[j.vmap[v]] == v for v in base.vertices)
            assert all(q.emap[j.emap[e]] == e for e in base.edges)
            found = find_section(q)
            assert found is not None
            assert not verify_retraction_certificate(q, found[1])
