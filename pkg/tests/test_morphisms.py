import random

import pytest
from hypothesis import given, settings

from helpers import (
    badness_inclusion,
    badness_middle,
    brute_homs,
    compose_maps,
    exhaustive_homs,
    is_identity,
    quivers,
    random_morphism,
    random_quiver,
)
from quiverlab import (
    Budget,
    BudgetExceeded,
    PrecondViolation,
    QuiverMorphism,
    TotalityViolation,
    check_morphism,
    cycle_quiver,
    enumerate_homs,
    extend_morphism,
    find_retraction,
    find_section,
    is_monic,
    loaded_quiver,
    path_quiver,
    phi_n,
)
from quiverlab.morphisms import (
    count_homs,
    find_isomorphism,
    identity,
    verify_retraction_certificate,
    verify_section_certificate,
)


def collapse(g, target):
    """The constant map onto a one-vertex, one-loop quiver."""
    (v,) = target.vertices
    (e,) = target.edges
    return QuiverMorphism(g, target, {x: v for x in g.vertices}, {f: e for f in g.edges})


class TestCheckMorphism:
    def test_identity(self):
        assert check_morphism(identity(cycle_quiver(3))).ok

    def test_phi_n(self):
        assert check_morphism(phi_n(5)).ok

    def test_broken_square(self):
        p2, c2 = path_quiver(2), cycle_quiver(2)
        m = QuiverMorphism(p2, c2, {"a_1": "a_2", "a_2": "a_1"}, {"x_1": "x_1"})
        result = check_morphism(m)
        assert not result and result.edge == "x_1" and result.square == "source"

    def test_totality(self):
        p2, c2 = path_quiver(2), cycle_quiver(2)
        with pytest.raises(TotalityViolation):
            check_morphism(QuiverMorphism(p2, c2, {"a_1": "a_1"}, {"x_1": "x_1"}))
        with pytest.raises(TotalityViolation):
            check_morphism(QuiverMorphism(p2, c2, {"a_1": "a_1", "a_2": "zz"}, {"x_1": "x_1"}))


class TestIsMonic:
    def test_phi_n(self):
        assert is_monic(phi_n(4))

    def test_constant_map(self):
        assert not is_monic(collapse(cycle_quiver(2), cycle_quiver(1)))

    def test_identity(self):
        assert is_monic(identity(loaded_quiver(2, 2)))


class TestEnumerateHoms:
    def test_into_terminal(self):
        assert len(list(enumerate_homs(path_quiver(2), cycle_quiver(1)))) == 1

    def test_p2_endomorphisms(self):
        assert len(exhaustive_homs(path_quiver(2), path_quiver(2))) == 1
        (only,) = enumerate_homs(path_quiver(2), path_quiver(2))
        assert is_identity(only)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_cycle_into_path(self, n):
        assert list(enumerate_homs(cycle_quiver(2), path_quiver(n))) == []

    def test_limit(self):
        q = loaded_quiver(2, 2)
        assert len(list(enumerate_homs(path_quiver(3), q, limit=5))) == 5

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            list(enumerate_homs(path_quiver(4), loaded_quiver(3, 2), budget=Budget(10)))

    def test_lexicographic_order(self):
        homs = list(enumerate_homs(path_quiver(3), loaded_quiver(2, 2)))
        vectors = [m.assignment_vector() for m in homs]
        assert vectors == sorted(vectors)
        assert len(set(vectors)) == len(vectors) == 2 ** 3 * 2 ** 2

    @settings(max_examples=60, deadline=None)
    @given(quivers(3, 3), quivers(3, 4))
    def test_matches_exhaustive_count(self, g, h):
        brute = exhaustive_homs(g, h)
        found = list(enumerate_homs(g, h))
        assert len(found) == len(brute) == count_homs(g, h)
        assert sorted(m.assignment_vector() for m in found) == sorted(m.assignment_vector() for m in brute)
        assert all(check_morphism(m).ok for m in found)


class TestExtendMorphism:
    def test_forced_extension(self):
        psi = QuiverMorphism(
            path_quiver(3), cycle_quiver(3),
            {v: v for v in path_quiver(3).vertices}, {e: e for e in path_quiver(3).edges},
        )
        ext = extend_morphism(phi_n(3), psi)
        assert is_identity(ext)

    def test_absent(self):
        # no map C_2 -> P_2 exists at all, so nothing can extend id_{P_2}
        assert brute_homs(cycle_quiver(2), path_quiver(2)) == []
        assert extend_morphism(phi_n(2), identity(path_quiver(2))) is None

    def test_identity_phi(self):
        psi = next(iter(enumerate_homs(cycle_quiver(2), loaded_quiver(2))))
        assert extend_morphism(identity(cycle_quiver(2)), psi) == psi

    def test_requires_monic(self):
        c2 = cycle_quiver(2)
        phi = collapse(c2, cycle_quiver(1))
        psi = identity(c2)
        with pytest.raises(PrecondViolation):
            extend_morphism(phi, psi)

    def test_rejects_mismatched_domains(self):
        with pytest.raises(PrecondViolation):
            extend_morphism(phi_n(3), identity(path_quiver(2)))

    def test_extension_commutes_on_random_cases(self):
        rng = random.Random(7)
        for _ in range(150):
            n = rng.randint(2, 5)
            j = random_quiver(rng, 4, 6)
            phi = phi_n(n)
            for psi in enumerate_homs(phi.domain, j, limit=20):
                ext = extend_morphism(phi, psi)
                brute = any(
                    compose_maps(phi, cand) == psi
                    for cand in brute_homs(phi.codomain, j)
                )
                assert (ext is not None) == brute
                if ext is not None:
                    assert check_morphism(ext).ok
                    assert compose_maps(phi, ext) == psi


class TestRetraction:
    def test_badness_inclusion_is_section(self):
        j = badness_inclusion()
        q, cert = find_retraction(j)
        assert check_morphism(q).ok
        assert is_identity(compose_maps(j, q))
        assert not verify_section_certificate(j, cert)
        # pendant vertices collapse onto the cycle: w' with w, v' with v
        assert q.vmap["w_p"] == q.vmap["w"] and q.vmap["v_p"] == q.vmap["v"]

    def test_phi_n_is_not_a_section(self):
        assert brute_homs(cycle_quiver(3), path_quiver(3)) == []
        assert find_retraction(phi_n(3)) is None

    def test_identity(self):
        g = badness_middle()
        q, _ = find_retraction(identity(g))
        assert is_identity(q)

    def test_non_monic_rejected(self):
        assert find_retraction(collapse(cycle_quiver(2), cycle_quiver(1))) is None


class TestSection:
    def test_collapse_c2_onto_loop(self):
        assert brute_homs(cycle_quiver(1), cycle_quiver(2)) == []
        assert find_section(collapse(cycle_quiver(2), cycle_quiver(1))) is None

    def test_collapse_loaded_onto_loop(self):
        q = collapse(loaded_quiver(2), cycle_quiver(1))
        j, cert = find_section(q)
        assert is_identity(compose_maps(j, q))
        assert cert.chosen_v == {"a_1": "v_1"} and cert.chosen_e == {"x_1": "e_1_1_1"}
        assert not verify_retraction_certificate(q, cert)

    def test_identity(self):
        g = cycle_quiver(3)
        j, _ = find_section(identity(g))
        assert is_identity(j)


class TestDuality:
    def test_random_morphisms_against_brute_force(self):
        rng = random.Random(11)
        checked = 0
        while checked < 120:
            g = random_quiver(rng, 3, 4)
            h = random_quiver(rng, 4, 6)
            m = random_morphism(rng, g, h)
            if m is None:
                continue
            checked += 1
            left = any(is_identity(compose_maps(m, q)) for q in brute_homs(h, g))
            found = find_retraction(m)
            assert (found is not None) == left
            if found:
                q, cert = found
                assert is_monic(m)
                assert is_identity(compose_maps(m, q))
                assert not verify_section_certificate(m, cert)

            # m : g -> h as a candidate retraction onto h
            right = any(is_identity(compose_maps(j, m)) for j in brute_homs(h, g))
            found = find_section(m)
            assert (found is not None) == right
            if found:
                j, cert = found
                assert is_identity(compose_maps(j, m))
                assert not verify_retraction_certificate(m, cert)


class TestIsomorphism:
    def test_relabelled(self):
        assert find_isomorphism(cycle_quiver(3), cycle_quiver(3)) is not None
        assert find_isomorphism(cycle_quiver(3), path_quiver(3)) is None

    def test_parallel_edges(self):
        assert find_isomorphism(loaded_quiver(2, 2), loaded_quiver(2, 2)) is not None
        assert find_isomorphism(loaded_quiver(2, 1), loaded_quiver(1, 4)) is None
