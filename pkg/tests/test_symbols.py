import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from fusioninv.catalog import repds3_zero_pattern, z3_remark_monomials
from fusioninv.ring import Automorphism, FusionTriple, gamma_set
from fusioninv.symbols import (Monomial, NotAnAutomorphism, PhiIndex, Solution, SolutionDomainError,
                               ZeroGaugeEntry, apply_automorphism, apply_gauge, compose_gauges, dump_solution,
                               load_solution, pentagon_instances, phi_set, sample_normalized_gauge,
                               verify_solution, zero_set, zeros_from_dict, zeros_to_dict)
from reference_data import GOLDEN, P, brute_force_pentagon_residual, brute_force_phi


def test_phi_fib_order(fib):
    phis = phi_set(fib)
    assert len(phis) == 15
    assert phis[0] == P("1", "1", "1", "1", "1", "1")
    assert phis[-1] == P("t", "t", "t", "t", "t", "t")
    assert set(phis) == set(brute_force_phi(fib))


def test_phi_trivial(trivial):
    assert phi_set(trivial) == [PhiIndex("1", "1", "1", "1", "1", "1")]


def test_phi_z3_one_per_triple(z3):
    phis = phi_set(z3)
    assert len(phis) == 27
    assert set(phis) == set(brute_force_phi(z3))
    assert len({(p.a, p.b, p.c) for p in phis}) == 27


def test_phi_repds3_matches_brute_force(repds3):
    phis = phi_set(repds3)
    assert len(phis) == len(set(phis)) == 2948
    assert set(phis) == set(brute_force_phi(repds3))


def test_pentagon_trivial(trivial):
    (eq,) = pentagon_instances(trivial)
    assert len(eq.lhs) == 1 and len(eq.rhs) == 1
    one = PhiIndex(*"111111")
    assert eq.lhs[0] == (one, one) and eq.rhs[0] == (one, one, one)


def test_pentagon_fib_count(fib):
    eqs = pentagon_instances(fib)
    # regression constant, matching the brute-force enumeration in the oracle below
    assert len(eqs) == 50
    assert any(len(eq.rhs) == 2 and set(eq.internal) == {"1", "tau"} for eq in eqs)
    assert len({eq.outer for eq in eqs}) == len(eqs)


def test_pentagon_z3_single_terms(z3):
    eqs = pentagon_instances(z3)
    assert len(eqs) == 81
    assert all(len(eq.rhs) == 1 and len(eq.lhs) == 1 for eq in eqs)


def test_pentagon_instances_agree_with_brute_force(fib, fib_sol):
    worst = max(abs(eq.residual(fib_sol.values)) for eq in pentagon_instances(fib))
    assert worst < mpmath.mpf(10) ** -40
    assert brute_force_pentagon_residual(fib, fib_sol.values) < mpmath.mpf(10) ** -40


def test_fixtures_verify(fib, fib_sol, yanglee_sol, trivial, trivial_sol):
    assert verify_solution(fib, fib_sol, 1e-9).ok
    assert verify_solution(fib, yanglee_sol, 1e-9).ok
    assert verify_solution(trivial, trivial_sol, 1e-9).ok


def test_fixture_values(fib_sol, yanglee_sol):
    assert abs(fib_sol[P("t", "t", "t", "t", "1", "1")] - 1 / GOLDEN) < 1e-40
    assert abs(fib_sol[P("t", "t", "t", "t", "t", "t")] + 1 / GOLDEN) < 1e-40
    # Yang–Lee is the conjugate: 1/φ' = -φ
    assert abs(yanglee_sol[P("t", "t", "t", "t", "1", "1")] + GOLDEN) < 1e-40


def test_perturbed_fixture_fails(fib, fib_sol):
    phi = P("t", "t", "t", "t", "t", "t")
    bad = fib_sol.replace(values={**fib_sol.values, phi: mpmath.mpc(0.5)})
    report = verify_solution(fib, bad, 1e-9)
    assert not report.ok
    assert max(r for _, r in report.pentagon_violations) > 1e-3


def test_unit_and_invertibility_checks(fib, fib_sol):
    unit_phi = P("t", "1", "t", "t", "t", "t")
    report = verify_solution(fib, fib_sol.replace(values={**fib_sol.values, unit_phi: mpmath.mpc(2)}))
    assert [p for p, _ in report.unit_violations] == [unit_phi]
    # a singular F-matrix: zero out a row of F_{τττ}^τ
    vals = dict(fib_sol.values)
    vals[P("t", "t", "t", "t", "1", "1")] = mpmath.mpc(0)
    vals[P("t", "t", "t", "t", "1", "t")] = mpmath.mpc(0)
    report = verify_solution(fib, fib_sol.replace(values=vals))
    assert ("tau", "tau", "tau", "tau") in [b for b, _ in report.singular_blocks]


def test_vanishing_check(fib, fib_sol):
    phi = P("t", "t", "t", "t", "1", "1")  # Φ_{ττ*τ}^{τ;11}
    report = verify_solution(fib, fib_sol.replace(values={**fib_sol.values, phi: mpmath.mpc(0)}))
    assert phi in report.vanishing_violations


def test_domain_errors(fib, fib_sol, trivial):
    vals = dict(fib_sol.values)
    del vals[P("1", "1", "1", "1", "1", "1")]
    with pytest.raises(SolutionDomainError, match="missing"):
        verify_solution(fib, fib_sol.replace(values=vals))
    with pytest.raises(SolutionDomainError):
        verify_solution(trivial, fib_sol)


def test_solution_file_round_trip(tmp_path, fib, fib_sol):
    path = tmp_path / "fib.json"
    dump_solution(fib_sol, path, "fib")
    again = load_solution(path, fib)
    assert all(abs(again[p] - fib_sol[p]) < 1e-45 for p in phi_set(fib))
    data = json.loads(path.read_text())
    data["values"].pop()
    path.write_text(json.dumps(data))
    with pytest.raises(SolutionDomainError):
        load_solution(path, fib)


def test_zero_sets(fib, fib_sol):
    assert zero_set(fib_sol) == frozenset()
    phi = P("1", "t", "t", "t", "t", "t")
    tiny = fib_sol.replace(values={**fib_sol.values, phi: mpmath.mpc("1e-30")})
    assert zero_set(tiny) == {phi}
    assert zeros_from_dict(fib, zeros_to_dict(fib, {phi})) == {phi}


def test_identity_gauge_changes_nothing(fib, fib_sol):
    g = {t: 1 for t in gamma_set(fib)}
    moved = apply_gauge(fib_sol, g)
    assert all(moved[p] == fib_sol[p] for p in phi_set(fib))


def test_gauge_formula_and_s6(fib, fib_sol):
    g = {FusionTriple("tau", "tau", "tau"): 2}
    moved = apply_gauge(fib_sol, g)
    # Φ_{τττ}^{τ;1τ}: g_ττ^1 g_1τ^τ / (g_ττ^τ g_ττ^τ) = 1/4
    phi = P("t", "t", "t", "t", "1", "t")
    assert abs(moved[phi] - fib_sol[phi] / 4) < 1e-45
    # Φ_{τττ}^{τ;τ1}: g_ττ^τ g_ττ^τ / (g_ττ^1 g_τ1^τ) = 4
    phi = P("t", "t", "t", "t", "t", "1")
    assert abs(moved[phi] - 4 * fib_sol[phi]) < 1e-45
    s6 = P("t", "t", "t", "t", "t", "t")
    assert moved[s6] == fib_sol[s6]


def test_any_normalized_gauge_fixes_trivial(trivial, trivial_sol):
    g = sample_normalized_gauge(trivial, 3)
    assert apply_gauge(trivial_sol, g).values == trivial_sol.values


def test_zero_gauge_entry_rejected(fib, fib_sol):
    with pytest.raises(ZeroGaugeEntry):
        apply_gauge(fib_sol, {FusionTriple("tau", "tau", "1"): 0})


def test_sample_gauge_normalized_and_deterministic(fib):
    g = sample_normalized_gauge(fib, 11)
    for t in (("1", "1", "1"), ("1", "tau", "tau"), ("tau", "1", "tau")):
        assert g[FusionTriple(*t)] == 1
    assert g[FusionTriple("tau", "tau", "1")] != 0 and g[FusionTriple("tau", "tau", "tau")] != 0
    assert sample_normalized_gauge(fib, 11) == g


def test_hundred_gauges_are_zero_free(repds3):
    for seed in range(100):
        g = sample_normalized_gauge(repds3, seed)
        assert len(g) == len(gamma_set(repds3))
        for v in g.values():
            assert v != 0 and isinstance(v, Fraction)
            assert 1 <= abs(v.numerator) <= 100 and v.denominator <= 100


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_gauge_action_composes(s1, s2):
    from fusioninv.catalog import builtin_ring, builtin_solution
    fib = builtin_ring("fib")
    sol = builtin_solution("fib", fib)
    g, h = sample_normalized_gauge(fib, s1), sample_normalized_gauge(fib, s2)
    twice = apply_gauge(apply_gauge(sol, g), h)
    once = apply_gauge(sol, compose_gauges(g, h))
    assert all(abs(twice[p] - once[p]) < 1e-30 for p in phi_set(fib))
    assert zero_set(twice) == zero_set(sol)


def test_gauged_fixture_still_verifies(fib, fib_sol):
    eqs = pentagon_instances(fib)
    for seed in range(100):
        moved = apply_gauge(fib_sol, sample_normalized_gauge(fib, seed))
        assert verify_solution(fib, moved, 1e-9, eqs).ok, seed
        assert zero_set(moved) == zero_set(fib_sol)


def test_identity_automorphism(fib, fib_sol):
    rho = Automorphism.identity(fib)
    assert apply_automorphism(fib_sol, rho).values == fib_sol.values
    m = Monomial.of(P("t", "t", "t", "t", "t", "t"))
    assert apply_automorphism(m, rho, fib) == m


def test_z3_remark_monomials(z3):
    m1, m2 = z3_remark_monomials(z3)
    expected = Monomial.of(PhiIndex("w2", "w2", "w2", "1", "w", "w"), PhiIndex("w2", "w", "w2", "w2", "1", "1"),
                           PhiIndex("w2", "1", "w2", "w", "w2", "w2"))
    assert m2 == expected
    rho = Automorphism.from_cycles(z3, [("w", "w2")])
    assert apply_automorphism(m2, rho, z3) == m1


def test_automorphism_action_on_zero_pattern(repds3):
    sigma = Automorphism.from_cycles(repds3, [("b2", "b3")])
    z = apply_automorphism(repds3_zero_pattern(1), sigma, repds3)
    # (b2 b3) turns the pair set {12, 21, 33, 44} into {13, 31, 22, 44}
    assert PhiIndex("b1", "a+", "b3", "a+", "a+", "a-") in z
    assert PhiIndex("b1", "a+", "b2", "a+", "a+", "a-") not in z
    assert PhiIndex("b2", "a+", "b2", "a+", "a+", "a-") in z
    assert len(z) == len(repds3_zero_pattern(1))


def test_automorphism_rejects_non_automorphism(z3):
    with pytest.raises(NotAnAutomorphism):
        apply_automorphism(PhiIndex(*"111111"), Automorphism.from_cycles(z3, [("1", "w")]), z3)


def test_automorphism_action_is_a_group_action(z3, repds3, repds3_group):
    from reference_data import z3_cocycle_solution
    sol = z3_cocycle_solution(z3, 1)
    rho = Automorphism.from_cycles(z3, [("w", "w2")])
    back = apply_automorphism(apply_automorphism(sol, rho), rho)
    assert back.values == sol.values
    z = repds3_zero_pattern(1)
    a, b = repds3_group[5], repds3_group[17]
    assert apply_automorphism(apply_automorphism(z, b, repds3), a, repds3) == apply_automorphism(z, a * b, repds3)


def test_automorphism_commutes_with_zero_set(z3):
    from reference_data import z3_cocycle_solution
    sol = z3_cocycle_solution(z3, 2)
    phi = PhiIndex("w", "w", "w", "1", "w2", "w2")
    sol = sol.replace(values={**sol.values, phi: mpmath.mpc(0)})
    rho = Automorphism.from_cycles(z3, [("w", "w2")])
    assert zero_set(apply_automorphism(sol, rho)) == apply_automorphism(zero_set(sol), rho, z3)


def test_cocycle_oracle_solutions_verify(z3):
    from reference_data import z3_cocycle_solution
    for p in range(3):
        sol = z3_cocycle_solution(z3, p)
        assert isinstance(sol, Solution)
        assert verify_solution(z3, sol).ok
        assert brute_force_pentagon_residual(z3, sol.values) < 1e-40
