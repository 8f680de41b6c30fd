import numpy as np
import pytest

from pswfkit import (Bvp2, InvalidArgumentError, build_basis, build_birkhoff, diff_operators,
                     model_problem, prolate_grid, solve_npcol, solve_pcol, solve_ppcol)


def setup(c, N):
    b = build_basis(c, N)
    g = prolate_grid(b)
    return b, g, diff_operators(b, g, rational=False), build_birkhoff(b, g)


def cubic_problem():
    # u = x^3 + 2x; u'' + 3u' - 2u = f
    u = lambda x: x ** 3 + 2 * x
    f = lambda x: 6 * x + 3 * (3 * x ** 2 + 2) - 2 * u(x)
    return Bvp2(p=lambda x: 3.0 + 0 * x, q=lambda x: -2.0 + 0 * x, f=f,
                u_minus=u(-1.0), u_plus=u(1.0), exact=u)


@pytest.mark.parametrize("solver", ["direct", "iterative"])
def test_polynomial_solution_is_exact_in_legendre_space(solver):
    b, g, ops, bb = setup(0.0, 12)
    prob = cubic_problem()
    for rep in (solve_pcol(prob, b, g, ops, solver),
                solve_ppcol(prob, b, g, ops, bb, solver),
                solve_npcol(prob, b, g, bb, solver)):
        assert rep.max_error < 1e-11


def test_schemes_agree_on_model_problem():
    b, g, ops, bb = setup(16.0, 32)
    prob = model_problem()
    u = [r.u for r in (solve_pcol(prob, b, g, ops), solve_ppcol(prob, b, g, ops, bb),
                       solve_npcol(prob, b, g, bb))]
    assert np.abs(u[0] - u[1]).max() < 1e-10
    assert np.abs(u[0] - u[2]).max() < 1e-5


def test_model_problem_accuracy_and_conditioning_at_16():
    b, g, ops, bb = setup(8.0, 16)
    prob = model_problem()
    pc = solve_pcol(prob, b, g, ops)
    pp = solve_ppcol(prob, b, g, ops, bb)
    npc = solve_npcol(prob, b, g, bb)
    assert pc.cond == pytest.approx(532, rel=0.05)
    assert pp.cond == pytest.approx(1.33, abs=0.05)
    assert 1.5 <= npc.cond <= 2.0
    for r in (pc, pp, npc):
        assert r.max_error == pytest.approx(6.78e-6, rel=0.05)


def test_iterations_bounded_for_preconditioned_schemes():
    b, g, ops, bb = setup(32.0, 64)
    prob = model_problem()
    for r in (solve_ppcol(prob, b, g, ops, bb, "iterative", compute_cond=False),
              solve_npcol(prob, b, g, bb, "iterative", compute_cond=False)):
        assert r.stats.converged and r.stats.iterations <= 8
    pc = solve_pcol(prob, b, g, ops, "iterative", compute_cond=False)
    assert pc.stats.iterations > 8


def test_model_problem_exact_solution_satisfies_equation():
    prob = model_problem()
    x = np.array([-0.7, -0.2, 0.3, 0.8])
    h = 1e-4
    u = prob.exact
    d1 = (u(x + h) - u(x - h)) / (2 * h)
    d2 = (u(x + h) - 2 * u(x) + u(x - h)) / h ** 2
    assert np.allclose(d2 + prob.p(x) * d1 + prob.q(x) * u(x), prob.f(x), atol=1e-5)


def test_report_serializes():
    b, g, ops, bb = setup(4.0, 8)
    d = solve_npcol(model_problem(), b, g, bb).to_dict()
    assert d["scheme"] == "N-PCOL" and len(d["u"]) == 9 and d["iterations"] is None


def test_complex_boundary_values():
    b, g, ops, bb = setup(0.0, 10)
    u = lambda x: (1 + 2j) * x ** 2
    prob = Bvp2(p=lambda x: 0 * x, q=lambda x: 0 * x, f=lambda x: (2 + 4j) + 0 * x,
                u_minus=u(-1.0), u_plus=u(1.0), exact=u)
    assert solve_npcol(prob, b, g, bb).max_error < 1e-12


def test_errors():
    b, g, ops, bb = setup(1.0, 4)
    with pytest.raises(InvalidArgumentError):
        solve_pcol(model_problem(), b, g, ops, solver="magic")
    b2 = build_basis(0.5, 2)
    with pytest.raises(InvalidArgumentError):
        solve_npcol(model_problem(), b2, prolate_grid(b2), None)
