import random
from fractions import Fraction

import pytest

from tightfam.algebra import (
    Chart,
    DiffForm,
    FormalSeries,
    Multivector,
    PolyFunc,
    Scalar,
    de_rham_d,
    interior,
    pairing_form_multivector,
    parse_diff_form,
    parse_multivector,
    parse_polyfunc,
    pi_sharp,
    schouten_bracket,
)
from tightfam.courant import (
    DiracSpec,
    GaugeError,
    GenSection,
    TwistData,
    check_dirac,
    check_twisted_poisson,
    gauge_transform_bivector,
    pairing,
    tau_beta,
    twisted_bracket,
)

R3 = Chart(("x", "y", "z"))
R4 = Chart(("x", "y", "z", "w"))


def sec(chart, xexpr, xiexpr):
    return GenSection(parse_multivector(xexpr, chart),
                      parse_diff_form(xiexpr, chart))


def test_twist_must_be_closed():
    with pytest.raises(ValueError):
        TwistData(parse_diff_form("x*dy^dz^dx", R4) if False else
                  parse_diff_form("w*dx^dy^dz", R4))
    TwistData(parse_diff_form("dx^dy^dz", R4))  # closed: fine


def test_pairing_examples():
    e1 = sec(R3, "Dx", "dy")
    e2 = sec(R3, "Dy", "dx")
    assert pairing(e1, e2) == PolyFunc.constant(R3, 2)
    assert pairing(sec(R3, "Dx", "0"), sec(R3, "Dy", "0")).is_zero
    assert pairing(sec(R3, "0", "dx"), sec(R3, "0", "dy")).is_zero
    # symmetry
    assert pairing(e1, e2) == pairing(e2, e1)


def test_twisted_bracket_examples():
    zero_tw = TwistData.zero(R3)
    e1 = sec(R3, "Dx", "0")
    e2 = sec(R3, "Dy", "0")
    assert twisted_bracket(e1, e2, zero_tw).is_zero
    tw = TwistData(parse_diff_form("dx^dy^dz", R3))
    br = twisted_bracket(e1, e2, tw)
    assert br.X.is_zero and br.xi == parse_diff_form("dz", R3)
    # (0, x dy), (Dx, 0) with no twist -> (0, -dy)
    br2 = twisted_bracket(sec(R3, "0", "x*dy"), e1, zero_tw)
    assert br2.X.is_zero and br2.xi == parse_diff_form("-dy", R3)


def test_tau_beta_examples():
    e = sec(R3, "Dx", "dz")
    assert tau_beta(e, DiffForm.zero(R3)) == e
    assert tau_beta(sec(R3, "Dx", "0"), parse_diff_form("dx^dy", R3)) == \
        sec(R3, "Dx", "dy")
    assert tau_beta(e, parse_diff_form("2*dx^dy", R3)) == \
        sec(R3, "Dx", "dz + 2*dy")
    # group law tau_b1 . tau_b2 = tau_(b1+b2)
    b1 = parse_diff_form("x*dx^dz", R3)
    b2 = parse_diff_form("dy^dz", R3)
    assert tau_beta(tau_beta(e, b1), b2) == tau_beta(e, b1 + b2)


def _rand_poly(rng, chart, deg=3):
    terms = {}
    for _ in range(rng.randint(1, 2)):
        mono = [0] * chart.dim
        for _ in range(rng.randint(0, deg)):
            mono[rng.randrange(chart.dim)] += 1
        terms[tuple(mono)] = FormalSeries.constant(
            Scalar(Fraction(rng.randint(-2, 2))))
    return PolyFunc(chart, terms)


def _rand_section(rng, chart):
    X = Multivector(chart, {(rng.randrange(chart.dim),): _rand_poly(rng, chart)})
    xi = DiffForm(chart, {(rng.randrange(chart.dim),): _rand_poly(rng, chart)})
    return GenSection(X, xi)


def _twists(chart):
    out = [TwistData.zero(chart)]
    out.append(TwistData(parse_diff_form("dx^dy^dz", chart)))
    if chart.dim >= 4:
        out.append(TwistData(parse_diff_form("x*dy^dz^dw + y*dx^dz^dw", chart)))
    return out


def test_courant_axioms_random():
    rng = random.Random(42)
    for tw in _twists(R4):
        for _ in range(6):
            e1, e2, e3 = (_rand_section(rng, R4) for _ in range(3))
            f = _rand_poly(rng, R4)
            # axiom 1: Leibniz form of the Jacobi identity
            lhs = twisted_bracket(e1, twisted_bracket(e2, e3, tw), tw)
            rhs = twisted_bracket(twisted_bracket(e1, e2, tw), e3, tw) + \
                twisted_bracket(e2, twisted_bracket(e1, e3, tw), tw)
            assert (lhs - rhs).is_zero
            # axiom 2: the anchor is bracket-preserving
            assert schouten_bracket(e1.X, e2.X) == \
                twisted_bracket(e1, e2, tw).X
            # axiom 3: Leibniz rule in the second argument
            lhs3 = twisted_bracket(e1, e2.scale(f), tw)
            rhs3 = twisted_bracket(e1, e2, tw).scale(f) + \
                e2.scale(schouten_bracket(e1.X,
                                          Multivector.from_function(f)).component(()))
            assert (lhs3 - rhs3).is_zero
            # axiom 4: the anchor differentiates the pairing
            lhs4 = schouten_bracket(
                e1.X, Multivector.from_function(pairing(e2, e3))).component(())
            rhs4 = pairing(twisted_bracket(e1, e2, tw), e3) + \
                pairing(e2, twisted_bracket(e1, e3, tw))
            assert lhs4 == rhs4
            # axiom 5: (e, [h, h]) = ([e, h], h)
            lhs5 = pairing(e1, twisted_bracket(e2, e2, tw))
            rhs5 = pairing(twisted_bracket(e1, e2, tw), e2)
            assert lhs5 == rhs5


def test_check_dirac_examples():
    # TM is Dirac when untwisted
    assert check_dirac(DiracSpec.tangent(R3), TwistData.zero(R3)).passed
    # T*M is Dirac for any twist
    for tw in _twists(R3):
        assert check_dirac(DiracSpec.cotangent(R3), tw).passed
    # TM fails with the volume twist; witness names the escaping bracket
    rep = check_dirac(DiracSpec.tangent(R3),
                      TwistData(parse_diff_form("dx^dy^dz", R3)))
    assert not rep.passed
    assert any("dz" in (c.witness or "") for c in rep.failures())


def test_check_dirac_dependent_generators_reported():
    gens = [sec(R3, "Dx", "0"), sec(R3, "2*Dx", "0"), sec(R3, "Dz", "0")]
    rep = check_dirac(DiracSpec(R3, generators=gens), TwistData.zero(R3))
    assert not rep.passed
    assert any(c.check_id == "independence" for c in rep.failures())


def test_check_twisted_poisson_examples():
    for tw in _twists(R3):
        assert check_twisted_poisson(Multivector.zero(R3), tw).passed
    assert check_twisted_poisson(parse_multivector("Dx^Dy", R3),
                                 TwistData.zero(R3)).passed
    # dimension 2: any h f Dx^Dy against any twist (no trivectors)
    R2 = Chart(("x", "y"))
    pi = parse_multivector("h*(x^2+y)*Dx^Dy", R2)
    assert check_twisted_poisson(pi, TwistData.zero(R2)).passed


def test_graph_criterion_matches_twisted_poisson():
    rng = random.Random(17)
    tw_list = _twists(R3)
    seen_pass = seen_fail = 0
    for k in range(24):
        tw = tw_list[k % len(tw_list)]
        if k % 2:
            pi = Multivector(R3, {(0, 1): _rand_poly(rng, R3, deg=2),
                                  (1, 2): _rand_poly(rng, R3, deg=2)})
        else:
            pi = Multivector(R3, {(0, 1): _rand_poly(rng, R3, deg=1)})
        tp = check_twisted_poisson(pi, tw).passed
        dg = check_dirac(DiracSpec.graph(pi), tw).passed
        assert tp == dg
        seen_pass += tp
        seen_fail += not tp
    assert seen_pass and seen_fail


def graph_membership_residuals(pi, e):
    """pi_sharp(xi) - X for a section expected to lie on graph(pi)."""
    return pi_sharp(pi, e.xi) - e.X


def test_gauge_transform_examples():
    pi = parse_multivector("h*Dx^Dy", R4)
    assert gauge_transform_bivector(pi, DiffForm.zero(R4)) == pi
    # disjoint coordinates leave the bivector unchanged
    assert gauge_transform_bivector(pi, parse_diff_form("dz^dw", R4)) == pi
    # geometric series in h for beta = dx^dy
    out = gauge_transform_bivector(pi, parse_diff_form("dx^dy", R4))
    c = out.component((0, 1)).constant_term()
    assert c.coeff(0) == Scalar.zero()
    assert c.coeff(1) == Scalar.one()
    assert c.coeff(2) in (Scalar(1), Scalar(-1))
    # graph-membership oracle: the twist-adding gauge is tau_{-beta}, so
    # tau_{-beta} of graph sections must lie on graph(out)
    beta = parse_diff_form("dx^dy", R4)
    for name in R4.names:
        e = GenSection(pi_sharp(pi, DiffForm.basis(R4, name)),
                       DiffForm.basis(R4, name))
        te = tau_beta(e, -beta)
        assert graph_membership_residuals(out, te).is_zero


def test_gauge_transform_requires_order_h():
    pi = parse_multivector("Dx^Dy", R4)
    with pytest.raises(GaugeError):
        gauge_transform_bivector(pi, parse_diff_form("dx^dy", R4))


def test_gauge_transform_composition():
    rng = random.Random(3)
    pi = parse_multivector("h*Dx^Dy + h*z*Dz^Dw", R4)
    b1 = parse_diff_form("x*dx^dy", R4)
    b2 = parse_diff_form("dz^dw + dx^dz", R4)
    lhs = gauge_transform_bivector(gauge_transform_bivector(pi, b1), b2)
    rhs = gauge_transform_bivector(pi, b1 + b2)
    assert lhs == rhs


def test_gauge_covariance_of_twisted_poisson():
    # pi O(h), phi-twisted Poisson => transform passes with twist phi + d(beta)
    rng = random.Random(29)
    cases = 0
    for _ in range(25):
        pi = Multivector(R3, {(0, 1): _rand_poly(rng, R3, deg=1).scale_h(1)})
        phi = parse_diff_form("dx^dy^dz", R3) * Fraction(rng.randint(-2, 2))
        tw = TwistData(phi)
        if not check_twisted_poisson(pi, tw).passed:
            continue
        beta = DiffForm(R3, {(0, 1): _rand_poly(rng, R3, deg=1),
                             (1, 2): _rand_poly(rng, R3, deg=1)})
        out = gauge_transform_bivector(pi, beta)
        tw2 = TwistData(phi + de_rham_d(beta))
        assert check_twisted_poisson(out, tw2).passed
        cases += 1
    assert cases >= 20


def test_tau_beta_conjugates_the_bracket():
    # the twist-adding gauge is tau_{-beta} in this module's conventions:
    # [tau_{-b} e1, tau_{-b} e2]_{phi + db} = tau_{-b}([e1, e2]_phi)
    rng = random.Random(57)
    for _ in range(10):
        e1 = _rand_section(rng, R3)
        e2 = _rand_section(rng, R3)
        beta = DiffForm(R3, {(0, 1): _rand_poly(rng, R3, deg=2),
                             (0, 2): _rand_poly(rng, R3, deg=2)})
        phi = parse_diff_form("dx^dy^dz", R3)
        tw = TwistData(phi)
        tw2 = TwistData(phi + de_rham_d(beta))
        lhs = twisted_bracket(tau_beta(e1, -beta), tau_beta(e2, -beta), tw2)
        rhs = tau_beta(twisted_bracket(e1, e2, tw), -beta)
        assert (lhs - rhs).is_zero
