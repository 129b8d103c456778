import random
from fractions import Fraction

import pytest

from virwhit.forms import (
    DECREASING,
    INCREASING,
    CutoffExceededError,
    DualForm,
    act_on_form,
    bmt_basic_form,
    bmt_form,
    bmt_special_form,
    check_L0_Li_on_basic,
    convert_form,
    eval_form,
    gaiotto_basic_form,
    gaiotto_form,
    raise_indices,
    verify_whittaker_form,
    verify_whittaker_state,
    whittaker_form_nullspace,
    zero_form,
)
from virwhit.shapovalov import gram
from virwhit.verma import VermaContext, VermaVector, basis_vector, enumerate_partitions
from virwhit.whittaker import WhittakerType1N, WhittakerTypeR

CTX = VermaContext(Fraction(11, 3), Fraction(2, 7))
PSI_R1 = WhittakerTypeR(1, (Fraction(3, 2), Fraction(5)))
PSI_R2 = WhittakerTypeR(2, (Fraction(2), Fraction(-1, 3), Fraction(7)))
PSI_N3 = WhittakerType1N(3, Fraction(1), Fraction(2))
PSI_N4 = WhittakerType1N(4, Fraction(2, 5), Fraction(-3))


def dual_element(partition, cutoff, side=DECREASING):
    level = sum(partition)
    return DualForm(CTX, cutoff, side, {level: {tuple(partition): Fraction(1)}})


def pairing(w, form):
    """<L_-lam Delta, w> for every stored level, against form values."""
    f_dec = convert_form(form, DECREASING)
    for level in range(form.cutoff + 1):
        g = gram(level, CTX)
        coords = [w.coefficient(p) for p in g.partitions]
        for i, lam in enumerate(g.partitions):
            lhs = sum(
                (g.entries[i][j] * coords[j] for j in range(len(coords))),
                Fraction(0),
            )
            yield lam, lhs, f_dec.level_terms(level).get(lam, Fraction(0))


def test_eval_duality():
    f = dual_element((1,), 3)
    assert eval_form(f, basis_vector(CTX, (1,))) == 1
    f2 = dual_element((2,), 3)
    assert eval_form(f2, basis_vector(CTX, (1, 1))) == 0


def test_eval_cutoff_exceeded():
    f = dual_element((1,), 2)
    with pytest.raises(CutoffExceededError):
        eval_form(f, basis_vector(CTX, (3,)))


def test_eval_after_basis_conversion():
    # The increasing-side dual of (2,1) pairs to 1 with L_-1 L_-2 |D>,
    # whose canonical expansion is L_-2 L_-1 |D> + L_-3 |D>.
    f = dual_element((2, 1), 3, side=INCREASING)
    vec = basis_vector(CTX, (2, 1)) + basis_vector(CTX, (3,))
    assert eval_form(f, vec) == 1
    assert eval_form(f, basis_vector(CTX, (3,))) == 0


def test_eval_invariant_under_side_conversion():
    rng = random.Random(4)
    f = bmt_form(PSI_N4, {(0, 0): Fraction(1), (1, 0): Fraction(2, 3)}, 5, CTX)
    g = convert_form(f, DECREASING)
    assert convert_form(g, INCREASING).levels == f.levels
    for _ in range(10):
        terms = {}
        for _ in range(3):
            level = rng.randint(0, 5)
            part = rng.choice(enumerate_partitions(level))
            terms[part] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        v = VermaVector(CTX, {p: c for p, c in terms.items() if c})
        assert eval_form(f, v) == eval_form(g, v)


def test_act_on_form_l0_eigenvalue():
    f = dual_element((1,), 4)
    out = act_on_form(0, f)
    assert out.level_terms(1) == {(1,): CTX.delta + 1}


def test_act_on_form_above_cutoff_gives_zero_form():
    f = gaiotto_basic_form(PSI_R1, (), 3, CTX)
    out = act_on_form(5, f)
    assert out.cutoff == 0
    assert out.is_zero()


def test_act_on_form_gaiotto_eigenvalue_at_level_zero():
    f = gaiotto_basic_form(PSI_R1, (), 4, CTX)
    out = act_on_form(1, f)
    assert out.level_terms(0) == {(): PSI_R1.mu[0] * f.level_terms(0)[()]}


def test_gaiotto_basic_coefficients():
    f = gaiotto_basic_form(PSI_R1, (), 6, CTX)
    mu1, mu2 = PSI_R1.mu
    assert f.level_terms(0) == {(): Fraction(1)}
    assert f.level_terms(3)[(2, 1)] == mu2 * mu1
    assert f.level_terms(3)[(1, 1, 1)] == mu1**3
    assert (3,) not in f.level_terms(3)  # index above the rank


def test_gaiotto_basic_with_fixed_exponents():
    psi = PSI_R2
    f = gaiotto_basic_form(psi, (1,), 6, CTX)  # n_1 frozen to 1
    assert f.level_terms(5)[(4, 1)] == psi.mu[2]
    assert (4,) not in f.level_terms(4)  # n_1 = 0 labels excluded
    assert f.level_terms(1) == {(1,): Fraction(1)}


def test_gaiotto_form_combination():
    basic = gaiotto_basic_form(PSI_R1, (), 5, CTX)
    assert gaiotto_form(PSI_R1, {(): Fraction(1)}, 5, CTX).levels == basic.levels
    assert gaiotto_form(PSI_R1, {}, 5, CTX).is_zero()


def test_gaiotto_forms_pass_verification():
    rng = random.Random(31)
    for psi in (PSI_R1, PSI_R2):
        size = psi.r - 1
        support = [(0,) * size] if size == 0 else [(0,), (1,), (2,)]
        coeffs = {
            key: Fraction(rng.randint(1, 5), rng.randint(1, 3)) for key in support
        }
        form = gaiotto_form(psi, coeffs, 5, CTX)
        report = verify_whittaker_form(form, psi)
        assert report.passed, report.first_failure()


def test_single_dual_element_fails_verification():
    # f^[1^1] alone is not a Whittaker form once mu_2 != 0.
    f = dual_element((1,), 4)
    report = verify_whittaker_form(f, PSI_R1)
    assert not report.passed
    failing = {c.operator_index: c for c in report.checks if not c.residual_zero}
    # (L_1 f)(|D>) = 1 while mu_1 f(|D>) = 0
    assert failing[1].first_failure == (0, (), Fraction(1))
    # (L_2 f - mu_2 f)(L_-1|D>) = 0 - mu_2
    assert failing[2].first_failure == (1, (1,), -PSI_R1.mu[1])


def test_bmt_basic_coefficients():
    f = bmt_basic_form(PSI_N3, (0,), 6, CTX)
    nu1, nu3 = PSI_N3.nu1, PSI_N3.nun
    assert f.level_terms(0) == {(): Fraction(1)}
    assert f.level_terms(4)[(3, 1)] == nu1 * nu3
    assert f.level_terms(2) == {(1, 1): nu1**2}
    f4 = bmt_basic_form(PSI_N4, (1, 0), 4, CTX)
    assert f4.level_terms(2) == {(2,): Fraction(1)}


def test_bmt_form_empty_is_zero():
    assert bmt_form(PSI_N3, {}, 4, CTX).is_zero()


def test_bmt_special_form_support():
    # all lambdas zero keeps only the all-zero basic form
    plain = bmt_special_form(PSI_N4, (Fraction(0), Fraction(0)), 4, CTX)
    basic = bmt_basic_form(PSI_N4, (0, 0), 4, CTX)
    assert plain.levels == basic.levels
    # n = 3 has the single lambda_2; zero leaves the lone basic form
    single = bmt_special_form(PSI_N3, (Fraction(0),), 4, CTX)
    assert single.levels == bmt_basic_form(PSI_N3, (0,), 4, CTX).levels
    # lambda_2 = 1, lambda_3 = 0 at cutoff 4: support m_2 <= 2
    mixed = bmt_special_form(PSI_N4, (Fraction(1), Fraction(0)), 4, CTX)
    expected = bmt_form(
        PSI_N4,
        {(0, 0): Fraction(1), (1, 0): Fraction(1), (2, 0): Fraction(1)},
        4,
        CTX,
    )
    assert mixed.levels == expected.levels


def test_bmt_forms_pass_verification():
    rng = random.Random(47)
    for psi in (PSI_N3, PSI_N4):
        size = psi.n - 2
        coeffs = {}
        while len(coeffs) < 3:
            key = tuple(rng.randint(0, 2) for _ in range(size))
            coeffs[key] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        form = bmt_form(psi, coeffs, 5, CTX)
        assert verify_whittaker_form(form, psi).passed
    special = bmt_special_form(PSI_N4, (Fraction(1), Fraction(1, 2)), 5, CTX)
    assert verify_whittaker_form(special, PSI_N4).passed


def test_raise_indices_level_one():
    f = gaiotto_basic_form(PSI_R1, (), 4, CTX)
    w = raise_indices(f)
    assert w.coefficient(()) == 1
    assert w.coefficient((1,)) == PSI_R1.mu[0] / (2 * CTX.delta)


def test_raise_indices_zero_form():
    assert raise_indices(zero_form(CTX, 4)).is_zero()


def test_raise_indices_round_trip():
    for form in (
        gaiotto_form(PSI_R2, {(0,): Fraction(1), (2,): Fraction(-1, 2)}, 5, CTX),
        bmt_special_form(PSI_N4, (Fraction(1), Fraction(1, 2)), 5, CTX),
    ):
        w = raise_indices(form)
        for lam, lhs, rhs in pairing(w, form):
            assert lhs == rhs, lam


def test_state_side_conditions():
    f = gaiotto_basic_form(PSI_R1, (), 6, CTX)
    w = raise_indices(f)
    report = verify_whittaker_state(w, PSI_R1, 6)
    assert report.passed
    ks = [c.operator_index for c in report.checks]
    assert ks == [1, 2, 3, 4, 5, 6]


def test_whittaker_form_nullspace_dimensions():
    dim1, basis1 = whittaker_form_nullspace(PSI_R1, CTX, 3)
    assert dim1 == 1
    # the solution is proportional to the basic form
    basic = gaiotto_basic_form(PSI_R1, (), 3, CTX)
    scale = basis1[0].level_terms(0)[()]
    for lvl in range(4):
        got = basis1[0].level_terms(lvl)
        want = basic.level_terms(lvl)
        assert got == {p: c * scale for p, c in want.items()}

    dim2, _ = whittaker_form_nullspace(PSI_R2, CTX, 3)
    assert dim2 == 4  # admissible n_1 tuples: 0..3

    dim3, _ = whittaker_form_nullspace(PSI_N3, CTX, 3)
    assert dim3 == 2  # admissible m_2 tuples: 0..1


def test_check_l0_li_r1_and_r2():
    assert check_L0_Li_on_basic(PSI_R1, 4, CTX).passed
    report = check_L0_Li_on_basic(PSI_R2, 4, CTX)
    assert report.passed
    assert [c.operator_index for c in report.checks] == [0, 1]


def test_verify_windows_scale_with_k():
    f = gaiotto_basic_form(PSI_R1, (), 5, CTX)
    report = verify_whittaker_form(f, PSI_R1)
    for check in report.checks:
        assert check.complete_levels == 5 - check.operator_index


def test_act_on_form_matches_definition_for_lowering_index():
    # (L_{-1} f)(v) = f(L_1 v), on both basis sides
    from virwhit.verma import act

    for f in (
        gaiotto_basic_form(PSI_R2, (1,), 5, CTX),
        bmt_special_form(PSI_N4, (Fraction(1), Fraction(-2)), 5, CTX),
    ):
        lowered = act_on_form(-1, f)
        for level in range(lowered.cutoff + 1):
            for part in enumerate_partitions(level):
                v = basis_vector(CTX, part)
                assert eval_form(lowered, v) == eval_form(f, act(1, v)), (
                    f.basis_side,
                    part,
                )
