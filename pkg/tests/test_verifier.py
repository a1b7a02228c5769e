import json

import pytest

from nilmat.matrices import det, is_in_D, is_in_dtilde, is_special
from nilmat.poly import parse_polynomial
from nilmat.quotient import IdealSpec, generic_matrix, membership_oracle, normal_form
from nilmat.rings import ring_make
from nilmat.verifier import (
    PROPOSITION_IDS,
    PROPOSITIONS,
    Budget,
    ConfigError,
    d_by_witnesses,
    functional_witnesses,
    replay_case,
    verify,
    verify_all,
)

SMALL = Budget(cases=40, seed=3)


def test_every_id_registered_once():
    assert len(PROPOSITION_IDS) == 14 == len(set(PROPOSITION_IDS)) == len(PROPOSITIONS)
    assert all(PROPOSITIONS[pid].statement for pid in PROPOSITION_IDS)


@pytest.mark.parametrize("pid", PROPOSITION_IDS)
def test_symbolic_passes(pid):
    report = verify(pid, "symbolic")
    assert report.status == "pass", report.counterexample
    assert report.cases_run > 0


@pytest.mark.parametrize("pid", PROPOSITION_IDS)
def test_symbolic_mutation_fails(pid):
    report = verify(pid, "symbolic", mutate=True)
    assert report.status == "fail"
    assert report.counterexample["failure"]


@pytest.mark.parametrize("pid", PROPOSITION_IDS)
def test_randomized_small_budget_passes(pid):
    report = verify(pid, "randomized", SMALL)
    assert report.status == "pass", report.counterexample
    assert report.cases_run == SMALL.cases and report.seed == SMALL.seed


@pytest.mark.parametrize("pid", PROPOSITION_IDS)
def test_randomized_mutation_fails_with_replayable_case(pid):
    report = verify(pid, "randomized", SMALL, mutate=True)
    assert report.status == "fail"
    index = report.counterexample["case"]
    case = replay_case(pid, SMALL.seed, index, SMALL, mutate=True)
    assert PROPOSITIONS[pid].check(case) == report.counterexample["failure"]
    json.dumps(report.counterexample)


def test_mutated_counterexample_violates_hypothesis():
    # the corrupted input is really outside D~, checked by the predicate itself
    report = verify("P3-Geometric", "randomized", SMALL, mutate=True)
    case = replay_case("P3-Geometric", SMALL.seed, report.counterexample["case"], SMALL, mutate=True)
    assert not is_in_dtilde(case["X"])
    report = verify("C1-DetTrace", "randomized", SMALL, mutate=True)
    case = replay_case("C1-DetTrace", SMALL.seed, report.counterexample["case"], SMALL, mutate=True)
    assert not is_special(case["X"])


def test_reports_deterministic_for_fixed_seed():
    first = [r.to_json() for r in verify_all(Budget(cases=15, seed=9))]
    second = [r.to_json() for r in verify_all(Budget(cases=15, seed=9))]
    assert first == second
    assert len(first) == 28


def test_different_seeds_draw_different_cases():
    a = replay_case("P6-IdealProperty", 1, 0)
    b = replay_case("P6-IdealProperty", 2, 0)
    assert json.dumps({k: str(v) for k, v in a.items()}) != json.dumps({k: str(v) for k, v in b.items()})


def test_zero_case_budget_skips_randomized():
    reports = verify_all(Budget(cases=0), modes=("randomized",))
    assert len(reports) == 14
    assert all(r.status == "skipped" and r.reason for r in reports)


@pytest.mark.parametrize(
    "budget",
    [Budget(cases=-1), Budget(max_dim=9), Budget(max_dim=1), Budget(symbolic_max_dim=4), Budget(max_degree=5)],
)
def test_budget_validation(budget):
    with pytest.raises(ConfigError):
        verify("P1-RowAdjoin", "randomized", budget)


def test_unknown_id_and_mode():
    with pytest.raises(ConfigError):
        verify("P99", "symbolic")
    with pytest.raises(ConfigError):
        verify("P1-RowAdjoin", "exhaustive")


def test_report_json_has_no_timing_and_sorted_keys():
    data = json.loads(verify("C1-DetTrace", "symbolic").to_json())
    assert list(data) == sorted(data)
    assert data["status"] == "pass" and data["id"] == "C1-DetTrace"
    assert not any("time" in k for k in data)


def test_p8_records_scope_note():
    assert verify("P8-DV", "symbolic").notes


def test_c1_example_n2():
    G = generic_matrix(2, 2)
    assert normal_form(det(G).value - parse_polynomial("2*X11*X22"), 2, 2).is_zero()
    free_det = parse_polynomial("X11*X22 - X12*X21")
    assert membership_oracle(free_det - parse_polynomial("2*X11*X22"), IdealSpec.special_only(2))


def test_witness_functionals_decide_D():
    R = ring_make("nil:Q:2")
    e1, e2 = R.generators()
    assert len(functional_witnesses(3)) == 6
    for vec in ([e1, e2], [e1, R.one], [R(2), R.zero], [e1 + e2, e2]):
        assert d_by_witnesses(vec) == is_in_D(vec)


def test_projections_alone_do_not_decide_D():
    # squares of the coordinates alone do not generate the ideal of D(2)
    E = [parse_polynomial("X11"), parse_polynomial("X12")]
    only_squares = IdealSpec.generated_by(1, 2, [e * e for e in E])
    assert not membership_oracle(E[0] * E[1], only_squares)
