import pytest

from greybody import verify
from greybody.geometry import Mode, RNGeometry


def test_fast_suite_passes():
    results = verify.run_checks("fast")
    failed = [r for r in results if not r.passed]
    assert not failed, failed
    assert all(isinstance(r.passed, bool) for r in results)


def test_dominance_instances_are_reproducible():
    a = verify.dominance_instances()
    b = verify.dominance_instances()
    assert len(a) == 150
    assert [(x[0], x[1].params(), x[2]) for x in a] == [(x[0], x[1].params(), x[2]) for x in b]
    assert {x[2].angular for x in a} == {0, 1, 2}
    other = verify.dominance_instances(seed=1)
    assert [x[1].params() for x in other] != [x[1].params() for x in a]


@pytest.mark.parametrize("name,expected", [
    ("bound_rn_closed", "reduction_identities/rn_uncharged"),
    ("bound_tangherlini_closed", "reduction_identities/tangherlini_d4"),
    ("bound_quadrature", "closed_vs_quadrature/rn"),
    ("exact_dilatonic2p1", "exact_2p1/near_unity_at_omega_2"),
    ("asymptotic_rn", "asymptotic_convergence/rn"),
    ("tortoise", "tortoise_derivative/rn_subextremal"),
    ("transmission_numeric", "oracle_dominance/rn-fixed"),
])
def test_mutation_is_caught_by_named_check(name, expected):
    results = verify.run_checks("fast", overrides=verify.mutation(name))
    failed = {r.name for r in results if not r.passed}
    assert expected in failed


def test_unknown_mutation_and_suite():
    with pytest.raises(KeyError):
        verify.mutation("nope")
    with pytest.raises(ValueError):
        verify.run_checks("slow")


def test_oracle_check_reports_each_instance():
    inst = [("a", RNGeometry(M=1.0), Mode(0.5, 1))]
    names = [r.name for r in verify.check_oracle(verify.default_impl(), inst)]
    assert names == ["oracle_dominance/a", "oracle_flux_conservation", "oracle_refinement_stability"]
