import pytest

from algebra.checks import Status
from algebra.errors import UnknownVariant
from algebra.suites import SUITES, partition_count, run_suite
from commands.jobconfig import config_from_dict


def test_partition_count():
    assert [partition_count(n) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]


def test_unknown_suite():
    with pytest.raises(UnknownVariant):
        run_suite("genus-one", config_from_dict({}))


@pytest.mark.parametrize("name", ["duality", "structure", "cocycles"])
def test_geometric_suites_have_no_failures_two_points(name):
    cfg = config_from_dict({"punctures": ["0", "1"], "window": [-2, 2]})
    records = run_suite(name, cfg)
    assert records
    assert not [r.to_dict() for r in records if r.status is Status.FAIL]


def test_records_are_deterministic():
    cfg = config_from_dict({"window": [-1, 1]})
    first = [r.to_dict() for r in run_suite("wedge", cfg)]
    second = [r.to_dict() for r in run_suite("wedge", cfg)]
    assert first == second
    assert set(SUITES) >= {"duality", "wedge", "sugawara", "casimir"}


def test_structure_suite_covers_closure_and_identities():
    cfg = config_from_dict({"punctures": ["0", "1"], "window": [-2, 2], "samples": 5})
    records = {r.name: r for r in run_suite("structure", cfg)}
    for name in ("structure/leibniz", "structure/jacobi", "structure/closure/plus/product",
                 "structure/closure/minus/bracket", "structure/closure/depth-1/product",
                 "structure/closure/depth-0/bracket"):
        assert records[name].status is Status.PASS, name


def test_wedge_suite_counts_down_to_degree_six():
    cfg = config_from_dict({"window": [-1, 1], "depth": 2})
    (enumeration,) = [r for r in run_suite("wedge", cfg) if r.name == "wedge/enumeration"]
    assert enumeration.details["counts"] == [1, 1, 2, 3, 5, 7, 11]


def test_pairwise_suite():
    records = run_suite("pairwise", config_from_dict({}))
    assert [r.name for r in records] == ["pairwise/e_1/e_-1", "pairwise/e_2/e_-2", "pairwise/e_2/e_-1"]
    assert all(r.status is Status.PASS for r in records)
    assert [r.details["scalar"] for r in records] == ["0", "-3/2", "0"]
    assert all(r.details["samples"] == 40 for r in records)
    assert run_suite("pairwise", config_from_dict({"algebra": "sl2"})) == []
