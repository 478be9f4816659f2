import pytest

from colligations.errors import ModeError
from colligations.scalars import EXACT, FLOAT
from colligations.suites import (
    RunConfig,
    conjugate_pairs,
    det_identity,
    divisor,
    grassmann_consistency,
    multiplicativity,
    reconstruction,
    relations,
    run_suite,
    separation,
    separation_pairs,
    unitarity,
)
from colligations.invariants import fingerprint


@pytest.mark.parametrize("mode", [EXACT, FLOAT])
def test_small_runs_pass(mode):
    cfg = RunConfig(mode=mode, trials=3)
    for rep in (
        multiplicativity(cfg),
        divisor(cfg, pairs=1),
        det_identity(cfg),
        relations(cfg, points=2, grassmann=2),
        grassmann_consistency(cfg, 2),
        reconstruction(cfg, 1, trace_len=2, cwb_len=1),
        separation(cfg, pairs=6, conjugates=2),
    ):
        assert rep.ok, rep.to_json()


def test_unitarity_is_float_only():
    with pytest.raises(ModeError):
        unitarity(RunConfig(trials=2))
    assert unitarity(RunConfig(mode=FLOAT, trials=2), points=5).ok


def test_report_is_sorted_and_deterministic():
    cfg = RunConfig(trials=4)
    a, b = multiplicativity(cfg).to_json(), multiplicativity(cfg).to_json()
    assert a == b
    names = [c["name"] for c in a["cases"]]
    assert names == sorted(names)


def test_separation_families():
    cfg = RunConfig(trials=10)
    pairs = separation_pairs(cfg, 10)
    families = {name.rsplit("-", 1)[0] for name, _, _ in pairs}
    assert {"independent", "shared-a", "perturbed-d"} <= families
    for _, g, h in conjugate_pairs(cfg, 3):
        assert fingerprint(g) == fingerprint(h)


def test_run_suite_all_skips_unitarity_in_exact_mode():
    rep = run_suite("all", RunConfig(trials=2))
    assert rep.ok
    assert not any(c.name.startswith("unitarity/") for c in rep.cases)
    with pytest.raises(KeyError):
        run_suite("nothing", RunConfig())
