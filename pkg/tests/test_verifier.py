import dataclasses

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opineq import scalar_bounds as sb
from opineq.matrix import loewner_leq, parse_matrices
from opineq.testing import perturbed_m_factor
from opineq.verifier import (
    CASES,
    MATRIX_IDS,
    SCALAR_IDS,
    SplitMix64,
    TrialConfig,
    check_case,
    derive_seed,
    format_report,
    gen_ordered_pair,
    gen_ratio_pair,
    gen_sandwich_pair,
    no_ordering_probe,
    pair_margins,
    run_case,
    run_suite,
    suite_ids,
)
from opineq.verifier import runner
from opineq.verifier.rng import trial_seeds, uniform_block

# ----------------------------------------------------------- rng


def test_splitmix_reference_stream():
    # published first outputs of SplitMix64 seeded with 0
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


@given(st.integers(0, 2**64 - 1))
def test_counter_form_matches_stateful(seed):
    g = SplitMix64(seed)
    expected = [(g.next_u64() >> 11) * 2.0**-53 for _ in range(5)]
    got = uniform_block(np.array([seed], dtype=np.uint64), 5)[0]
    assert list(got) == expected
    assert all(0.0 <= u < 1.0 for u in got)


def test_trial_seeds_are_stream_outputs():
    g = SplitMix64(123)
    assert list(trial_seeds(123, 0, 4)) == [g.next_u64() for _ in range(4)]
    assert list(trial_seeds(123, 2, 2)) == list(trial_seeds(123, 0, 4)[2:])


def test_derive_seed_is_stable_and_label_sensitive():
    assert derive_seed(42, "THM_B_CHAIN", 4) == derive_seed(42, "THM_B_CHAIN", 4)
    assert derive_seed(42, "THM_B_CHAIN", 4) != derive_seed(42, "THM_B_CHAIN", 8)
    assert derive_seed(42, "a") != derive_seed(43, "a")


# ----------------------------------------------------------- generators


@pytest.mark.parametrize("dim", [1, 33])
def test_bad_dim_rejected(dim):
    with pytest.raises(ValueError):
        TrialConfig(dim=dim)


def test_config_validation():
    with pytest.raises(ValueError):
        TrialConfig(samples=-1)
    with pytest.raises(ValueError):
        TrialConfig(v_range=(0.2, 1.5))
    assert TrialConfig(samples=0).scalar_count == 0
    assert TrialConfig(samples=10).scalar_count == 100_000
    assert TrialConfig(samples=10, scalar_samples=7).scalar_count == 7


def test_ordered_pair_deterministic_and_ordered():
    cfg = TrialConfig(seed=5, dim=2)
    A1, B1 = gen_ordered_pair(cfg)
    A2, B2 = gen_ordered_pair(cfg)
    assert np.array_equal(A1, A2) and np.array_equal(B1, B2)
    assert loewner_leq(A1, B1).holds
    A, B = gen_ordered_pair(cfg, force_equal=True)
    assert np.array_equal(A, B)


def test_sandwich_pair_example():
    A, B = gen_sandwich_pair(TrialConfig(seed=11, dim=3), 1, 2, 3, 4)
    lb, la = np.linalg.eigvalsh(B), np.linalg.eigvalsh(A)
    assert (lb[0], lb[-1]) == pytest.approx((1, 2), rel=1e-12)
    assert (la[0], la[-1]) == pytest.approx((3, 4), rel=1e-12)
    assert 2 / 3 == pytest.approx(lb[-1] / la[0], rel=1e-12)
    assert 1 / 4 == pytest.approx(lb[0] / la[-1], rel=1e-12)


def test_degenerate_sandwich_gives_identity():
    A, B = gen_sandwich_pair(TrialConfig(dim=3), 1, 1, 1, 1)
    assert np.array_equal(A, np.eye(3)) and np.array_equal(B, np.eye(3))


def test_sandwich_level_order_checked():
    with pytest.raises(ValueError):
        gen_sandwich_pair(TrialConfig(dim=3), 1, 3, 2, 4)


@given(st.integers(2, 8), st.integers(0, 2**63), st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_ratio_pair_spectrum(n, seed, a, b):
    lo, hi = sorted((a, b))
    A, B = gen_ratio_pair(TrialConfig(seed=seed, dim=n), lo, hi)
    L = np.linalg.cholesky(A)
    Li = np.linalg.inv(L)
    lam = np.linalg.eigvalsh(Li @ B @ Li.T)
    assert lam[0] == pytest.approx(lo, rel=1e-9) and lam[-1] == pytest.approx(hi, rel=1e-9)


@pytest.mark.parametrize("dim", [2, 3, 5, 8])
def test_generated_instances_satisfy_their_hypotheses(dim):
    cfg = TrialConfig(seed=2024, samples=120, dim=dim, scalar_samples=5000)
    for case_id in CASES:
        rep = run_case(case_id, cfg)
        assert rep.skipped == 0, case_id


# ----------------------------------------------------------- check_case


def test_thm_b_on_commuting_pair_matches_scalar_chain():
    A, B, v = np.diag([4.0, 9.0]), np.eye(2), 0.5
    rep = check_case("THM_B_CHAIN", {"A": A, "B": B}, {"v": v})
    assert rep.status == "PASS" and rep.attempted == 1
    margins, inst = pair_margins("THM_B_CHAIN", {"A": A[None], "B": B[None], "v": np.array([v])})
    assert inst["h"][0] == pytest.approx(1 / 4) and inst["hp"][0] == pytest.approx(1 / 9)
    x, a = np.array([1 / 4, 1 / 9]), np.array([4.0, 9.0])
    lower = a * ((1 - v) + v * x - sb.m_factor(v, 1 / 4) * x**v)
    upper = a * (sb.M_factor(v, 1 / 9) * x**v - (1 - v) - v * x)
    assert margins[0].margin[0] == pytest.approx(lower.min(), abs=1e-10)
    assert margins[1].margin[0] == pytest.approx(upper.min(), abs=1e-10)


def test_prop_tha_reduces_to_additive_scalar_bounds():
    A, B, v = np.eye(2), np.diag([4.0, 9.0]), 0.3
    rep = check_case("PROP_THA_CHAIN", {"A": A, "B": B}, {"v": v})
    assert rep.status == "PASS"
    margins, _ = pair_margins("PROP_THA_CHAIN", {"A": A[None], "B": B[None], "v": np.array([v])})
    x = np.array([4.0, 9.0])
    y, xv = (1 - v) + v * x, x**v
    lower = v * (x - 1) * (1 - x ** (v - 1)) / 2 + xv
    upper = v * (x - 1) * (1 - ((1 + x) / 2) ** (v - 1)) + xv
    expected = [(lower - xv).min(), (y - lower).min(), (upper - y).min()]
    assert [m.margin[0] for m in margins] == pytest.approx(expected, abs=1e-12)


def test_km_on_equal_pair_is_tight():
    A = np.diag([2.0, 5.0])
    margins, _ = pair_margins("KM_K1", {"A": A[None], "B": A[None], "v": np.array([0.3])})
    assert all(abs(m.margin[0]) < 1e-12 for m in margins)


def test_hypothesis_violation_is_skipped_not_failed():
    rep = check_case("PROP_THA_CHAIN", {"A": np.diag([2.0, 2.0]), "B": np.eye(2)}, {"v": 0.4})
    assert rep.skipped == 1 and rep.failed == 0 and rep.passed == 0


def test_unknown_case():
    with pytest.raises(KeyError):
        check_case("NOPE", {"v": 0.5})


# ----------------------------------------------------------- run_suite


def test_run_suite_argument_errors():
    cfg = TrialConfig(samples=5)
    with pytest.raises(ValueError):
        run_suite([], cfg)
    with pytest.raises(KeyError):
        run_suite(["NOT_A_CASE"], cfg)
    with pytest.raises(KeyError):
        run_suite(["AUX:nope"], cfg)


def test_zero_samples():
    reps = run_suite(["THM_B_CHAIN", "THM_C_CASE_1"], TrialConfig(samples=0))
    assert [r.attempted for r in reps] == [0, 0]


def test_reports_are_deterministic():
    cfg = TrialConfig(seed=9, samples=50, scalar_samples=2000)
    ids = ["THM_B_CHAIN", "LIAO", "PROP_4_3"]
    first, second = run_suite(ids, cfg, dims=[3]), run_suite(ids, cfg, dims=[3])
    assert _strip(first) == _strip(second)
    assert format_report(first) == format_report(second)


def _strip(reports):
    out = []
    for r in reports:
        w = r.witness
        key = None if w is None else (w["params"], {k: m.tolist() for k, m in w["matrices"].items()})
        out.append((dataclasses.replace(r, elapsed=0.0, witness=None), key))
    return out


def test_reports_independent_of_chunking(monkeypatch):
    cfg = TrialConfig(seed=3, samples=40, dim=3, scalar_samples=900)
    ref = _strip(run_suite(["LIAO", "HARMONIC_SANDWICH", "THM_C_CASE_2"], cfg))
    monkeypatch.setattr(runner, "_CHUNK", 7)
    monkeypatch.setattr(runner, "_SCALAR_CHUNK", 100)
    assert _strip(run_suite(["LIAO", "HARMONIC_SANDWICH", "THM_C_CASE_2"], cfg)) == ref


def test_review_cases_do_not_gate_and_dump_witnesses(tmp_path):
    reps = run_suite(["LIAO", "LIAO_GLOBAL"], TrialConfig(samples=100), dims=[4], out_dir=tmp_path)
    liao, glob = reps
    assert liao.status == "REVIEW" and not liao.gating_failure and liao.failed > 0
    assert glob.status == "PASS"
    path = tmp_path / liao.witness["path"]
    text = path.read_text()
    assert text.startswith("# id=LIAO dim=4 ")
    A, B = parse_matrices(text)
    assert np.array_equal(A, liao.witness["matrices"]["A"])
    assert np.array_equal(B, liao.witness["matrices"]["B"])


def test_suite_ids_scopes():
    assert suite_ids("matrix") == list(MATRIX_IDS)
    scalar = suite_ids("scalar")
    assert scalar[: len(SCALAR_IDS)] == list(SCALAR_IDS)
    assert any(s.startswith("AUX:") for s in scalar)
    assert suite_ids("all") == scalar + list(MATRIX_IDS)
    with pytest.raises(ValueError):
        suite_ids("both")


def test_matrix_dims_expand():
    reps = run_suite(["ZOU"], TrialConfig(samples=3), dims=[2, 5])
    assert [r.dim for r in reps] == [2, 5]


def test_printed_product_asymmetry_is_recorded():
    rep = run_case("REMARK_BANG_POWER", TrialConfig(samples=30, dim=4))
    assert rep.notes and "asymmetry" in rep.notes[0]


def test_perturbed_m_factor_breaks_thm_b():
    cfg = TrialConfig(samples=100, dim=4)
    assert run_case("THM_B_CHAIN", cfg).status == "PASS"
    with perturbed_m_factor():
        assert run_case("THM_B_CHAIN", cfg).status == "FAIL"
    assert run_case("THM_B_CHAIN", cfg).status == "PASS"


# ----------------------------------------------------------- probe


def test_no_ordering_probe_matches_high_precision():
    mpmath.mp.dps = 40
    f = mpmath.mpf

    def K(x):
        return (x + 1) ** 2 / (4 * x)

    def m(v, x):
        return 1 + 2**v * v * (1 - v) * (x - 1) ** 2 / (x + 1) ** (v + 1)

    def M(v, x):
        return 1 + v * (1 - v) * (x - 1) ** 2 / (2 * x ** (v + 1))

    oracle = [
        m(f("0.3"), f("0.7")) - K(f("0.7")) ** f("0.3"),
        m(f("0.7"), f("0.1")) - K(f("0.1")) ** f("0.3"),
        K(f("0.4")) ** f("0.8") - M(f("0.2"), f("0.4")),
        K(f("0.3")) ** f("0.6") - M(f("0.6"), f("0.3")),
    ]
    rows = no_ordering_probe()
    assert [r.gap for r in rows] == pytest.approx([float(o) for o in oracle], rel=1e-12)
    assert [r.gap > 0 for r in rows] == [True, False, True, False]
    assert all(r.ok for r in rows)
