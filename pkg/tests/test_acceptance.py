"""Acceptance gate: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL line per
criterion.  Each check is identity-, bound- or trend-based and runs at desk
scale; the whole module stays well under two minutes.
"""

import json

import numpy as np

from gfs import (
    L2Sequence,
    MultiplierSeq,
    catalog,
    coefficient_vector,
    convergence_probe,
    decompose_inner_product,
    element_combo,
    max_prefix_integral,
    parse_system,
    parseval_prefix,
    plateau,
    poly_combo,
    ratio_sweep,
    select_subsequence,
    selection_system,
    weight,
    weighted_coeff_norm,
    weighted_log_sum,
    weighted_poly_eval,
)
from gfs.cli import main as cli_main

TRIG = parse_system("trig")
WALSH = parse_system("walsh")
HAAR = parse_system("haar")
CAT = catalog()
D1 = MultiplierSeq.constant(1.0)


def _report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: {status}{suffix}")
    assert ok, f"criterion {num} {name}: {status}{suffix}"


def test_criterion_01_orthonormality():
    devs = {}
    for system, tol in ((TRIG, 1e-10), (WALSH, 1e-12), (HAAR, 1e-12)):
        G = system.gram_matrix(64)
        devs[system.name] = (float(np.max(np.abs(G - np.eye(64)))), tol)
    ok = all(dev <= tol for dev, tol in devs.values())
    detail = ", ".join(f"{k}: {dev:.2e} <= {tol:.0e}" for k, (dev, tol) in devs.items())
    _report(1, "orthonormality at N=64", ok, detail)


def test_criterion_02_decomposition_identity():
    worst = 0.0
    cases = 0
    for system in (TRIG, WALSH, HAAR):
        for f in CAT.values():
            combos = [element_combo(system, k) for k in range(1, 9)]
            coeffs = coefficient_vector(f, system, 8)
            combos.append(poly_combo(system, D1, L2Sequence.from_values(coeffs.values, "coeffs"), 8))
            for g in combos:
                for n in (2, 7, 16, 50):
                    dec = decompose_inner_product(f, g, n)
                    worst = max(worst, abs(dec.residual))
                    cases += 1
    ok = worst <= 1e-10
    _report(2, "decomposition identity", ok, f"{cases} cases, max residual {worst:.2e} <= 1e-10")


def test_criterion_03_plateau_norm():
    values = {f"({n},{i})": plateau(n, i).norm_a() for n, i in ((4, 2), (10, 3), (100, 37))}
    ok = all(v == 2.0 for v in values.values())
    _report(3, "ramp construction has norm exactly 2", ok, str(values))


def test_criterion_04_decay_dichotomy():
    trig_max = max(n * TRIG.sup_antiderivative(n) for n in range(1, 1025))
    walsh_max = max(n * WALSH.sup_antiderivative(n) for n in range(1, 1025))
    haar_max = max(n * HAAR.sup_antiderivative(n) for n in range(1, 1026))
    ok = trig_max <= 1.0 and walsh_max <= 2.0 and haar_max >= 8.0
    _report(
        4,
        "antiderivative decay dichotomy",
        ok,
        f"trig {trig_max:.4f} <= 1.0, walsh {walsh_max:.4f} <= 2.0, haar {haar_max:.1f} >= 8",
    )


def test_criterion_05_ratio_bound():
    worst = 0.0
    for seed in range(1, 21):
        a = L2Sequence.seeded_random(seed, 1024, alpha=0.75)
        rep = ratio_sweep(WALSH, D1, a, [16, 64, 256, 1024])
        for row in rep.rows:
            assert row[3] is not None
            worst = max(worst, row[3])
    ok = worst <= 4.2
    _report(5, "prefix/norm ratio bound over 20 seeds", ok, f"max ratio {worst:.4f} <= 4.2")


def test_criterion_06_weighted_sum_trend():
    d = MultiplierSeq.power(0.4)
    f = CAT["step13"]
    S = weighted_log_sum(f, WALSH, d, 4096)
    nondecreasing = bool(np.all(np.diff(S) >= 0.0))
    increment = float(S[4095] - S[2047])
    budget = 1e-3 * max(float(S[2047]), 1.0)
    tail_ok = increment <= budget

    rep = convergence_probe(f, WALSH, d, [64, 128, 256, 512, 1024, 2048, 4096], grid_size=64)
    gaps = [row[5] for row in rep.rows]
    gaps_ok = all(g2 <= 1.1 * g1 for g1, g2 in zip(gaps, gaps[1:]))

    ok = nondecreasing and tail_ok and gaps_ok
    detail = (
        f"S nondecreasing: {nondecreasing}; "
        f"S_4096-S_2048 = {increment:.4f} vs budget {budget:.4f}: {tail_ok}; "
        f"gaps decreasing within 10%: {gaps_ok}"
    )
    # The tail clause cannot hold: against Walsh the step's coefficients on
    # level j all have magnitude 2^-j/3, so with d_n = n^0.4 the level-j block
    # adds ~ j^2 2^(-0.2 j) to S and the 2048..4096 block alone contributes
    # about 18% of S_2048, not 0.1%.  Kept as stated; expected red.
    _report(6, "weighted-sum trend at desk scale", ok, detail)


def test_criterion_07_parseval_prefix():
    exact = parseval_prefix(parse_system("haar+const"), 0.5, 2)
    third = parseval_prefix(parse_system("haar+const"), 1 / 3, 2**12)
    gap = abs(third - 1 / 3)
    ok = exact == 0.5 and gap <= 1e-3
    _report(7, "Parseval prefix sums", ok, f"prefix(2)@0.5 = {exact} (exact), gap@1/3 = {gap:.2e} <= 1e-3")


def test_criterion_08_subsequence_end_to_end():
    sel = select_subsequence(HAAR, 24)
    witnesses_ok = all(w < 1.0 / (k * k) for k, w in enumerate(sel.witnesses, start=1))
    sub = selection_system(HAAR, sel)
    S = weighted_log_sum(CAT["identity"], sub, MultiplierSeq.sqrt_over_log(), 24)
    finite = bool(np.all(np.isfinite(S)))
    tail_frac = float((S[23] - S[17]) / S[23])
    tail_ok = tail_frac <= 0.01
    ok = witnesses_ok and finite and tail_ok
    _report(
        8,
        "subsequence selection and remapped sums",
        ok,
        f"K=24 up to n={sel.indices[-1]}, witnesses strict: {witnesses_ok}, "
        f"last-quarter share {tail_frac:.2e} <= 1%",
    )


def test_criterion_09_edge_conventions():
    checks = [weight(1) == 0.0]
    a1 = L2Sequence.unit_basis(1, 16)
    for system in (TRIG, WALSH, HAAR):
        checks.append(weighted_coeff_norm(D1, L2Sequence.seeded_random(1, 4), 1) == 0.0)
        for n in (1, 2, 8, 16):
            checks.append(max_prefix_integral(system, D1, a1, n) == 0.0)
            checks.append(weighted_coeff_norm(D1, a1, n) == 0.0)
        checks.append(weighted_poly_eval(system, D1, a1, 16, 0.37) == 0.0)
    for f in CAT.values():
        checks.append(float(weighted_log_sum(f, WALSH, D1, 1)[0]) == 0.0)
    ok = all(checks)
    _report(9, "index-1 weight convention", ok, f"{len(checks)} zero checks")


def test_criterion_10_cli_determinism(tmp_path):
    fixtures = [
        ("decay", "--system", "walsh", "--N", "256"),
        ("coeffs", "--system", "walsh", "--function", "identity", "--N", "64"),
        ("ratio", "--system", "walsh", "--sequence", "random", "--seed", "42",
         "--n-list", "16,64,256"),
        ("logsum", "--system", "walsh", "--function", "step13", "--multiplier", "power:0.4",
         "--N", "256"),
        ("converge", "--system", "walsh", "--function", "step13", "--multiplier", "power:0.4",
         "--n-list", "64,128,256", "--grid-size", "32"),
        ("subseq", "--system", "haar", "--K", "12"),
        ("parseval", "--system", "haar+const", "--x", "0.3333333333333333", "--N", "1024"),
        ("plateau", "--n", "100", "--i", "37"),
        ("lemma", "--n", "7", "--elements", "4"),
        ("un", "--system", "walsh", "--sequence", "random", "--seed", "3", "--n-list", "8,16,32"),
        ("gram", "--system", "trig", "--N", "16"),
        ("admissible", "--multiplier", "sqrtlog", "--N", "128"),
    ]
    identical = True
    for i, fixture in enumerate(fixtures):
        a, b = tmp_path / f"a{i}", tmp_path / f"b{i}"
        assert cli_main([*fixture, "--out", str(a)]) == 0
        assert cli_main([*fixture, "--out", str(b)]) == 0
        csv_same = (tmp_path / f"a{i}.csv").read_bytes() == (tmp_path / f"b{i}.csv").read_bytes()
        ma = json.loads((tmp_path / f"a{i}.meta.json").read_text())
        mb = json.loads((tmp_path / f"b{i}.meta.json").read_text())
        ma["params"].pop("out")
        mb["params"].pop("out")
        identical = identical and csv_same and ma == mb
    _report(10, "CLI byte-identical reruns", identical, f"{len(fixtures)} fixtures, two runs each")
