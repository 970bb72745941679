"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.  Everything here pins published reference values or
zero-tolerance bit-exactness properties; tolerances are stated inline.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

from mrpgen import (CatalogFilter, CostParams, GenParams, GenerationFailure,
                    Permutation, Seed, build_cost_report,
                    chi_square_uniformity, client_generate_with_retry,
                    compute_threshold, empirical_failure_rate,
                    enumerate_supported, fit_limb_count, generate_limb,
                    generate_mrp, generate_segment, histogram, is_prime,
                    mrp_failure_bound, mrp_failure_exact_base,
                    sample_rejection_prob, seed_source_from_rng,
                    seed_space_bits, seg_failure_prob,
                    verify_distributed_equivalence, xof_expand)
from mrpgen.profiles import (DEFAULT_HW_NAF_MAX, DEFAULT_MAX_FAIL, DEFAULT_N,
                             DEFAULT_Q_MIN_EXCLUSIVE, DEFAULT_T, DEFAULT_W,
                             HIST_BUCKETS, REFERENCE_ROWS)

from conftest import ntt_primes


def report(number: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:2d} {name}: {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed{suffix}"


@pytest.fixture(scope="module")
def full_catalog():
    # widest reference filter; the tighter rows are sub-filters of it
    filt = CatalogFilter(n_ring=DEFAULT_N, w=DEFAULT_W,
                         hw_naf_max=DEFAULT_HW_NAF_MAX, p_r_max=Fraction(1, 2),
                         q_min_exclusive=DEFAULT_Q_MIN_EXCLUSIVE)
    return enumerate_supported(filt)


@pytest.fixture(scope="module")
def limb_fit(full_catalog):
    rows = [(seg_len, p_r_max) for p_r_max, _, _, seg_len, _ in REFERENCE_ROWS
            if Fraction(p_r_max) < Fraction(1, 2)]
    return rows, fit_limb_count(rows, t=DEFAULT_T, n_ring=DEFAULT_N,
                                max_fail=DEFAULT_MAX_FAIL, l_range=(1, 200),
                                tolerance=0.0005)


def test_criterion_01_supported_set_sizes(full_catalog):
    deltas = []
    for p_r_max, expected_count, expected_hist, _, _ in REFERENCE_ROWS:
        sub = full_catalog.restrict(Fraction(p_r_max))
        if len(sub) != expected_count:
            hist = histogram(sub)
            got_row = [hist.get(b, 0) for b in HIST_BUCKETS]
            deltas.append(f"p_r_max={p_r_max}: got {len(sub)} want {expected_count}; "
                          f"bucket deltas {[g - e for g, e in zip(got_row, expected_hist)]}")
    report(1, "supported-set sizes 277/526/562/625", not deltas, "; ".join(deltas))


def test_criterion_02_histograms(full_catalog):
    mismatches = []
    for p_r_max, expected_count, expected_hist, _, _ in REFERENCE_ROWS:
        sub = full_catalog.restrict(Fraction(p_r_max))
        hist = histogram(sub)
        got_row = [hist.get(b, 0) for b in HIST_BUCKETS]
        if got_row != list(expected_hist):
            mismatches.append(f"p_r_max={p_r_max}: {got_row} != {list(expected_hist)}")
        if sum(got_row) != len(sub) or len(sub) != expected_count:
            mismatches.append(f"p_r_max={p_r_max}: row sum inconsistent")
    report(2, "per-bucket histograms match all four rows", not mismatches,
           "; ".join(mismatches))


def test_criterion_03_threshold_fit(full_catalog, limb_fit):
    rows, fit = limb_fit
    problems = []
    if not fit.ok:
        problems.append(f"best L={fit.L} residual={fit.residual:.2e} > 5e-4")
    for (seg_len, _), published, solved in zip(rows, fit.published, fit.solved):
        deviation = abs(float(solved - published))
        if deviation > 0.0005:
            problems.append(f"len={seg_len}: |{float(solved):.6f} - "
                            f"{float(published):.5f}| = {deviation:.2e}")
    if fit.L != 64:
        problems.append(f"fitted limb count drifted: {fit.L} != 64")
    worst = full_catalog.worst_p_r()
    seg_len = 4
    bound = float(mrp_failure_bound(worst, DEFAULT_T, seg_len,
                                    DEFAULT_N // seg_len, fit.L))
    if bound > 0.0030:
        problems.append(f"len=4 failure bound {bound:.5f} > 0.30%")
    report(3, f"threshold fit (L*={fit.L}, residual={fit.residual:.1e}, "
              f"len4 bound={bound * 100:.3f}%)", not problems, "; ".join(problems))


def test_criterion_04_cost_model():
    params = CostParams(R=16384, w=32, f_hz=1e9, gamma=1 / 8, d_mm=15.0,
                        e_j_per_bit_mm=40e-15)
    rep = build_cost_report(params)
    ok = (abs(rep.throughput_tbps - 65.5) <= 0.1
          and abs(rep.central_power_w - 19.7) <= 0.1
          and abs(rep.per_axis_density_tbps_per_mm - 2.2) <= 0.05)
    report(4, "cost model 65.5 Tbps / 19.7 W / 2.2 Tbps/mm", ok,
           f"TP={rep.throughput_tbps:.3f} P={rep.central_power_w:.3f} "
           f"D={rep.per_axis_density_tbps_per_mm:.3f}")


def test_criterion_05_seed_space():
    bits = seed_space_bits(288, Fraction("0.97"))
    report(5, "288-bit seed space keeps > 287.95 bits at 3% loss",
           bits > 287.95, f"bits={bits:.4f}")


def _fuzz_case(rng, prime_pool):
    n_ring = rng.choice([64, 128, 256, 512, 1024, 2048, 4096])
    seg_len = rng.choice([s for s in (4, 8, 16, 32) if n_ring % s == 0])
    pool = prime_pool[n_ring]
    base = tuple(rng.sample(pool, rng.randint(1, 3)))
    layout_kind = rng.choice(["identity", "reverse", "explicit"])
    if layout_kind == "identity":
        layout = Permutation.identity(n_ring)
    elif layout_kind == "reverse":
        layout = Permutation.reverse(n_ring)
    else:
        mapping = list(range(n_ring))
        rng.shuffle(mapping)
        layout = Permutation(mapping)
    params = GenParams(N=n_ring, w=32, seg_len=seg_len, n_seg=n_ring // seg_len,
                       base=base, layout=layout)
    seed = Seed(rng.randbytes(36))
    return seed, params, pool


def test_criterion_06_random_access_equivalence():
    rng = random.Random(20260809)
    prime_pool = {n: ntt_primes(n, 6) for n in (64, 128, 256, 512, 1024, 2048, 4096)}
    failures = []
    for case in range(100):
        seed, params, pool = _fuzz_case(rng, prime_pool)
        mrp = generate_mrp(seed, params)
        for q in params.base:
            limb = generate_limb(seed, q, params)
            if not np.array_equal(limb.coeffs, mrp.limbs[q].coeffs):
                failures.append(f"case {case}: limb q={q} differs")
        # segment locality: shuffling or extending the base leaves bits alone
        q = params.base[0]
        spare = [p for p in pool if p not in params.base]
        alt = params.with_base(tuple(reversed(params.base)) + (spare[0],))
        id_seg = rng.randrange(params.n_seg)
        a = generate_segment(seed, q, id_seg, params)
        b = generate_segment(seed, q, id_seg, alt)
        if not np.array_equal(a.values, b.values):
            failures.append(f"case {case}: segment q={q} id={id_seg} not local")
    report(6, "random-access equivalence over 100 fuzzed desk profiles",
           not failures, "; ".join(failures[:3]))


def test_criterion_07_distributed_equivalence(desk_params, zero_seed):
    engines = desk_params.n_seg * len(desk_params.base)
    rep = verify_distributed_equivalence(zero_seed, desk_params, engines,
                                         schedules=100, rng=random.Random(7))
    report(7, f"distributed equivalence 100/100 schedules x {engines} engines",
           rep.ok and rep.schedules == 100,
           f"mismatches={len(rep.mismatches)}")


def test_criterion_08_unbiasedness_exhaustive_w8():
    bad = []
    for q in range(3, 256, 2):
        thresh = compute_threshold(q, 8)
        copies = 256 // q
        counts = [0] * q
        for word in range(256):
            if word < thresh:
                counts[word % q] += 1
        if any(c != copies for c in counts):
            bad.append(q)
    report(8, "exhaustive w=8 unbiasedness for every odd modulus",
           not bad, f"biased moduli: {bad[:5]}")


def _contrived_profile():
    # hunt a transform-friendly prime for N=128 whose rejection rate puts the
    # whole-polynomial failure between 5% and 50% at len=32, n_seg=4
    n_ring, seg_len, n_seg = 128, 32, 4
    q = (1 << 32) - ((1 << 32) % (2 * n_ring)) + 1
    while q > 1 << 31:
        if is_prime(q):
            sf = seg_failure_prob(sample_rejection_prob(q, 32), DEFAULT_T, seg_len)
            total = 1 - (1 - sf) ** n_seg
            if Fraction("0.05") <= total <= Fraction("0.50"):
                params = GenParams(N=n_ring, w=32, seg_len=seg_len, n_seg=n_seg,
                                   base=(q,))
                return params, float(total)
        q -= 2 * n_ring
    raise RuntimeError("no contrived modulus found")


def test_criterion_09_failure_model_agreement():
    params, _ = _contrived_profile()
    trials = 10_000
    rep = empirical_failure_rate(params, trials,
                                 seed_source_from_rng(random.Random(99)))
    analytic = rep.analytic_failure
    in_band = 0.05 <= analytic <= 0.50
    sigma = rep.binomial_sigma
    mc_ok = abs(rep.empirical_failure - analytic) <= 4 * sigma

    clients = 2_000
    source = seed_source_from_rng(random.Random(123))
    attempts = [client_generate_with_retry(source, params, 1000).attempts
                for _ in range(clients)]
    p_success = 1 - analytic
    mean_se = ((1 - p_success) / p_success ** 2 / clients) ** 0.5
    mean_ok = abs(np.mean(attempts) - 1 / p_success) <= 4 * mean_se

    report(9, "Monte-Carlo failure rate and retry count match the model",
           in_band and mc_ok and mean_ok,
           f"analytic={analytic:.4f} empirical={rep.empirical_failure:.4f} "
           f"mean_attempts={np.mean(attempts):.4f} expected={1 / p_success:.4f}")


def test_criterion_10_uniformity_chi_square(full_catalog):
    candidates = [r for r in full_catalog if r.p_r < Fraction(1, 1000)]
    picks = [candidates[0], candidates[len(candidates) // 2], candidates[-1]]
    base = tuple(r.q for r in picks)
    params = GenParams(N=DEFAULT_N, w=DEFAULT_W, seg_len=32,
                       n_seg=DEFAULT_N // 32, base=base)
    seed = Seed(bytes(range(36)))
    low_p = []
    for q in base:
        limb = generate_limb(seed, q, params)
        rep = chi_square_uniformity(limb, bins=64)
        if rep.p_value <= 0.001:
            low_p.append(f"q={q}: p={rep.p_value:.5f}")
    report(10, f"chi-square uniformity on 2^16 limbs for {base}",
           not low_p, "; ".join(low_p))


def test_criterion_11_golden_vectors(golden_xof_vectors, golden_segment,
                                     golden_mrp):
    problems = []
    empty_in, empty_out = golden_xof_vectors[0]
    if empty_in != b"" or not empty_out.hex().startswith(
            "7f9c2ba4e88f827d616045507605853e"):
        problems.append("fixture file lost its published-vector anchor")
    for data, expected in golden_xof_vectors:
        if xof_expand(data) != expected:
            problems.append(f"xof mismatch for input {data.hex() or '<empty>'}")
    from mrpgen import gen_seg
    from mrpgen.xof import encode_domain_input
    seg = gen_seg(encode_domain_input(golden_segment["seed"], golden_segment["q"],
                                      golden_segment["id_seg"]),
                  golden_segment["q"], golden_segment["len"], golden_segment["w"])
    if list(seg.values) != golden_segment["values"]:
        problems.append("golden segment drifted")
    params = GenParams(N=golden_mrp["N"], w=32, seg_len=golden_mrp["len"],
                       n_seg=golden_mrp["n_seg"], base=golden_mrp["base"])
    mrp = generate_mrp(golden_mrp["seed"], params)
    for q, expected_coeffs in golden_mrp["limbs"].items():
        if mrp.limbs[q].coeffs.tolist() != expected_coeffs:
            problems.append(f"golden limb q={q} drifted")
    report(11, "golden vectors stable byte-for-byte", not problems,
           "; ".join(problems))
