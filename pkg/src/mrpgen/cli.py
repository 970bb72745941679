"""Command-line entry point binding generation, catalogs, analytics, and cost.

Every subcommand prints a report envelope (command, version, input digest,
result) on stdout and diagnostics on stderr.  Exit codes: 0 success, 1 for
expected domain failures (generation shortfall, verification mismatch,
no-fit, retry exhaustion), 2 for usage or input errors.  With --canonical
the report carries no timestamp and is byte-reproducible for identical
inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__, analytics, costmodel, formats, primes, profiles, sampling
from .errors import (ConfigError, FormatError, GenerationFailure, MrpgenError,
                     ParamsError, RetryExhausted)
from .xof import Seed, derive_polynomial_seed

DOMAIN_ERRORS = (GenerationFailure, RetryExhausted)


# ---------------------------------------------------------------- rendering

def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _text_lines(value, key=""):
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            lines.extend(_text_lines(v, f"{key}.{k}" if key else str(k)))
        return lines
    if isinstance(value, (list, tuple)):
        if all(isinstance(v, (int, float, str, bool, np.integer)) for v in value):
            return [f"{key} = {' '.join(str(_jsonable(v)) for v in value)}"]
        lines = []
        for i, v in enumerate(value):
            lines.extend(_text_lines(v, f"{key}[{i}]"))
        return lines
    return [f"{key} = {_jsonable(value)}"]


def _digest(command: str, args: argparse.Namespace) -> str:
    skip = {"handler", "format", "canonical", "threads"}
    payload = {k: str(v) for k, v in sorted(vars(args).items()) if k not in skip}
    blob = json.dumps({"command": command, "args": payload}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _emit(args, command: str, payload: dict, body_lines=None) -> None:
    envelope = {
        "command": command,
        "version": __version__,
        "input_digest": _digest(command, args),
    }
    if not args.canonical:
        envelope["generated_at"] = datetime.now(timezone.utc).isoformat()
    if args.format == "json":
        envelope["result"] = _jsonable(payload)
        print(json.dumps(envelope, sort_keys=True, indent=2))
        return
    for key in ("command", "version", "input_digest", "generated_at"):
        if key in envelope:
            print(f"{key} = {envelope[key]}")
    print()
    for line in (body_lines if body_lines is not None else _text_lines(payload)):
        print(line)


# ---------------------------------------------------------------- helpers

def _seed_from_args(args) -> Seed:
    if getattr(args, "seed", None):
        return Seed.from_hex(args.seed)
    if getattr(args, "common", None) is not None:
        if args.poly_id is None:
            raise ParamsError("--common requires --poly-id")
        common = bytes.fromhex(args.common)
        return derive_polynomial_seed(common, args.poly_id)
    raise ParamsError("a seed is required: --seed or --common/--poly-id")


def _sha256_words(coeffs: np.ndarray) -> str:
    return hashlib.sha256(np.asarray(coeffs, dtype="<u4").tobytes()).hexdigest()


def _limb_summaries(mrp) -> dict:
    return {str(q): _sha256_words(mrp.limbs[q].coeffs) for q in mrp.base}


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------- handlers

def cmd_gen_mrp(args) -> int:
    params = formats.load_params(args.params)
    seed = _seed_from_args(args)
    mrp = sampling.generate_mrp(seed, params)
    if args.out:
        formats.write_mrp(args.out, mrp, params)
    payload = {
        "seed": seed.hex(),
        "N": params.N, "w": params.w, "n_seg": params.n_seg,
        "base": list(params.base),
        "limb_sha256": _limb_summaries(mrp),
        "out": str(args.out) if args.out else None,
    }
    _emit(args, "gen-mrp", payload)
    return 0


def cmd_gen_limb(args) -> int:
    params = formats.load_params(args.params)
    seed = _seed_from_args(args)
    limb = sampling.generate_limb(seed, args.q, params)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(np.asarray(limb.coeffs, dtype="<u4").tobytes())
    payload = {
        "seed": seed.hex(), "q": args.q, "coeff_count": len(limb.coeffs),
        "sha256": _sha256_words(limb.coeffs),
        "head": list(limb.coeffs[:4]), "tail": list(limb.coeffs[-4:]),
        "out": str(args.out) if args.out else None,
    }
    _emit(args, "gen-limb", payload)
    return 0


def cmd_gen_seg(args) -> int:
    params = formats.load_params(args.params)
    seed = _seed_from_args(args)
    seg = sampling.generate_segment(seed, args.q, args.id, params)
    payload = {
        "seed": seed.hex(), "q": args.q, "id_seg": args.id,
        "requested": params.seg_len, "accepted": len(seg.values),
        "complete": seg.complete(params.seg_len),
        "values": list(seg.values),
    }
    _emit(args, "gen-seg", payload)
    if not seg.complete(params.seg_len):
        print(f"error code=generation-failure q={args.q} id_seg={args.id}",
              file=sys.stderr)
        return 1
    return 0


def cmd_retry_gen(args) -> int:
    params = formats.load_params(args.params)
    source = sampling.seed_source_from_rng(random.Random(args.rng_seed))
    result = sampling.client_generate_with_retry(source, params, args.max_attempts)
    if args.out:
        formats.write_mrp(args.out, result.mrp, params)
    payload = {
        "attempts": result.attempts,
        "seed": result.seed.hex(),
        "rng_seed": args.rng_seed,
        "limb_sha256": _limb_summaries(result.mrp),
        "out": str(args.out) if args.out else None,
    }
    _emit(args, "retry-gen", payload)
    return 0


def cmd_verify(args) -> int:
    seed = _seed_from_args(args)
    report = formats.verify_mrp_file(args.mrp, seed)
    payload = {"mrp": str(args.mrp), "seed": seed.hex(),
               "match": report.ok, "detail": report.detail or None}
    _emit(args, "verify", payload)
    if not report.ok:
        print(f"error code=verify-mismatch {report.detail}", file=sys.stderr)
        return 1
    return 0


def _enumerate(filt: primes.CatalogFilter, threads: int) -> primes.ModuliCatalog:
    if threads <= 1:
        return primes.enumerate_supported(filt)
    step = 2 * filt.n_ring
    lo = max(filt.q_min_exclusive, step)
    hi = 1 << filt.w
    k_lo, k_hi = lo // step, (hi - 2) // step
    bounds = np.linspace(k_lo, k_hi + 1, threads + 1, dtype=np.int64)

    def chunk(i):
        lo_q = int(bounds[i]) * step
        hi_q = int(bounds[i + 1]) * step
        sub = primes.CatalogFilter(filt.n_ring, filt.w, filt.hw_naf_max,
                                   filt.p_r_max, max(filt.q_min_exclusive, lo_q - 1))
        cat = primes.enumerate_supported(sub)
        return [r for r in cat.records if r.q < hi_q or i == threads - 1]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(chunk, range(threads)))
    records = tuple(sorted((r for part in parts for r in part), key=lambda r: r.q))
    return primes.ModuliCatalog(filt, records)


def cmd_enum_primes(args) -> int:
    filt = primes.CatalogFilter(
        n_ring=1 << args.n, w=args.w, hw_naf_max=args.hwnaf_max,
        p_r_max=_parse_fraction(args.pr_max),
        q_min_exclusive=1 << args.qmin_bits if args.qmin_bits else 1)
    catalog = _enumerate(filt, args.threads)
    hist = primes.histogram(catalog)
    payload = {
        "count": len(catalog),
        "histogram": {str(b): c for b, c in hist.items()},
        "records": [{"q": r.q, "bucket": r.bucket, "hw_naf": r.hw_naf,
                     "p_r_num": r.p_r.numerator, "p_r_den": r.p_r.denominator}
                    for r in catalog],
    }
    body = ["q,bucket,hw_naf,p_r_num,p_r_den"]
    body += [f"{r.q},{r.bucket},{r.hw_naf},{r.p_r.numerator},{r.p_r.denominator}"
             for r in catalog]
    body += ["", f"count = {len(catalog)}"]
    body += [f"bucket[{b}] = {c}" for b, c in hist.items()]
    _emit(args, "enum-primes", payload, body)
    return 0


def _reference_filter(p_r_max) -> primes.CatalogFilter:
    return primes.CatalogFilter(
        n_ring=profiles.DEFAULT_N, w=profiles.DEFAULT_W,
        hw_naf_max=profiles.DEFAULT_HW_NAF_MAX, p_r_max=Fraction(p_r_max),
        q_min_exclusive=profiles.DEFAULT_Q_MIN_EXCLUSIVE)


def cmd_table1(args) -> int:
    full = _enumerate(_reference_filter(Fraction(1, 2)), args.threads)
    rows = []
    all_match = True
    for p_r_max, count, hist, seg_len, bound in profiles.REFERENCE_ROWS:
        sub = full.restrict(Fraction(p_r_max))
        got_hist = primes.histogram(sub)
        got_row = [got_hist.get(b, 0) for b in profiles.HIST_BUCKETS]
        row = {
            "p_r_max": p_r_max, "seg_len": seg_len, "failure_bound": bound,
            "count": len(sub), "expected_count": count,
            "count_match": len(sub) == count,
            "histogram": got_row, "expected_histogram": list(hist),
            "histogram_match": got_row == list(hist),
        }
        if not (row["count_match"] and row["histogram_match"]):
            all_match = False
            row["bucket_deltas"] = [g - e for g, e in zip(got_row, hist)]
            row["alt_conventions"] = _alt_convention_rows(sub)
        rows.append(row)
    payload = {"bucket_convention": "round(log2 q)",
               "buckets": list(profiles.HIST_BUCKETS),
               "rows": rows, "all_match": all_match}
    body = ["bucket_convention = round(log2 q)",
            f"buckets = {' '.join(str(b) for b in profiles.HIST_BUCKETS)}"]
    for row in rows:
        status = "ok" if row["count_match"] and row["histogram_match"] else "MISMATCH"
        body.append(f"p_r_max={row['p_r_max']} len={row['seg_len']} "
                    f"count={row['count']}/{row['expected_count']} "
                    f"hist={','.join(str(c) for c in row['histogram'])} [{status}]")
    body.append(f"all_match = {all_match}")
    _emit(args, "table1", payload, body)
    if not all_match:
        print("error code=reference-mismatch supported-set statistics deviate",
              file=sys.stderr)
        return 1
    return 0


def _alt_convention_rows(catalog: primes.ModuliCatalog) -> dict:
    out = {}
    for convention in ("ceil", "floor"):
        counts: dict[int, int] = {}
        for rec in catalog.records:
            b = primes.size_bucket(rec.q, convention)
            counts[b] = counts.get(b, 0) + 1
        out[convention] = {str(b): c for b, c in sorted(counts.items())}
    return out


def cmd_analyze(args) -> int:
    p_r = _parse_fraction(args.pr)
    seg_success = analytics.p_seg(p_r, args.t, args.len)
    seg_fail = analytics.seg_failure_prob(p_r, args.t, args.len)
    limb_fail = analytics.limb_failure_mp(seg_fail, args.nseg)
    mrp_fail = analytics.mrp_failure_bound(p_r, args.t, args.len, args.nseg, args.L)
    payload = {
        "t": args.t, "len": args.len, "n_seg": args.nseg, "L": args.L,
        "p_r": str(p_r),
        "p_seg": float(seg_success),
        "seg_failure": float(seg_fail),
        "p_limb": float(1 - limb_fail),
        "limb_failure": float(limb_fail),
        "p_mrp_bound": float(1 - mrp_fail),
        "mrp_failure_bound": float(mrp_fail),
    }
    _emit(args, "analyze", payload)
    return 0


def cmd_fit_table1(args) -> int:
    rows = [(seg_len, p_r_max)
            for p_r_max, _, _, seg_len, _ in profiles.REFERENCE_ROWS
            if Fraction(p_r_max) < Fraction(1, 2)]
    fit = analytics.fit_limb_count(rows, t=profiles.DEFAULT_T, n_ring=profiles.DEFAULT_N,
                                   max_fail=profiles.DEFAULT_MAX_FAIL,
                                   l_range=(1, args.lmax), tolerance=args.tol)
    payload = {
        "L": fit.L, "residual": fit.residual, "ok": fit.ok, "tolerance": fit.tolerance,
        "rows": [{"len": seg_len, "published": str(pub), "solved": float(sol),
                  "deviation": abs(float(sol - pub))}
                 for (seg_len, _), pub, sol in zip(rows, fit.published, fit.solved)],
    }
    if args.len4_check:
        worst = _enumerate(_reference_filter(Fraction(1, 2)), args.threads).worst_p_r()
        seg_len = profiles.DEFAULT_SEG_LENS[-1]
        bound = analytics.mrp_failure_bound(worst, profiles.DEFAULT_T, seg_len,
                                            profiles.DEFAULT_N // seg_len, fit.L)
        payload["len4_check"] = {"len": seg_len, "worst_p_r": float(worst),
                                 "failure_bound": float(bound),
                                 "ok": float(bound) <= 0.0030}
    _emit(args, "fit-table1", payload)
    if not fit.ok:
        print(f"error code=no-fit best L={fit.L} residual={fit.residual}",
              file=sys.stderr)
        return 1
    return 0


def cmd_stats(args) -> int:
    mrp, params = formats.read_mrp(args.mrp)
    reports = [analytics.chi_square_uniformity(mrp.limbs[q], args.bins)
               for q in params.base]
    payload = {"mrp": str(args.mrp), "bins": args.bins,
               "limbs": [{"q": r.q, "samples": r.sample_count,
                          "statistic": r.statistic, "dof": r.dof,
                          "p_value": r.p_value} for r in reports]}
    _emit(args, "stats", payload)
    return 0


def cmd_cost(args) -> int:
    params = costmodel.CostParams(
        R=args.R, w=args.w, f_hz=args.f * 1e9,
        gamma=float(_parse_fraction(args.gamma)),
        d_mm=args.d, e_j_per_bit_mm=args.E * 1e-15)
    report = costmodel.build_cost_report(params, local_hop_mm=args.local_hop)
    payload = {
        "throughput_bps": report.throughput_bps,
        "throughput_tbps": report.throughput_tbps,
        "central_power_w": report.central_power_w,
        "distributed_power_w": report.distributed_power_w,
        "saving_w": report.saving_w,
        "per_axis_density_bps_per_mm": report.per_axis_density_bps_per_mm,
        "per_axis_density_tbps_per_mm": report.per_axis_density_tbps_per_mm,
    }
    _emit(args, "cost", payload)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrpgen",
        description="Seed-expanded uniform multi-residue polynomial toolkit")
    parser.add_argument("--canonical", action="store_true",
                        help="omit timestamps; byte-reproducible reports")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for parallelizable subcommands")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed_args(p):
        p.add_argument("--seed", help="72 hex chars (288-bit seed)")
        p.add_argument("--common", help="64 hex chars (256-bit common part)")
        p.add_argument("--poly-id", type=int, help="32-bit per-polynomial id")

    p = sub.add_parser("gen-mrp", help="generate a full multi-residue polynomial")
    add_seed_args(p)
    p.add_argument("--params", required=True)
    p.add_argument("--out", help="write the binary MRP container here")
    p.set_defaults(handler=cmd_gen_mrp)

    p = sub.add_parser("gen-limb", help="generate one limb at random access")
    add_seed_args(p)
    p.add_argument("--params", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out", help="write raw little-endian u32 coefficients here")
    p.set_defaults(handler=cmd_gen_limb)

    p = sub.add_parser("gen-seg", help="generate one segment (one engine's unit)")
    add_seed_args(p)
    p.add_argument("--params", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--id", type=int, required=True)
    p.set_defaults(handler=cmd_gen_seg)

    p = sub.add_parser("retry-gen", help="client loop: draw seeds until one validates")
    p.add_argument("--params", required=True)
    p.add_argument("--max-attempts", type=int, default=100)
    p.add_argument("--rng-seed", type=int, default=0,
                   help="seed of the documented Python Random generator")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_retry_gen)

    p = sub.add_parser("verify", help="recompute a stored MRP from its seed")
    add_seed_args(p)
    p.add_argument("--mrp", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("enum-primes", help="enumerate the supported moduli set")
    p.add_argument("--n", type=int, required=True, help="log2 of the ring dimension")
    p.add_argument("--w", type=int, default=32)
    p.add_argument("--hwnaf-max", type=int, default=5)
    p.add_argument("--pr-max", default="0.5", help="decimal rejection cap")
    p.add_argument("--qmin-bits", type=int, default=0,
                   help="admit only q > 2^bits (0 = no bound)")
    p.set_defaults(handler=cmd_enum_primes)

    p = sub.add_parser("table1", help="reproduce the bundled reference statistics")
    p.set_defaults(handler=cmd_table1)

    p = sub.add_parser("analyze", help="success probabilities for one profile point")
    p.add_argument("--t", type=int, default=profiles.DEFAULT_T)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--nseg", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--pr", required=True, help="decimal per-sample rejection probability")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("fit-table1", help="recover the limb count behind the reference thresholds")
    p.add_argument("--lmax", type=int, default=200)
    p.add_argument("--tol", type=float, default=0.0005)
    p.add_argument("--no-len4-check", dest="len4_check", action="store_false")
    p.set_defaults(handler=cmd_fit_table1)

    p = sub.add_parser("stats", help="chi-square uniformity of a stored MRP")
    p.add_argument("--mrp", required=True)
    p.add_argument("--bins", type=int, default=64)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("cost", help="central vs distributed wiring cost")
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--f", type=float, required=True, help="clock in GHz")
    p.add_argument("--gamma", required=True, help="occupancy, decimal or a/b")
    p.add_argument("--d", type=float, required=True, help="die side in mm")
    p.add_argument("--E", type=float, required=True, help="wire energy in fJ/bit/mm")
    p.add_argument("--local-hop", type=float, default=0.0,
                   help="distributed-case hop distance in mm")
    p.set_defaults(handler=cmd_cost)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except GenerationFailure as exc:
        print(f"error code={exc.code} q={exc.q} id_seg={exc.id_seg}", file=sys.stderr)
        return 1
    except RetryExhausted as exc:
        print(f"error code={exc.code} attempts={exc.attempts}", file=sys.stderr)
        return 1
    except (ParamsError, FormatError, ConfigError) as exc:
        print(f"error code={exc.code} {exc}", file=sys.stderr)
        return 2
    except MrpgenError as exc:
        print(f"error code={exc.code} {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error code=value-error {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
