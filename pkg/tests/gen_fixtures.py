#!/usr/bin/env python3
# Produces the committed golden fixtures from the independent reference
# implementation in reference_keccak.py.  Run from the tests/ directory:
#
#     python gen_fixtures.py
#
# The pipeline here (input encoding, word split, threshold filter) is
# written from scratch on purpose; the package under test must reproduce
# these bytes without sharing any code with them.

from pathlib import Path

import reference_keccak as ref

OUT = Path(__file__).parent / "fixtures"

SEED_ZERO = bytes(36)
SEED_ITER = bytes(range(36))


def encode(seed, q, id_seg):
    return seed + q.to_bytes(4, "little") + id_seg.to_bytes(2, "little")


def words_le32(block):
    return [int.from_bytes(block[4 * i:4 * i + 4], "little")
            for i in range(len(block) // 4)]


def filter_segment(block, q, want):
    thresh = (2 ** 32 // q) * q
    kept = []
    for word in words_le32(block):
        if word < thresh:
            kept.append(word)
            if len(kept) == want:
                break
    return kept


def write_xof_vectors():
    inputs = [
        b"",
        encode(SEED_ZERO, 786433, 0),
        encode(SEED_ZERO, 3, 0),
        encode(SEED_ITER, 786433, 5),
    ]
    lines = []
    for data in inputs:
        out = ref.shake128(data, 168)
        lines.append(f"{data.hex() or '-'} {out.hex()}")
    (OUT / "xof_vectors.txt").write_text("\n".join(lines) + "\n")


def write_golden_segment():
    q, id_seg, want = 786433, 0, 32
    block = ref.shake128(encode(SEED_ZERO, q, id_seg), 168)
    kept = filter_segment(block, q, want)
    assert len(kept) == want
    text = (f"seed = {SEED_ZERO.hex()}\n"
            f"q = {q}\nid_seg = {id_seg}\nlen = {want}\nw = 32\n"
            "values = " + " ".join(str(v) for v in kept) + "\n")
    (OUT / "golden_segment.txt").write_text(text)


def write_golden_mrp():
    n_ring, seg_len, n_seg = 256, 32, 8
    base = (7681, 10753)
    lines = [f"seed = {SEED_ZERO.hex()}",
             f"N = {n_ring}", f"len = {seg_len}", f"n_seg = {n_seg}",
             "base = " + " ".join(str(q) for q in base)]
    for q in base:
        coeffs = []
        for id_seg in range(n_seg):
            block = ref.shake128(encode(SEED_ZERO, q, id_seg), 168)
            seg = filter_segment(block, q, seg_len)
            assert len(seg) == seg_len, (q, id_seg)
            coeffs.extend(seg)
        lines.append(f"limb {q} = " + " ".join(str(v) for v in coeffs))
    (OUT / "golden_mrp.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    write_xof_vectors()
    write_golden_segment()
    write_golden_mrp()
    print(f"fixtures written to {OUT}")
