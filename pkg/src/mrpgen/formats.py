"""On-disk interchange: the MRP binary container and the params text file.

The binary layout pins the exact wire bits a client would hand an
accelerator, so fixtures and cross-build comparisons are byte-exact.  All
integers are little-endian 32-bit words:

    magic      4 bytes  "MRPB"
    version    u32      1
    N, w, r    u32 each
    n_seg      u32
    backend    u32      0 = shake128, 1 = kangarootwelve
    L          u32      base size
    base       L x u32
    perm_kind  u32      0 = identity, 1 = reverse, 2 = explicit
    mapping    N x u32  only when perm_kind = 2
    limbs      L x N x u32, in base order

The header carries the full generation profile so a stored polynomial can
be re-derived and checked from its seed alone.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ParamsError
from .sampling import (GenParams, Limb, MultiResiduePolynomial, Permutation,
                       generate_mrp)
from .xof import Seed

MAGIC = b"MRPB"
VERSION = 1

_BACKEND_IDS = {"shake128": 0, "kangarootwelve": 1}
_BACKEND_NAMES = {v: k for k, v in _BACKEND_IDS.items()}
_PERM_IDS = {"identity": 0, "reverse": 1, "explicit": 2}


def _u32s(values) -> bytes:
    return np.asarray(values, dtype="<u4").tobytes()


def write_mrp(path, mrp: MultiResiduePolynomial, params: GenParams) -> None:
    perm_kind = _PERM_IDS.get(params.layout.kind, 2)
    header = MAGIC + struct.pack(
        "<7I", VERSION, params.N, params.w, params.r, params.n_seg,
        _BACKEND_IDS[params.backend], len(params.base))
    body = [header, _u32s(params.base), struct.pack("<I", perm_kind)]
    if perm_kind == 2:
        body.append(_u32s(params.layout.mapping))
    for q in params.base:
        body.append(_u32s(mrp.limbs[q].coeffs))
    Path(path).write_bytes(b"".join(body))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("truncated MRP file")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u32_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(4 * count), dtype="<u4").astype(np.uint32)


def read_mrp(path) -> tuple[MultiResiduePolynomial, GenParams]:
    rd = _Reader(Path(path).read_bytes())
    if rd.take(4) != MAGIC:
        raise FormatError("not an MRP file (bad magic)")
    version = rd.u32()
    if version != VERSION:
        raise FormatError(f"unsupported MRP version {version}")
    n_ring, w, r, n_seg, backend_id, base_len = (rd.u32() for _ in range(6))
    if backend_id not in _BACKEND_NAMES:
        raise FormatError(f"unknown backend id {backend_id}")
    base = tuple(int(q) for q in rd.u32_array(base_len))
    perm_kind = rd.u32()
    if perm_kind == 0:
        layout = Permutation.identity(n_ring)
    elif perm_kind == 1:
        layout = Permutation.reverse(n_ring)
    elif perm_kind == 2:
        layout = Permutation(rd.u32_array(n_ring).astype(np.int64))
    else:
        raise FormatError(f"unknown permutation kind {perm_kind}")
    try:
        params = GenParams(N=n_ring, w=w, seg_len=n_ring // n_seg, n_seg=n_seg,
                           base=base, layout=layout, r=r,
                           backend=_BACKEND_NAMES[backend_id])
    except ParamsError as exc:
        raise FormatError(f"MRP header holds an invalid profile: {exc}") from exc
    limbs = {q: Limb(q=q, coeffs=rd.u32_array(n_ring)) for q in base}
    if rd.pos != len(rd.data):
        raise FormatError("trailing bytes after the last limb")
    return MultiResiduePolynomial(base=base, limbs=limbs), params


@dataclass
class VerifyReport:
    ok: bool
    detail: str = ""


def verify_mrp_file(path, seed: Seed) -> VerifyReport:
    """Recompute a stored polynomial from its seed and compare bit-exactly."""
    stored, params = read_mrp(path)
    recomputed = generate_mrp(seed, params)
    for q in params.base:
        if not np.array_equal(stored.limbs[q].coeffs, recomputed.limbs[q].coeffs):
            first = int(np.argmax(stored.limbs[q].coeffs != recomputed.limbs[q].coeffs))
            return VerifyReport(ok=False,
                                detail=f"limb q={q} differs first at index {first}")
    return VerifyReport(ok=True)


_PARAM_KEYS = ("N", "w", "r", "len", "n_seg", "base", "permutation", "backend")
_REQUIRED_KEYS = ("N", "w", "len", "n_seg", "base")


def load_params(path) -> GenParams:
    """Parse a key-value profile file into a validated GenParams.

    Recognized keys: N, w, r, len, n_seg, base (comma-separated moduli),
    permutation (identity | reverse | path of an index file, relative to the
    params file), backend.  Unknown keys are rejected by name.
    """
    path = Path(path)
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamsError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARAM_KEYS:
            raise ParamsError(f"{path}:{lineno}: unknown key '{key}'")
        if key in fields:
            raise ParamsError(f"{path}:{lineno}: duplicate key '{key}'")
        fields[key] = value
    for key in _REQUIRED_KEYS:
        if key not in fields:
            raise ParamsError(f"{path}: missing required key '{key}'")
    try:
        base = tuple(int(tok) for tok in fields["base"].replace(",", " ").split())
    except ValueError:
        raise ParamsError(f"{path}: base must be a list of integers") from None
    n_ring = _parse_int(fields, "N", path)
    layout = _parse_permutation(fields.get("permutation", "identity"), n_ring, path)
    return GenParams(
        N=n_ring,
        w=_parse_int(fields, "w", path),
        seg_len=_parse_int(fields, "len", path),
        n_seg=_parse_int(fields, "n_seg", path),
        base=base,
        layout=layout,
        r=int(fields.get("r", "1344")),
        backend=fields.get("backend", "shake128"),
    )


def _parse_int(fields: dict, key: str, path) -> int:
    try:
        return int(fields[key])
    except ValueError:
        raise ParamsError(f"{path}: key '{key}' must be an integer") from None


def _parse_permutation(value: str, n_ring: int, path: Path) -> Permutation:
    if value == "identity":
        return Permutation.identity(n_ring)
    if value == "reverse":
        return Permutation.reverse(n_ring)
    perm_path = Path(value)
    if not perm_path.is_absolute():
        perm_path = Path(path).parent / perm_path
    if not perm_path.exists():
        raise ParamsError(f"permutation index file not found: {perm_path}")
    indices = [int(tok) for tok in perm_path.read_text().split()]
    return Permutation(indices)


def save_params(params: GenParams, path) -> None:
    """Serialize a profile so that load_params round-trips it."""
    path = Path(path)
    if params.layout.kind in ("identity", "reverse"):
        perm_value = params.layout.kind
    else:
        perm_file = path.with_suffix(".perm")
        perm_file.write_text(" ".join(str(i) for i in params.layout.mapping) + "\n")
        perm_value = perm_file.name
    lines = [
        f"N = {params.N}",
        f"w = {params.w}",
        f"r = {params.r}",
        f"len = {params.seg_len}",
        f"n_seg = {params.n_seg}",
        "base = " + ", ".join(str(q) for q in params.base),
        f"permutation = {perm_value}",
        f"backend = {params.backend}",
    ]
    path.write_text("\n".join(lines) + "\n")
