"""NTT-friendly prime enumeration and classification.

The transform-friendly moduli for ring dimension N are primes q ≡ 1 (mod 2N)
inside the hardware word size.  Each prime is graded by two hardware costs:
the signed-digit weight of q (cheap modular reduction wants few nonzero NAF
digits) and the per-sample rejection probability (2^w mod q) / 2^w, which
drives the generation failure model.  Probabilities are exact rationals so
threshold comparisons at published boundaries can never flip by rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# Deterministic Miller-Rabin witness sets, each proven complete below its bound.
_MR_RANGES = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (4_759_123_141, (2, 7, 61)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 64, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 2^64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n >= 1 << 64:
        raise ValueError("is_prime is only proven deterministic below 2^64")
    for bound, witnesses in _MR_RANGES:
        if n < bound:
            break
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in witnesses:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def naf(n: int) -> list[int]:
    """Canonical non-adjacent form of n, least-significant digit first.

    Digits are in {-1, 0, +1}, no two adjacent digits are nonzero, and
    sum(d_i * 2^i) == n.  naf(0) == [].
    """
    if n < 0:
        raise ValueError("naf is defined for non-negative integers")
    digits = []
    while n:
        if n & 1:
            d = 2 - (n & 3)  # +1 when n % 4 == 1, -1 when n % 4 == 3
            digits.append(d)
            n -= d
        else:
            digits.append(0)
        n >>= 1
    return digits


def hw_naf(n: int) -> int:
    """Number of nonzero digits in the canonical NAF of n."""
    return sum(1 for d in naf(n) if d)


def is_ntt_friendly(q: int, n_ring: int) -> bool:
    """True iff q is prime and q ≡ 1 (mod 2N) for ring dimension N."""
    if n_ring <= 0 or n_ring & (n_ring - 1):
        raise ValueError("ring dimension must be a power of two")
    return q % (2 * n_ring) == 1 and is_prime(q)


def sample_rejection_prob(q: int, w: int) -> Fraction:
    """Exact per-sample rejection probability (2^w mod q) / 2^w."""
    if not 1 < q < 1 << w:
        raise ValueError(f"q must satisfy 1 < q < 2^{w}")
    return Fraction((1 << w) % q, 1 << w)


def size_bucket(q: int, convention: str = "round") -> int:
    """Integer size class of q under a log2 bucketing convention.

    ``round`` (the default, matching the published reference statistics)
    assigns bucket b when 2^(2b-1) < q^2 <= 2^(2b+1); ``ceil`` and ``floor``
    are available for cross-convention reporting.  All three are computed in
    exact integer arithmetic.
    """
    if q < 2:
        raise ValueError("bucket is defined for q >= 2")
    if convention == "floor":
        return q.bit_length() - 1
    if convention == "ceil":
        return (q - 1).bit_length()
    if convention == "round":
        b = q.bit_length() - 1
        if q * q > 1 << (2 * b + 1):
            b += 1
        return b
    raise ValueError(f"unknown bucket convention '{convention}'")


@dataclass(frozen=True)
class PrimeRecord:
    """One supported modulus with its hardware-relevant grades."""

    q: int
    bucket: int
    hw_naf: int
    p_r: Fraction


@dataclass(frozen=True)
class CatalogFilter:
    """Admission predicate for the supported moduli set."""

    n_ring: int
    w: int
    hw_naf_max: int
    p_r_max: Fraction
    q_min_exclusive: int = 1

    def __post_init__(self):
        if self.n_ring <= 0 or self.n_ring & (self.n_ring - 1):
            raise ValueError("ring dimension must be a power of two")
        if self.w <= 0:
            raise ValueError("word size must be positive")
        object.__setattr__(self, "p_r_max", Fraction(self.p_r_max))

    def admits(self, q: int) -> bool:
        if not self.q_min_exclusive < q < 1 << self.w:
            return False
        if q % (2 * self.n_ring) != 1 or not is_prime(q):
            return False
        if hw_naf(q) > self.hw_naf_max:
            return False
        return sample_rejection_prob(q, self.w) <= self.p_r_max


@dataclass(frozen=True)
class ModuliCatalog:
    """The supported moduli set for one filter, sorted ascending by q."""

    filter: CatalogFilter
    records: tuple[PrimeRecord, ...]

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def moduli(self) -> tuple[int, ...]:
        return tuple(r.q for r in self.records)

    def worst_p_r(self) -> Fraction:
        if not self.records:
            raise ValueError("empty catalog has no worst rejection probability")
        return max(r.p_r for r in self.records)

    def restrict(self, p_r_max) -> "ModuliCatalog":
        """Sub-catalog under a tighter rejection-probability cap."""
        cap = Fraction(p_r_max)
        if cap > self.filter.p_r_max:
            raise ValueError("restrict only tightens the p_r cap")
        new_filter = CatalogFilter(self.filter.n_ring, self.filter.w,
                                   self.filter.hw_naf_max, cap,
                                   self.filter.q_min_exclusive)
        return ModuliCatalog(new_filter,
                             tuple(r for r in self.records if r.p_r <= cap))


def enumerate_supported(filt: CatalogFilter, bucket_convention: str = "round") -> ModuliCatalog:
    """Enumerate every prime admitted by the filter.

    Candidates are exactly the arithmetic progression k*2N + 1; each one is
    primality-tested deterministically, so the catalog is reproducible
    bit-for-bit.
    """
    step = 2 * filt.n_ring
    records = []
    q = step + 1
    if q <= filt.q_min_exclusive:
        q += ((filt.q_min_exclusive - q) // step + 1) * step
    limit = 1 << filt.w
    while q < limit:
        if is_prime(q):
            weight = hw_naf(q)
            if weight <= filt.hw_naf_max:
                p_r = sample_rejection_prob(q, filt.w)
                if p_r <= filt.p_r_max:
                    records.append(PrimeRecord(q, size_bucket(q, bucket_convention),
                                               weight, p_r))
        q += step
    return ModuliCatalog(filt, tuple(records))


def histogram(catalog: ModuliCatalog) -> dict[int, int]:
    """Record count per size bucket; values sum to len(catalog)."""
    counts: dict[int, int] = {}
    for rec in catalog.records:
        counts[rec.bucket] = counts.get(rec.bucket, 0) + 1
    return dict(sorted(counts.items()))
