"""Default generation profile and the bundled reference statistics.

The default accelerator profile is a 2^16 ring with 32-bit words and one
1344-bit XOF block per segment (42 candidate words).  ``REFERENCE_ROWS``
carries the expected supported-moduli statistics for that profile at the
four standard segment lengths; the ``table1`` CLI report and the acceptance
suite check enumeration output against these rows.
"""

from fractions import Fraction

DEFAULT_N = 1 << 16
DEFAULT_W = 32
DEFAULT_R_BITS = 1344
DEFAULT_T = DEFAULT_R_BITS // DEFAULT_W  # 42 candidate words per block
DEFAULT_HW_NAF_MAX = 5
DEFAULT_Q_MIN_EXCLUSIVE = 1 << 19
DEFAULT_SEG_LENS = (32, 16, 8, 4)
DEFAULT_MAX_FAIL = Fraction("0.03")
SEED_BITS = 288

HIST_BUCKETS = tuple(range(20, 33))

# One row per standard segment length: (p_r_max, |S|, histogram over
# HIST_BUCKETS, seg_len, MRP-failure bound).  p_r_max and the bound are
# decimal strings so they parse to exact Fractions.
REFERENCE_ROWS = (
    ("0.03655", 277, (2, 1, 1, 8, 15, 18, 26, 51, 39, 37, 20, 27, 32), 32, "0.0300"),
    ("0.25305", 526, (2, 1, 1, 8, 15, 18, 26, 52, 57, 87, 114, 68, 77), 16, "0.0300"),
    ("0.42359", 562, (2, 1, 1, 8, 15, 18, 26, 52, 57, 87, 115, 98, 82), 8, "0.0300"),
    ("0.5", 625, (2, 1, 1, 8, 15, 18, 26, 52, 57, 87, 115, 161, 82), 4, "0.0029"),
)

# Reference accelerator scale for the wiring-cost model: 16384 32-bit lanes
# at 1 GHz, 1/8 occupancy, 15 mm die, 40 fJ/bit/mm wires.
COST_REFERENCE = dict(R=16384, w=32, f_hz=1e9, gamma=0.125, d_mm=15.0,
                      e_j_per_bit_mm=40e-15)
