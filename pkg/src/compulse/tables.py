"""Published phase tables, kept as literal text and parsed on import.

All phases are in units of pi. Entries may be decimals or fractions
("2/3"); both are parsed exactly with :class:`fractions.Fraction` before the
single conversion to float.
"""

from fractions import Fraction

TARGET_PS = ("0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9")

# Universal pi pulses: label -> (numerators, denominator); phases = numerators * pi / denominator.
UNIVERSAL_TEXT = {
    "U3": ("0, 1, 0", 2),
    "U5a": ("0, 5, 2, 5, 0", 6),
    "U5b": ("0, 11, 2, 11, 0", 6),
    "U7a": ("0, 11, 10, 17, 10, 11, 0", 12),
    "U7b": ("0, 1, 14, 19, 14, 1, 0", 12),
    "U9a": ("0, 0.366, 0.638, 0.435, 1.697, 0.435, 0.638, 0.366, 0", 1),
    "U9b": ("0, 0.634, 1.362, 0.565, 0.303, 0.565, 1.362, 0.634, 0", 1),
    "U11a": ("0, 11, 10, 23, 1, 19, 1, 23, 10, 11, 0", 12),
    "U11b": ("0, 1, 14, 13, 23, 17, 23, 13, 14, 1, 0", 12),
    "U13a": ("0, 9, 42, 11, 8, 37, 2, 37, 8, 11, 42, 9, 0", 24),
    "U13b": ("0, 33, 42, 35, 8, 13, 2, 13, 8, 35, 42, 33, 0", 24),
    "U25a": ("0, 5, 2, 5, 0, 11, 4, 1, 4, 11, 2, 7, 4, 7, 2, 11, 4, 1, 4, 11, 0, 5, 2, 5, 0", 6),
    "U25b": ("0, 11, 2, 11, 0, 5, 4, 7, 4, 5, 2, 1, 4, 1, 2, 5, 4, 7, 4, 5, 0, 11, 2, 11, 0", 6),
}

# Broadband theta pulses A_0 B_phi2 ... A_phiN; columns are N = 2, 3, 4, 5, 6 and list phi_2 .. phi_N.
THETA_BB_COLUMNS = (2, 3, 4, 5, 6)
THETA_BB_TEXT = """
0.1 | 0.7952 | 0.8204, 1.4359 | 2/3, 1.4618, 0.7952 | 0.5033, 1.6110, 1.1032, 1.7861 | 2/5, 8/5, 0.3952, 1.1952, 0.7952
0.2 | 0.7048 | 0.7952, 1.2952 | 2/3, 1.3715, 0.7048 | 0.4569, 1.5710, 1.185, 1.8467  | 2/5, 8/5, 0.3048, 1.1048, 0.7048
0.3 | 0.6310 | 0.7778, 1.1866 | 2/3, 1.2977, 0.6310 | 0.4253, 1.5436, 1.2531, 1.9006 | 2/5, 8/5, 0.2310, 1.0310, 0.6310
0.4 | 0.5641 | 0.7634, 1.0908 | 2/3, 1.2308, 0.5641 | 0.3991, 1.5209, 1.3153, 1.9510 | 2/5, 8/5, 0.1641, 0.9641, 0.5641
0.5 | 0.5    | 3/4, 1         | 2/3, 7/6, 1/2       | 3/8, 3/2, 11/8, 0              | 2/5, 8/5, 1/10, 9/10, 1/2
0.6 | 0.4359 | 0.7366, 0.9092 | 2/3, 1.1026, 0.4359 | 0.3509, 1.4791, 1.4347, 0.0490 | 2/5, 8/5, 0.0359, 0.8359, 0.4359
0.7 | 0.3690 | 0.7222, 0.8134 | 2/3, 1.0357, 0.3690 | 0.3247, 1.4564, 1.4969, 0.0994 | 2/5, 8/5, 1.9689, 0.7689, 0.3689
0.8 | 0.2952 | 0.7048, 0.7048 | 2/3, 0.9618, 0.2952 | 0.2931, 1.4291, 1.565, 0.1533  | 2/5, 8/5, 1.8952, 0.6952, 0.2952
0.9 | 0.2048 | 0.6796, 0.5641 | 2/3, 0.8715, 0.2048 | 0.2467, 1.3890, 1.6468, 0.2139 | 2/5, 8/5, 1.8048, 0.6048, 0.2048
"""

# Narrowband theta pulses, same A...B...A template; columns are N = 2, 4, 6, 8.
THETA_NB_COLUMNS = (2, 4, 6, 8)
THETA_NB_TEXT = """
0.1 | 0.7952 | 0.0769, 1.0257, 1.1026 | 1.4150, 0.5716, 0.8499, 0.0064, 1.4214 | 1.2681, 0.5191, 0.4643, 1.5937, 1.5389, 0.7899, 0.0580
0.2 | 0.7048 | 0.1108, 1.0373, 1.1481 | 1.4316, 0.6075, 0.8012, 1.9772, 1.4087 | 1.2813, 0.5427, 0.4539, 1.6112, 1.5223, 0.7838, 0.0651
0.3 | 0.6310 | 0.1386, 1.0469, 1.1855 | 1.4379, 0.6284, 0.7646, 1.9551, 1.3930 | 1.2879, 0.5569, 0.4423, 1.6198, 1.5052, 0.7742, 0.0621
0.4 | 0.5641 | 0.1639, 1.0557, 1.2196 | 1.4400, 0.6430, 0.7330, 1.9360, 1.3760 | 1.2917, 0.5672, 0.4302, 1.6248, 1.4879, 0.7633, 0.0551
0.5 | 0.5    | 0.1881, 1.0644, 1.2525 | 1.4396, 0.6541, 0.7038, 1.9182, 1.3579 | 1.2939, 0.5752, 0.4177, 1.6277, 1.4702, 0.7515, 0.0454
0.6 | 0.4359 | 0.2124, 1.0732, 1.2857 | 1.4374, 0.6629, 0.6752, 1.9008, 1.3382 | 1.2948, 0.5818, 0.4043, 1.6291, 1.4516, 0.7386, 0.0334
0.7 | 0.3690 | 0.2379, 1.0827, 1.3207 | 1.4334, 0.6702, 0.6460, 1.8828, 1.3162 | 1.2947, 0.5874, 0.3896, 1.6291, 1.4314, 0.7241, 0.0187
0.8 | 0.2952 | 0.2661, 1.0936, 1.3597 | 1.4274, 0.6763, 0.6142, 1.8630, 1.2904 | 1.2934, 0.5922, 0.3727, 1.6277, 1.4081, 0.7069, 0.0003
0.9 | 0.2048 | 0.3009, 1.1075, 1.4083 | 1.4183, 0.6813, 0.5755, 1.8385, 1.2568 | 1.2906, 0.5965, 0.3508, 1.6240, 1.3784, 0.6843, 1.9749
"""

# Passband theta pulses: printed twinning phase per target (4 decimals). The half-sequences
# are the p = 0.5 narrowband rows for every target; only the twinning phase varies.
THETA_PB_TWIN_TEXT = """
0.1 | 0.7952
0.2 | 0.7048
0.3 | 0.6310
0.4 | 0.5641
0.5 | 0.5
0.6 | 0.4359
0.7 | 0.3690
0.8 | 0.2952
0.9 | 0.2048
"""
THETA_PB_HALF_ROW = "0.5"
THETA_PB_HALF_SIZES = (2, 4, 6, 8)


def parse_value(text):
    return Fraction(text.strip())


def parse_list(text):
    return tuple(parse_value(t) for t in text.split(",") if t.strip())


def _parse_rows(text, columns):
    rows = {}
    for line in text.strip().splitlines():
        cells = [c.strip() for c in line.split("|")]
        p, cols = cells[0], cells[1:]
        if len(cols) != len(columns):
            raise ValueError(f"row {p}: expected {len(columns)} columns, got {len(cols)}")
        for n, cell in zip(columns, cols):
            phases = (Fraction(0),) + parse_list(cell)
            if len(phases) != n:
                raise ValueError(f"row {p}, N={n}: expected {n} phases, got {len(phases)}")
            rows[(n, p)] = phases
    return rows


def _parse_universal():
    out = {}
    for label, (nums, den) in UNIVERSAL_TEXT.items():
        out[label] = tuple(v / den for v in parse_list(nums))
    return out


UNIVERSAL = _parse_universal()
THETA_BB = _parse_rows(THETA_BB_TEXT, THETA_BB_COLUMNS)
THETA_NB = _parse_rows(THETA_NB_TEXT, THETA_NB_COLUMNS)
THETA_PB_TWIN = {
    line.split("|")[0].strip(): parse_value(line.split("|")[1])
    for line in THETA_PB_TWIN_TEXT.strip().splitlines()
}
