"""JSON encoding helpers shared by the report writers."""

from fractions import Fraction

import numpy as np

REPORT_VERSION = 1


def encode_scalar(v):
    if isinstance(v, Fraction):
        return str(v)
    v = float(v)
    # 12 significant digits keeps float reports stable against last-digit noise
    out = float(f"{v:.12g}")
    return 0.0 if out == 0 else out


def encode_vector(v):
    return [encode_scalar(x) for x in np.asarray(v).tolist()]


def encode_matrix(m):
    return [encode_vector(row) for row in np.asarray(m)]
