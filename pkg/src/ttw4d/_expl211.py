"""Coefficient tables of the explicit 5th-order raising-sum operator, k=(2,1,1).

Two variants of the same object — the differential operator equal to
Xi_1^+ + Xi_1^- for k = (2, 1, 1) — written in the coordinates (r, theta1):

``PRINTED_TABLE``
    The operator exactly as typeset in the source, as a sum of
    scalar-monomial x coefficient-function x derivative terms:
        key  (deriv, trig, rpow, smono)
        value (c0, c1)  meaning the rational coefficient c0 + c1*a1^2.
    deriv in {f, dr, dt, drr, drt, drrt} (mixed d/dr, d/dtheta1 orders),
    trig in {1, c, s} = {1, cos(4 theta1), sin(4 theta1)}, rpow the power of
    1/r, and smono the substituted state scalar: one of
    1, E, E2, A02, A04, A12, EA02, EA12, A02A12 (E^j (A0^2)^k (A1^2)^l).
    Under the documented substitutions E -> H, A0^2 -> k1^2 - L1,
    A1^2 -> (k2^2 - 4 L2)/(4 k1^2) this does NOT reproduce the lattice
    action of Xi_1^+ + Xi_1^- (no coefficient assignment on this monomial
    support can); it is kept verbatim for the regression check.

``CORRECTED_TABLE``
    The true operator, generated once by exact symbolic composition of the
    primitive ladders and frozen here as data:
        TABLE[(dr_order, dtheta1_order)][(m, trig, e, p0, p1, pa)] = (num, den)
    with the monomial Fraction(num, den) * r^{-m} * trig(4 theta1)
    * E^e * A0^p0 * A1^p1 * a1^pa.  Note the A0^6 content — it lies outside
    the printed table's monomial support entirely.
"""
from fractions import Fraction as F

_Z = F(0)

PRINTED_TABLE = {
    ("dr",  "1", 3, "A02A12"): (F(-2), _Z),
    ("f",   "1", 4, "A02A12"): (F(6), _Z),
    ("dr",  "c", 3, "A04"): (F(-1, 2), _Z),
    ("dt",  "s", 4, "A04"): (F(1, 4), _Z),
    ("f",   "c", 4, "A04"): (F(5, 2), _Z),
    ("f",   "1", 4, "A04"): (F(1, 2), _Z),
    ("dr",  "1", 1, "EA12"): (F(-1), _Z),
    ("f",   "1", 2, "EA12"): (F(2), _Z),
    ("dt",  "s", 0, "E2"): (F(1, 16), _Z),
    ("f",   "c", 0, "E2"): (F(1, 4), _Z),
    ("f",   "1", 0, "E2"): (F(1, 8), _Z),
    ("dr",  "c", 1, "EA02"): (F(-1, 4), _Z),
    ("dt",  "s", 2, "EA02"): (F(1, 4), _Z),
    ("f",   "c", 2, "EA02"): (F(3, 2), _Z),
    ("f",   "1", 2, "EA02"): (F(1, 2), _Z),
    ("dr",  "1", 3, "A12"): (F(-10), _Z),
    ("drr", "1", 2, "A12"): (F(4), _Z),
    ("f",   "1", 4, "A12"): (F(-6), _Z),
    ("drt", "s", 1, "E"): (F(-1), _Z),
    ("dr",  "c", 1, "E"): (F(-3), _Z),
    ("dr",  "1", 1, "E"): (F(-2), F(1)),
    ("dt",  "s", 2, "E"): (F(5, 4), _Z),
    ("f",   "c", 2, "E"): (F(3), _Z),
    ("f",   "1", 2, "E"): (F(5, 2), F(-2)),
    ("drrt", "s", 2, "A02"): (F(-1, 4), _Z),
    ("drt", "s", 3, "A02"): (F(13, 4), _Z),
    ("drr", "c", 2, "A02"): (F(-2), _Z),
    ("drr", "1", 2, "A02"): (F(-1, 2), _Z),
    ("dr",  "c", 3, "A02"): (F(27, 2), _Z),
    ("dr",  "1", 3, "A02"): (F(13, 2), F(-2)),
    ("dt",  "s", 4, "A02"): (F(-5), _Z),
    ("f",   "c", 4, "A02"): (F(-25, 2), _Z),
    ("f",   "1", 4, "A02"): (F(-10), F(6)),
    ("drrt", "s", 2, "1"): (F(11, 4), _Z),
    ("drr", "c", 2, "1"): (F(7), _Z),
    ("drr", "1", 2, "1"): (F(11, 2), F(-4)),
    ("drt", "s", 3, "1"): (F(-23, 4), _Z),
    ("dr",  "c", 3, "1"): (F(-13), _Z),
    ("dr",  "1", 3, "1"): (F(-23, 2), F(10)),
    ("dt",  "s", 4, "1"): (F(-21, 4), _Z),
    ("f",   "c", 4, "1"): (F(-15), _Z),
    ("f",   "1", 4, "1"): (F(-21, 2), F(6)),
}

DERIV_INDEX = {
    "f": (0, 0, 0, 0),
    "dr": (1, 0, 0, 0),
    "dt": (0, 1, 0, 0),
    "drr": (2, 0, 0, 0),
    "drt": (1, 1, 0, 0),
    "drrt": (2, 1, 0, 0),
}

CORRECTED_TABLE = {
    (0, 0): {(0, '1', 2, 0, 0, 0): (-1, 4),
             (0, '1', 2, 0, 0, 2): (1, 4),
             (0, '1', 2, 0, 2, 0): (-1, 4),
             (0, 'c', 2, 0, 0, 0): (-1, 4),
             (0, 'c', 2, 2, 0, 0): (-1, 16),
             (2, '1', 1, 0, 0, 0): (-1, 1),
             (2, '1', 1, 0, 0, 2): (1, 1),
             (2, '1', 1, 0, 2, 0): (-1, 1),
             (2, '1', 1, 2, 0, 0): (-2, 1),
             (2, '1', 1, 2, 0, 2): (1, 1),
             (2, '1', 1, 2, 2, 0): (-1, 1),
             (2, 'c', 1, 0, 0, 0): (-1, 1),
             (2, 'c', 1, 2, 0, 0): (-13, 4),
             (2, 'c', 1, 4, 0, 0): (-1, 4),
             (4, '1', 0, 0, 0, 0): (9, 1),
             (4, '1', 0, 0, 0, 2): (-9, 1),
             (4, '1', 0, 0, 2, 0): (9, 1),
             (4, '1', 0, 2, 0, 0): (-5, 1),
             (4, '1', 0, 2, 0, 2): (8, 1),
             (4, '1', 0, 2, 2, 0): (-8, 1),
             (4, '1', 0, 4, 0, 0): (-4, 1),
             (4, '1', 0, 4, 0, 2): (1, 1),
             (4, '1', 0, 4, 2, 0): (-1, 1),
             (4, 'c', 0, 0, 0, 0): (9, 1),
             (4, 'c', 0, 2, 0, 0): (1, 4),
             (4, 'c', 0, 4, 0, 0): (-9, 1),
             (4, 'c', 0, 6, 0, 0): (-1, 4)},
    (0, 1): {(0, 's', 2, 0, 0, 0): (-1, 8),
             (2, 's', 1, 0, 0, 0): (-1, 2),
             (2, 's', 1, 2, 0, 0): (-1, 1),
             (4, 's', 0, 0, 0, 0): (9, 2),
             (4, 's', 0, 2, 0, 0): (-5, 2),
             (4, 's', 0, 4, 0, 0): (-2, 1)},
    (1, 0): {(1, '1', 1, 0, 0, 0): (2, 1),
             (1, '1', 1, 0, 0, 2): (-2, 1),
             (1, '1', 1, 0, 2, 0): (2, 1),
             (1, '1', 1, 2, 0, 0): (1, 2),
             (1, 'c', 1, 0, 0, 0): (2, 1),
             (1, 'c', 1, 2, 0, 0): (3, 2),
             (3, '1', 0, 0, 0, 0): (3, 1),
             (3, '1', 0, 0, 0, 2): (-3, 1),
             (3, '1', 0, 0, 2, 0): (3, 1),
             (3, '1', 0, 2, 0, 0): (14, 1),
             (3, '1', 0, 2, 0, 2): (-9, 1),
             (3, '1', 0, 2, 2, 0): (9, 1),
             (3, '1', 0, 4, 0, 0): (1, 1),
             (3, 'c', 0, 0, 0, 0): (3, 1),
             (3, 'c', 0, 2, 0, 0): (79, 4),
             (3, 'c', 0, 4, 0, 0): (17, 4)},
    (1, 1): {(1, 's', 1, 0, 0, 0): (1, 1),
             (1, 's', 1, 2, 0, 0): (1, 4),
             (3, 's', 0, 0, 0, 0): (3, 2),
             (3, 's', 0, 2, 0, 0): (7, 1),
             (3, 's', 0, 4, 0, 0): (1, 2)},
    (2, 0): {(2, '1', 0, 0, 0, 0): (-3, 1),
             (2, '1', 0, 0, 0, 2): (3, 1),
             (2, '1', 0, 0, 2, 0): (-3, 1),
             (2, '1', 0, 2, 0, 0): (-3, 1),
             (2, '1', 0, 2, 0, 2): (1, 1),
             (2, '1', 0, 2, 2, 0): (-1, 1),
             (2, 'c', 0, 0, 0, 0): (-3, 1),
             (2, 'c', 0, 2, 0, 0): (-23, 4),
             (2, 'c', 0, 4, 0, 0): (-1, 4)},
    (2, 1): {(2, 's', 0, 0, 0, 0): (-3, 2), (2, 's', 0, 2, 0, 0): (-3, 2)}}
