"""Reference convergence tables for f = exp, D = 1 - mu^2.

Each row is (N, E, order, exponents). N is the total node count (2N in
half-range mode). Rows with N >= 10000 are dominated by roundoff; they are
kept for inspection and never asserted.
"""

ROUNDOFF_ROWS = (10000, 20000)

_2 = 2.00

REFERENCE_TABLES = {
    ("lee", "fr"): [
        (50, 1.54e-2, None, {}),
        (100, 3.96e-3, 1.96, {"q": 1.98, "s": 1.98}),
        (500, 1.61e-4, 1.99, {"q": 1.99, "s": 1.99}),
        (1000, 4.02e-5, _2, {"q": _2, "s": _2}),
        (5000, 1.61e-6, _2, {"q": _2, "s": _2}),
        (10000, 4.10e-7, 1.97, {"q": _2, "s": _2}),
        (20000, 1.42e-7, 1.53, {"q": _2, "s": _2}),
    ],
    ("haldy-ligou", "fr"): [
        (50, 8.68e-3, None, {}),
        (100, 2.20e-3, 1.98, {"q": 1.98, "r": 1.98, "s": 1.99, "t": 1.99}),
        (500, 8.92e-5, 1.99, {"q": 1.99, "r": 1.99, "s": 1.99, "t": _2}),
        (1000, 2.23e-5, _2, {"q": _2, "r": _2, "s": _2, "t": _2}),
        (5000, 8.95e-7, _2, {"q": _2, "r": _2, "s": _2, "t": _2}),
        (10000, 2.31e-7, 1.95, {"q": _2, "r": _2, "s": _2, "t": _2}),
        (20000, 9.75e-8, 1.24, {"q": _2, "r": _2, "s": _2, "t": _2}),
    ],
    ("haldy-ligou", "hr"): [
        (50, 2.20e-1, None, {}),
        (100, 2.21e-1, None, {"q": 1.97, "r": 1.96, "s": 1.97, "t": -1.14e-2}),
        (500, 2.21e-1, None, {"q": 1.99, "r": 1.99, "s": 1.99, "t": -1.61e-3}),
        (1000, 2.21e-1, None, {"q": _2, "r": _2, "s": _2, "t": -1.19e-4}),
        (5000, 2.22e-1, None, {"q": _2, "r": _2, "s": _2, "t": -1.64e-5}),
        (10000, 2.28e-1, None, {"q": _2, "r": _2, "s": _2, "t": -1.08e-6}),
        (20000, 3.64e-1, None, {"q": _2, "r": _2, "s": _2, "t": -4.54e-9}),
    ],
    ("morel", "fr"): [
        (50, 6.94e-3, None, {}),
        (100, 1.76e-3, 1.98, {"q": 1.98, "r": 1.98, "s": 1.99, "t": 1.99, "u": 3.97}),
        (500, 7.14e-5, 1.99, {"q": 1.99, "r": 1.99, "s": 1.99, "t": _2, "u": 3.99}),
        (1000, 1.79e-5, _2, {"q": _2, "r": _2, "s": _2, "t": _2, "u": 4.00}),
        (5000, 7.16e-7, _2, {"q": _2, "r": _2, "s": _2, "t": _2, "u": 4.00}),
        (10000, 1.86e-7, 1.94, {"q": _2, "r": _2, "s": _2, "t": _2, "u": 4.00}),
        (20000, 8.64e-8, 1.11, {"q": _2, "r": _2, "s": _2, "t": _2, "u": 4.00}),
    ],
    ("uniform", "fr"): [
        (50, 2.44e-3, None, {}),
        (100, 6.23e-4, 1.97, {}),
        (500, 2.53e-5, 1.99, {}),
        (1000, 6.33e-6, _2, {}),
        (5000, 2.54e-7, _2, {}),
        (10000, 6.34e-8, _2, {}),
        (20000, 5.12e-8, 3.09e-1, {}),
    ],
    ("uniform-shifted", "fr"): [
        (50, 7.38e-3, None, {}),
        (100, 3.68e-3, 1.00, {"q": 1.01}),
        (500, 7.36e-4, 1.00, {"q": 1.00}),
        (1000, 3.68e-4, 1.00, {"q": 1.00}),
        (5000, 7.36e-5, 1.00, {"q": 1.00}),
        (10000, 3.68e-5, 1.00, {"q": 1.00}),
        (20000, 1.84e-5, 1.00, {"q": 1.00}),
    ],
}


def asserted_rows(family, mode):
    return [r for r in REFERENCE_TABLES[(family, mode)] if r[0] not in ROUNDOFF_ROWS]


def study_ns(family, mode, include_roundoff=False):
    """Node counts to pass to convergence_study (per half in HR mode)."""
    rows = REFERENCE_TABLES[(family, mode)] if include_roundoff else asserted_rows(family, mode)
    per_half = 2 if mode == "hr" else 1
    return [r[0] // per_half for r in rows]
