"""Small configs covering every experiment, shared by the CLI and acceptance tests."""

MIXED = {"phi": [0, 1, "1/2"]}

SMALL_CONFIGS = {
    "spectrum": {"experiment": "spectrum", "phase": MIXED, "n": 16, "t": 1.3},
    "pcf": {"experiment": "pcf", "phase": MIXED, "n_list": [16, 33], "t": "7/5"},
    "nv": {"experiment": "nv", "phase": MIXED, "n": 40, "t": 1.1, "L": [0.5, 2]},
    "dos": {"experiment": "dos", "phase": MIXED, "n_list": [10, 100], "g": [0, 0, 1]},
    "gauss": {"experiment": "gauss", "n_list": [5, 8, 12]},
    "three_gap": {"experiment": "three_gap", "phase": {"phi": [0, 0.6180339887]}, "n": 50, "t": 0.01},
    "hilbert": {"experiment": "hilbert", "phase": MIXED, "n": 32, "ell": 2},
    "theorem_a": {"experiment": "theorem_a", "phase": MIXED, "window": {"kind": "fejer", "c": 3}, "n": 500},
    "sweep": {"experiment": "sweep", "phase": {"phi": [0, 0, 1]}, "n": 32, "num_samples": 6, "seed": 11},
    "lattice": {"experiment": "lattice", "n": 8, "ell_range": [1, 3]},
    "quadratic_in": {"experiment": "quadratic_in", "n_list": [7, 10, 12]},
    "t_average": {"experiment": "t_average", "phase": MIXED, "n": 24},
}
