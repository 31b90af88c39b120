"""``specgap`` command line: run JSON-configured experiments, validate configs, list experiments.

Exit codes: 0 success, 2 config/schema error (JSON list on stderr),
3 precondition failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from fractions import Fraction
from typing import Any

from . import __version__
from .averaging import time_averaged_pcf
from .classical import _k_needed, hamiltonian_pcf_empirical, theorem_a_pcf
from .errors import DomainError, PreconditionError, SizeError
from .experiments import (
    RNG_ALGORITHM, lattice_count_bruteforce, lattice_count_fast, lattice_csv,
    param_sweep, planck_subsequence, quadratic_IN,
)
from .expsum import gauss_sum_direct, gauss_sum_exact, hilbert_average, trace_table
from .phase import Phase, spectrum
from .stats import (
    StatisticEstimate, dos_empirical, dos_limit, gap_spectrum, number_variance_direct,
    pcf_spectral, poisson_reference,
)
from . import windows

EXIT_OK, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_IO = 0, 2, 3, 4

# experiment -> (needs phase, needs window, needs a size, one-line description)
EXPERIMENTS = {
    "spectrum": (True, False, True, "eigenphases x_j of the quantum map"),
    "pcf": (True, True, True, "pair correlation from the trace table"),
    "nv": (True, False, True, "number variance (exact direct estimator)"),
    "dos": (True, False, True, "density of states against its classical limit"),
    "gauss": (False, False, True, "|G(l, 0, N)| direct and from the residue-class formula"),
    "three_gap": (True, False, True, "distinct nearest-neighbour gaps"),
    "hilbert": (True, False, True, "t-average of |S_t(N, l)|^2 and its Hilbert-inequality bound"),
    "theorem_a": (True, True, False, "classical-limit pair correlation (and optional eigenvalue check)"),
    "sweep": (True, True, True, "pair-correlation variance over the (alpha, beta) family"),
    "lattice": (False, False, True, "lattice-point counts with homogeneous/inhomogeneous split"),
    "quadratic_in": (False, True, True, "I_N for the quadratic phase"),
    "t_average": (True, True, True, "exact t-average of the pair-correlation deviation"),
}

DEFAULTS = {
    "t": 1.0,
    "seed": 0,
    "window": {"kind": "fejer", "c": 0.8},
    "L": [1.0],
    "T": 1.0,
    "num_samples": 200,
    "interval": [1, 2],
    "ell": 1,
    "delta": 0.5,
    "ell_range": [1, 8],
    "g": [0, 1],
    "order": 2,
}
# which optional fields each experiment reads (and therefore resolves)
USES = {
    "spectrum": ["t", "order"],
    "pcf": ["t", "order", "ell_max"],
    "nv": ["t", "order", "L"],
    "dos": ["g"],
    "gauss": ["ell_max"],
    "three_gap": ["t", "order", "tol"],
    "hilbert": ["ell", "interval", "order"],
    "theorem_a": ["k_max", "n_max"],
    "sweep": ["t", "T", "num_samples", "seed", "order"],
    "lattice": ["ell_range", "delta"],
    "quadratic_in": [],
    "t_average": ["interval", "order"],
}
FIELDS = {
    "experiment", "phase", "window", "n", "n_list", "subsequence", "t", "L", "T",
    "num_samples", "seed", "ell_max", "out_path", "interval", "ell", "k_max", "n_max",
    "delta", "ell_range", "g", "order", "tol",
}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return (isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)) or (
        isinstance(v, str) and _frac_ok(v)
    )


def _frac_ok(s: str) -> bool:
    try:
        Fraction(s)
        return True
    except (ValueError, ZeroDivisionError):
        return False


def _num(v) -> float:
    return float(Fraction(v)) if isinstance(v, str) else float(v)


def validate(text_or_obj) -> tuple[dict | None, list[str]]:
    """Resolve a config (defaults filled in) or return every violation found."""
    errors: list[str] = []
    if isinstance(text_or_obj, (str, bytes)):
        try:
            cfg = json.loads(text_or_obj)
        except json.JSONDecodeError as exc:
            return None, [f"invalid JSON: {exc}"]
    else:
        cfg = text_or_obj
    if not isinstance(cfg, dict):
        return None, ["config must be a JSON object"]

    for key in sorted(set(cfg) - FIELDS):
        errors.append(f"unknown field {key!r}")
    exp = cfg.get("experiment")
    if exp is None:
        errors.append("missing field 'experiment'")
        return None, errors
    if exp not in EXPERIMENTS:
        errors.append(f"unknown experiment {exp!r}; choose from {sorted(EXPERIMENTS)}")
        return None, errors
    needs_phase, needs_window, needs_size, _ = EXPERIMENTS[exp]
    out: dict[str, Any] = {"experiment": exp}

    if needs_phase:
        if "phase" not in cfg:
            errors.append("missing field 'phase'")
        else:
            try:
                out["phase"] = Phase.from_json(cfg["phase"]).to_json()
            except (TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
                errors.append(f"phase: {exc}")
    elif "phase" in cfg:
        errors.append(f"field 'phase' is not used by {exp!r}")

    window = None
    if needs_window:
        spec = cfg.get("window", DEFAULTS["window"])
        if not isinstance(spec, dict):
            errors.append("window must be an object")
        else:
            kind = spec.get("kind")
            extra = set(spec) - ({"kind", "c"} if kind == "fejer" else {"kind"})
            if extra:
                errors.append(f"window: unknown fields {sorted(extra)}")
            if kind == "fejer":
                c = spec.get("c")
                if not _is_num(c) or _num(c) <= 0:
                    errors.append("window C must be a number > 0")
                else:
                    window = windows.fejer(_num(c))
                    out["window"] = {"kind": "fejer", "c": _num(c)}
            elif kind == "gaussian":
                window = windows.gaussian()
                out["window"] = {"kind": "gaussian"}
            else:
                errors.append(f"window kind must be 'fejer' or 'gaussian', got {kind!r}")
    elif "window" in cfg:
        errors.append(f"field 'window' is not used by {exp!r}")

    sizes = [k for k in ("n", "n_list", "subsequence") if k in cfg]
    if needs_size:
        if len(sizes) != 1:
            errors.append("give exactly one of 'n', 'n_list', 'subsequence'")
    elif sizes and sizes != ["n"]:
        errors.append(f"{exp!r} accepts only 'n'")
    if "n" in cfg:
        if not _is_int(cfg["n"]) or cfg["n"] < 1:
            errors.append("n must be ≥ 1")
        else:
            out["n"] = cfg["n"]
    if "n_list" in cfg:
        nl = cfg["n_list"]
        if not isinstance(nl, list) or not nl or not all(_is_int(v) and v >= 1 for v in nl):
            errors.append("n_list must be a non-empty list of integers ≥ 1")
        else:
            out["n_list"] = list(nl)
    if "subsequence" in cfg:
        sub = cfg["subsequence"]
        if not isinstance(sub, dict) or set(sub) != {"m_min", "m_max"}:
            errors.append("subsequence must be {'m_min': int, 'm_max': int}")
        elif not (_is_int(sub["m_min"]) and _is_int(sub["m_max"]) and 2 <= sub["m_min"] <= sub["m_max"]):
            errors.append("subsequence needs integers 2 ≤ m_min ≤ m_max")
        else:
            out["subsequence"] = {"m_min": sub["m_min"], "m_max": sub["m_max"]}

    uses = USES[exp]
    for key in sorted(set(cfg) & (FIELDS - {"experiment", "phase", "window", "n", "n_list", "subsequence", "out_path"})):
        if key not in uses:
            errors.append(f"field {key!r} is not used by {exp!r}")
    for key in uses:
        val = cfg.get(key, DEFAULTS.get(key))
        if val is None:
            continue
        err = _check_field(key, val)
        if err:
            errors.append(err)
        else:
            out[key] = _normalize(key, val)

    if "ell_max" in uses and "ell_max" not in out and "n" in out:
        if exp == "gauss":
            out["ell_max"] = out["n"]
        elif window is not None:
            out["ell_max"] = window.ell_needed(out["n"])
    if exp == "theorem_a" and "k_max" not in out and "phase" in out and window is not None:
        try:
            out["k_max"] = max(1, _k_needed(Phase.from_json(out["phase"]), window))
        except PreconditionError as exc:
            errors.append(f"k_max: {exc}")
    if "out_path" in cfg:
        if not isinstance(cfg["out_path"], str) or not cfg["out_path"]:
            errors.append("out_path must be a non-empty string")
        else:
            out["out_path"] = cfg["out_path"]
    return (None, errors) if errors else (out, [])


def _check_field(key: str, val) -> str | None:
    if key in ("seed",):
        return None if _is_int(val) and 0 <= val < 2**64 else "seed must be an integer in [0, 2^64)"
    if key in ("num_samples", "ell", "k_max", "n_max"):
        ok = _is_int(val) and (val >= 1 or (key == "ell" and val != 0))
        return None if ok else f"{key} must be an integer ≥ 1"
    if key == "ell_max":
        return None if _is_int(val) and val >= 0 else "ell_max must be an integer ≥ 0"
    if key == "order":
        return None if _is_int(val) and 0 <= val <= 2 else "order must be 0, 1 or 2"
    if key in ("t",):
        return None if _is_num(val) and _num(val) != 0 else "t must be a nonzero number"
    if key in ("T", "tol"):
        return None if _is_num(val) and _num(val) > 0 else f"{key} must be a number > 0"
    if key == "delta":
        return None if _is_num(val) and _num(val) > 0 else "delta must be a number > 0"
    if key == "L":
        vals = val if isinstance(val, list) else [val]
        return None if vals and all(_is_num(v) and _num(v) >= 0 for v in vals) else "L must be a number ≥ 0 or a list of them"
    if key == "interval":
        ok = isinstance(val, list) and len(val) == 2 and all(_is_num(v) for v in val) and _num(val[0]) < _num(val[1])
        return None if ok else "interval must be [a, b] with a < b"
    if key == "ell_range":
        ok = isinstance(val, list) and len(val) == 2 and all(_is_int(v) and v >= 1 for v in val) and val[0] <= val[1]
        return None if ok else "ell_range must be [lo, hi] with 1 ≤ lo ≤ hi"
    if key == "g":
        ok = isinstance(val, list) and 1 <= len(val) <= 9 and all(_is_num(v) for v in val)
        return None if ok else "g must be a list of at most 9 coefficients (degree ≤ 8)"
    return f"unhandled field {key!r}"


def _normalize(key: str, val):
    if key == "L":
        return [v if isinstance(v, str) else float(v) for v in (val if isinstance(val, list) else [val])]
    if key in ("t", "T", "tol", "delta"):
        return val if isinstance(val, str) else float(val)
    return val


# --- running ---------------------------------------------------------------------

def _sizes(cfg: dict) -> list[int]:
    if "n" in cfg:
        return [cfg["n"]]
    if "n_list" in cfg:
        return list(cfg["n_list"])
    if "subsequence" in cfg:
        sub = cfg["subsequence"]
        return sorted({planck_subsequence(m) for m in range(sub["m_min"], sub["m_max"] + 1)})
    return []


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def _stats_files(estimates: list[StatisticEstimate]) -> dict[str, str]:
    recs = [e.to_record() for e in estimates]
    keys = sorted({k for r in recs for k in r})
    rows = [[json.dumps(r[k], sort_keys=True) if isinstance(r.get(k), (dict, list)) else r.get(k, "") for k in keys] for r in recs]
    return {"stats.jsonl": _jsonl(recs), "stats.csv": _csv(keys, rows)}


def execute(cfg: dict, threads: int = 1) -> dict[str, str]:
    """Run a resolved config and return ``{filename: contents}``."""
    exp = cfg["experiment"]
    phase = Phase.from_json(cfg["phase"]) if "phase" in cfg else None
    window = windows.from_spec(cfg["window"]) if "window" in cfg else None
    sizes = _sizes(cfg)
    t = _num(cfg["t"]) if "t" in cfg else None
    order = cfg.get("order", 2)
    wid = cfg.get("window")
    pid = cfg.get("phase")

    if exp == "spectrum":
        rows = []
        for n in sizes:
            s = spectrum(phase, t, n, order)
            rows += [[n, j, float(x)] for j, x in enumerate(s.points)]
        return {"spectrum.csv": _csv(["N", "index", "x"], rows)}

    if exp == "pcf":
        est, files = [], {}
        for n in sizes:
            ell_max = cfg.get("ell_max", window.ell_needed(n)) if len(sizes) == 1 else window.ell_needed(n)
            tt = trace_table(phase, t, n, ell_max, order, threads)
            files[f"traces_N{n}.csv"] = tt.to_csv()
            val = pcf_spectral(tt, window)
            est.append(StatisticEstimate(val, "pcf", {
                "phase": pid, "t": t, "N": n, "window": wid, "ell_max": ell_max,
                "order": order, "estimator": "spectral", "poisson": poisson_reference(window),
            }))
        files.update(_stats_files(est))
        return files

    if exp == "nv":
        est = []
        for n in sizes:
            s = spectrum(phase, t, n, order)
            for L in cfg["L"]:
                est.append(StatisticEstimate(number_variance_direct(s, _num(L)), "nv", {
                    "phase": pid, "t": t, "N": n, "L": _num(L), "order": order, "estimator": "direct",
                }))
        return _stats_files(est)

    if exp == "dos":
        g = [Fraction(v) if isinstance(v, str) else v for v in cfg["g"]]
        lim = dos_limit(phase, g)
        est = [StatisticEstimate(dos_empirical(phase, n, g), "dos", {
            "phase": pid, "N": n, "g": cfg["g"], "limit": lim}) for n in sizes]
        return _stats_files(est)

    if exp == "gauss":
        rows = []
        for n in sizes:
            ell_max = cfg.get("ell_max", n) if len(sizes) == 1 else n
            for ell in range(1, ell_max + 1):
                mag, g = gauss_sum_exact(ell, n)
                rows.append([ell, n, abs(gauss_sum_direct(ell, n)), mag, g, n % 4])
        return {"gauss.csv": _csv(["ell", "N", "abs_direct", "abs_exact", "gcd", "N_mod_4"], rows)}

    if exp == "three_gap":
        rows = []
        for n in sizes:
            s = spectrum(phase, t, n, order)
            gaps = gap_spectrum(s, _num(cfg["tol"]) if "tol" in cfg else None)
            rows += [[n, gp.value, gp.count] for gp in gaps]
        return {"gaps.csv": _csv(["N", "gap", "multiplicity"], rows)}

    if exp == "hilbert":
        a, b = (_num(v) for v in cfg["interval"])
        est = []
        for n in sizes:
            h = hilbert_average(phase, n, cfg["ell"], a, b, order)
            est.append(StatisticEstimate(h.average, "hilbert", {
                "phase": pid, "N": n, "ell": cfg["ell"], "interval": cfg["interval"], "bound": h.bound}))
        return _stats_files(est)

    if exp == "theorem_a":
        res = theorem_a_pcf(phase, window, cfg["k_max"])
        files = {"classical.json": json.dumps(res.to_json(), sort_keys=True, indent=1) + "\n"}
        if sizes:
            est = [StatisticEstimate(hamiltonian_pcf_empirical(phase, n, window, cfg.get("n_max", 2000)), "pcf", {
                "phase": pid, "N": n, "window": wid, "estimator": "eigenvalue", "n_max": cfg.get("n_max", 2000),
                "classical_total": res.total}) for n in sizes]
            files.update(_stats_files(est))
        return files

    if exp == "sweep":
        files = {}
        summary = []
        for n in sizes:
            r = param_sweep(phase, t, n, _num(cfg["T"]), cfg["num_samples"], cfg["seed"], window, threads, order=order)
            files[f"sweep_N{n}.jsonl"] = r.to_jsonl()
            summary.append([n, r.variance, r.num_samples])
        files["sweep_summary.csv"] = _csv(["N", "variance", "num_samples"], summary)
        return files

    if exp == "lattice":
        lo, hi = cfg["ell_range"]
        delta = _num(cfg["delta"])
        rows = []
        for n in sizes:
            for l1 in range(lo, hi + 1):
                for l2 in range(lo, hi + 1):
                    rows.append(lattice_count_fast(n, l1, l2, delta) if delta < 1
                                else lattice_count_bruteforce(n, l1, l2, delta))
        return {"lattice.csv": lattice_csv(rows)}

    if exp == "quadratic_in":
        rows = [[n, n % 4, quadratic_IN(n, window)] for n in sizes]
        return {"quadratic_in.csv": _csv(["N", "N_mod_4", "I_N"], rows)}

    if exp == "t_average":
        a, b = (Fraction(v) if isinstance(v, str) else v for v in cfg["interval"])
        recs = [time_averaged_pcf(phase, n, window, a, b, order).to_record() for n in sizes]
        return {"t_average.jsonl": _jsonl(recs)}

    raise AssertionError(exp)


def _preflight(cfg: dict) -> None:
    """Certified-bound checks before any heavy computation."""
    exp = cfg["experiment"]
    if "phase" not in cfg:
        return
    phase = Phase.from_json(cfg["phase"])
    if exp in ("hilbert", "theorem_a", "t_average"):
        phase.require_monotone()
    if exp == "sweep":
        phase.require_nondegenerate()


def run(cfg_text: str, out_dir: str | None = None, threads: int = 1) -> int:
    resolved, errors = validate(cfg_text)
    if errors:
        print(json.dumps({"errors": errors}), file=sys.stderr)
        return EXIT_SCHEMA
    out_dir = out_dir or resolved.get("out_path") or "specgap_out"
    start = time.perf_counter()
    try:
        _preflight(resolved)
        files = execute(resolved, threads)
    except (PreconditionError, DomainError, SizeError) as exc:
        print(json.dumps({"error": "precondition", "message": str(exc)}), file=sys.stderr)
        return EXIT_PRECONDITION
    wall = time.perf_counter() - start
    meta = {
        "tool": "specgap",
        "version": __version__,
        "config": resolved,
        "rng": RNG_ALGORITHM,
        "wall_time_s": wall,
        "files": sorted(files),
    }
    try:
        os.makedirs(out_dir, exist_ok=True)
        for name, text in files.items():
            with open(os.path.join(out_dir, name), "w", newline="") as fh:
                fh.write(text)
        with open(os.path.join(out_dir, "metadata.json"), "w") as fh:
            json.dump(meta, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _read(path: str) -> str | None:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="specgap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"specgap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--out", default=None, help="output directory (default: out_path or ./specgap_out)")
    p_val = sub.add_parser("validate", help="check a config and print it with defaults filled in")
    p_val.add_argument("config")
    sub.add_parser("list-experiments", help="list experiment names")
    args = parser.parse_args(argv)

    if args.command == "list-experiments":
        for name, (_, _, _, desc) in EXPERIMENTS.items():
            print(f"{name:<13} {desc}")
        return EXIT_OK
    text = _read(args.config)
    if text is None:
        return EXIT_IO
    if args.command == "validate":
        resolved, errors = validate(text)
        if errors:
            print(json.dumps({"errors": errors}), file=sys.stderr)
            return EXIT_SCHEMA
        print(json.dumps(resolved, sort_keys=True, indent=1))
        return EXIT_OK
    if args.threads < 1:
        print(json.dumps({"errors": ["--threads must be >= 1"]}), file=sys.stderr)
        return EXIT_SCHEMA
    return run(text, args.out, args.threads)


if __name__ == "__main__":
    sys.exit(main())
