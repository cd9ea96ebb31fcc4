"""Generate the Fibonacci / Yang-Lee / trivial solution fixtures.

Each fixture is checked before it is written by a brute-force pentagon
evaluation over all label 10-tuples, independent of the package's own
equation generator. Run from the repository root:

    python3 scripts/make_fixtures.py
"""
import itertools
import json
from pathlib import Path

import mpmath

mpmath.mp.dps = 60
DATA = Path(__file__).resolve().parent.parent / "src" / "fusioninv" / "data"


def fib_values(phi):
    """Admissible F-symbols keyed by (a,b,c,d,e,f); all 1 except F_τττ^τ."""
    B = ["1", "tau"]
    fuse = {("1", "1"): {"1"}, ("1", "tau"): {"tau"}, ("tau", "1"): {"tau"},
            ("tau", "tau"): {"1", "tau"}}
    values = {}
    for a, b, c, d, e, f in itertools.product(B, repeat=6):
        if e in fuse[a, b] and d in fuse[e, c] and f in fuse[b, c] and d in fuse[a, f]:
            values[a, b, c, d, e, f] = mpmath.mpc(1)
    inv_sqrt = 1 / mpmath.sqrt(mpmath.mpc(phi))
    t = "tau"
    values[t, t, t, t, "1", "1"] = mpmath.mpc(1 / phi)
    values[t, t, t, t, "1", t] = inv_sqrt
    values[t, t, t, t, t, "1"] = inv_sqrt
    values[t, t, t, t, t, t] = mpmath.mpc(-1 / phi)
    return B, values


def brute_force_max_residual(B, F):
    get = lambda *k: F.get(k, 0)
    worst = mpmath.mpf(0)
    for a, b, c, d, e, f, h, i, j in itertools.product(B, repeat=9):
        lhs = get(f, c, d, e, i, h) * get(a, b, h, e, f, j)
        rhs = sum(get(a, b, c, i, f, g) * get(a, g, d, e, i, j) * get(b, c, d, j, g, h) for g in B)
        worst = max(worst, abs(lhs - rhs))
    return worst


def fmt(x):
    return "0" if x == 0 else mpmath.nstr(x, 55, strip_zeros=True, min_fixed=-60, max_fixed=60)


def write(name, ring, values, note):
    order = lambda k: tuple(["1", "tau"].index(x) for x in (k[0], k[1], k[2], k[3], k[5], k[4]))
    rows = [{**dict(zip("abcdef", k)), "re": fmt(v.real), "im": fmt(v.imag)}
            for k, v in sorted(values.items(), key=lambda kv: order(kv[0]))]
    doc = {"ring": ring, "name": name, "note": note, "values": rows}
    (DATA / f"{name}_solution.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def main():
    golden = (1 + mpmath.sqrt(5)) / 2
    conjugate = (1 - mpmath.sqrt(5)) / 2
    for name, phi in (("fib", golden), ("yanglee", conjugate)):
        B, F = fib_values(phi)
        worst = brute_force_max_residual(B, F)
        assert worst < mpmath.mpf("1e-30"), (name, worst)
        print(f"{name}: max pentagon residual {mpmath.nstr(worst, 3)}")
        write(name, "fib", F, f"F_tau^tau = [[1/p, 1/sqrt p], [1/sqrt p, -1/p]] with p = {mpmath.nstr(phi, 12)}")
    triv = {("1",) * 6: mpmath.mpc(1)}
    assert brute_force_max_residual(["1"], triv) == 0
    doc = {"ring": "trivial", "name": "trivial", "note": "all ones",
           "values": [{**dict(zip("abcdef", ("1",) * 6)), "re": "1", "im": "0"}]}
    (DATA / "trivial_solution.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
