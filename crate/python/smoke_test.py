#!/usr/bin/env python3
"""Smoke test for the esbf_py extension module.

Builds nothing itself: it expects `cargo build -p esbf-py` (or --release)
to have produced target/{debug,release}/libesbf_py.so, copies the library
next to a temp dir under the module's import name, and exercises the
bindings against known values.

Usage: python3 python/smoke_test.py
"""

import pathlib
import shutil
import sys
import tempfile

REPO = pathlib.Path(__file__).resolve().parent.parent


def locate_library() -> pathlib.Path:
    names = ["libesbf_py.so", "esbf_py.so", "libesbf_py.dylib", "esbf_py.pyd"]
    candidates = []
    for profile in ("release", "debug"):
        for name in names:
            candidates.append(REPO / "target" / profile / name)
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "esbf_py library not found; run `cargo build -p esbf-py` first "
        f"(searched {len(candidates)} paths under {REPO / 'target'})"
    )


def import_module():
    lib = locate_library()
    tmp = tempfile.mkdtemp(prefix="esbf_py_")
    shutil.copy2(lib, pathlib.Path(tmp) / "esbf_py.so")
    sys.path.insert(0, tmp)
    import esbf_py

    return esbf_py


def main() -> None:
    m = import_module()
    checks = 0

    def check(cond, label):
        nonlocal checks
        assert cond, f"FAILED: {label}"
        checks += 1

    # Combinatorics.
    check(m.binomial(8, 3) == 56, "binomial(8,3)")
    check(m.binomial(5, 7) == 0, "binomial above the row is zero")
    check(m.binomial(200, 100) % 2 == 0, "binomial big values are exact")
    check(m.preceq(2, 6) and not m.preceq(2, 5), "preceq")
    check(m.lucas_parity(7, 3) == 1 and m.lucas_parity(4, 2) == 0, "lucas_parity")
    check(m.or_join(5, 3) == 7, "or_join")
    check(m.residue_class_sum(5, 4, 1) == 6, "residue_class_sum")
    try:
        m.residue_class_sum(5, 0, 0)
        sys.exit("residue_class_sum accepted a zero modulus")
    except ValueError:
        checks += 1

    # Weights and balancedness.
    f = m.Esbf(7, 2)
    check(f.weight() == 64 and f.is_balanced(), "sigma(7,2) balanced with weight 64")
    check(m.Esbf(8, 2).weight() == 120, "sigma(8,2) weight")
    check(m.Esbf(8, 2).trichotomy() == "Less", "sigma(8,2) below half")
    check(m.Esbf(12, 2).trichotomy() == "Greater", "sigma(12,2) above half")
    check(m.Esbf(20, 20).weight() == 1, "top degree has weight 1")
    check(m.Esbf(4, 1).value_vector() == [False, True, False, True, False], "value vector")
    check(m.Esbf(12, 12).power_decomposition() == [2, 3], "power decomposition")
    big = m.Esbf(300, 2).weight()
    check(big > 2**298, "weights stay exact at large n")
    try:
        m.Esbf(3, 9)
        sys.exit("Esbf accepted d > n")
    except ValueError:
        checks += 1

    # Classification.
    v = m.Esbf(24, 12).classify()
    check(v.kind == "OpenCase2" and v.is_open(), "classify(24,12) open case")
    check(m.Esbf(9, 3).classify().rule == "Corollary-3", "classify(9,3) rule")
    check(m.Esbf(15, 4).classify().kind == "BalancedPow2Family", "classify(15,4)")
    check(any(cond == "d'' == 2^2" and ok for cond, ok in v.trace), "trace content")
    check('"kind":"OpenCase2"' in v.to_json(), "verdict JSON")
    cases = m.open_cases(24)
    check((24, 12) in cases and (23, 12) not in cases, "open_cases(24)")

    # Closed forms round to the exact integers.
    check(m.trichotomy_weight_pow2(7, 1) == "Equal", "residue-table trichotomy")
    check(m.residue_class_sum_closed(5, 2, 1) == 6, "closed residue sum")
    check(m.weight_pow2_closed(8, 1) == 120, "closed pow2 weight")
    check(m.weight_pow2_plus1_closed(13, 1) == m.Esbf(13, 3).weight(), "closed 2^t+1 weight")
    check(m.weight_two_powers_closed(12, 1, 2) == 1716, "closed two-power weight")
    check(
        m.weight_two_powers_closed(24, 2, 3) == m.Esbf(24, 12).weight(),
        "closed two-power weight at n=24",
    )
    try:
        m.weight_two_powers_closed(12, 2, 1)
        sys.exit("weight_two_powers_closed accepted t >= s")
    except ValueError:
        checks += 1

    print(f"esbf_py smoke test: {checks} checks passed")


if __name__ == "__main__":
    main()
