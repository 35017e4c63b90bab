#!/usr/bin/env python3
"""Smoke test for the toricexc extension module.

Builds nothing itself: run `cargo build -p toric-exc-py` first. The
compiled cdylib is staged into a temp directory under the importable
name and exercised against two fixtures.
"""
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def stage_module() -> Path:
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libtoricexc.so"
        if lib.exists():
            stage = Path(tempfile.mkdtemp(prefix="toricexc-"))
            shutil.copy(lib, stage / "toricexc.so")
            return stage
    sys.exit("libtoricexc.so not found; run `cargo build -p toric-exc-py` first")


sys.path.insert(0, str(stage_module()))
import toricexc  # noqa: E402


def check(cond, msg):
    if not cond:
        sys.exit(f"FAIL: {msg}")
    print(f"ok: {msg}")


# An orderable fixture: full pipeline through the bindings.
fx = toricexc.load_fixture(str(ROOT / "fixtures" / "F.4D.0123.json"))
v = fx["variety"]
check(v.dim == 4 and v.picard_rank == 1, "P^4 has Picard rank 1")
check(v.canonical_class() == [-5], "K_{P^4} = O(-5)")
check(v.cohomology([0]) == {0: 1}, "chi(O) concentrated in degree 0")
check(v.hom([-1], [0]) == {0: 5}, "Hom(O(-1), O) is 5-dimensional")

res = v.analyze_collection(fx["collection"])
check(res["verdict"] == fx["expected_verdict"] == "Orderable", "0123 orderable")
check(res["strong"], "0123 collection is strong")
check(res["hom_matrix"][1][0] == 5, "first subdiagonal Hom rank")
check(v.bondal()["outcome"] == "Pass", "wall criterion passes on P^4")

# A non-orderable fixture: cycle witness comes back through the bindings.
fx = toricexc.load_fixture(str(ROOT / "fixtures" / "F.4D.0115.json"))
v = fx["variety"]
res = v.analyze_collection(fx["collection"])
check(res["verdict"] == "NotOrderable", "0115 not orderable")
i, j = res["pair"]
check(res["forward"] and res["backward"],
      f"witness pair ({i}, {j}) has Homs in both directions")
src, dst = fx["collection"][i], fx["collection"][j]
check(v.hom(src, dst) == res["forward"], "forward Hom recomputes")
check(v.hom(dst, src) == res["backward"], "backward Hom recomputes")

print("smoke test passed")
