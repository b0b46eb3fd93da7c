"""Smoke test for the pyweil extension.

Build first, then point PYTHONPATH at a directory holding pyweil.so:

    cargo build --release -p weilkit-py --features extension-module
    mkdir -p /tmp/pyweil && cp target/release/libpyweil.so /tmp/pyweil/pyweil.so
    PYTHONPATH=/tmp/pyweil python3 crates/py/python/smoke_test.py
"""
import json
import math
from fractions import Fraction

import pyweil


def main():
    dual = pyweil.WeilAlgebra.preset("dual")
    assert dual.dimension == 2 and dual.basis() == ["1", "x"]

    cusp = pyweil.WeilAlgebra(["x", "y"], ["x^2 - y^3"], 4)
    assert cusp.dimension == 7, cusp

    # (1 + x)^-1 = 1 - x in dual numbers
    a = dual.element("1 + x")
    inv = a.inverse()
    assert [Fraction(c) for c in inv.coords()] == [1, -1]
    assert a * inv == dual.one()

    # lift of t^3 at 2 is 8 + 12 x
    (comp,) = pyweil.lift(dual, "t^3", ["2"])
    assert [(m, Fraction(c)) for m, c in comp] == [("1", 8), ("x", 12)]

    rows = pyweil.derive(4, "exp(t)", "0")
    assert all(abs(r - 1.0) < 1e-12 for r in rows)
    rows = pyweil.derive(1, "sin(t)", "1")
    assert abs(rows[1] - math.cos(1.0)) < 1e-12

    jet2 = pyweil.WeilAlgebra.preset("jet2")
    assert pyweil.equiv(jet2, "sin(t)", "t - t^3")
    assert not pyweil.equiv(jet2, "sin(t)", "t + t^2")

    jet5 = pyweil.WeilAlgebra(["y"], [], 5)
    psi = pyweil.WeilMorphism(dual, jet5, ["y^3"])
    assert str(psi.apply(dual.element("2 + 3*x"))) == "2/1 + 3/1*y^3"
    ident = pyweil.WeilMorphism.identity(dual)
    assert ident.then(psi).same_action(psi)

    t = dual.tensor(dual)
    assert t.dimension == 4

    report = json.loads(pyweil.run_suite(json.dumps({"suites": ["ring_laws"], "cases": 10, "seed": 1})))
    assert report["suites"][0]["failures"] == 0
    one = json.loads(pyweil.replay(json.dumps({"suites": ["ring_laws"]}), "ring_laws/dual", 7))
    assert one["cases"] == 1 and one["failures"] == 0

    try:
        pyweil.WeilAlgebra(["x"], ["x - 1"], 2)
    except ValueError as e:
        assert "improper" in str(e)
    else:
        raise AssertionError("improper ideal accepted")

    print("pyweil smoke test ok")


if __name__ == "__main__":
    main()
