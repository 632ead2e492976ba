"""Quick end-to-end check of the Python bindings.

Build first:
    cargo build --release -p quasiweyl-py --features extension-module
    cp target/release/libpyquasiweyl.so python/pyquasiweyl.so
    python3 python/smoke_test.py
"""

import cmath
import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyquasiweyl as qw


def problem(sigma, geometry, v=None):
    doc = {
        "coeffs": {"n": 2, "orders": [0], "sigma": [sigma]},
        "U": {"permutation": [1, 0], "lower": [[1, 0], [0, 1]]},
        "geometry": geometry,
    }
    if v is not None:
        doc["V"] = v
    return qw.Problem.from_json(json.dumps(doc))


def main():
    o = qw.Orders(2, [1])
    q, f = o.matrices()
    assert q == [["0", "s0"], ["s0", "0"]], q
    assert f == [["s0", "1"], ["-s0^2", "-s0"]], f
    assert len(qw.Orders.enumerate(4)) == 12
    assert all(qw.verify(n, seed) for n in range(2, 6) for seed in range(1, 6))

    zero = {"kind": "zero"}
    half = problem(zero, {"kind": "half_line", "truncation": 10})
    m21 = half.weyl(4.0).matrix[1][0]
    assert abs(m21 + 0.5) < 1e-6, m21

    ident = {"permutation": [0, 1], "lower": [[1, 0], [0, 1]]}
    fin = problem(zero, {"kind": "finite_interval"}, ident)
    m21 = fin.weyl(1.0, steps=10000).matrix[1][0]
    assert abs(m21 + 1 / math.tanh(1.0)) < 1e-6, m21

    bump = {"kind": "bump", "params": {"support": [0, 1], "height": 1}}
    a = problem(bump, {"kind": "half_line", "truncation": 4})
    b = a.transform("n2", "raise_order")
    assert b.orders.orders == [1]
    lambdas = [cmath.rect(r, 1.0) for r in (1, 4, 9)]
    dev = qw.invariance(a, b, lambdas)
    assert dev < 1e-4, dev
    assert qw.Problem.from_json(b.to_json()).orders.orders == [1]

    limit, samples = qw.asymptotics(a, 1, 0, math.pi / 4, [5.0, 10.0, 20.0], 0.5)
    assert abs(limit + 1) < 1e-12 and samples[-1][2] < samples[0][2]

    for call in (lambda: qw.Orders(2, [2]), lambda: fin.transform("n2")):
        try:
            call()
        except qw.ConfigurationError:
            pass
        else:
            raise AssertionError("expected ConfigurationError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
