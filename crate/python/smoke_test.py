#!/usr/bin/env python3
"""Smoke test for the acdmult_py extension module.

Build the extension and expose it on the import path first:

    cargo build --release -p acdmult-py
    cp target/release/libacdmult_py.so python/acdmult_py.so
    python3 python/smoke_test.py
"""

import json
import sys

import acdmult_py as acd

F1 = '{"components":[{"p_inf":[11],"rank":1,"m":5,"s":2},{"p_inf":[19],"rank":1,"m":5,"s":3}]}'
F1_PROPER = '{"components":[{"p_inf":[11],"rank":1,"m":5,"s":1},{"p_inf":[19],"rank":1,"m":5,"s":1}]}'
F1_SKEWED = '{"components":[{"p_inf":[11],"rank":1,"m":5,"s":2},{"p_inf":[19],"rank":1,"m":5,"s":1}]}'
F2 = '{"components":[{"p_inf":[2],"rank":1,"m":5,"s":2},{"p_inf":[3],"rank":1,"m":5,"s":3}]}'


def check(name, condition):
    if not condition:
        raise AssertionError(f"smoke check failed: {name}")
    print(f"ok - {name}")


def main():
    f1 = acd.Descriptor.from_json(F1)
    f1.validate()
    check("descriptor round trip", json.loads(f1.to_json()) == json.loads(F1))
    check("f1 is rigid and not proper", f1.is_rigid() and not f1.is_proper())
    check("regulator index", f1.regulator_index() == 5)

    bad = acd.Descriptor.from_json(
        '{"components":[{"p_inf":[11],"rank":1,"m":5,"s":2},{"p_inf":[19],"rank":1,"m":10,"s":3}]}'
    )
    check("violations name condition (m)", any("condition (m)" in v for v in bad.violations()))
    try:
        bad.validate()
        raise AssertionError("validate must raise on an invalid descriptor")
    except ValueError:
        pass
    print("ok - validate raises ValueError")

    mult = f1.mult()
    check("mult inverts numerators", json.loads(mult.to_json())["components"][0]["s"] == 3)
    check("double mult restores the group", mult.mult() == f1.canonical())

    proper = acd.Descriptor.from_json(F1_PROPER)
    skewed = acd.Descriptor.from_json(F1_SKEWED)
    check("near_iso ignores numerators", acd.near_iso(f1, skewed))
    check("iso positive fixture", acd.iso(f1, proper))
    check("iso negative fixture", not acd.iso(skewed, proper))
    witness = json.loads(acd.iso_witness(f1, proper))
    check("iso witness recomposes", (witness["alpha"] * witness["v"][0]) % 5 == 2)

    check("self_mult_iso fixture", acd.self_mult_iso(f1))
    check("realizable rank-1", acd.realizable(f1))
    check("realize inverts mult", acd.realize(f1.mult()) == f1.canonical())

    f2 = acd.Descriptor.from_json(F2)
    u = acd.Multiplication.from_json('{"u":{"2":"240","3":"810"}}')
    v = acd.Multiplication.from_json('{"u":{"2":"15","3":"10"}}')
    check("mult_member witness", acd.mult_member(f2, v) == 1)
    check("mult_member rejects", acd.mult_member(f2, acd.Multiplication.from_json('{"u":{"2":"1","3":"1"}}')) is None)
    check("member algebra", acd.mult_member(f2, v.add(v.neg())) == 0)
    ring_witness = json.loads(acd.ring_iso(f2, u, v))
    check("ring_iso witness scalar", ring_witness["c"] == {"2": "16", "3": "81"})
    check(
        "ring_iso negative",
        acd.ring_iso(f2, v, acd.Multiplication.from_json('{"u":{"2":"5","3":"20"}}')) is None,
    )

    gen = acd.gen_random(7)
    gen.validate()
    check("generated descriptor is deterministic", gen == acd.gen_random(7))

    counter = acd.example_4_9(2, 7)
    check("counterexample family decides false", not acd.self_mult_iso(counter))
    check("counterexample stays near-isomorphic", acd.near_iso(counter, counter.mult()))
    try:
        acd.example_4_9(2, 5)
        raise AssertionError("(2, 5) must fail under the -1-inclusive convention")
    except ValueError:
        pass
    print("ok - example_4_9 guard raises ValueError")
    relaxed = acd.example_4_9(2, 5, minus_one=False)
    check("guard relaxes without -1", not acd.self_mult_iso(relaxed, minus_one=False))

    try:
        acd.iso(f1, proper, cap=2)
        raise AssertionError("tiny caps must raise")
    except RuntimeError:
        pass
    print("ok - cap raises RuntimeError")

    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
