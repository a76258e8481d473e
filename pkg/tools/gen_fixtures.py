#!/usr/bin/env python3
"""Regenerate the shipped fixture files.

Archimedean logs are printed to 52 significant digits from 400-bit
arithmetic, so each decimal string is accurate to well under one unit in the
last digit (the loader assumes one ulp).  Run from the repository root:

    python tools/gen_fixtures.py
"""

import json
import os

from mpmath import mp, mpf, sqrt, log, nstr

mp.prec = 400

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "sunorm", "fixtures")

DIGITS = 52


def fmt(x) -> str:
    return nstr(x, DIGITS, strip_zeros=False)


def neg(s: str) -> str:
    return s[1:] if s.startswith("-") else "-" + s


def write(name, data):
    path = os.path.join(OUT, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote", path)


s2, s3, s5, s6 = sqrt(2), sqrt(3), sqrt(5), sqrt(6)
tau = (1 + s5) / 2

LOG2 = fmt(log(2))
LOG7 = fmt(log(7))
HALF_LOG2 = fmt(log(2) / 2)
HALF_LOG3 = fmt(log(3) / 2)
HALF_LOG5 = fmt(log(5) / 2)
A_SILVER = fmt(log(1 + s2))              # log(1+sqrt2)
T_GOLDEN = fmt(log(tau))                 # log((1+sqrt5)/2)
B_23 = fmt(log(2 + s3))                  # log(2+sqrt3)
L_LAMBDA = fmt(log(s2 + s3))             # log(sqrt2+sqrt3)
G7P = fmt(log(3 + s2))                   # log(3+sqrt2)
G7M = fmt(log(3 - s2))                   # log(3-sqrt2)
BIG7P = fmt(log(13 + 9 * s2))            # log(13+9*sqrt2), norm 7
BIG7M = fmt(log(13 - 9 * s2))
SEVEN_SILVER_P = fmt(log(7) + log(1 + s2))
SEVEN_SILVER_M = fmt(log(7) - log(1 + s2))

# Uniformizer above 2 in Q(sqrt2,sqrt3): pi = 1 + (sqrt2+sqrt6)/2, norm -2.
PI = [
    fmt(log(abs(1 + (e2 * s2 + e2 * e3 * s6) / 2)))
    for (e2, e3) in [(1, 1), (1, -1), (-1, 1), (-1, -1)]
]

HOUSE_SILVER = fmt(1 + s2)
HOUSE_GOLDEN = fmt(tau)
HOUSE_23 = fmt(2 + s3)
HOUSE_PISOT6 = fmt(5 + 2 * s6)


def main():
    os.makedirs(OUT, exist_ok=True)

    # ---- Q, S = {inf, 2} ---------------------------------------------------
    two = {"fin": {"1": "1"}, "arch": {"0": LOG2}}
    write("q.json", {
        "label": "q",
        "degree": 1,
        "places": [
            {"id": 0, "over": "inf", "local_degree": 1},
            {"id": 1, "over": 2, "local_degree": 1, "ram_index": 1},
        ],
        "galois": {"group_order": 1, "generators": []},
        "subgroups": [{"name": "Q", "elements": [[0, 1]]}],
        "s_unit_basis": [two],
        "class_number": 1,
        "prime_generators": {"1": {"vector": two}},
        "elements": {"two": {"basis": ["1"]}},
    })

    # ---- Q(sqrt2), S = {inf, 2} --------------------------------------------
    silver = {"fin": {}, "arch": {"0": A_SILVER, "1": neg(A_SILVER)}}
    sqrt2 = {"fin": {"2": "1"}, "arch": {"0": HALF_LOG2, "1": HALF_LOG2}}
    qsqrt2 = {
        "label": "qsqrt2",
        "degree": 2,
        "places": [
            {"id": 0, "over": "inf", "local_degree": 1},
            {"id": 1, "over": "inf", "local_degree": 1},
            {"id": 2, "over": 2, "local_degree": 2, "ram_index": 2},
        ],
        "galois": {"group_order": 2, "generators": [[1, 0, 2]]},
        "subgroups": [
            {"name": "Q(sqrt2)", "elements": [[0, 1, 2]]},
            {"name": "Q", "elements": [[0, 1, 2], [1, 0, 2]]},
        ],
        "s_unit_basis": [silver, sqrt2],
        "class_number": 1,
        "prime_generators": {"2": {"vector": sqrt2}},
        "elements": {
            "silver": {"basis": ["1", "0"]},
            "sqrt2": {"basis": ["0", "1"]},
            "two": {"basis": ["0", "2"]},
        },
        "pisot_salem": {"silver": HOUSE_SILVER},
    }
    write("qsqrt2.json", qsqrt2)

    # ---- Q(sqrt2) with the split prime 7 added -------------------------------
    silver5 = {"fin": {}, "arch": {"0": A_SILVER, "1": neg(A_SILVER)}}
    sqrt2_5 = {"fin": {"2": "1"}, "arch": {"0": HALF_LOG2, "1": HALF_LOG2}}
    gen7 = {"fin": {"3": "1"}, "arch": {"0": G7P, "1": G7M}}
    gen7c = {"fin": {"4": "1"}, "arch": {"0": G7M, "1": G7P}}
    write("qsqrt2_ext.json", {
        "label": "qsqrt2-ext",
        "degree": 2,
        "places": [
            {"id": 0, "over": "inf", "local_degree": 1},
            {"id": 1, "over": "inf", "local_degree": 1},
            {"id": 2, "over": 2, "local_degree": 2, "ram_index": 2},
            {"id": 3, "over": 7, "local_degree": 1, "ram_index": 1},
            {"id": 4, "over": 7, "local_degree": 1, "ram_index": 1},
        ],
        "galois": {"group_order": 2, "generators": [[1, 0, 2, 4, 3]]},
        "subgroups": [
            {"name": "Q(sqrt2)", "elements": [[0, 1, 2, 3, 4]]},
            {"name": "Q", "elements": [[0, 1, 2, 3, 4], [1, 0, 2, 4, 3]]},
        ],
        "s_unit_basis": [silver5, sqrt2_5],
        "class_number": 1,
        "prime_generators": {
            "2": {"vector": sqrt2_5},
            "3": {"vector": gen7},
            "4": {"vector": gen7c},
        },
        "elements": {
            "silver": {"basis": ["1", "0"]},
            "sqrt2": {"basis": ["0", "1"]},
            "gen7": {"fin": {"3": "1"}, "arch": {"0": G7P, "1": G7M}},
            "gen7-conj": {"fin": {"4": "1"}, "arch": {"0": G7M, "1": G7P}},
            "seven": {"fin": {"3": "1", "4": "1"}, "arch": {"0": LOG7, "1": LOG7}},
            "seven-silver": {
                "fin": {"3": "1", "4": "1"},
                "arch": {"0": SEVEN_SILVER_P, "1": SEVEN_SILVER_M},
            },
            "big7": {"fin": {"3": "1"}, "arch": {"0": BIG7P, "1": BIG7M}},
        },
        "pisot_salem": {"silver": HOUSE_SILVER},
    })

    # ---- Q(sqrt5), S = {inf, 5} ----------------------------------------------
    golden = {"fin": {}, "arch": {"0": T_GOLDEN, "1": neg(T_GOLDEN)}}
    sqrt5 = {"fin": {"2": "1"}, "arch": {"0": HALF_LOG5, "1": HALF_LOG5}}
    write("qsqrt5.json", {
        "label": "qsqrt5",
        "degree": 2,
        "places": [
            {"id": 0, "over": "inf", "local_degree": 1},
            {"id": 1, "over": "inf", "local_degree": 1},
            {"id": 2, "over": 5, "local_degree": 2, "ram_index": 2},
        ],
        "galois": {"group_order": 2, "generators": [[1, 0, 2]]},
        "subgroups": [
            {"name": "Q(sqrt5)", "elements": [[0, 1, 2]]},
            {"name": "Q", "elements": [[0, 1, 2], [1, 0, 2]]},
        ],
        "s_unit_basis": [golden, sqrt5],
        "class_number": 1,
        "prime_generators": {"2": {"vector": sqrt5}},
        "elements": {
            "golden": {"basis": ["1", "0"]},
            "sqrt5": {"basis": ["0", "1"]},
        },
        "pisot_salem": {"golden": HOUSE_GOLDEN},
    })

    # ---- Q(sqrt2, sqrt3), S = {inf, 2, 3} -------------------------------------
    # Archimedean places 0..3 are the sign patterns (+,+), (+,-), (-,+), (-,-)
    # for (sqrt2, sqrt3).  2 is totally ramified (e=4); 3 has e=2, f=2.
    silver_b = {"fin": {}, "arch": {"0": A_SILVER, "1": A_SILVER,
                                    "2": neg(A_SILVER), "3": neg(A_SILVER)}}
    unit23 = {"fin": {}, "arch": {"0": B_23, "1": neg(B_23), "2": B_23, "3": neg(B_23)}}
    lam = {"fin": {}, "arch": {"0": L_LAMBDA, "1": neg(L_LAMBDA),
                               "2": neg(L_LAMBDA), "3": L_LAMBDA}}
    sqrt2_b = {"fin": {"4": "2"}, "arch": {str(i): HALF_LOG2 for i in range(4)}}
    sqrt3_b = {"fin": {"5": "1"}, "arch": {str(i): HALF_LOG3 for i in range(4)}}
    pi_b = {"fin": {"4": "1"}, "arch": {str(i): PI[i] for i in range(4)}}
    identity6 = [0, 1, 2, 3, 4, 5]
    sig = [2, 3, 0, 1, 4, 5]     # sqrt2 -> -sqrt2
    tau_g = [1, 0, 3, 2, 4, 5]   # sqrt3 -> -sqrt3
    sigtau = [3, 2, 1, 0, 4, 5]
    write("qbiquad.json", {
        "label": "qbiquad",
        "degree": 4,
        "places": [
            {"id": 0, "over": "inf", "local_degree": 1},
            {"id": 1, "over": "inf", "local_degree": 1},
            {"id": 2, "over": "inf", "local_degree": 1},
            {"id": 3, "over": "inf", "local_degree": 1},
            {"id": 4, "over": 2, "local_degree": 4, "ram_index": 4},
            {"id": 5, "over": 3, "local_degree": 4, "ram_index": 2},
        ],
        "galois": {"group_order": 4, "generators": [sig, tau_g]},
        "subgroups": [
            {"name": "Q(sqrt2,sqrt3)", "elements": [identity6]},
            {"name": "Q(sqrt2)", "elements": [identity6, tau_g]},
            {"name": "Q(sqrt3)", "elements": [identity6, sig]},
            {"name": "Q(sqrt6)", "elements": [identity6, sigtau]},
            {"name": "Q", "elements": [identity6, sig, tau_g, sigtau]},
        ],
        "s_unit_basis": [silver_b, unit23, lam, sqrt2_b, sqrt3_b],
        "class_number": 1,
        "prime_generators": {
            "4": {"vector": pi_b},
            "5": {"vector": sqrt3_b},
        },
        "elements": {
            "silver": {"basis": ["1", "0", "0", "0", "0"]},
            "unit23": {"basis": ["0", "1", "0", "0", "0"]},
            "lambda": {"basis": ["0", "0", "1", "0", "0"]},
            "sqrt2": {"basis": ["0", "0", "0", "1", "0"]},
            "sqrt3": {"basis": ["0", "0", "0", "0", "1"]},
            "sqrt6": {"basis": ["0", "0", "0", "1", "1"]},
            "pisot6": {"basis": ["0", "0", "2", "0", "0"]},
        },
        "pisot_salem": {
            "silver": HOUSE_SILVER,
            "unit23": HOUSE_23,
            "pisot6": HOUSE_PISOT6,
        },
    })


if __name__ == "__main__":
    main()
