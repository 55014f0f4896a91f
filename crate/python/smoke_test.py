"""Smoke test for the extension module.

Build it first with `pip install --no-build-isolation -e crates/py`.
"""

import json

import massey


def main():
    rows = massey.goncharova(qmax=2, wmax=8)
    ones = sorted((r["q"], r["w"]) for r in rows if r["dim"] == 1)
    assert ones == [(0, 0), (1, 1), (1, 2), (2, 5), (2, 7)], ones

    o = massey.lie_massey("witt_plus", ["e1", "e2", "e2"], wmax=8)
    assert o["status"] == "defined_strict" and o["triviality"] == "nontrivial", o

    square = json.dumps({"m": 4, "facets": [[1, 2], [2, 3], [3, 4], [4, 1]]})
    table = massey.betti(square)
    assert sum(e["dim"] for e in table["entries"]) == 4, table
    assert massey.golod(square)["verdict"] == "not_golod"

    q3 = massey.generate("qn", 3)
    r = massey.zk_massey_product(q3, [[1, 4], [2, 5], [3, 6]])
    assert r["mainlemma"] == {"cond1": True, "cond2": True}, r
    assert r["outcome"]["status"] == "defined_strict"
    assert r["outcome"]["triviality"] == "nontrivial"

    s = massey.poincare(json.dumps({"n": 1, "gens": [[2]]}), terms=5)
    assert s["equal"] and s["poincare"]["coefficients"] == ["1"] * 6, s

    try:
        massey.generate("qn")
    except ValueError:
        pass
    else:
        raise AssertionError("missing n accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
