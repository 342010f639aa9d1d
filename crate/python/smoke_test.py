"""Smoke test for the heatlie_py extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json

import heatlie_py as hl


def main():
    h0 = hl.h_operator(1, 0)
    assert str(h0) == "z1 d1 - 1", str(h0)
    assert str(hl.h_operator(1, 1)) == "1/2 d1^2 - 1/6 l4 z1^2"

    # parsing, composition and the Weyl relation d z = z d + 1
    d1 = hl.WeylOperator(2, "d1")
    z1 = hl.WeylOperator(2, "z1")
    assert str(d1 * z1) == "z1 d1 + 1"
    assert str(d1.commutator(z1)) == "1"
    assert (d1 * z1).weight() == 0

    # [Q_2, Q_4] at genus 2 expands as 8/5 l6 Q_0 - 8/5 l4 Q_2 + 2 Q_6
    q2, q4 = hl.q_operator(2, 1), hl.q_operator(2, 2)
    c = hl.expand_in_l_basis(q2.commutator(q4).l)
    assert [str(p) for p in c] == ["8/5 l6", "-8/5 l4", "0", "2"], [str(p) for p in c]

    # JSON round trip
    doc = q4.to_json()
    assert json.loads(doc)["genus"] == 2
    assert hl.SchrodingerOperator.from_json(doc) == q4

    # derivations: L_2 and w_2,1 at genus 1
    lcal, ws = hl.derive(1, 1)
    assert lcal == "L2 - psi{1} d1", lcal
    assert str(ws[1]) == "-1/2 psi{1,1,1} - 1/3 l4 z1", str(ws[1])
    assert ws[1].psi_degree() == 1

    ok, records = hl.verify(2)
    assert ok and all(r["passed"] for r in records)
    assert {r["suite"] for r in records} >= {"lemma33", "q-structure", "golden"}

    try:
        hl.q_operator(0, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("genus 0 accepted")

    print(f"smoke test passed ({len(records)} checks at genus 2)")


if __name__ == "__main__":
    main()
