"""Smoke test for the symfact Python extension.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import symfact

ELEMENTARY = """chain 2 1
factor minus
1 x1
0 1
x2 0
0 1
"""


def main():
    m = symfact.Matrix.random_symplectic(2, 3, seed=7)
    assert m.rows == 4 and m.is_symplectic()
    assert symfact.Matrix.parse(m.to_text()) == m

    e = symfact.ElementaryChain.parse(ELEMENTARY)
    factors = e.factor7()
    assert len(factors) == 7
    assert factors.sides()[0] == "lower"
    assert factors.product() == e.psi()

    status, text, _ = symfact.search(m, 4)
    assert status == "found", status
    assert symfact.FactorChain.parse(text).product() == m

    assert symfact.bounds(2, 1)[:2] == (5, 16)
    assert symfact.classify_stratum(["0", "0", "0", "5"], 4) == "N0"
    passed, failed = symfact.verify_reduction(["1", "0", "0", "0"], 4, 5, 1)
    assert (passed, failed) == (5, 0)
    print("smoke test ok")


if __name__ == "__main__":
    main()
