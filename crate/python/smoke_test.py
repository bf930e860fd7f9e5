"""Smoke test for the steenpoly extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/steenpoly-*.whl
"""

import steenpoly as sp


def main():
    a2 = sp.SteenrodAlgebra(2)
    assert a2.normalize([1, 1]).is_zero()
    assert a2.normalize([2, 2]) == a2.monomial([3, 1])
    assert str(a2.parse("P1") * a2.parse("P2")) == str(a2.monomial([3]))
    a3 = sp.SteenrodAlgebra(3, "signed")
    assert sp.adem([1, 1], p=3, convention="signed") == a3.monomial([2]) + a3.monomial([2])
    assert sp.adem([1, 1], p=3) == sp.SteenrodAlgebra(3).monomial([2])
    assert a2.normalize([2, 1]).is_admissible()

    assert sp.hom_p("G(2,1)", "S(3;m=1)") == 1
    assert sp.hom_p("G(2)", "G(1)") == 0
    dims = sp.hom_u("F(2)", "F(1)", ladder=[16, 32])
    assert dims == [(16, 1), (32, 1)], dims

    ce = sp.counterexample(p=2)
    assert (ce["dimP"], ce["dimU"]) == (0, 1), ce

    assert sp.p_adic(6, 2) == [(1, 1), (1, 2)]
    assert sp.partition([0, 0, 2], n=6) == [[0, 1], [2]]
    bp = sp.block_partition([2, 1], 5, [0, 0, 5])
    assert bp["blocks"] == [[0, 1], [2]] and bp["unique"], bp

    try:
        sp.partition([1, 1, 3], targets=[2, 10], p=2)
        raise AssertionError("shared p-power accepted")
    except ValueError:
        pass

    checks = sp.verify("steenrod", p=2, quick=True)
    assert all(c["passed"] for c in checks), [c for c in checks if not c["passed"]]

    print("steenpoly smoke test: ok ({} steenrod checks)".format(len(checks)))


if __name__ == "__main__":
    main()
