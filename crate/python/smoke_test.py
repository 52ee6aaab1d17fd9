"""Quick check that the extension imports and agrees with known values."""
import math

import cginibre as cg


def close(x, y, tol):
    assert abs(x - y) <= tol, (x, y)


def main():
    close(cg.a_cri(1.0), math.sqrt(2.0) - 1.0, 1e-14)
    assert cg.classify(0.2, 1.0) == "post"
    assert cg.classify(1.2, 1.0) == "pre"
    geo = cg.geometry_data(1.2, 1.0)
    assert geo["regime"] == "pre" and 0.0 < geo["q"] < 1.0

    exact = cg.log_z_exact(16, 16, 1.2)
    asym = cg.log_z_asymptotic(16, 1.2, 1.0)
    assert abs(exact - asym) < 1e-2, (exact, asym)

    assert cg.duality_residual(6, 3, 0.7) < 1e-25
    close(cg.tw_cdf(-2.0), 0.41322414250512274, 1e-9)
    assert 0.0 < cg.ldp_rate(0.5, 1.0)

    z = complex(3.0, 1.0)
    pe = cg.op_exact(8, 8, 1.2, z)
    pa = cg.op_asymptotic(1.2, 1.0, 8, z)
    assert abs(pe / pa - 1.0) < 1e-3, (pe, pa)

    try:
        cg.log_z_exact(0, 1, 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("N=0 should be rejected")
    print("smoke test ok")


if __name__ == "__main__":
    main()
