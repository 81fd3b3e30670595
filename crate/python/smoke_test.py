"""Smoke test for the `wgdisp` extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import math

import wgdisp


def main():
    g = wgdisp.Geometry(1.0)
    names = [name for name, _ in g.modes(4.5)]
    assert names == ["TE01", "TE10", "TM11", "TE11"], names

    closed = wgdisp.coupling("TM11", "zz", 0.7)
    quad = wgdisp.coupling("TM11", "zz", 0.7, method="quadrature")
    assert abs(closed - quad) < 1e-8 * abs(closed), (closed, quad)

    sp = wgdisp.Species.single(100.0)
    near = wgdisp.energy(wgdisp.PairConfiguration(0.01, sp))
    vdw, _ = wgdisp.freespace(sp, sp, 0.01)
    assert near.total < 0
    assert abs(near.total / vdw - 1) < 0.02, (near.total, vdw)
    zz = near.tensors()[0][1][2][2]
    assert abs(zz * 0.01**3 - 1) < 0.02, zz

    cfg = wgdisp.PairConfiguration(1.0, sp, modes=["TM11"])
    full = wgdisp.oracle(cfg)
    eq7 = wgdisp.energy(cfg).total
    assert abs(full - eq7) < 0.05 * abs(full), (full, eq7)

    r = wgdisp.ratio(10.0, 10.0, reference="cp")
    assert math.isclose(r, 2.7596518298e-21, rel_tol=1e-6), r
    assert len(wgdisp.fig4(points=3)) == 3

    try:
        wgdisp.Geometry(0.0)
    except wgdisp.WgdispError as e:
        assert "a must be > 0" in str(e)
    else:
        raise AssertionError("invalid geometry accepted")
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
