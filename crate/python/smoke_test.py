"""Smoke test for the helicat Python bindings."""

import json
import math

import helicat


def main():
    code, out, _ = helicat.run(["list", "--json"])
    assert code == 0
    catalog = json.loads(out)
    assert len(catalog["helicoids"]) == 14 and len(catalog["catenoids"]) == 5

    report = helicat.verify("r3_helicoid", grid="10")
    assert report["pass"], report
    minimal = next(c for c in report["checks"] if c["name"] == "minimal")
    assert minimal["max_residual"] <= 1e-8

    vertices, faces, scalars = helicat.mesh("twisted_plane", params="a=1,k=2", grid="6x5x4")
    assert len(vertices) == len(scalars) == 120
    assert len(faces) == 2 * 5 * 4 * 4
    assert all(0 <= i < len(vertices) for f in faces for i in f)

    # horospheres in H^2: a(s) = arcsin(e^s) - pi/2
    prof = helicat.profile("horospheres_hyperbolic", "n=2")
    err = max(abs(a - (math.asin(math.exp(s)) - math.pi / 2)) for s, a in zip(prof["s"], prof["a"]))
    assert err <= 1e-8, err

    try:
        helicat.verify("no_such_surface")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown kind accepted")

    code, _, _ = helicat.run(["verify", "parabola_graph", "--grid", "6"])
    assert code == 1
    print("smoke test passed")


if __name__ == "__main__":
    main()
