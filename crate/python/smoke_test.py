"""Smoke test for the cplab extension module."""

import math
import pathlib

import cplab

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def main():
    octagon = cplab.CellComplex([[1, 2, -1, -2, 3, 4, -3, -4]])
    assert octagon.genus == 2 and octagon.euler_characteristic() == -2
    eta = octagon.midpoint_decomposition()
    assert eta.validate()["passes"]

    theta = {label: (1, 2) for face in eta.faces() for label in map(abs, face)}
    verdict = cplab.check(eta, theta)
    assert verdict["admissible"], verdict

    sol = cplab.solve(eta, theta, seed=3)
    assert sol["residual_norm"] < 1e-10
    again = cplab.solve(eta, theta, warm_start=sol["shears"])
    assert again["iterations"] == 0

    dev = cplab.develop(eta, theta, sol["shears"])
    assert dev["delaunay"]["passes"]
    assert all(abs(a - math.pi / 2) < 1e-8 for a in dev["edge_angles"])

    octa = cplab.hull([0j, 1, 1j, -1, -1j, None])
    assert all(abs(a - math.pi / 2) < 1e-9 for a in octa["angles"].values())
    assert all(abs(s - 2 * math.pi) < 1e-9 for s in octa["vertex_angle_sums"])

    tetra = cplab.CellComplex.from_json((CORPUS / "tetrahedron.json").read_text())
    assert tetra.num_faces == 4 and tetra.dual().num_vertices == 4

    m = cplab.Mobius.from_three_points([0j, 1, None], [1, 1j, -1])
    assert abs(m(0j) - 1) < 1e-12 and m(None) is not None
    assert (m @ m.inverse()).distance_from_identity() < 1e-12
    # clockwise order puts the bounded disk on the right; radii meet at pi/3
    assert abs(cplab.circle_angle([1, -1j, -1], [2, 1 - 1j, 0j]) - math.pi / 3) < 1e-12

    try:
        cplab.solve(eta, {label: (1, 3) for label in theta})
    except cplab.NotAdmissibleError:
        pass
    else:
        raise AssertionError("inadmissible angles were accepted")
    try:
        cplab.hull([0j, 1, -1, None])
    except ValueError:
        pass
    else:
        raise AssertionError("concyclic points were accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
