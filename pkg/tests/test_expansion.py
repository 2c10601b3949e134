import random
from fractions import Fraction

import pytest

from degex.complexes import euler_characteristic, validate
from degex.expansion import (
    BlowupAssignment,
    bad_quartic_assignment,
    check_gluing,
    check_torus_compatibility,
    default_quartic_assignment,
    get_assignment,
    labeling_assignment,
    subdivide,
)
from degex.models import cube_model, find_3_labeling, quartic_model


def closed_surface(K):
    """Every 1-cell must bound exactly two 2-cells."""
    counts = {}
    for c in K.cells_of_dim(2):
        for fid, _ in c.faces:
            counts[fid] = counts.get(fid, 0) + 1
    return all(counts.get(e.id, 0) == 2 for e in K.cells_of_dim(1))


def test_default_assignment_pairs():
    a = default_quartic_assignment()
    assert a.pairs[("Y1", "Y2", "Y3")] == ("Y1", "Y2")
    assert a.pairs[("Y1", "Y3", "Y4")] == ("Y1", "Y3")
    assert a.pairs[("Y2", "Y3", "Y4")] == ("Y4", "Y2")


def test_subdivide_n0_returns_model():
    m = quartic_model()
    E = subdivide(m, default_quartic_assignment(), 0)
    assert E.cells is m.sphere
    assert E.exceptional_vertex_count() == 0


def test_quartic_n1_census():
    m = quartic_model()
    E = subdivide(m, default_quartic_assignment(), 1)
    # one glued node per tetrahedron edge; each triangle cut into 3 regions
    assert len(E.edge_nodes) == 6
    assert len(E.boxes) == 0
    assert set(E.regions_per_triangle().values()) == {3}
    assert validate(E.cells) == []
    assert euler_characteristic(E.cells) == 2
    assert closed_surface(E.cells)


def test_quartic_n2_census():
    m = quartic_model()
    E = subdivide(m, default_quartic_assignment(), 2)
    # explicit cell census: 2 nodes per edge plus one corner box per triangle
    assert len(E.edge_nodes) == 12
    assert len(E.boxes) == 4
    assert E.exceptional_vertex_count() == 16
    assert set(E.regions_per_triangle().values()) == {6}
    assert validate(E.cells) == []
    assert euler_characteristic(E.cells) == 2
    assert closed_surface(E.cells)


def test_quartic_default_glues_n1():
    m = quartic_model()
    E = subdivide(m, default_quartic_assignment(), 1)
    assert check_gluing(E).glues


def test_bad_assignment_fails_on_Y2_Y3():
    m = quartic_model()
    E = subdivide(m, bad_quartic_assignment(), 1)
    report = check_gluing(E)
    assert not report.glues
    edges = {tuple(f["edge"]) for f in report.failures}
    assert ("Y2", "Y3") in edges
    # the flattened tropical picture also shows the Y1-Y4 copies disagreeing
    assert edges <= {("Y2", "Y3"), ("Y1", "Y4")}


def test_bad_assignment_fails_at_generic_params_too():
    m = quartic_model()
    E = subdivide(m, bad_quartic_assignment(), 1, positions=[Fraction(1, 3)])
    report = check_gluing(E)
    assert not report.glues
    assert ("Y2", "Y3") in {tuple(f["edge"]) for f in report.failures}


def test_cube_labeling_assignment_glues():
    m = cube_model()
    a = labeling_assignment(m, find_3_labeling(m))
    E = subdivide(m, a, 1)
    assert check_gluing(E).glues
    assert len(E.edge_nodes) == 12
    assert set(E.regions_per_triangle().values()) == {3}
    assert validate(E.cells) == []
    assert closed_surface(E.cells)


def test_labeling_assignment_rejects_quartic():
    with pytest.raises(ValueError):
        get_assignment(quartic_model(), "labeling")


def test_single_triangle_pair_from_labeling():
    from degex.models import find_3_labeling, make_surface_model

    disk = make_surface_model("disk", [("A", "B", "C")], require_closed=False)
    lab = find_3_labeling(disk)
    a = labeling_assignment(disk, lab)
    (f, s) = a.pairs[("A", "B", "C")]
    assert lab[f] == 1 and lab[s] == 2


def test_gluing_holds_up_to_depth_4_random_params():
    rng = random.Random(12345)
    m = quartic_model()
    a = default_quartic_assignment()
    for n in range(0, 5):
        for _ in range(3):
            cuts = sorted(
                {Fraction(rng.randint(1, 30), 31) for _ in range(n)}
            )
            if len(cuts) != n:
                continue
            E = subdivide(m, a, n, positions=cuts)
            assert check_gluing(E).glues
            assert validate(E.cells) == []
            assert euler_characteristic(E.cells) == 2
            assert closed_surface(E.cells)


def test_gluing_report_independent_of_processing_order():
    m = quartic_model()
    items = list(bad_quartic_assignment().pairs.items())
    a1 = BlowupAssignment(dict(items))
    a2 = BlowupAssignment(dict(reversed(items)))
    r1 = check_gluing(subdivide(m, a1, 1))
    r2 = check_gluing(subdivide(m, a2, 1))
    assert r1.failures == r2.failures


def test_color_length_bookkeeping_matches_across_sides():
    m = quartic_model()
    E = subdivide(m, default_quartic_assignment(), 2, positions=[Fraction(1, 5), Fraction(1, 2)])
    assert check_gluing(E).glues
    for e, sides in E.colored_segments.items():
        views = [
            [(s["symbol"], s["length"]) for s in segs] for segs in sides.values()
        ]
        assert views[0] == views[1]
        # read from the distinguished endpoint the colors are green, pink, t3
        tri = sorted(sides)[0]
        colors = [s["color"] for s in sides[tri]]
        if E.distinguished[e][tri] != e[0]:
            colors = list(reversed(colors))
        assert colors == ["green", "pink", "t3"]


def test_torus_compatibility_passes_for_good_assignments():
    qm = quartic_model()
    qa = default_quartic_assignment()
    cm = cube_model()
    ca = labeling_assignment(cm, find_3_labeling(cm))
    for n in (1, 2):
        Eq = subdivide(qm, qa, n)
        assert check_torus_compatibility(Eq).compatible
        Ec = subdivide(cm, ca, n)
        assert check_torus_compatibility(Ec).compatible


def flipped_corner_assignment():
    pairs = dict(default_quartic_assignment().pairs)
    f, s = pairs[("Y1", "Y2", "Y3")]
    pairs[("Y1", "Y2", "Y3")] = (s, f)
    return BlowupAssignment(pairs)


def test_flipped_corner_reports_named_conflict():
    m = quartic_model()
    for n in (1, 2):
        E = subdivide(m, flipped_corner_assignment(), n)
        report = check_torus_compatibility(E)
        assert not report.compatible
        assert all("cell" in c for c in report.conflicts)
        assert any(c["kind"] == "node arrow mismatch" for c in report.conflicts)


def test_flipped_corner_also_fails_gluing_on_colors():
    m = quartic_model()
    E = subdivide(m, flipped_corner_assignment(), 1)
    report = check_gluing(E)
    assert not report.glues


def test_position_validation():
    m = quartic_model()
    a = default_quartic_assignment()
    with pytest.raises(ValueError):
        subdivide(m, a, 2, positions=[Fraction(2, 3), Fraction(1, 3)])
    with pytest.raises(ValueError):
        subdivide(m, a, 1, positions=[Fraction(3, 2)])
    with pytest.raises(ValueError):
        subdivide(m, a, 2, positions=[Fraction(1, 3)])
