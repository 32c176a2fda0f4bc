import itertools
from collections import Counter

import pytest

from qps import census
from qps.census import (
    CensusResult,
    PointIsNucleus,
    PointOnQuadric,
    classical_distribution,
    enumerate_quadrics,
    nonsingular_switch_census,
    nucleus_pivot_census,
    q4_shape_classify,
    singular_switch_census,
    two_secant_count,
)
from qps.forms import (
    IncompatibleKind,
    PolarKind,
    canonical_form,
    nucleus_point,
    point_set,
)
from qps.pg import PointSet, bits_to_indices, flats_of_codim, space_for
from qps.spectra import classify, profile, spectrum
from qps.surgery import shifted_nucleus_pivot


def canonical(fam, m, q):
    return point_set(canonical_form(PolarKind(fam, m, q), space_for(m, q)))


def no_runtime(res: CensusResult) -> dict:
    d = res.to_dict()
    d.pop("runtime_ms")
    return d


# ---------------------------------------------------------------------------
# Form enumeration
# ---------------------------------------------------------------------------


def test_enumerate_counts():
    assert len(enumerate_quadrics(space_for(2, 2), PolarKind("parabolic", 2, 2))) == 28
    assert len(enumerate_quadrics(space_for(2, 3), PolarKind("parabolic", 2, 3))) == 234
    assert len(enumerate_quadrics(space_for(3, 2), PolarKind("hyperbolic", 3, 2))) == 280
    assert len(enumerate_quadrics(space_for(3, 2), PolarKind("elliptic", 3, 2))) == 168
    assert len(enumerate_quadrics(space_for(2, 4), PolarKind("hermitian", 2, 4))) == 280
    assert len(enumerate_quadrics(space_for(1, 4), PolarKind("hermitian", 1, 4))) == 10


def test_enumerate_output_is_sorted_and_distinct():
    sets = enumerate_quadrics(space_for(3, 2), PolarKind("elliptic", 3, 2))
    bits = [s.bits for s in sets]
    assert bits == sorted(bits)
    assert len(set(bits)) == len(bits)
    kind = PolarKind("elliptic", 3, 2)
    for s in sets[:20]:
        cls = classify(s, kind)
        assert cls.quasi_polar and cls.classical_size


def test_enumerate_orbit_sizes_divide_group_order():
    # every elliptic quadric of PG(3,2) arises; 168 = |PGL(4,2)| / |O-(4,2)|
    assert 168 * 120 == 20160
    assert 280 * 72 == 20160


def test_enumerate_vectorized_path_agrees(monkeypatch):
    sp = space_for(2, 3)
    kind = PolarKind("parabolic", 2, 3)
    plain = [s.bits for s in enumerate_quadrics(sp, kind)]
    monkeypatch.setattr(census, "_VECTOR_THRESHOLD", 0)
    fast = [s.bits for s in enumerate_quadrics(sp, kind)]
    assert plain == fast


def test_enumerate_rejects_kind_space_mismatch():
    with pytest.raises(IncompatibleKind):
        enumerate_quadrics(space_for(3, 2), PolarKind("parabolic", 2, 2))


# ---------------------------------------------------------------------------
# Nucleus pivot census
# ---------------------------------------------------------------------------


def test_nucleus_pivot_census_q42():
    s = canonical("parabolic", 4, 2)
    res = nucleus_pivot_census(s)
    assert res.name == "nucleus-pivot"
    assert res.total_candidates == 448
    assert res.breakdown == {
        "hyperbolic_no_nucleus": 270,
        "hyperbolic_with_nucleus": 10,
        "elliptic_no_nucleus": 162,
        "elliptic_with_nucleus": 6,
    }
    assert res.extra["hyperplanes_checked"] == {"hyperbolic": 10, "elliptic": 6}
    assert len(res.witnesses["hyperbolic_no_nucleus"]) == 10
    for w in res.witnesses["elliptic_no_nucleus"]:
        assert len(w) == 15


def test_nucleus_pivot_census_threads_deterministic():
    s = canonical("parabolic", 4, 2)
    assert no_runtime(nucleus_pivot_census(s, threads=1)) == no_runtime(
        nucleus_pivot_census(s, threads=4)
    )


def test_nucleus_pivot_census_rejects_wrong_input():
    with pytest.raises(ValueError):
        nucleus_pivot_census(canonical("parabolic", 4, 3))
    sp = space_for(4, 2)
    with pytest.raises(ValueError):
        nucleus_pivot_census(PointSet(sp, (1 << 15) - 1))


# ---------------------------------------------------------------------------
# Singular switch census
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def singular_census():
    s = canonical("parabolic", 4, 2)
    return s, singular_switch_census(s)


def test_singular_switch_census_breakdown(singular_census):
    _s, res = singular_census
    assert res.total_candidates == 6435
    assert res.breakdown == {
        "not_quasi_polar": 6331,
        "cone_vertex": 28,
        "cone_nucleus": 28,
        "truncated_vertex_plus_nucleus_line": 24,
        "truncated_nucleus_plus_vertex_line": 24,
    }
    assert res.extra["multi_shape"] == 24
    assert sum(res.breakdown.values()) == 6435


def test_singular_switch_census_original_section_survives(singular_census):
    s, res = singular_census
    sp = s.space
    pi = res.extra["hyperplane"]
    section = s.bits & sp.incidence[pi]
    assert q4_shape_classify(s, pi, section) == ["cone_vertex"]


def test_singular_switch_witnesses_are_sections(singular_census):
    s, res = singular_census
    sp = s.space
    pi = res.extra["hyperplane"]
    base = s.bits & ~sp.incidence[pi]
    sizes = set(profile(PolarKind("parabolic", 4, 2)).sizes)
    for label, group in res.witnesses.items():
        for w in group[:3]:
            t_bits = 0
            for i in w:
                t_bits |= 1 << i
            assert label in q4_shape_classify(s, pi, t_bits)
            hist = spectrum(PointSet(sp, base | t_bits)).histogram
            assert set(hist) <= sizes


# ---------------------------------------------------------------------------
# Shape classification
# ---------------------------------------------------------------------------


def test_q4_shape_classify_rejects_bad_input(singular_census):
    s, res = singular_census
    sp = s.space
    pi = res.extra["hyperplane"]
    with pytest.raises(ValueError, match="PG"):
        q4_shape_classify(canonical("hyperbolic", 3, 2), 0, 0)
    with pytest.raises(ValueError, match="7 points"):
        q4_shape_classify(s, pi, bits_to_indices(sp.incidence[pi])[:6])
    outside = [i for i in range(sp.n_points) if not sp.incidence[pi] >> i & 1]
    with pytest.raises(ValueError, match="inside"):
        q4_shape_classify(s, pi, outside[:7])
    moved, _rec = shifted_nucleus_pivot(s, pi)
    with pytest.raises(ValueError, match="nucleus"):
        q4_shape_classify(moved, pi, s.bits & sp.incidence[pi])


def test_q4_shape_classify_rejects_non_survivor(singular_census):
    s, _res = singular_census
    sp = s.space
    per = spectrum(s).per_hyperplane
    pi = per.index(7)
    pi_pts = bits_to_indices(sp.incidence[pi])
    base = s.bits & ~sp.incidence[pi]
    sizes = set(profile(PolarKind("parabolic", 4, 2)).sizes)
    seen_empty = 0
    for combo in itertools.combinations(pi_pts, 7):
        t_bits = 0
        for i in combo:
            t_bits |= 1 << i
        labels = q4_shape_classify(s, pi, t_bits)
        hist = spectrum(PointSet(sp, base | t_bits)).histogram
        if labels:
            assert set(hist) <= sizes
        else:
            assert not set(hist) <= sizes
            seen_empty += 1
        if seen_empty >= 20:
            break
    assert seen_empty == 20


# ---------------------------------------------------------------------------
# Non-singular switch census
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "fam,m,q,n_cand",
    [
        ("hyperbolic", 3, 3, 234),
        ("elliptic", 3, 3, 234),
        ("hermitian", 3, 4, 280),
    ],
)
def test_nonsingular_switch_census_identity_only(fam, m, q, n_cand):
    s = canonical(fam, m, q)
    res = nonsingular_switch_census(s, PolarKind(fam, m, q))
    assert res.name == "nonsingular-switch"
    sub_fam = census._SECTION_FAMILIES[fam][0]
    assert res.breakdown[f"{sub_fam}_identity"] == 1
    assert res.breakdown[f"{sub_fam}_other_survivor"] == 0
    assert res.breakdown[f"{sub_fam}_not_quasi_polar"] == n_cand - 1
    assert res.witnesses[f"{sub_fam}_other_survivor"] == []
    assert res.extra["candidates"][sub_fam] == n_cand


def test_nonsingular_switch_census_rejects_non_classical():
    sp = space_for(3, 3)
    with pytest.raises(ValueError):
        nonsingular_switch_census(PointSet(sp, 0), PolarKind("hyperbolic", 3, 3))


# ---------------------------------------------------------------------------
# Classical type distributions
# ---------------------------------------------------------------------------


def test_classical_distribution_q43_all_planes():
    # size-4 sections split into conics and full quadric lines
    sp = space_for(4, 3)
    form = canonical_form(PolarKind("parabolic", 4, 3), sp)
    tally = Counter()
    for flat in flats_of_codim(sp, 2):
        d = classical_distribution(form, flat)
        tally[(d["flat_section"], tuple(sorted(d["hyperplanes"].items())))] += 1
    assert tally == {
        (1, (("elliptic", 3), ("singular", 1))): 120,
        (4, (("elliptic", 1), ("hyperbolic", 1), ("singular", 2))): 540,
        (4, (("elliptic", 2), ("hyperbolic", 2))): 270,
        (4, (("singular", 4),)): 40,
        (7, (("hyperbolic", 3), ("singular", 1))): 240,
    }
    assert sum(tally.values()) == 1210


def test_classical_distribution_q44_split_by_nucleus():
    # every plane through the nucleus meets the quadric in a line
    sp = space_for(4, 4)
    form = canonical_form(PolarKind("parabolic", 4, 4), sp)
    nuc = nucleus_point(form)
    tally = Counter()
    for flat in flats_of_codim(sp, 2):
        through = bool(flat.mask() >> nuc & 1)
        d = classical_distribution(form, flat)
        tally[(through, d["flat_section"], tuple(sorted(d["hyperplanes"].items())))] += 1
    assert tally == {
        (False, 1, (("elliptic", 4), ("singular", 1))): 510,
        (False, 5, (("elliptic", 2), ("hyperbolic", 2), ("singular", 1))): 4080,
        (False, 9, (("hyperbolic", 4), ("singular", 1))): 850,
        (True, 5, (("singular", 5),)): 357,
    }


def test_classical_distribution_hermitian_lines():
    sp = space_for(3, 4)
    form = canonical_form(PolarKind("hermitian", 3, 4), sp)
    tally = Counter()
    for flat in flats_of_codim(sp, 2):
        d = classical_distribution(form, flat)
        tally[(d["flat_section"], tuple(sorted(d["hyperplanes"].items())))] += 1
    assert tally == {
        (1, (("nonsingular", 4), ("singular", 1))): 90,
        (3, (("nonsingular", 2), ("singular", 3))): 240,
        (5, (("singular", 5),)): 27,
    }


# ---------------------------------------------------------------------------
# Two-secant counts
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("m,q,expect", [(4, 2, 4), (4, 4, 32), (6, 2, 16)])
def test_two_secant_count_off_points(m, q, expect):
    sp = space_for(m, q)
    form = canonical_form(PolarKind("parabolic", m, q), sp)
    zeros = point_set(form)
    nuc = nucleus_point(form)
    checked = 0
    for p in range(sp.n_points):
        if zeros.contains(p) or p == nuc:
            continue
        assert two_secant_count(form, p) == expect
        checked += 1
        if checked == 8:
            break
    assert checked == 8


def test_two_secant_count_rejects_special_points():
    sp = space_for(4, 2)
    form = canonical_form(PolarKind("parabolic", 4, 2), sp)
    zeros = point_set(form)
    with pytest.raises(PointOnQuadric):
        two_secant_count(form, zeros.indices()[0])
    with pytest.raises(PointIsNucleus):
        two_secant_count(form, nucleus_point(form))
    odd = canonical_form(PolarKind("parabolic", 4, 3), space_for(4, 3))
    with pytest.raises(IncompatibleKind):
        two_secant_count(odd, 0)


# ---------------------------------------------------------------------------
# Result serialization
# ---------------------------------------------------------------------------


def test_census_result_dict_shape(singular_census):
    _s, res = singular_census
    d = res.to_dict()
    assert set(d) == {
        "name",
        "space",
        "total_candidates",
        "breakdown",
        "witnesses",
        "runtime_ms",
        "extra",
    }
    assert d["space"] == {"m": 4, "q": 2}
    import json

    json.dumps(d)
