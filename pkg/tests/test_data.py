"""Consistency of the bundled data files.

The matrices directory must stay regenerable from first principles: pyramid
stacks from their bases, simplices from simplex(), catalog matrices from the
exact hulls of their coordinate files.  Anything frozen here was computed
once and checked by hand before being committed.
"""

from conftest import DATA, data_path, load_matrix

from neighborly.canonical import build_index, canonical_key
from neighborly.hull_verify import facets_from_vertices, parse_points, verify_catalog
from neighborly.incmat import (
    get_facet,
    is_two_neighborly,
    parse_matrix,
    pyramid,
    simplex,
    validate,
)


def catalog_entries():
    files = sorted((DATA / "catalog").iterdir())
    return [parse_points(p.read_text()) for p in files]


def test_catalog_verifies_clean():
    report = verify_catalog(catalog_entries())
    assert len(report) == 11
    bad = [
        (name, cname, detail)
        for name, checks in report
        for cname, ok, detail in checks
        if not ok
    ]
    assert bad == []


def test_catalog_names_encode_profile():
    for e in catalog_entries():
        assert e.name == "p_%d_%d_%d" % (e.d, e.v, e.f)


def test_catalog_hulls_match_bundled_matrices():
    # p_4_5_5 is the 4-simplex; everything else has a matrix of the same name
    for e in catalog_entries():
        nm = "simplex_4" if e.name == "p_4_5_5" else e.name
        M = facets_from_vertices(e.points)
        assert canonical_key(M) == canonical_key(load_matrix(nm))


def test_pyramid_files_are_exact_pyramid_stacks():
    names = sorted(p.stem for p in (DATA / "matrices").iterdir())
    pyrs = [nm for nm in names if nm.startswith("pyr")]
    assert len(pyrs) == 20
    for nm in pyrs:
        k, base = int(nm[3]), nm[5:]
        M = load_matrix(base)
        for _ in range(k):
            M = pyramid(M)
        assert M == load_matrix(nm)


def test_simplex_files():
    for n in (4, 5, 6, 7, 9):
        assert load_matrix("simplex_%d" % n) == simplex(n)


def test_campaign_matrix_paths_resolve():
    for camp in sorted((DATA / "campaigns").iterdir()):
        for line in camp.read_text().splitlines():
            if line.startswith(("base_facet=", "facet_list=")):
                for rel in line.split("=", 1)[1].split():
                    assert (camp.parent / rel).resolve().is_file()


# the 17x18 candidate matrix: the one completion the d8 star analysis
# produces, kept because several tests pin its rejection story

def test_completion_matrix_frozen_facts():
    F = load_matrix("d8_completion_17x18")
    assert (F.rows, F.cols) == (17, 18)
    assert validate(F, 8) == []
    assert not is_two_neighborly(F)


def test_completion_matrix_rows_5_6_mirror():
    F = load_matrix("d8_completion_17x18")
    A5, A6 = get_facet(F, 5), get_facet(F, 6)
    assert (A5.rows, A5.cols) == (15, 14)
    assert canonical_key(A5) == canonical_key(A6)


def test_completion_matrix_extraction_not_allowed():
    F = load_matrix("d8_completion_17x18")
    text = data_path("campaigns", "d8_star.txt").read_text()
    rels = next(
        ln.split("=", 1)[1].split()
        for ln in text.splitlines()
        if ln.startswith("facet_list=")
    )
    idx = build_index(
        [parse_matrix((DATA / "campaigns" / rel).resolve().read_text()) for rel in rels]
    )
    bad = get_facet(F, 5)
    assert not idx.contains(bad)
    # two rows do extract to the expected 16x14 facet, so the matrix fails
    # only on the 15x14 ones
    p71416 = canonical_key(load_matrix("p_7_14_16"))
    hits = [
        i
        for i in range(F.rows)
        if (lambda A: (A.rows, A.cols) == (16, 14) and canonical_key(A) == p71416)(
            get_facet(F, i)
        )
    ]
    assert len(hits) == 2
