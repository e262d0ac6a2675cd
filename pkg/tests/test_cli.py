"""End-to-end checks of the console entry points.

Everything goes through main(argv) so the exit-code contract is exercised
exactly as a shell would see it: 0 ok, 1 verification failure, 2 bad input,
3 budget exhausted.
"""

import json

import pytest

from conftest import data_path, load_matrix

from neighborly.canonical import canonical_key
from neighborly.cli import main
from neighborly.incmat import parse_matrix, pyramid


def blocks(text):
    return [parse_matrix(b) for b in text.split("\n\n") if b.strip()]


def test_verify_bundled_catalog_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 11
    assert all(ln.startswith("PASS ") for ln in out)


def test_verify_scatter_coordinates(tmp_path, capsys):
    tsv = tmp_path / "scatter.tsv"
    assert main(["verify", "--scatter", str(tsv)]) == 0
    capsys.readouterr()
    rows = dict()
    for ln in tsv.read_text().splitlines():
        a, b, name = ln.split("\t")
        rows[name] = (int(a), int(b))
    assert rows["p_4_5_5"] == (0, 0)
    assert rows["p_4_6_9"] == (1, 4)
    assert rows["p_7_14_16"] == (6, 8)
    assert len(rows) == 11


def test_verify_unreadable_catalog(tmp_path, capsys):
    bad = tmp_path / "x.txt"
    bad.write_text("not a catalog entry\n")
    assert main(["verify", str(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_verify_wrong_profile_fails(tmp_path, capsys):
    # same points, but the name promises one facet too many
    text = data_path("catalog", "p_4_6_9.txt").read_text()
    lied = text.replace("p_4_6_9 4 6 9", "p_4_6_10 4 6 10")
    (tmp_path / "p_4_6_10.txt").write_text(lied)
    assert main(["verify", str(tmp_path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_gale_excess_seven(capsys):
    assert main(["gale", "--excess", "7"]) == 0
    out = capsys.readouterr().out.split()
    assert out == ["{3,3}", "{3,4}", "{3,5}"]


def test_gale_minimal_diagrams(capsys):
    assert main(["gale", "--minimal"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 4
    counts = sorted(int(ln.rsplit("=", 1)[1]) for ln in out)
    assert counts == [12, 14, 15, 18]


def test_gale_cofacets_one_diagram(capsys):
    assert main(["gale", "--cofacets", "n=4 mC=0 labels=1,1,1,1,1,1,1,1"]) == 0
    assert capsys.readouterr().out.strip() == "12"


def test_gale_flag_conflicts(capsys):
    assert main(["gale"]) == 2
    assert main(["gale", "--excess", "7", "--minimal"]) == 2
    assert main(["gale", "--cofacets", "garbage"]) == 2
    capsys.readouterr()


def micro_campaign(tmp_path):
    """A one-second campaign: rediscover p_4_6_9 from its own facet types."""
    from neighborly.incmat import format_matrix, get_facet, simplex

    P = load_matrix("p_4_6_9")
    classes = {canonical_key(simplex(3)): simplex(3)}
    for i in range(P.rows):
        A = get_facet(P, i)
        classes.setdefault(canonical_key(A), A)
    names = []
    for j, A in enumerate(classes.values()):
        q = tmp_path / ("f%d.txt" % j)
        q.write_text(format_matrix(A))
        names.append(str(q))
    text = "dim=4\nvertices=6\nfacets=9\nbase_facet=%s\nfacet_list=%s\n" % (
        names[0],
        " ".join(names),
    )
    p = tmp_path / "c.txt"
    p.write_text(text)
    return p


def test_enumerate_to_file(tmp_path, capsys):
    camp = micro_campaign(tmp_path)
    out = tmp_path / "found.txt"
    assert main(["enumerate", str(camp), "--output", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "1 matrices"
    (M,) = blocks(out.read_text())
    assert canonical_key(M) == canonical_key(load_matrix("p_4_6_9"))


def test_enumerate_bad_campaign(tmp_path, capsys):
    p = tmp_path / "c.txt"
    p.write_text("dim=4\nnonsense=1\n")
    assert main(["enumerate", str(p)]) == 2
    assert main(["enumerate", str(tmp_path / "missing.txt")]) == 2
    capsys.readouterr()


def test_enumerate_abort_resume_roundtrip(tmp_path, capsys):
    camp = micro_campaign(tmp_path)
    ck = tmp_path / "ck.json"
    out = tmp_path / "found.txt"

    rc = main(["enumerate", str(camp), "--max-nodes", "10", "--resume", str(ck)])
    assert rc == 3
    assert "checkpoint written" in capsys.readouterr().err
    saved = json.loads(ck.read_text())
    assert saved["position"][0] == 0 and saved["position"][1] >= 0

    rc = main(["enumerate", str(camp), "--resume", str(ck), "--output", str(out)])
    assert rc == 0
    capsys.readouterr()
    assert not ck.exists()
    keys = {canonical_key(M) for M in blocks(out.read_text())}
    assert keys == {canonical_key(load_matrix("p_4_6_9"))}


def test_enumerate_rejects_foreign_checkpoint(tmp_path, capsys):
    camp = micro_campaign(tmp_path)
    ck = tmp_path / "ck.json"
    ck.write_text(json.dumps({"fingerprint": "feed", "position": [0, 0], "results": []}))
    assert main(["enumerate", str(camp), "--resume", str(ck)]) == 2
    assert "different campaign" in capsys.readouterr().err


def test_enumerate_abort_without_resume(tmp_path, capsys):
    camp = micro_campaign(tmp_path)
    assert main(["enumerate", str(camp), "--max-nodes", "10"]) == 3
    assert "aborted" in capsys.readouterr().err


def test_facet_extraction(capsys):
    mat = data_path("matrices", "p_4_6_9.txt")
    assert main(["facet", str(mat), "--row", "0"]) == 0
    M = parse_matrix(capsys.readouterr().out)
    assert M.rows < 9 and M.cols < 6

    assert main(["facet", str(mat), "--row", "99"]) == 2
    capsys.readouterr()


def test_canon_prints_form_and_key(tmp_path, capsys):
    mat = data_path("matrices", "p_4_6_9.txt")
    assert main(["canon", str(mat)]) == 0
    out = capsys.readouterr().out
    body, keyline = out.rsplit("key ", 1)
    M = parse_matrix(body)
    assert bytes.fromhex(keyline.strip()) == canonical_key(M)
    # a pyramid is a different class, different key
    from neighborly.incmat import format_matrix

    p = tmp_path / "pyr.txt"
    p.write_text(format_matrix(pyramid(parse_matrix(mat.read_text()))))
    assert main(["canon", str(p)]) == 0
    assert capsys.readouterr().out.rsplit("key ", 1)[1] != keyline


def test_faces_lists_edges(capsys):
    mat = data_path("matrices", "simplex_4.txt")
    assert main(["faces", str(mat), "--k", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    pairs = {tuple(int(t) for t in ln.split()) for ln in lines}
    assert pairs == {(i, j) for i in range(5) for j in range(i + 1, 5)}


def test_workers_default_from_environment(monkeypatch):
    from neighborly.cli import build_parser

    monkeypatch.setenv("NEIGHBORLY_WORKERS", "3")
    args = build_parser().parse_args(["enumerate", "x"])
    assert args.workers == 3
