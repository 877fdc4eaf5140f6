import json
from pathlib import Path

import jsonschema
import pytest

from curveforge.cli import gallery as gal
from curveforge.cli.doc import DocError, SystemDoc
from curveforge.cli.main import main, synthesize

ROOT = Path(__file__).resolve().parents[1]
REPORTS = json.loads((ROOT / "schema" / "reports.json").read_text())
SYSTEMDOC = json.loads((ROOT / "schema" / "systemdoc.json").read_text())

ROTATION = {"variables": ["x", "y"], "components": ["-y", "x"], "curves": ["x^2 + y^2 - 1"]}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def valid_report(obj):
    jsonschema.validate(obj, REPORTS)


def valid_doc(obj):
    jsonschema.validate(obj, SYSTEMDOC)


def test_check_invariant(tmp_path, capsys):
    code, rep, _ = run(capsys, "check", write(tmp_path, "d.json", ROTATION))
    assert code == 0
    valid_report(rep)
    assert rep["all_invariant"] and rep["results"][0]["cofactor"] == "0"


def test_check_not_invariant(tmp_path, capsys):
    doc = dict(ROTATION, curves=["x^2 + y^2 - 1", "x - 1/2"], labels=["circle", "line"])
    code, rep, err = run(capsys, "check", write(tmp_path, "d.json", doc))
    assert code == 1
    valid_report(rep)
    assert [r["verdict"] for r in rep["results"]] == ["invariant", "not_invariant"]
    assert "not invariant" in err


@pytest.mark.parametrize("doc, needle", [
    ({"variables": ["x", "y"], "components": ["-y", "x +* 1"], "curves": ["x"]}, "column"),
    ({"variables": ["x", "y"], "components": ["-y"]}, "components"),
    ({"variables": ["x", "y"], "components": ["-y", "x"], "colour": "red"}, "unknown keys"),
    ({"variables": ["x", "y"], "components": ["-y", "x"]}, "no curves"),
    ({"variables": ["x", "y"], "components": ["-a*y", "x"], "curves": ["x"], "params": {"a": "0.5"}}, "parameter a"),
])
def test_check_usage_errors(tmp_path, capsys, doc, needle):
    code, rep, err = run(capsys, "check", write(tmp_path, "d.json", doc))
    assert code == 2 and rep is None
    assert needle in err


def test_missing_file_and_bad_json(tmp_path, capsys):
    assert run(capsys, "check", tmp_path / "nope.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "invalid JSON" in err


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["synthesize", "--mode", "spirals", "x.json"])
    assert exc.value.code == 2


def test_params_substitution(tmp_path, capsys):
    doc = {"variables": ["x", "y"], "components": ["-a*y", "a*x"], "curves": ["x^2 + y^2 - r"],
           "params": {"a": "3/2", "r": "4"}}
    valid_doc(doc)
    code, rep, _ = run(capsys, "check", write(tmp_path, "d.json", doc))
    assert code == 0 and rep["results"][0]["curve"] == "x^2 + y^2 - 4"


def test_doc_round_trip_and_schema():
    doc = SystemDoc.from_json(dict(ROTATION, labels=["unit"]))
    again = SystemDoc.from_json(doc.to_json())
    assert again == doc
    valid_doc(doc.to_json())
    with pytest.raises(DocError):
        SystemDoc.from_json({"variables": ["x", "x"], "components": ["1", "1"]})
    with pytest.raises(jsonschema.ValidationError):
        valid_doc({"variables": ["x"], "components": ["1"], "extra": 1})


SPECS = {
    "curves": {"curves": ["x^2 + y^2 - 1", "x - 2"], "multipliers": ["1", "y"]},
    "circles": {"centers": [["0", "0"], ["3", "0"]], "radii": ["1", "1/2"], "multipliers": ["1", "x"]},
    "two-nests": {"l": 1, "a": "4", "radii": ["1"]},
    "separable": {"f1": "x^3 - x", "f2": "y^2", "line": ["1", "1", "0"], "lam": "2"},
    "leading-term": {"G": "y^2 - x", "a": "1", "b": "1", "n": 3},
}


@pytest.mark.parametrize("mode", sorted(SPECS))
def test_synthesize_self_check(tmp_path, capsys, mode):
    spec = write(tmp_path, "s.json", SPECS[mode])
    code, doc, _ = run(capsys, "synthesize", "--mode", mode, spec)
    assert code == 0
    valid_doc(doc)
    # the emitted document passes check on its own
    code, rep, _ = run(capsys, "check", write(tmp_path, "d.json", doc))
    assert code == 0 and rep["all_invariant"]
    valid_report(rep)


def test_synthesize_three_variables(tmp_path, capsys):
    spec = {"variables": ["x", "y", "z"], "curves": ["x^2 + y^2 + z^2 - 1", "z"],
            "multipliers": {"0,1": "1", "1,0": "x"}}
    code, doc, _ = run(capsys, "synthesize", "--mode", "curves", write(tmp_path, "s.json", spec))
    assert code == 0 and len(doc["components"]) == 3
    assert run(capsys, "check", write(tmp_path, "d.json", doc))[0] == 0


def test_synthesize_rejects_bad_spec(tmp_path, capsys):
    code, _, err = run(capsys, "synthesize", "--mode", "curves", write(tmp_path, "s.json", {"curves": []}))
    assert code == 2 and "empty curve list" in err
    with pytest.raises(Exception):
        synthesize("curves", {"curves": ["x"]})


def test_darboux_reports(tmp_path, capsys):
    # linear saddle: xy is a first integral
    doc = {"variables": ["x", "y"], "components": ["x", "-y"], "curves": ["x", "y"]}
    code, rep, _ = run(capsys, "darboux", write(tmp_path, "d.json", doc))
    assert code == 0
    valid_report(rep)
    assert rep["dimension"] == 1 and rep["certificates"][0]["exponents"] == ["1", "1"]
    doc["curves"] = ["x - 1"]
    code, rep, _ = run(capsys, "darboux", write(tmp_path, "d.json", doc))
    assert code == 1
    valid_report(rep)
    assert rep["error"] == "not_invariant"


def test_find_curve(tmp_path, capsys):
    code, rep, _ = run(capsys, "find-curve", write(tmp_path, "d.json", ROTATION), "--deg-g", 2)
    assert code == 0
    valid_report(rep)
    assert any(c["curve"] == "x^2 + y^2" for c in rep["curves"])


def test_lines(tmp_path, capsys):
    doc = {"variables": ["x", "y"], "components": ["x - x^3", "y - y^3"]}
    code, rep, _ = run(capsys, "lines", write(tmp_path, "d.json", doc), "--max-abs", "5")
    assert code == 0
    valid_report(rep)
    assert rep["count"] == 8 and not rep["families"]
    doc = {"variables": ["x", "y", "z"], "components": ["x", "y", "z"]}
    assert run(capsys, "lines", write(tmp_path, "e.json", doc))[0] == 2


def test_ovals(tmp_path, capsys):
    doc = {"variables": ["x", "y"], "components": ["-y", "x"],
           "curves": ["x^4 + y^4 - 5*x^2 - 5*y^2 + 4 + 5/2", "x^2 + y^2 - 1"]}
    code, rep, _ = run(capsys, "ovals", write(tmp_path, "d.json", doc), "--res", 256)
    assert code == 0
    valid_report(rep)
    assert [c["ovals"] for c in rep["curves"]] == [4, 1]
    assert rep["curves"][0]["harnack_bound"] == 4
    code, _, err = run(capsys, "ovals", write(tmp_path, "d.json", doc), "--window", "0,1,2")
    assert code == 2 and "window" in err


def test_bounds(capsys):
    code, rep, _ = run(capsys, "bounds", 2)
    assert code == 0
    valid_report(rep)
    assert run(capsys, "bounds", 0)[0] == 2


def test_gallery_clean(capsys):
    code, rep, err = run(capsys, "gallery", "--jobs", 2)
    assert code == 0
    valid_report(rep)
    assert rep["clean"] and rep["count"] == len(gal.load_fixtures())
    assert [f["id"] for f in rep["fixtures"]] == sorted(f["id"] for f in rep["fixtures"])
    assert "UNEXPECTED" not in err


def test_gallery_filter(capsys):
    code, rep, _ = run(capsys, "gallery", "--filter", "lines-")
    assert code == 0
    assert {f["id"] for f in rep["fixtures"]} == {"lines-cubic", "lines-quintic"}
    code, rep, _ = run(capsys, "gallery", "--filter", "no-such-prefix")
    assert code == 0 and rep["count"] == 0


def _tampered(tmp_path, fid, **change):
    data = json.loads(gal.default_path().read_text())
    for rec in data["fixtures"]:
        if rec["id"] == fid:
            rec.update(change)
    return write(tmp_path, "tampered.json", data)


def test_gallery_tampered_status_fails(tmp_path, capsys):
    # a fixture recorded as verified that actually needs its re-derivation
    path = _tampered(tmp_path, "quadratic-filipstov", status="verified")
    code, rep, err = run(capsys, "gallery", "--fixtures", path)
    assert code == 1 and not rep["clean"]
    bad = [f for f in rep["fixtures"] if not f["ok"]]
    assert [(f["id"], f["expected"], f["observed"]) for f in bad] == [
        ("quadratic-filipstov", "verified", "known-discrepancy")]
    assert "UNEXPECTED" in err


def test_gallery_tampered_identity_unresolved(tmp_path, capsys):
    data = json.loads(gal.default_path().read_text())
    rec = next(r for r in data["fixtures"] if r["id"] == "planar-circle-rotation")
    rec["printed"]["Q"] = rec["printed"]["Q"] + " + 1"
    code, rep, _ = run(capsys, "gallery", "--fixtures", write(tmp_path, "t.json", data),
                       "--filter", "planar-circle")
    assert code == 1
    assert rep["fixtures"][0]["observed"] == "unresolved"


def test_gallery_rejects_malformed_fixtures(tmp_path, capsys):
    data = json.loads(gal.default_path().read_text())
    data["fixtures"][0]["status"] = "probably-fine"
    code, _, err = run(capsys, "gallery", "--fixtures", write(tmp_path, "t.json", data))
    assert code == 2 and "unknown status" in err


def test_plot_deterministic(tmp_path, capsys):
    doc = write(tmp_path, "d.json", ROTATION)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    code, rep, _ = run(capsys, "plot", doc, "--out", a, "--window=-2,2,-2,2")
    assert code == 0
    valid_report(rep)
    assert rep["curve_polylines"] == 1 and rep["streamlines"] == 200
    run(capsys, "plot", doc, "--out", b, "--window=-2,2,-2,2")
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<svg") and 'data-closed="true"' in text


def test_plot_without_streamlines(tmp_path, capsys):
    doc = dict(ROTATION, curves=["x^2 + y^2 - 1", "(x - 3)^2 + y^2 - 1"])
    code, rep, _ = run(capsys, "plot", write(tmp_path, "d.json", doc), "--out", tmp_path / "p.svg",
                       "--no-streamlines")
    assert code == 0
    assert rep["curve_polylines"] == 2 and rep["streamlines"] == 0


def _filipstov(block):
    rec = gal.load_fixtures()
    rec = next(r for r in rec if r.id == "quadratic-filipstov")
    b = getattr(rec, block)
    return {"variables": ["x", "y"], "components": [b["P"], b["Q"]], "curves": b["curves"], "params": {"a": "1"}}


def test_check_filipstov_printed_fails_rederived_passes(tmp_path, capsys):
    code, rep, _ = run(capsys, "check", write(tmp_path, "p.json", _filipstov("printed")))
    assert code == 1 and rep["results"][0]["remainder"] != "0"
    code, rep, _ = run(capsys, "check", write(tmp_path, "r.json", _filipstov("rederived")))
    assert code == 0
    assert rep["results"][0]["cofactor"] == "-72*x + 48*y + 60"


def test_plot_parabola_and_two_nests(tmp_path, capsys):
    doc = {"variables": ["x", "y"], "components": ["11*x^2 - 2*x*y - y^2 - 4*x + 2*y", "9*x^2 - 2*x*y + y^2 - 10*x + 2"],
           "curves": ["(y-x)^2 - 2*x"], "labels": ["parabola"]}
    code, rep, _ = run(capsys, "plot", write(tmp_path, "d.json", doc), "--out", tmp_path / "p.svg",
                       "--window=-1,4,-2,5", "--no-streamlines")
    assert code == 0 and rep["curve_polylines"] == 1
    assert 'data-curve="parabola"' in (tmp_path / "p.svg").read_text()
    spec = write(tmp_path, "s.json", {"l": 1, "a": "4", "radii": ["1"]})
    _, nests, _ = run(capsys, "synthesize", "--mode", "two-nests", spec)
    code, rep, _ = run(capsys, "plot", write(tmp_path, "n.json", nests), "--out", tmp_path / "n.svg",
                       "--window=-2,6,-4,4")
    assert code == 0 and rep["curve_polylines"] == 2 and rep["streamlines"] > 0


def test_plot_empty_window(tmp_path, capsys):
    code, _, err = run(capsys, "plot", write(tmp_path, "d.json", ROTATION), "--out", tmp_path / "p.svg",
                       "--window=1,1,0,1")
    assert code == 2 and not (tmp_path / "p.svg").exists()
