"""End-to-end runs of the batch front end, in process through cli.main."""

import csv
import json
from fractions import Fraction

import pytest

from psexp import cli, sums
from psexp.cli import RunConfig
from psexp.errors import PreconditionError
from psexp.numerics import Parameters


def run(argv):
    return cli.main(argv)


def split_csv(path):
    """(comment_lines, header, data_rows) of a #-prefixed CSV file."""
    lines = path.read_text().splitlines()
    comments = [ln for ln in lines if ln.startswith("# ")]
    body = [ln for ln in lines if not ln.startswith("# ")]
    return comments, body[0], body[1:]


# ---------------------------------------------------------------------------
# RunConfig
# ---------------------------------------------------------------------------

def test_runconfig_roundtrip():
    cfg = RunConfig({"command": "theorem", "x": "5000"})
    text = cfg.serialize()
    assert len(text.splitlines()) == 15
    assert text.splitlines()[0] == "command=theorem"
    assert RunConfig.parse(text).serialize() == text


def test_runconfig_rejects_unknown_key():
    with pytest.raises(PreconditionError):
        RunConfig({"bogus": "1"})
    with pytest.raises(PreconditionError):
        RunConfig.parse("bogus=1\n")


def test_runconfig_parse_is_lenient_about_layout():
    cfg = RunConfig.parse("# a note\n\n  x = 250 \n")
    assert cfg.values["x"] == "250"
    with pytest.raises(PreconditionError, match="line 1"):
        RunConfig.parse("not a key value pair\n")


def test_schedule_forms():
    assert RunConfig({"x-schedule": "1e3,1e4"}).schedule() == [1000.0, 10000.0]
    geo = RunConfig({"x-schedule": "1e3:1e5:10"}).schedule()
    assert geo == pytest.approx([1e3, 1e4, 1e5], rel=1e-12)
    # two-part form defaults to half-decade steps
    half = RunConfig({"x-schedule": "1e3:1e4"}).schedule()
    assert len(half) == 3
    assert half[1] == pytest.approx(10.0 ** 3.5, rel=1e-12)
    assert RunConfig({}).schedule() is None
    with pytest.raises(PreconditionError):
        RunConfig({"x-schedule": "1:2:3:4"}).schedule()


def test_allow_outside_parsing():
    for raw, want in [("0", False), ("", False), ("false", False),
                      ("no", False), ("1", True), ("yes", True)]:
        assert RunConfig({"allow-outside": raw}).allow_outside is want


# ---------------------------------------------------------------------------
# theorem
# ---------------------------------------------------------------------------

def test_theorem_writes_csv_and_reruns_byte_identical(tmp_path):
    out = tmp_path / "trend.csv"
    assert run(["theorem", "--out", str(out)]) == 0
    comments, header, rows = split_csv(out)
    assert len(comments) == 15
    assert comments[0] == "# command=theorem"
    assert header == ("x,re_lhs,im_lhs,re_main,im_main,abs_err,"
                      "ratio_err_main,log_err_over_log_x")
    assert len(rows) == 1          # no schedule: single default x
    assert rows[0].split(",")[0] == "10000.0"
    first = out.read_bytes()
    assert run(["theorem", "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_theorem_schedule_rows(tmp_path):
    out = tmp_path / "trend.csv"
    assert run(["theorem", "--x-schedule", "1e3,1e4", "--out", str(out)]) == 0
    _, _, rows = split_csv(out)
    assert [r.split(",")[0] for r in rows] == ["1000.0", "10000.0"]


def test_theorem_outside_region_exits_2(tmp_path, capsys):
    out = tmp_path / "trend.csv"
    code = run(["theorem", "--c", "1.3", "--gamma", "0.8", "--out", str(out)])
    assert code == 2
    assert "--allow-outside" in capsys.readouterr().err
    assert not out.exists()        # refused before writing anything
    code = run(["theorem", "--c", "1.3", "--gamma", "0.8", "--x", "2000",
                "--allow-outside", "--out", str(out)])
    assert code == 0
    assert out.exists()


def test_config_file_with_flag_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("c=1.2\ngamma=0.99\nx=5000\n")
    out = tmp_path / "trend.csv"
    code = run(["theorem", "--config", str(cfgfile), "--x", "3000",
                "--out", str(out)])
    assert code == 0
    comments, _, rows = split_csv(out)
    assert "# c=1.2" in comments       # file value survives
    assert "# x=3000" in comments      # flag wins over file
    assert rows[0].split(",")[0] == "3000.0"


def test_missing_config_file_exits_1(tmp_path):
    assert run(["theorem", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_unknown_config_key_exits_2(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("bogus=1\n")
    assert run(["theorem", "--config", str(cfgfile)]) == 2


# ---------------------------------------------------------------------------
# region / gamma5 / vaaler / vdc / hb
# ---------------------------------------------------------------------------

def test_region_writes_csv_and_findings(tmp_path):
    out = tmp_path / "region.csv"
    assert run(["region", "--grid-step", "1/40", "--out", str(out)]) == 0
    comments, header, rows = split_csv(out)
    assert len(comments) == 15
    assert header == ("c,gamma,cond_1_3,dominant_value_num,"
                      "dominant_value_den,dominant_label,matches_claim")
    assert len(rows) == 18 * 39
    fpath = tmp_path / "region.findings.json"
    with open(fpath) as fh:
        findings = json.load(fh)
    assert set(findings) == {"region", "catalogue"}
    assert findings["region"] == []
    status = [f["status"] for f in findings["catalogue"]]
    assert status.count("matched") == 33
    assert status.count("dominated") == 1


def test_gamma5_explicit_schedule(tmp_path):
    out = tmp_path / "g5.csv"
    assert run(["gamma5", "--x-schedule", "100,200,400", "--out", str(out)]) == 0
    _, header, rows = split_csv(out)
    assert header == "x,abs_gamma5,claimed_bound"
    assert len(rows) == 3
    p = Parameters(x=1e4, c=Fraction("1.05"), gamma=Fraction("0.995"),
                   t=0.5, d=3, a=1)
    want = abs(sums.gamma5_sum(100.0, p))
    assert float(rows[0].split(",")[1]) == want


def test_gamma5_default_halving_ladder(tmp_path):
    out = tmp_path / "g5.csv"
    assert run(["gamma5", "--x", "4000", "--out", str(out)]) == 0
    _, _, rows = split_csv(out)
    xs = [float(r.split(",")[0]) for r in rows]
    # halves down to the x >= 4 floor
    assert xs == [4000.0 / 2 ** i for i in range(10)]


def test_vaaler_coefficient_dump(tmp_path):
    out = tmp_path / "coeffs.csv"
    assert run(["vaaler", "--H", "50", "--out", str(out)]) == 0
    comments, header, rows = split_csv(out)
    assert len(comments) == 15
    assert header == "h,re_a,im_a,b"
    assert len(rows) == 51
    first = rows[0].split(",")
    assert first[0] == "0"
    assert float(first[3]) == 1.0 / 51.0


def test_invariant_failure_exits_3(tmp_path, capsys):
    # a negative tolerance no finite grid can meet
    out = tmp_path / "coeffs.csv"
    code = run(["vaaler", "--H", "10", "--tol", "-1", "--out", str(out)])
    assert code == 3
    assert capsys.readouterr().err.startswith("invariant failure:")


def test_vdc_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run(["vdc", "--out", str(out)]) == 0
    _, header, rows = split_csv(out)
    assert header == "label,kind,a,b,lam,bound,empirical,ratio"
    assert len(rows) == 42
    parsed = list(csv.reader(rows))    # labels contain commas, hence quoting
    assert all(len(p) == 8 for p in parsed)
    assert all(float(p[7]) <= 10.0 for p in parsed)


def test_hb_classification_csv(tmp_path):
    out = tmp_path / "map.csv"
    assert run(["hb", "--x", "2000", "--out", str(out)]) == 0
    _, header, rows = split_csv(out)
    assert header == "x,c,U,V,Z,L_lo,L_hi,kind"
    assert len(rows) >= 5
    kinds = {r.split(",")[7] for r in rows}
    assert kinds <= {"type_i", "type_ii", "unclassified"}


def test_suite_passes(capsys):
    assert run(["suite"]) == 0
    lines = capsys.readouterr().out.splitlines()
    passes = [ln for ln in lines if "  PASS  " in ln]
    assert len(passes) == 7
    assert not any("  FAIL  " in ln for ln in lines)
