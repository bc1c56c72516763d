"""CLI outputs must reproduce the versioned golden files byte for byte."""

import pathlib

import pytest

from latticeprop.cli import dispatch

FIXTURES = pathlib.Path(__file__).parent / "fixtures" / "v1"

CASES = [
    ("axes_d1_n5.csv",
     ["tuples", "--dim", "1", "--bound", "5"], "--csv"),
    ("spectrum_0_4.csv",
     ["propagator", "--dim", "1", "--bound", "1", "--mass", "1.0",
      "--target", "0,4"], "--spectrum"),
    ("scan_0_3.csv",
     ["propagator", "--dim", "1", "--bound", "1", "--mass", "1.0",
      "--target", "0,3", "--scan-steps", "12"], "--scan"),
    ("orbit_w2.csv",
     ["orbit", "--group", "cylinder3", "--max-word", "2",
      "--base", "0.1,0.2"], "--csv"),
    ("ball_d2_n3.csv",
     ["metric-ball", "--dim", "2", "--bound", "3", "--radius", "1.0"], "--csv"),
]


@pytest.mark.parametrize("name,argv,outflag", CASES, ids=[c[0] for c in CASES])
def test_golden(tmp_path, capsys, name, argv, outflag):
    out = tmp_path / name
    assert dispatch(argv + [outflag, str(out)]) == 0
    capsys.readouterr()
    assert out.read_bytes() == (FIXTURES / name).read_bytes()
