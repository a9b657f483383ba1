import math

from hypothesis import given
from hypothesis import strategies as st

from fuzzywsn import report
from fuzzywsn.sim import SimConfig, compare, simulate


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip(x):
    assert float(report.fmt(x)) == x


def test_fmt():
    assert report.fmt(None) == ""
    assert report.fmt(3) == "3"
    assert report.fmt(math.nan) == "nan"
    assert report.fmt(0.1) == "0.1"


def test_rounds_round_trip(tmp_path):
    s = simulate(SimConfig(rounds=5), trace=True)
    path = report.write_rounds(s, tmp_path / "r.csv")
    header, rows = report.read_csv(path)
    assert tuple(header) == report.ROUNDS_HEADER
    assert len(rows) == 5
    for m, row in zip(s.metrics, rows):
        assert int(row[0]) == m.round and int(row[1]) == m.alive and float(row[2]) == m.residual_j
    header, rows = report.read_csv(report.write_trace(s, tmp_path / "t.csv"))
    assert tuple(header) == report.TRACE_HEADER and len(rows) == 25
    header, rows = report.read_csv(report.write_summary([s], tmp_path / "s.csv"))
    assert rows == [["fuzzy", "1", "", "100"]]


def test_compare_and_snapshot(tmp_path):
    result = compare(SimConfig(rounds=3), ["leach"], 2)
    header, rows = report.read_csv(report.write_compare(result, tmp_path / "c.csv"))
    assert tuple(header) == report.COMPARE_HEADER
    assert rows == [["leach", "2", "4.0", "4", "4", "100.0"]]
    from fuzzywsn.sim import deployment
    header, rows = report.read_csv(report.write_snapshot(deployment(SimConfig()), tmp_path / "n.csv"))
    assert len(rows) == 100 and rows[0][3] == "advanced" and rows[-1][3] == "super"


def test_atomic_write_leaves_no_temp(tmp_path):
    report.atomic_write(tmp_path / "x.csv", "a\n")
    report.atomic_write(tmp_path / "x.csv", "b\n")
    assert [p.name for p in tmp_path.iterdir()] == ["x.csv"]
    assert (tmp_path / "x.csv").read_text() == "b\n"


def test_run_filename():
    assert report.run_filename("edeec", 3) == "rounds_edeec_seed3.csv"
