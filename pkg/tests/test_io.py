"""Tests for the shot CSV format and result serialization."""

import pytest

from naqae import ShotRecord
from naqae.io import (
    curves_csv,
    dump_json,
    fmt12,
    read_shot_csv,
    report_csv,
    round12,
    write_shot_csv,
)
from naqae.experiments import RmseCurve


class TestShotCsv:
    def test_minimal_file(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("m,shots,ones\n0,8192,2048\n")
        assert read_shot_csv(path) == {"": [ShotRecord(m=0, shots=8192, ones=2048)]}

    def test_labelled_file(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("m,shots,ones,label\n1,10,5,A1\n0,10,2,A2\n")
        grouped = read_shot_csv(path)
        assert sorted(grouped) == ["A1", "A2"]

    def test_duplicate_depths_merged(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("m,shots,ones,label\n2,10,5,x\n2,30,10,x\n2,10,5,y\n")
        grouped = read_shot_csv(path)
        assert grouped["x"] == [ShotRecord(m=2, shots=40, ones=15)]
        assert grouped["y"] == [ShotRecord(m=2, shots=10, ones=5)]

    def test_rows_sorted_by_depth(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("m,shots,ones\n5,10,1\n0,10,2\n3,10,3\n")
        assert [r.m for r in read_shot_csv(path)[""]] == [0, 3, 5]

    def test_ones_exceeding_shots(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("m,shots,ones\n3,100,150\n")
        with pytest.raises(ValueError, match="line 2"):
            read_shot_csv(path)

    def test_malformed_row(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("m,shots,ones\n0,10,2\nx,10,2\n")
        with pytest.raises(ValueError, match="line 3"):
            read_shot_csv(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("depth,shots,ones\n0,10,2\n")
        with pytest.raises(ValueError, match="header"):
            read_shot_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "shots.csv"
        path.write_text("")
        with pytest.raises(ValueError):
            read_shot_csv(path)

    def test_round_trip_after_merge(self, tmp_path):
        source = tmp_path / "in.csv"
        source.write_text("m,shots,ones,label\n2,10,5,x\n0,10,2,x\n2,10,3,x\n")
        normalized = write_shot_csv(None, read_shot_csv(source))
        assert normalized == "m,shots,ones,label\n0,10,2,x\n2,20,8,x\n"
        again = tmp_path / "out.csv"
        write_shot_csv(again, read_shot_csv(source))
        assert write_shot_csv(None, read_shot_csv(again)) == normalized

    def test_unlabelled_write_omits_column(self):
        text = write_shot_csv(None, [ShotRecord(m=0, shots=5, ones=1)])
        assert text == "m,shots,ones\n0,5,1\n"

    def test_lf_line_endings(self, tmp_path):
        path = tmp_path / "shots.csv"
        write_shot_csv(path, [ShotRecord(m=0, shots=5, ones=1)])
        assert b"\r" not in path.read_bytes()


class TestSerialization:
    def test_fmt12(self):
        assert fmt12(0.25) == "0.25"
        assert fmt12(1 / 3) == "0.333333333333"
        assert fmt12(8192.0) == "8192"

    def test_round12_recursive(self):
        doc = {"a": [1 / 3, {"b": 2 / 3}], "c": "text", "d": 5}
        rounded = round12(doc)
        assert rounded["a"][0] == float("0.333333333333")
        assert rounded["a"][1]["b"] == float("0.666666666667")
        assert rounded["c"] == "text" and rounded["d"] == 5

    def test_dump_json_writes_file(self, tmp_path):
        path = tmp_path / "out.json"
        text = dump_json({"x": 1 / 3}, path)
        assert path.read_text() == text
        assert "0.333333333333" in text

    def test_curves_csv(self):
        curve = RmseCurve(setting="noiseless", x_kind="depth", points=((0.0, 0.5), (1.0, 0.25)))
        text = curves_csv([curve])
        assert text == "setting,x_kind,x,rmse\nnoiseless,depth,0,0.5\nnoiseless,depth,1,0.25\n"

    def test_report_csv_flags(self):
        rows = [{"label": "A1", "r_squared": {"gaussian": 0.9546, "gaussian_zero_mean": 0.8052},
                 "best": ("gaussian",)}]
        text = report_csv(rows)
        lines = text.splitlines()
        assert lines[0] == "label,gaussian,gaussian_zero_mean,depolarizing,best"
        assert lines[1] == "A1,0.9546,0.8052,,gaussian"

    def test_schedule_dict(self):
        from naqae import shot_schedule
        from naqae.io import schedule_dict

        doc = schedule_dict(shot_schedule([0, 1, 2], 20, 0.055))
        assert doc == {"entries": [
            {"m": 0, "n_shots": 20}, {"m": 1, "n_shots": 24}, {"m": 2, "n_shots": 29},
        ]}
