import numpy as np
import pytest

from basiscert import BvsFormatError, NormSpec, l2
from basiscert.bvs import parse_bvs, parse_bvs_text, serialize_bvs

VALID = """\
bvs 1
# a comment
norm lp 2.0
dim 2
count 2
v 1.0 0.0
v 0.3333333333333333 1.0
"""


def test_happy_path():
    vf = parse_bvs_text(VALID)
    assert vf.dim == 2
    assert len(vf.vectors) == 2
    assert vf.norm == l2()
    b = vf.to_basis()
    assert b.count == 2


def test_round_trip_preserves_values():
    vf = parse_bvs_text(VALID)
    text = serialize_bvs(vf.norm, vf.vectors)
    again = parse_bvs_text(text)
    assert again.norm == vf.norm
    for u, v in zip(again.vectors, vf.vectors):
        np.testing.assert_array_equal(u, v)


def test_round_trip_full_precision():
    vs = [np.array([1 / 3, np.pi]), np.array([1e-17, 2 / 7])]
    again = parse_bvs_text(serialize_bvs(NormSpec("sup"), vs))
    for u, v in zip(again.vectors, vs):
        np.testing.assert_array_equal(u, v)


def test_weighted_norm_round_trip():
    spec = NormSpec("wlp", 1.5, np.array([0.5, 2.0]))
    text = serialize_bvs(spec, [np.array([1.0, 2.0])])
    again = parse_bvs_text(text)
    assert again.norm.kind == "wlp"
    assert again.norm.p == 1.5
    np.testing.assert_array_equal(again.norm.weights, spec.weights)


def test_missing_dim_named():
    text = VALID.replace("dim 2\n", "")
    with pytest.raises(BvsFormatError, match="dim"):
        parse_bvs_text(text)


def test_count_mismatch_reports_both_numbers():
    text = VALID.replace("count 2", "count 3")
    with pytest.raises(BvsFormatError, match="3.*2"):
        parse_bvs_text(text)


def test_non_numeric_entry_has_line_number():
    text = VALID.replace("v 1.0 0.0", "v 1.0 zebra")
    with pytest.raises(BvsFormatError) as err:
        parse_bvs_text(text)
    assert err.value.line_number == 6
    assert "zebra" in str(err.value)


def test_unknown_version():
    with pytest.raises(BvsFormatError, match="version"):
        parse_bvs_text(VALID.replace("bvs 1", "bvs 2"))


def test_missing_header():
    with pytest.raises(BvsFormatError):
        parse_bvs_text("norm lp 2\ndim 2\ncount 0\n")


def test_entry_count_vs_dim():
    with pytest.raises(BvsFormatError, match="entries"):
        parse_bvs_text(VALID.replace("v 1.0 0.0", "v 1.0"))


def test_parse_from_file(tmp_path):
    path = tmp_path / "x.bvs"
    path.write_text(VALID, encoding="utf-8")
    vf = parse_bvs(path)
    assert vf.dim == 2
