import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from snnrobust.datasets import (
    CsvSchema,
    TabularDataset,
    dump_csv,
    landsat_average_pixel,
    load_csv,
    load_landsat,
    load_xor,
    split,
    stratified_subset,
)
from snnrobust.errors import ClassTooSmall, EmptyDataset, MalformedCase, ParseError


def test_xor_dataset():
    ds = load_xor()
    assert len(ds) == 4
    assert ds.n_features == 2
    assert ds.labels[np.all(ds.features == [1.0, 1.0], axis=1)][0] == 0
    assert ds.labels[np.all(ds.features == [1.0, 0.0], axis=1)][0] == 1
    assert ds.n_classes == 2


def test_load_iris_file(data_dir):
    ds = load_csv(data_dir / "iris.csv", CsvSchema(label_col=-1), name="iris")
    assert len(ds) == 150
    assert ds.n_features == 4
    assert ds.n_classes == 3
    assert ds.dropped_rows == 0
    counts = np.bincount(ds.labels)
    np.testing.assert_array_equal(counts, [50, 50, 50])


def test_loader_idempotent(data_dir):
    a = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    b = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert a.class_names == b.class_names


def test_load_csv_drops_missing_rows(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2,a\n?,3,b\n4,5,a\n6,,b\n7,8,b\n")
    ds = load_csv(f, CsvSchema(label_col=-1))
    assert len(ds) == 3
    assert ds.dropped_rows == 2
    assert ds.class_names == ["a", "b"]  # first-appearance order
    np.testing.assert_array_equal(ds.labels, [0, 0, 1])


def test_load_csv_parse_error_carries_line(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2,a\n3,oops,b\n")
    with pytest.raises(ParseError) as exc:
        load_csv(f, CsvSchema(label_col=-1))
    assert exc.value.line == 2
    assert "line 2" in str(exc.value)


def test_load_csv_empty_after_cleaning(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("?,1,a\n2,?,b\n")
    with pytest.raises(EmptyDataset):
        load_csv(f, CsvSchema(label_col=-1))


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_csv(tmp_path / "nope.csv", CsvSchema())


def test_load_csv_header_and_explicit_columns(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("h1,h2,h3,label\n1,9,2,x\n3,9,4,y\n")
    ds = load_csv(f, CsvSchema(label_col=3, feature_cols=[0, 2], has_header=True))
    assert ds.n_features == 2
    np.testing.assert_array_equal(ds.features, [[1.0, 2.0], [3.0, 4.0]])


def test_landsat_average_pixel_examples():
    np.testing.assert_allclose(landsat_average_pixel(np.full(36, 3.5)), np.full(4, 3.5))
    case = np.zeros(36)
    case[0::4] = np.arange(1, 10)  # band 1 of each of the 9 pixels
    np.testing.assert_allclose(landsat_average_pixel(case), [5.0, 0.0, 0.0, 0.0])
    with pytest.raises(MalformedCase):
        landsat_average_pixel(np.zeros(35))


def test_landsat_average_matches_naive_mean(rng):
    case = rng.uniform(0, 255, 36)
    want = [sum(case[p * 4 + b] for p in range(9)) / 9.0 for b in range(4)]
    np.testing.assert_allclose(landsat_average_pixel(case), want, atol=1e-12)


@given(st.permutations(list(range(9))))
def test_landsat_average_pixel_permutation_invariant(perm):
    rng = np.random.default_rng(0)
    case = rng.uniform(0, 255, 36).reshape(9, 4)
    shuffled = case[perm]
    np.testing.assert_allclose(
        landsat_average_pixel(case.ravel()), landsat_average_pixel(shuffled.ravel()), atol=1e-12
    )


def _write_landsat(tmp_path, n_train=30, n_test=12):
    rng = np.random.default_rng(3)
    labels = [1, 2, 3, 4, 5, 7]

    def rows(n):
        out = []
        for i in range(n):
            vals = rng.integers(20, 140, 36)
            out.append(" ".join(map(str, vals)) + f" {labels[i % 6]}")
        return "\n".join(out) + "\n"

    trn = tmp_path / "sat.trn"
    tst = tmp_path / "sat.tst"
    trn.write_text(rows(n_train))
    tst.write_text(rows(n_test))
    return trn, tst


def test_load_landsat_shapes_and_label_mapping(tmp_path):
    trn, tst = _write_landsat(tmp_path)
    train_ds, test_ds = load_landsat(trn, tst)
    assert train_ds.n_features == 4
    assert train_ds.n_classes == 6
    # labels mapped densely in sorted original order: 1,2,3,4,5,7 -> 0..5
    assert train_ds.class_names == ["1", "2", "3", "4", "5", "7"]
    assert test_ds.class_names == train_ds.class_names
    assert len(train_ds) == 30 and len(test_ds) == 12
    assert train_ds.split_tag == "train" and test_ds.split_tag == "test"


def test_split_stratified_and_exhaustive(data_dir):
    ds = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    train_ds, test_ds = split(ds, 0.5, seed=7)
    assert len(train_ds) == 75 and len(test_ds) == 75
    for c in range(3):
        assert abs(int((train_ds.labels == c).sum()) - 25) <= 1
    # disjoint and exhaustive as multisets of rows
    combined = np.vstack([train_ds.features, test_ds.features])
    assert combined.shape == ds.features.shape
    key = lambda m: sorted(map(tuple, m))
    assert key(combined) == key(ds.features)


def test_split_deterministic(data_dir):
    ds = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    a1, b1 = split(ds, 0.5, seed=9)
    a2, b2 = split(ds, 0.5, seed=9)
    np.testing.assert_array_equal(a1.features, a2.features)
    np.testing.assert_array_equal(b1.labels, b2.labels)
    a3, _ = split(ds, 0.5, seed=10)
    assert not np.array_equal(a1.features, a3.features)


def test_split_class_too_small():
    feats = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]])
    ds = TabularDataset("t", feats, np.array([0, 0, 1]), ["a", "b"])
    with pytest.raises(ClassTooSmall):
        split(ds, 0.5, seed=0)


def test_split_ratio_validation(data_dir):
    ds = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    with pytest.raises(ValueError):
        split(ds, 0.0, seed=0)
    with pytest.raises(ValueError):
        split(ds, 1.0, seed=0)


def test_stratified_subset(data_dir):
    ds = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    sub = stratified_subset(ds, 30, seed=1)
    assert len(sub) == 30
    np.testing.assert_array_equal(np.bincount(sub.labels), [10, 10, 10])
    assert stratified_subset(ds, 500, seed=1) is ds


def test_dataset_validation():
    with pytest.raises(ValueError):  # constant column
        TabularDataset("t", np.array([[1.0, 2.0], [1.0, 3.0]]), np.array([0, 1]), ["a", "b"])
    with pytest.raises(EmptyDataset):
        TabularDataset("t", np.zeros((0, 2)), np.zeros(0, dtype=int), ["a"])
    with pytest.raises(ValueError):  # label out of range
        TabularDataset("t", np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([0, 5]), ["a", "b"])


def test_column_stats():
    ds = load_xor()
    mins, maxs = ds.column_stats()
    np.testing.assert_array_equal(mins, [0.0, 0.0])
    np.testing.assert_array_equal(maxs, [1.0, 1.0])


def test_dump_roundtrips_through_loader(tmp_path, data_dir):
    ds = load_csv(data_dir / "iris.csv", CsvSchema(), name="iris")
    out = tmp_path / "cleaned.csv"
    dump_csv(ds, out)
    again = load_csv(out, CsvSchema(), name="iris")
    np.testing.assert_allclose(again.features, ds.features)
    np.testing.assert_array_equal(again.labels, ds.labels)
    assert again.class_names == ds.class_names
