"""table-core: parsing, augmentation, scaling, utility."""

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bod.errors import (
    DuplicateAttributeError,
    EmptyInputError,
    MissingCellError,
    NoDatasetsError,
    NonNumericCellError,
    NonPositiveValueError,
    RowCountMismatchError,
    UnknownTupleError,
)
from bod.table import (
    Dataset,
    TupleSubset,
    augment,
    parse_dataset,
    scale_columns,
    total_utility,
    write_subset_csv,
)

from .conftest import LOCATION_CSV


class TestParseDataset:
    def test_paper_location_table(self):
        ds = parse_dataset(LOCATION_CSV, "location")
        assert ds.attributes == ("Near Urban", "Criminal Free")
        assert ds.n_rows == 6
        assert ds.rows[0].tolist() == [26.0, 5.0]
        assert ds.rows[5].tolist() == [47.0, 7.0]

    def test_minimal_single_cell(self):
        ds = parse_dataset("Tax\n90\n", "t")
        assert ds.n_attributes == 1
        assert ds.n_rows == 1

    def test_zero_value_rejected(self):
        with pytest.raises(NonPositiveValueError):
            parse_dataset("Tax\n0\n", "t")

    def test_negative_value_rejected(self):
        with pytest.raises(NonPositiveValueError):
            parse_dataset("Tax\n-3\n", "t")

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            parse_dataset("", "t")

    def test_header_only(self):
        with pytest.raises(EmptyInputError):
            parse_dataset("Tax\n", "t")

    def test_non_numeric_cell_reports_position(self):
        with pytest.raises(NonNumericCellError) as exc:
            parse_dataset("a,b\n1,2\n3,oops\n", "t")
        assert exc.value.row == 1
        assert exc.value.column == "b"

    def test_ragged_row(self):
        with pytest.raises(MissingCellError):
            parse_dataset("a,b\n1,2\n3\n", "t")

    def test_duplicate_attribute(self):
        with pytest.raises(DuplicateAttributeError):
            parse_dataset("a,a\n1,2\n", "t")

    def test_whitespace_and_reals_accepted(self):
        ds = parse_dataset("a , b\n 1.5 , 2 \n", "t")
        assert ds.attributes == ("a", "b")
        assert ds.rows[0].tolist() == [1.5, 2.0]

    def test_accepts_file_like(self):
        ds = parse_dataset(io.StringIO("a\n1\n2\n"), "t")
        assert ds.n_rows == 2


class TestAugment:
    def test_paper_column_order(self, paper_table):
        assert paper_table.d == 5
        assert paper_table.n_tuples == 6
        assert [c.qualified_name for c in paper_table.columns] == [
            "location.Near Urban",
            "location.Criminal Free",
            "policies.Tax",
            "home_values.Size",
            "home_values.Age",
        ]

    def test_single_dataset_identity(self):
        ds = parse_dataset("a\n2\n5\n", "only")
        table = augment([ds])
        assert table.d == 1
        assert table.raw[:, 0].tolist() == [2.0, 5.0]
        assert table.scaled[:, 0].tolist() == [0.4, 1.0]

    def test_row_count_mismatch(self):
        a = parse_dataset("a\n1\n2\n3\n4\n5\n6\n", "a")
        b = parse_dataset("b\n1\n2\n3\n4\n5\n", "b")
        with pytest.raises(RowCountMismatchError) as exc:
            augment([a, b])
        assert exc.value.counts == {"a": 6, "b": 5}

    def test_no_datasets(self):
        with pytest.raises(NoDatasetsError):
            augment([])

    def test_partition_round_trip(self, paper_datasets, paper_table):
        # Projecting the raw matrix back per dataset reproduces the inputs.
        partition = paper_table.dataset_partition
        for ds in paper_datasets:
            cols = [c.column_index for c in partition[ds.name]]
            assert np.array_equal(paper_table.raw[:, cols], ds.rows)

    def test_column_max_tie_scales_all_to_one(self):
        table = augment([parse_dataset("a\n7\n7\n", "t")])
        assert table.scaled[:, 0].tolist() == [1.0, 1.0]


class TestScaleColumns:
    def test_paper_near_urban_column(self, paper_table):
        col = paper_table.scaled[:, 0]
        assert np.round(col, 2).tolist() == [0.55, 0.74, 0.96, 0.19, 0.13, 1.0]

    def test_paper_tax_house1_exactly_one(self, paper_table):
        assert paper_table.scaled[0, 2] == 1.0

    def test_house3_full_precision_row(self, paper_table):
        # Independent recomputation from the raw values: 45/47, 3/7, 78/90,
        # 2000/2000, 95/150.
        expected = [45 / 47, 3 / 7, 78 / 90, 1.0, 95 / 150]
        assert paper_table.scaled[2].tolist() == pytest.approx(expected, abs=1e-12)
        assert sum(expected) == pytest.approx(3.886018, abs=1e-6)

    def test_idempotent_on_scaled_matrix(self, paper_table):
        scaled = paper_table.scaled
        again = scale_columns(scaled, scaled.max(axis=0))
        assert np.array_equal(again, scaled)

    positive_matrix = arrays(
        np.float64,
        st.tuples(st.integers(1, 12), st.integers(1, 6)),
        elements=st.floats(min_value=1e-3, max_value=1e6, allow_nan=False),
    )

    @given(raw=positive_matrix)
    @settings(max_examples=200, deadline=None)
    def test_range_and_order_preservation(self, raw):
        scaled = scale_columns(raw, raw.max(axis=0))
        assert ((scaled > 0) & (scaled <= 1)).all()
        assert (scaled.max(axis=0) == 1.0).all()
        for c in range(raw.shape[1]):
            assert np.array_equal(np.argsort(raw[:, c], kind="stable"),
                                  np.argsort(scaled[:, c], kind="stable"))


class TestTotalUtility:
    def test_paper_house1(self, paper_table):
        assert total_utility(paper_table, 0) == pytest.approx(4.01, abs=0.01)
        assert total_utility(paper_table, 0) == pytest.approx(4.017477, abs=1e-6)

    def test_paper_house3(self, paper_table):
        assert total_utility(paper_table, 2) == pytest.approx(3.89, abs=0.01)
        assert total_utility(paper_table, 2) == pytest.approx(3.886018, abs=1e-6)

    def test_single_column_identity(self):
        table = augment([parse_dataset("a\n2\n8\n", "t")])
        assert total_utility(table, 0) == table.scaled[0, 0]

    def test_unknown_tuple(self, paper_table):
        with pytest.raises(UnknownTupleError):
            total_utility(paper_table, 6)
        with pytest.raises(UnknownTupleError):
            total_utility(paper_table, -1)

    def test_bounded_by_d(self, paper_table):
        for tid in paper_table.tuple_ids:
            assert 0 < total_utility(paper_table, tid) <= paper_table.d


class TestSubsetCsv:
    def test_header_and_rows(self, paper_table):
        buf = io.StringIO()
        write_subset_csv(paper_table, TupleSubset((2, 5)), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == (
            "tuple_id,location.Near Urban,location.Criminal Free,"
            "policies.Tax,home_values.Size,home_values.Age,utility"
        )
        assert lines[1] == "2,45,3,78,2000,95,3.886018"
        assert lines[2] == "5,47,7,30,1450,75,3.558333"
        assert len(lines) == 3

    def test_unknown_id_rejected(self, paper_table):
        with pytest.raises(UnknownTupleError):
            write_subset_csv(paper_table, TupleSubset((9,)), io.StringIO())
