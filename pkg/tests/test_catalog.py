import json

import pytest

from flexq.catalog import canonical_text, load_catalog
from flexq.errors import CatalogError

from helpers import write_catalog


class TestLoad:
    def test_fixture_catalog(self, cat):
        assert cat.table_names() == ["orders", "orderdetails", "suppliers"]
        assert cat.table("orders").primary_key == "OrderID"
        assert cat.table("ORDERS").name == "orders"  # case-insensitive lookup

    def test_missing_data_file(self, tmp_path, fixtures):
        catalog = json.loads((fixtures / "catalog.json").read_text())
        (tmp_path / "cat.json").write_text(json.dumps(catalog))
        with pytest.raises(CatalogError) as err:
            load_catalog(tmp_path / "cat.json", tmp_path)
        assert err.value.code == "missing-file"

    def test_missing_catalog_file(self, tmp_path):
        with pytest.raises(CatalogError) as err:
            load_catalog(tmp_path / "nope.json", tmp_path)
        assert err.value.code == "missing-file"

    def test_header_mismatch_names_columns(self, tmp_path):
        (tmp_path / "t.csv").write_text("id,name\n1,x\n")
        spec = {"tables": [{"name": "t", "primaryKey": "id",
                            "dataFile": "t.csv",
                            "fields": [{"name": "id", "dtype": "integer"},
                                       {"name": "name", "dtype": "text"},
                                       {"name": "status", "dtype": "text"}]}]}
        (tmp_path / "cat.json").write_text(json.dumps(spec))
        with pytest.raises(CatalogError, match="status") as err:
            load_catalog(tmp_path / "cat.json", tmp_path)
        assert err.value.code == "header-mismatch"

    def test_extra_csv_column_is_a_mismatch(self, tmp_path):
        (tmp_path / "t.csv").write_text("id,name,extra\n1,x,y\n")
        spec = {"tables": [{"name": "t", "primaryKey": "id",
                            "dataFile": "t.csv",
                            "fields": [{"name": "id", "dtype": "integer"},
                                       {"name": "name", "dtype": "text"}]}]}
        (tmp_path / "cat.json").write_text(json.dumps(spec))
        with pytest.raises(CatalogError, match="extra"):
            load_catalog(tmp_path / "cat.json", tmp_path)

    def test_duplicate_table_rejected(self, tmp_path):
        (tmp_path / "t.csv").write_text("id\n1\n")
        table = {"name": "t", "primaryKey": "id", "dataFile": "t.csv",
                 "fields": [{"name": "id", "dtype": "integer"}]}
        (tmp_path / "cat.json").write_text(json.dumps({"tables": [table,
                                                                  table]}))
        with pytest.raises(CatalogError) as err:
            load_catalog(tmp_path / "cat.json", tmp_path)
        assert err.value.code == "duplicate-table"

    def test_primary_key_must_be_declared(self, tmp_path):
        spec = {"tables": [{"name": "t", "primaryKey": "missing",
                            "dataFile": "t.csv",
                            "fields": [{"name": "id", "dtype": "integer"}]}]}
        (tmp_path / "cat.json").write_text(json.dumps(spec))
        with pytest.raises(CatalogError) as err:
            load_catalog(tmp_path / "cat.json", tmp_path)
        assert err.value.code == "unknown-primary-key"

    def test_csv_header_order_is_free(self, tmp_path):
        (tmp_path / "t.csv").write_text("Name,ID\nx,1\n")
        spec = {"tables": [{"name": "t", "primaryKey": "id",
                            "dataFile": "t.csv",
                            "fields": [{"name": "id", "dtype": "integer"},
                                       {"name": "name", "dtype": "text"}]}]}
        (tmp_path / "cat.json").write_text(json.dumps(spec))
        cat = load_catalog(tmp_path / "cat.json", tmp_path)
        assert cat.rows("t") == [(1, "x")]


class TestFieldLookup:
    def test_tables_with_field(self, cat):
        assert cat.tables_with_field("OrderID") == {"orders", "orderdetails"}
        assert cat.tables_with_field("orderid") == {"orders", "orderdetails"}
        assert cat.tables_with_field("nonexistent") == set()
        assert cat.tables_with_field("sno") == {"suppliers"}

    def test_declaring_table_is_included(self, cat):
        for t in cat.tables:
            for f in t.fields:
                assert t.name in cat.tables_with_field(f.name)


class TestValueSet:
    def test_orders_primary_key_values(self, cat):
        values = cat.value_set("orders", "OrderID")
        assert {"10329", "10351", "10353", "10360", "10372",
                "10417"} <= set(values)
        assert len(values) == len(cat.rows("orders"))

    def test_supplier_city_spellings(self, cat):
        values = cat.value_set("suppliers", "city")
        assert list(values).count("London") == 2
        assert list(values).count("LONDON") == 2

    def test_unknown_field(self, cat):
        with pytest.raises(CatalogError) as err:
            cat.value_set("orders", "NoSuchField")
        assert err.value.code == "unknown-field"

    def test_unknown_table(self, cat):
        with pytest.raises(CatalogError) as err:
            cat.value_set("nothere", "OrderID")
        assert err.value.code == "unknown-table"

    def test_pk_cardinality_equals_row_count(self, cat):
        for t in cat.tables:
            assert len(cat.value_set(t.name, t.primary_key)) == \
                len(cat.rows(t.name))

    def test_non_indexed_column_computed_on_demand(self, cat):
        values = cat.value_set("orderdetails", "OrderID")
        assert len(values) == len(cat.rows("orderdetails"))
        assert "10248" in values


class TestCanonicalText:
    @pytest.mark.parametrize("raw,expected", [
        ("007", "7"),
        ("211.00", "211"),
        ("0.50", "0.5"),
        ("-0.10", "-0.1"),
        ("131.7", "131.7"),
        ("10329", "10329"),
        ("London", "London"),
        ("05487-020", "05487-020"),   # not a number, kept verbatim
        ("", ""),
    ])
    def test_canonical_text(self, raw, expected):
        assert canonical_text(raw) == expected


class TestTypedCells:
    def test_dtypes_and_nulls(self, tmp_path):
        cat = write_catalog(tmp_path, {
            "t": {"primaryKey": "id",
                  "fields": [("id", "integer"), ("price", "decimal"),
                             ("label", "text"), ("seen", "date-text")],
                  "rows": [("1", "2.50", "abc", "1/1/1997"),
                           ("2", "", "", "")]},
        })
        assert cat.rows("t")[0] == (1, 2.5, "abc", "1/1/1997")
        assert cat.rows("t")[1] == (2, None, None, None)
