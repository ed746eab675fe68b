"""Tests for CSV tables and JSON result documents."""

import json
import math

import numpy as np
import pytest

from tto_sections._fsd import StabilityVerdict
from tto_sections._tables import ResultDocument, Table


class TestTable:
    def test_render(self):
        table = Table("demo", ("n", "value", "truncated"), ((4, 0.1, False), (8, np.float64(1e-17), True)))
        assert table.render() == "n,value,truncated\n4,0.1,false\n8,1e-17,true\n"

    def test_complex_columns_are_split(self):
        table = Table("points", ("n", "z"), ((1, 1 + 2j), (2, np.complex128(-0.5))))
        assert table.render() == "n,z_re,z_im\n1,1.0,2.0\n2,-0.5,0.0\n"

    def test_empty_cells(self):
        assert Table("t", ("n", "M"), ((1, None),)).render() == "n,M\n1,\n"

    def test_row_width(self):
        with pytest.raises(ValueError):
            Table("bad", ("a", "b"), ((1,),))

    def test_str(self):
        table = Table("t", ("a",), ((1,),))
        assert str(table) == table.render()


class TestResultDocument:
    def test_render(self):
        document = ResultDocument(
            name="demo",
            kind="stability",
            status=0,
            passed=True,
            summary={"verdict": StabilityVerdict.STABLE, "trace": np.array([1.0, math.nan]), "z": 1j},
            tables=("demo.sigma-min.csv",),
            config={"kind": "stability"},
        )
        data = json.loads(document.render())
        assert data["summary"] == {"verdict": "stable", "trace": [1.0, None], "z": [0.0, 1.0]}
        assert data["tables"] == ["demo.sigma-min.csv"]
        assert "error" not in data

    def test_sorted_keys(self):
        text = ResultDocument(name="x", kind="widom", status=1, passed=False).render()
        keys = [line.split(":")[0].strip() for line in text.splitlines() if line.startswith('  "')]
        assert keys == sorted(keys)

    def test_error_record(self):
        document = ResultDocument(
            name="x", kind="unknown", status=2, passed=False, error={"type": "ConfigError", "field": "n_list"}
        )
        assert json.loads(document.render())["error"]["field"] == "n_list"
