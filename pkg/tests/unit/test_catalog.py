"""Tests for the zero-family and symbol catalog."""

import pytest

from tto_sections._blaschke import Verdict
from tto_sections._catalog import FAMILIES, SYMBOLS, parse_family, parse_symbol, render_catalog
from tto_sections._config import ExperimentConfig
from tto_sections._errors import ConfigError


class TestFamilies:
    def test_catalog_names(self):
        assert {"geometric-radius", "harmonic-radius", "all-zero-prefix", "explicit"} <= set(FAMILIES)

    def test_verdicts(self):
        assert FAMILIES["geometric-radius"].verdict is Verdict.CONVERGING
        assert FAMILIES["harmonic-radius"].verdict is Verdict.DIVERGING

    @pytest.mark.parametrize("name", sorted(FAMILIES))
    def test_examples_validate(self, name):
        example = FAMILIES[name].example
        config = ExperimentConfig.from_mapping({"kind": "widom", "family": example})
        u = config.blaschke()
        assert len(u.materialize(u.available(3))) >= 1

    def test_parse_geometric(self):
        u = parse_family({"family": "geometric-radius", "ratio": 0.25})
        assert u.defects(2).tolist() == [0.25, 0.0625]

    def test_parse_explicit_pairs(self):
        u = parse_family({"family": "explicit", "zeros": [[0.0, 0.5], 0.25]})
        assert u.degree == 2
        assert u.values(2)[0] == 0.25

    def test_unknown_family(self):
        with pytest.raises(ConfigError) as excinfo:
            parse_family({"family": "fibonacci"})
        assert excinfo.value.field == "family.family"

    def test_unknown_parameter(self):
        with pytest.raises(ConfigError) as excinfo:
            parse_family({"family": "geometric-radius", "radius": 0.5})
        assert excinfo.value.field == "family.radius"

    def test_integer_parameter(self):
        with pytest.raises(ConfigError):
            parse_family({"family": "all-zero-prefix", "prefix": 1.5})

    def test_missing_zeros(self):
        with pytest.raises(ConfigError) as excinfo:
            parse_family({"family": "explicit"})
        assert excinfo.value.field == "family.zeros"

    def test_invalid_ratio(self):
        with pytest.raises(ConfigError):
            parse_family({"family": "geometric-radius", "ratio": 1.5})

    def test_zero_outside_disk(self):
        with pytest.raises(ConfigError):
            parse_family({"family": "explicit", "zeros": [[1.0, 0.0]]})


class TestSymbols:
    def test_named(self):
        a = parse_symbol("positive")
        assert a.coefficient(0) == 2.0
        assert a.coefficient(-1) == 0.5

    def test_laurent_string(self):
        a = parse_symbol("laurent:{-1: 0.5, 0: 2, 2: 1j}")
        assert a.coefficient(2) == 1j
        assert a.degree == 2

    def test_coefficient_mapping(self):
        a = parse_symbol({"coefficients": {"1": [0.0, 1.0], "-1": 2}})
        assert a.coefficient(1) == 1j
        assert a.coefficient(-1) == 2

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            parse_symbol("sawtooth")

    def test_malformed_laurent(self):
        with pytest.raises(ConfigError):
            parse_symbol("laurent:{1: }")

    def test_empty_coefficients(self):
        with pytest.raises(ConfigError):
            parse_symbol({"coefficients": {}})

    def test_every_entry_builds(self):
        for entry in SYMBOLS.values():
            assert entry.build().label == entry.name


class TestRenderCatalog:
    def test_lists_families_with_verdicts(self):
        text = render_catalog()
        assert "geometric-radius  [converging]" in text
        assert "harmonic-radius  [diverging]" in text
        assert "explicit" in text
        assert "positive" in text
