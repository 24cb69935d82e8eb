"""Tests for the JSON interchange of complexes and reports."""

import json

import pytest

from trickle_hdx.complex_io import dump_complex, load_complex, parse_complex, to_json
from trickle_hdx.errors import MalformedInput, NonPure
from trickle_hdx.trickledown import scenario_calculator


class TestParseComplex:
    """Complex documents."""

    def test_typed_document(self):
        text = json.dumps(
            {
                "d": 1,
                "types": {"a": 0, "b": 1, "c": 1},
                "facets": [{"verts": ["a", "b"], "w": 3}, {"verts": ["a", "c"]}],
            }
        )
        X = parse_complex(text)
        assert X.d == 1
        assert X.type_of == {"a": 0, "b": 1, "c": 1}
        assert dict(X.facets) == pytest.approx({("a", "b"): 0.75, ("a", "c"): 0.25})

    def test_integer_vertices_become_strings(self):
        X = parse_complex('{"facets": [{"verts": [1, 2]}]}')
        assert X.vertices == ("1", "2")
        assert not X.is_partite

    def test_invalid_json(self):
        with pytest.raises(MalformedInput, match="line 1"):
            parse_complex("{facets: []")

    def test_not_a_document(self):
        with pytest.raises(MalformedInput, match="facets"):
            parse_complex('{"faces": []}')

    def test_declared_dimension_checked(self):
        with pytest.raises(NonPure):
            parse_complex('{"d": 2, "facets": [{"verts": ["a", "b"]}]}')

    def test_missing_file(self, tmp_path):
        with pytest.raises(MalformedInput, match="cannot read"):
            load_complex(tmp_path / "none.json")


class TestDump:
    """Byte-stable output."""

    def test_dump_reloads(self, tmp_path, path_coloring):
        target = tmp_path / "x.json"
        target.write_text(dump_complex(path_coloring))
        again = load_complex(target)
        assert [f for f, _ in again.facets] == [f for f, _ in path_coloring.facets]
        assert [w for _, w in again.facets] == pytest.approx([1 / 12] * 12)
        assert again.type_of == path_coloring.type_of

    def test_report_json(self):
        text = to_json(scenario_calculator(2, 0.05, 0.88))
        assert text.endswith("}\n")
        data = json.loads(text)
        assert "pass" in data and "passed" not in data
        assert list(data) == sorted(data)
        assert text == to_json(scenario_calculator(2, 0.05, 0.88))

    def test_plain_containers(self):
        assert to_json({2: [1.5, None]}) == '{\n  "2": [\n    1.5,\n    null\n  ]\n}\n'
