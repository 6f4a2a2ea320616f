import json

import numpy as np
import pytest

import canodual as cd
from canodual import fixtures
from canodual.formats import (
    input_digest,
    parse_coordinates,
    parse_instance,
    parse_pdb_atoms,
    report_document,
    serialize_instance,
    write_pdb,
    write_xyz,
)

ATOM_LINE = (
    "ATOM      7  CB  ALA A   4       1.731  -1.514  -7.980  1.00  0.00           C"
)


class TestParseInstance:
    def test_all_fixture_documents_parse(self):
        for name in ("doublewell",) + fixtures.MDGP_NAMES:
            doc = parse_instance(fixtures.instance_text(name))
            assert doc.schema_version == 1

    def test_3nvh_fixture_shape(self):
        doc = parse_instance(fixtures.instance_text("3nvh-models-1-2"))
        inst = doc.payload
        assert isinstance(inst, cd.MdgpInstance)
        assert len(inst.anchors) == 1
        assert inst.sensor_count == 1
        assert len(inst.constraints) == 1

    def test_round_trip(self):
        for name in ("doublewell",) + fixtures.MDGP_NAMES:
            doc = parse_instance(fixtures.instance_text(name))
            text = serialize_instance(doc)
            again = parse_instance(text)
            assert serialize_instance(again) == text
            if doc.problem == "mdgp":
                assert np.array_equal(again.payload.anchors, doc.payload.anchors)
                assert np.array_equal(again.payload.epsilon, doc.payload.epsilon)
                assert again.payload.constraints == tuple(doc.payload.constraints)
            else:
                assert again.payload.n == doc.payload.n
                for ta, tb in zip(again.payload.terms, doc.payload.terms):
                    assert ta.alpha == tb.alpha
                    assert np.array_equal(ta.quad.A, tb.quad.A)

    def test_empty_constraints_rejected(self):
        doc = json.loads(fixtures.instance_text("3nvh-models-1-2"))
        doc["payload"]["constraints"] = []
        with pytest.raises(cd.ParseError, match="no constraints"):
            parse_instance(json.dumps(doc))

    def test_negative_target_rejected(self):
        doc = json.loads(fixtures.instance_text("3nvh-models-1-2"))
        doc["payload"]["constraints"][0]["r"] = -3.4
        with pytest.raises(cd.ParseError, match="target distance must be positive"):
            parse_instance(json.dumps(doc))

    def test_unknown_field_rejected(self):
        doc = json.loads(fixtures.instance_text("doublewell"))
        doc["surprise"] = 1
        with pytest.raises(cd.ParseError, match="unknown field 'surprise'"):
            parse_instance(json.dumps(doc))

    def test_unknown_payload_field_rejected(self):
        doc = json.loads(fixtures.instance_text("3nvh-models-1-2"))
        doc["payload"]["labels"] = []
        with pytest.raises(cd.ParseError, match="labels"):
            parse_instance(json.dumps(doc))

    def test_invalid_json_reports_line(self):
        with pytest.raises(cd.ParseError, match="line 1"):
            parse_instance("{nope}")

    def test_solver_overrides_kept(self):
        doc = json.loads(fixtures.instance_text("doublewell"))
        doc["solver"] = {"seed": 7, "multistart_count": 16}
        parsed = parse_instance(json.dumps(doc))
        assert parsed.solver == {"seed": 7, "multistart_count": 16}

    def test_unknown_solver_field_rejected(self):
        doc = json.loads(fixtures.instance_text("doublewell"))
        doc["solver"] = {"stepsize": 0.1}
        with pytest.raises(cd.ParseError, match="stepsize"):
            parse_instance(json.dumps(doc))


class TestPdbParsing:
    def test_single_atom_line(self):
        records = parse_pdb_atoms(ATOM_LINE)
        assert len(records) == 1
        rec = records[0]
        assert rec.position == pytest.approx([1.731, -1.514, -7.980])
        assert rec.label == "ALA4.CB"
        assert rec.chain_id == "A"
        assert rec.serial == 7

    def test_non_numeric_x_names_columns(self):
        bad = ATOM_LINE[:30] + "  abcdef" + ATOM_LINE[38:]
        with pytest.raises(cd.ParseError, match="columns 31-38"):
            parse_pdb_atoms(bad)

    def test_chains_grouped_by_id(self):
        text = "\n".join([
            ATOM_LINE,
            ATOM_LINE.replace(" A   4 ", " H   4 ").replace("      7", "      8"),
        ])
        chains = parse_coordinates(text, format="pdb-atom")
        assert sorted(c.name for c in chains) == ["A", "H"]

    def test_empty_file(self):
        assert parse_coordinates("", format="pdb-atom") == []


class TestXyzParsing:
    def test_simple_file(self):
        text = "2\ncomment\nC 0.0 0.0 0.0\nC 1.0 0.0 0.0\n"
        chains = parse_coordinates(text, format="xyz")
        assert len(chains) == 1
        assert chains[0].atom_names == ("C1", "C2")
        assert chains[0].coords[1] == pytest.approx([1.0, 0.0, 0.0])

    def test_empty_file(self):
        assert parse_coordinates("", format="xyz") == []

    def test_count_mismatch(self):
        with pytest.raises(cd.ParseError, match="expected 3 atom lines"):
            parse_coordinates("3\nc\nC 0 0 0\n", format="xyz")

    def test_non_numeric(self):
        with pytest.raises(cd.ParseError, match="non-numeric"):
            parse_coordinates("1\nc\nC a b c\n", format="xyz")

    def test_round_trip_positions(self):
        rng = np.random.default_rng(5)
        chain = cd.Chain("A", tuple(f"C{i+1}" for i in range(4)),
                         rng.uniform(-5, 5, (4, 3)))
        back = parse_coordinates(write_xyz(chain), format="xyz")[0]
        assert back.coords == pytest.approx(chain.coords, abs=1e-7)


class TestPdbWriting:
    def test_round_trip_through_parser(self):
        inst = fixtures.load_instance("3nvf-model-1")
        chain = cd.Chain("A", ("GLY2.CA", "ALA4.CB"), inst.anchors)
        fam = fixtures.FAMILIES["3nvf"]
        model = cd.replicate_fibril(chain, fam.sheet, fam.stack, levels=2)
        text = write_pdb(model)
        back = parse_coordinates(text, format="pdb-atom")
        assert sorted(c.name for c in back) == sorted(model.names())
        for parsed in back:
            orig = model.chains[parsed.name]
            assert parsed.atom_names == orig.atom_names
            assert parsed.coords == pytest.approx(orig.coords, abs=1e-3)


class TestReportDocument:
    def test_json_round_trip_lossless(self, double_well):
        report = cd.solve(double_well, cd.SolverConfig(search_box=(-3.0, 3.0)))
        doc = report_document(report, "source")
        again = json.loads(json.dumps(doc))
        assert again == doc
        assert doc["input_sha256"] == input_digest("source")
        assert doc["best"]["kind"] == "certified_global_min"
        assert len(doc["points"]) == 3

    def test_timing_opt_in(self, double_well):
        report = cd.solve(double_well)
        assert "wall_time" not in report_document(report, "s")
        assert "wall_time" in report_document(report, "s", timing=True)
