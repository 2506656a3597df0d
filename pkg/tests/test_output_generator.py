"""
Tests for report documents and their text/JSON rendering
"""
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import json

import pytest

from src.cover_curve import fix_table, hyperelliptic_census, make_cover_curve
from src.decomposer import JacobianDecomposer
from src.kani_rosen import AutGroup
from src.output_generator import (
    ReportDocument,
    ReportGenerator,
    build_census_document,
    build_curve_document,
)
from src.torsion_group import TorsionPoint


def klein_document():
    curve = make_cover_curve(4, [TorsionPoint.from_ints(2, 0, 4), TorsionPoint.from_ints(0, 2, 4)])
    result = JacobianDecomposer().decompose(curve)
    return build_curve_document(curve, fix_table(curve), result, AutGroup(curve))


def test_json_fields_are_stable():
    payload = json.loads(klein_document().to_json())
    assert set(payload) == {
        "input", "normalized_basis", "fix_counts", "partitions",
        "relations", "decomposition", "assumptions", "census",
    }
    counts = {row["x"]: row["count"] for row in payload["fix_counts"]}
    assert counts == {"0,0": 4, "0,2": 4, "2,0": 4, "2,2": 12}


def test_json_round_trip():
    text = klein_document().to_json()
    assert ReportDocument.from_json(text).to_json() == text


def test_text_rendering():
    outputs = ReportGenerator().generate_outputs(klein_document(), ["text", "json"])
    text = outputs["text"].decode("utf-8")
    assert "Fixed points" in text
    assert "J(C) ~ A x" in text
    assert set(outputs) == {"text", "json"}


def test_unknown_format():
    with pytest.raises(ValueError):
        ReportGenerator().generate_outputs(klein_document(), ["pdf"])


def test_census_document():
    document = build_census_document(hyperelliptic_census(2))
    assert document.census["total"] == 6
    text = ReportGenerator().generate_outputs(document, ["text"])["text"].decode("utf-8")
    assert "total 6" in text


def test_generators_default_to_canonical():
    document = klein_document()
    assert document.input["generators"] == "0,2;2,0"
    assert document.decomposition["expression_resolved"]


def test_unresolved_expression_points_to_split():
    curve = make_cover_curve(8, [TorsionPoint.from_ints(2, 0, 8), TorsionPoint.from_ints(0, 4, 8)])
    result = JacobianDecomposer().decompose(curve)
    assert not result.expression_resolved
    document = build_curve_document(curve, fix_table(curve), result, AutGroup(curve), "2,0;0,4")
    text = ReportGenerator().generate_outputs(document, ["text"])["text"].decode("utf-8")
    assert "expression: not resolved" in text
    assert "(see split)" in text
    assert "split:      J(C) ~" in text
