"""
Test script to validate the command line interface
"""
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import json

from app import EXIT_INPUT_ERROR, EXIT_OK, build_parser, main


def test_parser_flags():
    args = build_parser().parse_args(
        ["analyze", "--d", "4", "--subgroup", "2,0;0,2", "--format", "json",
         "--assume-A-split", "--max-group-order", "50", "--jobs", "2"]
    )
    assert args.d == 4 and args.subgroup == "2,0;0,2"
    assert args.format == "json" and args.assume_a_split
    assert args.max_group_order == 50 and args.jobs == 2


def test_analyze_json(capsys):
    assert main(["analyze", "--d", "4", "--subgroup", "2,0;0,2", "--format", "json", "--assume-A-split"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["decomposition"]["verdict"] == "completely decomposable"
    assert payload["input"]["d"] == 4


def test_analyze_is_deterministic(capsys):
    argv = ["analyze", "--d", "6", "--subgroup", "1,0"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_input_errors(capsys):
    assert main(["analyze", "--d", "4", "--subgroup", "2,0"]) == EXIT_INPUT_ERROR
    assert "not a polarizing-degree subgroup" in capsys.readouterr().err
    assert main(["analyze", "--d", "4", "--subgroup", "two"]) == EXIT_INPUT_ERROR
    assert main(["census", "--d", "0"]) == EXIT_INPUT_ERROR


def test_census_text(capsys):
    assert main(["census", "--d", "2"]) == EXIT_OK
    assert "total 6" in capsys.readouterr().out


def test_environment_override(monkeypatch, capsys):
    monkeypatch.setenv("ABSURF_MAX_GROUP_ORDER", "4")
    assert main(["analyze", "--d", "4", "--subgroup", "2,0;0,2"]) == EXIT_INPUT_ERROR
    assert "partition search bound" in capsys.readouterr().err
    assert main(["analyze", "--d", "4", "--subgroup", "2,0;0,2", "--max-group-order", "200"]) == EXIT_OK


def test_census_beyond_hyperelliptic_range(capsys):
    for d in (5, 12):
        assert main(["census", "--d", str(d)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "total 0" in out
        assert "0 (Bryan Table 1)" in out
    assert main(["census", "--d", "7", "--format", "json"]) == EXIT_OK
    census = json.loads(capsys.readouterr().out)["census"]
    assert census["total"] == 0 and census["terms"] == []


def test_analyze_echoes_typed_generators(capsys):
    assert main(["analyze", "--d", "4", "--subgroup", "2,0; 0,2", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["input"]["generators"] == "2,0; 0,2"
    assert payload["input"]["subgroup"] == "C(d=4, X=<0,2;2,0>)"
