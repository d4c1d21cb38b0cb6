"""
Command-line tests through click's CliRunner.
Results are read from stdout only; logs and error messages go to stderr.
"""

import json

import pytest
from click.testing import CliRunner

from autoplex.cli import cli
from autoplex.core.schemas import ComplexityRecord
from autoplex.models.words import tribonacci_word
from autoplex.services import search
from autoplex.utils.results_cache import ResultsCache


pytestmark = pytest.mark.usefixtures("restore_root_logging")


@pytest.fixture
def runner():
    return CliRunner()


def _json(result):
    return json.loads(result.stdout)


# ==================== word ====================


@pytest.mark.unit
def test_word_by_index(runner):
    result = runner.invoke(cli, ["word", "--k", "3", "--n", "7"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "0102010010201"


@pytest.mark.unit
def test_word_prefix(runner):
    result = runner.invoke(cli, ["word", "--prefix", "5"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "01001"


@pytest.mark.unit
def test_word_needs_exactly_one_selector(runner):
    result = runner.invoke(cli, ["word", "--n", "3", "--prefix", "5"])
    assert result.exit_code == 2
    assert "Error" in result.stderr


# ==================== complexity ====================


@pytest.mark.unit
def test_complexity_aminus(runner):
    result = runner.invoke(cli, ["complexity", "0102", "--measure", "aminus"])
    assert result.exit_code == 0
    record = _json(result)
    assert record["value"] == 3
    assert record["measure"] == "AMINUS"
    assert record["complete"] is True


@pytest.mark.unit
def test_complexity_an_single_symbol(runner):
    result = runner.invoke(cli, ["complexity", "0"])
    assert result.exit_code == 0
    assert _json(result)["value"] == 1


@pytest.mark.unit
def test_complexity_anlower_reports_family(runner):
    result = runner.invoke(cli, ["complexity", str(tribonacci_word(8)), "--measure", "anlower"])
    assert result.exit_code == 0
    record = _json(result)
    assert record["value"] == 12
    assert record["method"] == "branch-and-bound"
    assert isinstance(record["family"], list)


@pytest.mark.unit
def test_complexity_from_file(runner, tmp_path):
    path = tmp_path / "word.txt"
    path.write_text("0102010\n")
    result = runner.invoke(cli, ["complexity", "--file", str(path)])
    assert result.exit_code == 0
    assert _json(result)["value"] == 4


@pytest.mark.unit
def test_complexity_rejects_bad_word(runner):
    result = runner.invoke(cli, ["complexity", "01a"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["complexity"])
    assert result.exit_code == 2


@pytest.mark.unit
def test_complexity_budget_exhausted(runner, monkeypatch):
    monkeypatch.setattr(search, "_CLOCK_EVERY", 1)
    result = runner.invoke(cli, ["complexity", "0102010", "--budget", "1e-9"])
    assert result.exit_code == 3
    record = _json(result)
    assert record["complete"] is False
    assert (record["lower"], record["upper"]) == (4, 8)
    assert "[4, 8]" in result.stderr


# ==================== results cache ====================


@pytest.mark.unit
def test_cache_hit_skips_computation(runner, tmp_path):
    path = tmp_path / "cache.jsonl"
    first = runner.invoke(cli, ["complexity", "0102", "--measure", "aminus", "--cache", str(path)])
    assert first.exit_code == 0
    assert len(ResultsCache(path)) == 1

    second = runner.invoke(cli, ["complexity", "0102", "--measure", "aminus", "--cache", str(path)])
    assert second.exit_code == 0
    assert _json(second)["method"] == "cache"
    assert _json(second)["value"] == 3
    assert _json(second)["witness"] == _json(first)["witness"]


@pytest.mark.unit
def test_cache_hit_keeps_anlower_family(runner, tmp_path):
    path = tmp_path / "cache.jsonl"
    args = ["complexity", str(tribonacci_word(9)), "--measure", "anlower", "--cache", str(path)]
    first = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert _json(first)["value"] == 21

    second = runner.invoke(cli, args)
    assert second.exit_code == 0
    assert _json(second)["method"] == "cache"
    assert _json(second)["family"] == _json(first)["family"]
    assert _json(second)["family"]


@pytest.mark.unit
def test_recompute_detects_inconsistent_cache(runner, tmp_path):
    path = tmp_path / "cache.jsonl"
    bogus = ComplexityRecord(word="0102", length=4, measure="AMINUS", value=2, method="exact-search")
    ResultsCache(path).store(bogus)
    result = runner.invoke(cli, ["complexity", "0102", "--measure", "aminus", "--cache", str(path), "--recompute"])
    assert result.exit_code == 4


@pytest.mark.unit
def test_cache_environment_variable_wins(runner, tmp_path, monkeypatch):
    env_path = tmp_path / "env.jsonl"
    flag_path = tmp_path / "flag.jsonl"
    monkeypatch.setenv("AUTOPLEX_CACHE", str(env_path))
    result = runner.invoke(cli, ["complexity", "0102", "--measure", "aminus", "--cache", str(flag_path)])
    assert result.exit_code == 0
    assert env_path.exists()
    assert not flag_path.exists()


# ==================== witness, rates, constants, tables ====================


@pytest.mark.unit
def test_witness_japan_dot(runner, tmp_path, fixtures_dir):
    dot = tmp_path / "japan.dot"
    result = runner.invoke(cli, ["witness", "--family", "fib-japan", "--n", "10", "--dot", str(dot)])
    assert result.exit_code == 0
    assert _json(result)["value"] == 22
    assert dot.read_text() == (fixtures_dir / "japan.dot").read_text()


@pytest.mark.unit
def test_witness_tribonacci_uses_table_numbering(runner):
    result = runner.invoke(cli, ["witness", "--family", "trib", "--n", "9"])
    assert result.exit_code == 0
    record = _json(result)
    assert record["value"] == 22
    assert record["length"] == 44


@pytest.mark.unit
def test_witness_construction_failure(runner):
    result = runner.invoke(cli, ["witness", "--family", "fib", "--n", "8"])
    assert result.exit_code == 2


@pytest.mark.unit
def test_rates_csv(runner, tmp_path):
    result = runner.invoke(cli, ["rates", "--k", "2", "--max-len", "10"])
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0].startswith("n,anlower_rate,sept6_rate,lower_rate")
    assert len(lines) == 11

    out = tmp_path / "rates.csv"
    result = runner.invoke(cli, ["rates", "--k", "3", "--max-len", "5", "--out", str(out)])
    assert result.exit_code == 0
    assert len(out.read_text().strip().splitlines()) == 6


@pytest.mark.unit
def test_constants(runner):
    result = runner.invoke(cli, ["constants"])
    assert result.exit_code == 0
    assert "phi" in result.stdout
    assert "1.61803398875" in result.stdout


@pytest.mark.unit
def test_tables_fibonacci(runner, tmp_path):
    result = runner.invoke(cli, ["tables", "--which", "2", "--max-n", "6", "--csv", str(tmp_path / "out")])
    assert result.exit_code == 0
    assert result.stdout.startswith("# fibonacci")
    assert "# tribonacci" not in result.stdout
    assert (tmp_path / "out" / "fibonacci.csv").exists()


@pytest.mark.unit
def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "autoplex" in result.stdout
