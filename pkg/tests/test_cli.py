import pytest

from aomdd.cli import main

from conftest import EXAMPLE_CNF, queens_model

QUEENS_UAI_DOMAINS = None


def _write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def example_cnf(tmp_path):
    return _write(tmp_path / "example.cnf", EXAMPLE_CNF)


@pytest.fixture
def order_file(tmp_path):
    return _write(tmp_path / "order.txt", "0 1 2 3 4 5 6 7\n")


def _compile(example_cnf, order_file, tmp_path, *extra):
    out = tmp_path / "example.aomdd"
    rc = main(
        [
            "compile",
            example_cnf,
            "--order-file",
            order_file,
            "--out",
            str(out),
            *extra,
        ]
    )
    assert rc == 0
    return out


def test_compile_stats_block(example_cnf, order_file, tmp_path, capsys):
    _compile(example_cnf, order_file, tmp_path, "--method", "be", "--stats")
    lines = capsys.readouterr().out.splitlines()
    stats = dict(l.rsplit(" ", 1) for l in lines if " " in l)
    assert stats["n"] == "8"
    assert stats["induced_width"] == "3"
    assert stats["meta_nodes_total"] == "18"
    assert stats["edges"] == "47"
    assert stats["seed"] == "0"


def test_compile_chain_stats(example_cnf, order_file, tmp_path, capsys):
    _compile(example_cnf, order_file, tmp_path, "--chain", "--stats")
    out = capsys.readouterr().out
    assert "meta_nodes_total 27" in out
    assert "edges 54" in out


def test_methods_byte_identical(example_cnf, order_file, tmp_path):
    a = _compile(example_cnf, order_file, tmp_path, "--method", "search")
    text_a = a.read_text()
    b = _compile(example_cnf, order_file, tmp_path, "--method", "be")
    assert b.read_text() == text_a


def test_query_count_queens(tmp_path, capsys):
    from aomdd import dumps, compile_search

    compiled = compile_search(queens_model(4))
    path = _write(tmp_path / "queens.aomdd", dumps(compiled))
    assert main(["query", path, "--query", "count"]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_query_sum_and_mpe(tmp_path, capsys):
    uai = _write(
        tmp_path / "m.uai", "MARKOV 2 2 2 1 2 0 1 4 0.1 0.2 0.3 0.4"
    )
    out = tmp_path / "m.aomdd"
    assert main(["compile", uai, "--out", str(out)]) == 0
    assert main(["query", str(out), "--query", "sum", "--exact"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    ev = _write(tmp_path / "ev.txt", "1 0 0\n")
    assert main(
        ["query", str(out), "--query", "sum", "--evidence", ev, "--exact"]
    ) == 0
    assert capsys.readouterr().out.strip() == "3/10"
    assert main(["query", str(out), "--query", "mpe", "--exact"]) == 0
    value, witness = capsys.readouterr().out.splitlines()
    assert value == "2/5"
    assert witness == "1 1"


def test_query_eval(example_cnf, order_file, tmp_path, capsys):
    out = _compile(example_cnf, order_file, tmp_path)
    bad = _write(tmp_path / "x.txt", "0 0 0 0 0 0 0 0\n")
    assert main(["query", str(out), "--query", "eval", "--assignment", bad]) == 0
    assert capsys.readouterr().out.strip() == "0"
    good = _write(tmp_path / "y.txt", "1 1 1 0 1 1 1 1\n")
    assert main(["query", str(out), "--query", "eval", "--assignment", good]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["query", str(out), "--query", "eval"]) == 2


def test_equiv_exit_codes(example_cnf, order_file, tmp_path, capsys):
    out = _compile(example_cnf, order_file, tmp_path)
    # identical files -> 0
    assert main(["equiv", str(out), str(out)]) == 0
    # flip a literal in the last clause (same primal graph) -> 1
    smaller_cnf = _write(
        tmp_path / "smaller.cnf", EXAMPLE_CNF.replace("2 3 0\n", "-2 3 0\n")
    )
    smaller = tmp_path / "smaller.aomdd"
    assert (
        main(
            [
                "compile", smaller_cnf, "--order-file", order_file,
                "--out", str(smaller),
            ]
        )
        == 0
    )
    assert main(["equiv", str(out), str(smaller)]) == 1
    # chain pseudo tree -> structural mismatch -> 2
    chain = tmp_path / "chain.aomdd"
    assert (
        main(
            [
                "compile", example_cnf, "--order-file", order_file,
                "--chain", "--out", str(chain),
            ]
        )
        == 0
    )
    assert main(["equiv", str(out), str(chain)]) == 2
    capsys.readouterr()


def test_dot_deterministic(example_cnf, order_file, tmp_path, capsys):
    out = _compile(example_cnf, order_file, tmp_path)
    assert main(["dot", str(out)]) == 0
    first = capsys.readouterr().out
    assert main(["dot", str(out)]) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("digraph")


def test_mem_cap_exit_code(example_cnf, order_file, capsys):
    assert (
        main(
            [
                "compile", example_cnf, "--order-file", order_file,
                "--mem-cap", "3",
            ]
        )
        == 3
    )
    assert "cap" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    bad = _write(tmp_path / "bad.uai", "FOO 1 2 0")
    assert main(["compile", str(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    assert main(["compile", "/no/such/file.uai"]) == 2
    capsys.readouterr()


def test_prune_bcp_matches_plain(example_cnf, order_file, tmp_path):
    a = _compile(example_cnf, order_file, tmp_path, "--prune", "bcp")
    text = a.read_text()
    b = _compile(example_cnf, order_file, tmp_path, "--prune", "none")
    assert b.read_text() == text
