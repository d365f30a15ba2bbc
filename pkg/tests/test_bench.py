import pytest

from simdmod.bench import checks, cli, goldens, harness, selftest

import oracles


def test_golden_examples_parse_and_verify():
    text = "# comment\nmul_mod 07 3 05 03 -> 01\n\nadd_mod 07 3 00 00 -> 00  # trailing\nmont_mul 07 3 05 02 -> 06\n"
    report = goldens.verify_text(text)
    assert report.checked == 3 and report.ok


def test_golden_mismatch_reports_line():
    report = goldens.verify_text("mul_mod 07 3 05 03 -> 02\n")
    assert not report.ok and report.mismatches[0].startswith("line 1")


def test_golden_parse_error_has_line_number():
    with pytest.raises(goldens.GoldenParseError) as exc:
        goldens.parse("add_mod 07 3 00 00 -> 00\nadd_mod 07 3 zz 00 -> 00\n")
    assert exc.value.lineno == 2


def test_golden_dump_is_deterministic_and_correct(tmp_path):
    path = tmp_path / "g.txt"
    count = goldens.dump(path)
    assert count > 300
    assert goldens.verify(path).ok
    text = path.read_text()
    goldens.dump(path)
    assert path.read_text() == text
    # values agree with plain integer arithmetic as well as with the library
    for g in goldens.parse(text):
        n = goldens.word_size(g.op, g.m)
        want = {
            "add_mod": (g.x + g.y) % g.p,
            "sub_mod": (g.x - g.y) % g.p,
            "neg_mod": -g.x % g.p,
            "mont_mul": oracles.mont_mul(g.x, g.y, g.p, n) if g.p % 2 else None,
        }.get(g.op, g.x * g.y % g.p)
        assert g.z == want, g


def test_golden_cli(tmp_path, capsys):
    path = tmp_path / "g.txt"
    assert cli.main(["goldens", "dump", str(path)]) == 0
    assert cli.main(["goldens", "verify", str(path)]) == 0
    lines = path.read_text().splitlines()
    lines[5] = lines[5][:-2] + ("00" if not lines[5].endswith("00") else "01")
    path.write_text("\n".join(lines))
    assert cli.main(["goldens", "verify", str(path)]) == 1
    assert cli.main(["goldens", "verify", str(tmp_path / "missing.txt")]) == 1


def test_bench_single_row(capsys):
    assert cli.main(["bench", "--op", "add_mod", "--lanes", "32", "--m", "31", "--strategy", "barrett", "--reps", "3"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == harness.CSV_HEADER
    assert len(out) == 2
    fields = out[1].split(",")
    assert fields[:5] == ["add_mod", "barrett", "32", "31", "1024"]
    assert float(fields[5]) > 0 and float(fields[6]) > 0


def test_bench_usage_error(capsys):
    assert cli.main(["bench", "--op", "mul_mod", "--lanes", "8", "--m", "7", "--strategy", "barrett_half"]) == 1
    assert "barrett_half needs m <=" in capsys.readouterr().err


def test_bench_fft_sizes(capsys):
    assert cli.main(["bench", "--op", "fft", "--p", "469762049", "--sizes", "2^8..2^10", "--reps", "2"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert [r.split(",")[4] for r in rows] == ["256", "512", "1024"]


def test_bench_table_shape(capsys):
    assert cli.main(["bench", "--table", "mod-sum", "--reps", "2", "--scalar-reps", "1"]) == 0
    captured = capsys.readouterr()
    rows = captured.out.strip().splitlines()[1:]
    assert len(rows) == 16  # 8 columns x (scalar, vector)
    assert "8/7" in captured.err and "64/64" in captured.err and "speedup barrett" in captured.err


def test_parse_sizes():
    assert cli.parse_sizes("2^8..2^10") == [256, 512, 1024]
    assert cli.parse_sizes("16,2^5") == [16, 32]


def test_selftest_passes_small_scope():
    results = selftest.run("ntt", budget=30, report=lambda line: None)
    assert results and all(r.passed for r in results)


def test_selftest_catches_mutation():
    lines = []
    results = selftest.run("modcore", budget=5, mutate="q-off-by-one", report=lines.append)
    assert any(not r.passed for r in results)
    assert any("counterexample" in line for line in lines)


def test_miller_rabin():
    small = [n for n in range(200) if checks.is_prime(n)]
    assert small == [n for n in range(2, 200) if all(n % d for d in range(2, n))]
    assert checks.is_prime(469762049) and not checks.is_prime(469762049 * 3)
