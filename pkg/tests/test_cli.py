import random
import shutil
import subprocess
import sys

import pytest

from cbwt.cli import main
from cbwt.oracle import brute_count


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return _run


@pytest.fixture
def source(tmp_path):
    path = tmp_path / "texts.txt"
    path.write_text("5 1 2\n\n5 3 6 3\n4 4 7 8\n")
    return path


@pytest.fixture
def index(run, source, tmp_path):
    path = tmp_path / "texts.cbwt"
    code, out, err = run("build", str(source), str(path))
    assert code == 0 and out == "indexed d=3 n=11\n", (code, out, err)
    return path


def test_build_reports_sizes(index):
    assert index.exists()


def test_count(run, index):
    assert run("count", str(index), "--pattern", "5 6 3 4") == (0, "2\n", "")
    assert run("count", str(index), "--pattern", "6 4 3")[:2] == (0, "0\n")
    assert run("count", str(index), "--pattern", "")[:2] == (0, "11\n")


def test_queries_leave_file_unchanged(run, index):
    before = index.read_bytes()
    run("count", str(index), "--pattern", "3 7 5")
    run("locate", str(index), "--pattern", "3 7 5")
    assert index.read_bytes() == before


def test_locate(run, index):
    code, out, err = run("locate", str(index), "--pattern", "5 6 3 4")
    assert (code, out) == (0, "1:3\n3:3\n")
    code, out, err = run("locate", str(index), "--pattern", "6 4 3")
    assert (code, out) == (0, "")
    code, out, err = run("locate", str(index), "--pattern", "")
    assert code == 0 and len(out.splitlines()) == 11


def test_round_trip_is_byte_identical(run, index, tmp_path):
    from cbwt.core import CbwtIndex
    blob = index.read_text()
    assert CbwtIndex.deserialize(blob).serialize() == blob


def test_verify_ok(run, index, source):
    assert run("verify", str(index), "--source", str(source))[:2] == (0, "ok\n")


def test_verify_reports_first_flipped_token(run, index, source, tmp_path):
    lines = index.read_text().splitlines(keepends=True)
    row = lines[6].split()  # the back-symbol array line
    row[2] = "9" if row[2] != "9" else "8"
    bad = tmp_path / "bad.cbwt"
    bad.write_text("".join(lines[:6]) + " ".join(row) + "\n"
                   + "".join(lines[7:]))
    code, out, err = run("verify", str(bad), "--source", str(source))
    assert code == 1
    assert "LT" in out and "position 3" in out


def test_verify_rejects_large_inputs(run, tmp_path):
    rng = random.Random(5)
    big_src = tmp_path / "big.txt"
    big_src.write_text(" ".join(str(rng.randrange(9)) for _ in range(80))
                       + "\n")
    big_idx = tmp_path / "big.cbwt"
    assert run("build", str(big_src), str(big_idx))[0] == 0
    code, out, err = run("verify", str(big_idx), "--source", str(big_src))
    assert code == 4
    assert "too large for oracle verification" in err


def test_verify_source_shape_mismatch(run, index, tmp_path):
    other = tmp_path / "other.txt"
    other.write_text("5 1 2\n")
    code, out, err = run("verify", str(index), "--source", str(other))
    assert code == 1 and "mismatch" in out


def test_add_equals_fresh_build(run, index, source, tmp_path):
    code, out, err = run("add", str(index), "--text", "7 3 1 5 2")
    assert (code, out) == (0, "indexed d=4 n=16\n")
    src4 = tmp_path / "texts4.txt"
    src4.write_text(source.read_text() + "7 3 1 5 2\n")
    idx4 = tmp_path / "texts4.cbwt"
    assert run("build", str(src4), str(idx4))[0] == 0
    # header, per-text lines, and the three array lines must be identical;
    # sample rows may differ in walk origin, so both must pass verification
    assert index.read_text().splitlines()[:9] == \
        idx4.read_text().splitlines()[:9]
    assert run("verify", str(index), "--source", str(src4))[:2] == (0, "ok\n")
    for pat in ("", "5 6 3 4", "7 3 1 5 2", "3", "4 4"):
        assert (run("count", str(index), "--pattern", pat)
                == run("count", str(idx4), "--pattern", pat))
        assert (run("locate", str(index), "--pattern", pat)
                == run("locate", str(idx4), "--pattern", pat))


def test_add_random_equivalence(run, tmp_path):
    rng = random.Random(20260814)
    for _ in range(10):
        d = rng.randrange(1, 4)
        texts = [[rng.randrange(5) for _ in range(rng.randrange(1, 7))]
                 for _ in range(d)]
        extra = [rng.randrange(5) for _ in range(rng.randrange(1, 7))]
        s1 = tmp_path / "r1.txt"
        s1.write_text("\n".join(" ".join(map(str, t)) for t in texts) + "\n")
        i1 = tmp_path / "r1.cbwt"
        assert run("build", str(s1), str(i1))[0] == 0
        assert run("add", str(i1), "--text", " ".join(map(str, extra)))[0] == 0
        s2 = tmp_path / "r2.txt"
        s2.write_text("\n".join(" ".join(map(str, t))
                                for t in texts + [extra]) + "\n")
        i2 = tmp_path / "r2.cbwt"
        assert run("build", str(s2), str(i2))[0] == 0
        for _ in range(8):
            pat = " ".join(str(rng.randrange(5))
                           for _ in range(rng.randrange(0, 6)))
            assert (run("count", str(i1), "--pattern", pat)
                    == run("count", str(i2), "--pattern", pat)), (texts, extra)
            assert (run("locate", str(i1), "--pattern", pat)
                    == run("locate", str(i2), "--pattern", pat)), (texts, extra)
        assert run("verify", str(i1), "--source", str(s2))[0] == 0


def test_add_empty_text(run, index):
    code, out, err = run("add", str(index), "--text", "")
    assert code == 2 and "empty text" in err


def test_single_symbol_file(run, tmp_path):
    src = tmp_path / "seven.txt"
    src.write_text("7\n")
    out_path = tmp_path / "seven.cbwt"
    assert run("build", str(src), str(out_path))[:2] == (0, "indexed d=1 n=1\n")
    assert run("count", str(out_path), "--pattern", "3")[:2] == (0, "1\n")


def test_chars_mode(run, tmp_path):
    src = tmp_path / "chars.txt"
    src.write_text("baca\nbc\n")
    idx = tmp_path / "chars.cbwt"
    assert run("build", str(src), str(idx), "--chars")[:2] == \
        (0, "indexed d=2 n=6\n")
    expected = brute_count([[98, 97, 99, 97], [98, 99]], [99, 97])
    assert run("count", str(idx), "--pattern", "ca", "--chars")[:2] == \
        (0, f"{expected}\n")
    assert run("verify", str(idx), "--source", str(src), "--chars")[0] == 0


def test_parse_error_positions(run, tmp_path):
    src = tmp_path / "bad.txt"
    out_path = tmp_path / "bad.cbwt"
    src.write_text("1 2\n3 x4 5\n")
    code, out, err = run("build", str(src), str(out_path))
    assert code == 2 and ":2:3:" in err
    src.write_text("1 2147483648\n")
    code, out, err = run("build", str(src), str(out_path))
    assert code == 2 and ":1:3:" in err and "out of range" in err
    src.write_text("1 -2\n")
    code, out, err = run("build", str(src), str(out_path))
    assert code == 2 and ":1:3:" in err
    src.write_text("2147483647\n")
    assert run("build", str(src), str(out_path))[0] == 0


def test_empty_file_is_an_error(run, tmp_path):
    src = tmp_path / "empty.txt"
    src.write_text("\n  \n")
    code, out, err = run("build", str(src), str(tmp_path / "x.cbwt"))
    assert code == 2 and "no texts" in err


def test_missing_files_exit_3(run, tmp_path):
    missing = tmp_path / "nope.txt"
    assert run("build", str(missing), str(tmp_path / "x.cbwt"))[0] == 3
    assert run("count", str(tmp_path / "nope.cbwt"), "--pattern", "1")[0] == 3
    assert run("verify", str(tmp_path / "nope.cbwt"),
               "--source", str(missing))[0] == 3


def test_malformed_index_exit_2(run, tmp_path):
    broken = tmp_path / "mal.cbwt"
    broken.write_text("WHAT 9\n")
    assert run("count", str(broken), "--pattern", "1")[0] == 2


def test_bad_pattern_exit_2(run, index):
    assert run("count", str(index), "--pattern", "3 7x")[0] == 2
    assert run("locate", str(index), "--pattern", "-1")[0] == 2


def test_locate_without_samples_exit_2(run, tmp_path):
    from cbwt.builder import build_collection
    blob = build_collection([[5, 1, 2]]).serialize()
    bare = tmp_path / "bare.cbwt"
    bare.write_text(blob)
    code, out, err = run("locate", str(bare), "--pattern", "5")
    assert code == 2 and "no samples" in err


def test_sample_rate_flag(run, source, tmp_path):
    for rate in (1, 2, 11, 40):
        idx = tmp_path / f"rate{rate}.cbwt"
        assert run("build", str(source), str(idx),
                   "--sample-rate", str(rate))[0] == 0
        assert run("locate", str(idx), "--pattern", "5 6 3 4")[:2] == \
            (0, "1:3\n3:3\n")
    assert run("build", str(source), str(tmp_path / "r0.cbwt"),
               "--sample-rate", "0")[0] == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["count"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_entry_point(source, tmp_path):
    exe = shutil.which("cbwt")
    argv = [exe] if exe else [sys.executable, "-m", "cbwt.cli"]
    idx = tmp_path / "cli.cbwt"
    done = subprocess.run(argv + ["build", str(source), str(idx)],
                          capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout == "indexed d=3 n=11\n"
    done = subprocess.run(argv + ["count", str(idx), "--pattern", "5 6 3 4"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout == "2\n"
