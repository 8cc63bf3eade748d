import subprocess
import sys

import pytest

from cologne.cli import main


@pytest.fixture
def files(tmp_path):
    (tmp_path / "path.txt").write_text("0 1\n1 2\n")
    (tmp_path / "tri.txt").write_text("0 1\n1 2\n2 0\n")
    (tmp_path / "star.txt").write_text("c l1\nc l2\nc l3\n")
    return tmp_path


def test_embed_shape_and_determinism(files):
    out1, out2 = files / "a.tsv", files / "b.tsv"
    args = ["embed", "--graph", str(files / "path.txt"), "--method", "l0", "--k", "2", "--dim", "25"]
    assert main(args + ["--output", str(out1)]) == 0
    assert main(args + ["--output", str(out2)]) == 0
    lines = out1.read_text().splitlines()
    assert lines[0].startswith("#cologne") and len(lines) == 4
    assert all(len(line.split("\t")) == 26 for line in lines[1:])
    assert out1.read_bytes() == out2.read_bytes()


def test_embed_missing_graph(files, capsys):
    assert main(["embed", "--graph", str(files / "nope.txt"), "--k", "1"]) != 0
    assert "error" in capsys.readouterr().err


def test_embed_with_attributes_and_vocab(files):
    (files / "attrs.txt").write_text("l1\tred\nl2\tred,blue:0.5\n")
    out = files / "e.tsv"
    assert main(["embed", "--graph", str(files / "star.txt"), "--k", "1", "--dim", "5",
                 "--attributes", str(files / "attrs.txt"), "--output", str(out),
                 "--vocab", str(files / "vocab.txt")]) == 0
    assert (files / "vocab.txt").read_text().split() == ["c", "l1", "l2", "l3"]
    tokens = {t for line in out.read_text().splitlines()[1:] for t in line.split("\t")[1:]}
    assert tokens <= {"red", "blue", "c", "l3"}


def test_similarity_pairs(files, capsys):
    (files / "pairs.txt").write_text("l1 l1\nl1 l2\n")
    assert main(["similarity", "--graph", str(files / "star.txt"), "--k", "1", "--dim", "2000",
                 "--pairs", str(files / "pairs.txt"), "--exact"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert rows[0] == ["u", "v", "collision", "exact"]
    assert float(rows[1][2]) == 1.0
    assert abs(float(rows[2][2]) - 1 / 3) <= 0.05
    assert rows[2][3] == "0.3333"


def test_similarity_from_embedding(files, capsys):
    emb = files / "e.tsv"
    main(["embed", "--graph", str(files / "tri.txt"), "--k", "1", "--output", str(emb)])
    assert main(["similarity", "--embedding", str(emb), "--all-pairs"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 4 and all(line.split("\t")[2] == "1" for line in out[1:])


def test_similarity_malformed_pairs(files, capsys):
    (files / "pairs.txt").write_text("l1 l2\nl1\n")
    assert main(["similarity", "--graph", str(files / "star.txt"), "--k", "1",
                 "--pairs", str(files / "pairs.txt")]) != 0
    assert "line 2" in capsys.readouterr().err


def test_similarity_exact_guard(files, capsys):
    assert main(["similarity", "--graph", str(files / "star.txt"), "--k", "1", "--all-pairs",
                 "--exact", "--max-nodes", "2"]) != 0
    assert "drop --exact" in capsys.readouterr().err


def test_oracle_freq(files, capsys):
    assert main(["oracle", "--graph", str(files / "tri.txt"), "--k", "2", "--freq"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "0: 0=3,1=2,2=2"
    assert main(["oracle", "--graph", str(files / "tri.txt"), "--k", "0", "--freq", "--format", "tsv"]) == 0
    assert capsys.readouterr().out.splitlines() == ["0\t0\t1", "1\t1\t1", "2\t2\t1"]


def test_oracle_other_tables(files, capsys):
    assert main(["oracle", "--graph", str(files / "star.txt"), "--k", "1", "--similarity", "jaccard"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "u\tv\tjaccard" and "l1\tl2\t0.333333" in out
    assert main(["oracle", "--graph", str(files / "star.txt"), "--k", "1", "--distribution", "c",
                 "--trials", "4000"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert all(abs(float(r.split("\t")[1]) - 0.25) < 0.03 for r in rows)


def test_oracle_oversized(files):
    assert main(["oracle", "--graph", str(files / "tri.txt"), "--k", "1", "--freq", "--max-nodes", "2"]) != 0


def test_bench_schema(files, capsys):
    out = files / "bench.tsv"
    assert main(["bench", "--random", "200", "600", "--k", "0", "--dims", "2,4", "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "method\tn\tm\tk\td\tseconds\tedges_per_second"
    assert len(lines) == 1 + 4 * 2


def test_unknown_flag_rejected(files):
    with pytest.raises(SystemExit) as err:
        main(["embed", "--graph", str(files / "tri.txt"), "--k", "1", "--bogus"])
    assert err.value.code != 0


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "cologne", "oracle", "--graph", str(files / "path.txt"),
                          "--k", "2", "--freq"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[1] == "1: 0=1,1=3,2=1"
