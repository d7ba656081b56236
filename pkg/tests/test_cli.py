import io
import sys

import pytest

from homcount.cli import run

C6_TEXT = """\
signature E/2
structure c6 size 6
E: (0,1) (1,0) (1,2) (2,1) (2,3) (3,2) (3,4) (4,3) (4,5) (5,4) (5,0) (0,5)
end
"""

TWO_C3_TEXT = """\
signature E/2
structure two_c3 size 6
E: (0,1) (1,0) (1,2) (2,1) (2,0) (0,2) (3,4) (4,3) (4,5) (5,4) (5,3) (3,5)
end
"""

K3_TEXT = """\
signature E/2
structure k3 size 3
E: (0,1) (1,0) (0,2) (2,0) (1,2) (2,1)
end
"""

ARC_TEXT = """\
signature E/2
structure arc size 2
E: (0,1)
end
"""

TREES_TEXT = "tree chain3 size 3 parents - 0 1 end\n"
CHERRY_TEXT = "tree cherry size 3 parents - 0 0 end\n"

SPEC_TEXT = """\
treespec unary states 1 start 0
children 0: 0
end
"""

TOWER_TEXT = """\
group Z2 order 2 table 0 1 / 1 0 end
group Z4 order 4 table 0 1 2 3 / 1 2 3 0 / 2 3 0 1 / 3 0 1 2 end
group Z8 order 8 table
0 1 2 3 4 5 6 7 / 1 2 3 4 5 6 7 0 / 2 3 4 5 6 7 0 1 / 3 4 5 6 7 0 1 2 /
4 5 6 7 0 1 2 3 / 5 6 7 0 1 2 3 4 / 6 7 0 1 2 3 4 5 / 7 0 1 2 3 4 5 6
end
tower T levels Z2 Z4 Z8
connect 0 1 0 1
connect 0 1 2 3 0 1 2 3
end
"""

Z2_FAMILY_TEXT = "group Z2 order 2 table 0 1 / 1 0 end\n"


@pytest.fixture()
def files(tmp_path):
    def make(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return make


def invoke(argv, capsys):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_hom(files, capsys):
    c = files("arc.struct", ARC_TEXT)
    a = files("k3.struct", K3_TEXT)
    code, out, _ = invoke(["count", "--class", "hom", c, a], capsys)
    assert code == 0
    assert out == "6\n"


def test_count_with_witness_limit(files, capsys):
    c = files("arc.struct", ARC_TEXT)
    a = files("k3.struct", K3_TEXT)
    code, out, _ = invoke(["count", "--limit", "2", c, a], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "6"
    assert sum(1 for l in lines if l.startswith("map\t")) == 2
    assert lines[-1] == "truncated"
    code, out, _ = invoke(["count", "--limit", "10", c, a], capsys)
    assert sum(1 for l in out.split("\n") if l.startswith("map\t")) == 6
    assert "truncated" not in out


def test_count_signature_mismatch_exit_2(files, capsys):
    c = files("arc.struct", ARC_TEXT)
    other = files("other.struct", "signature R/2\nstructure x size 1\nend\n")
    code, _, err = invoke(["count", c, other], capsys)
    assert code == 2
    assert "error" in err


def test_distinguish_finds_k3_witness(files, capsys):
    a = files("c6.struct", C6_TEXT)
    b = files("2c3.struct", TWO_C3_TEXT)
    code, out, _ = invoke(["distinguish", "--budget", "3", a, b], capsys)
    assert code == 1
    assert "structure witness size 3" in out
    assert "count\tc6\t0" in out
    assert "count\ttwo_c3\t12" in out


def test_distinguish_equal_exit_0(files, capsys):
    a = files("k3.struct", K3_TEXT)
    code, out, _ = invoke(["distinguish", "--budget", "3", a, a], capsys)
    assert code == 0
    assert "profiles-equal-within-budget" in out


def test_distinguish_cap_exit_3(files, capsys, monkeypatch):
    monkeypatch.setenv("HOMCOUNT_CAP", "10")
    a = files("c6.struct", C6_TEXT)
    b = files("2c3.struct", TWO_C3_TEXT)
    code, _, err = invoke(["distinguish", "--budget", "4", a, b], capsys)
    assert code == 3
    assert "cap" in err


def test_iso(files, capsys):
    a = files("c6.struct", C6_TEXT)
    b = files("2c3.struct", TWO_C3_TEXT)
    code, out, _ = invoke(["iso", a, b], capsys)
    assert code == 0
    assert out == "false\n"
    code, out, _ = invoke(["iso", a, a], capsys)
    assert out == "true\n"


def test_profile_deterministic_tsv(files, capsys):
    a = files("k3.struct", K3_TEXT)
    code, out1, _ = invoke(["profile", "--budget", "2", a], capsys)
    assert code == 0
    code, out2, _ = invoke(["profile", "--budget", "2", a], capsys)
    assert out1 == out2
    lines = out1.strip().split("\n")
    assert len(lines) == 12  # 2 + 10 canonical tests
    assert all(len(line.split("\t")) == 2 for line in lines)


def test_mobius_output(files, capsys):
    c = files("arc.struct", ARC_TEXT)
    code, out, _ = invoke(["mobius", c], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert "element\t0\t0.1" in lines  # the collapse class
    assert "element\t1\t0|1" in lines  # the identity (top) class
    assert "hasse\t0\t1" in lines
    assert "mobius\t0\t1\t-1" in lines


def test_kernel_output(files, capsys):
    three = files(
        "three.struct", "signature E/2\nstructure n3 size 3\nend\n"
    )
    two = files("two.struct", "signature E/2\nstructure n2 size 2\nend\n")
    code, out, _ = invoke(["kernel", three, two], capsys)
    assert code == 0
    assert out.startswith("partition\tblocks\tgeneric\n")
    assert out.strip().endswith("total\t\t8")


def test_stirling(capsys):
    code, out, _ = invoke(["stirling", "4", "2"], capsys)
    assert code == 0
    assert out == "7\n"


def test_treewidth(files, capsys):
    a = files("k3.struct", K3_TEXT)
    code, out, _ = invoke(["treewidth", a], capsys)
    assert code == 0
    assert out == "2\n"


def test_ck_hom_profile(files, capsys):
    a = files("c6.struct", C6_TEXT)
    b = files("2c3.struct", TWO_C3_TEXT)
    code, out, _ = invoke(["ck", "--k", "3", "--budget", "3", a, b], capsys)
    assert code == 1
    assert "structure witness size 3" in out
    code, out, _ = invoke(
        ["ck", "--k", "2", "--budget", "4", "--undirected", a, b], capsys
    )
    assert code == 0
    assert "equivalent-within-budget" in out


def test_ck_wl_method(files, capsys):
    a = files("c6.struct", C6_TEXT)
    b = files("2c3.struct", TWO_C3_TEXT)
    code, out, _ = invoke(["ck", "--k", "2", "--method", "wl", a, b], capsys)
    assert code == 0
    assert "equivalent" in out
    code, out, _ = invoke(["ck", "--k", "3", "--method", "wl", a, b], capsys)
    assert code == 1


def test_trees_count(files, capsys):
    chain = files("chain.tree", TREES_TEXT)
    cherry = files("cherry.tree", CHERRY_TEXT)
    # depth is preserved, so the 3-chain cannot land in the 2-level cherry
    code, out, _ = invoke(["trees", "count", chain, cherry], capsys)
    assert code == 0
    assert out == "0\n"
    code, out, _ = invoke(["trees", "count", cherry, chain], capsys)
    assert out == "1\n"


def test_trees_distinguish(files, capsys):
    p = files("chain.tree", TREES_TEXT)
    q = files("cherry.tree", CHERRY_TEXT)
    code, out, _ = invoke(["trees", "distinguish", "--budget", "3", p, q], capsys)
    assert code == 1
    assert "tree witness size 2 parents - 0 end" in out
    assert "count\tchain3\t1" in out
    assert "count\tcherry\t2" in out


def test_trees_truncate(files, capsys):
    spec = files("unary.spec", SPEC_TEXT)
    code, out, _ = invoke(["trees", "truncate", "--depth", "3", spec], capsys)
    assert code == 0
    assert out == "tree unary size 4 parents - 0 1 2 end\n"


def test_tower_count(files, capsys):
    t = files("t.twr", TOWER_TEXT)
    fam = files("fam.grp", Z2_FAMILY_TEXT)
    code, out, _ = invoke(["tower", "count", t, fam], capsys)
    assert code == 0
    assert out == "2\tstabilized\n"


def test_tower_distinguish_and_surjections(files, capsys):
    t1 = files("t1.twr", TOWER_TEXT)
    v4_ext = """\
group V4 order 4 table 0 1 2 3 / 1 0 3 2 / 2 3 0 1 / 3 2 1 0 end
group V8 order 8 table
0 1 2 3 4 5 6 7 / 1 0 3 2 5 4 7 6 / 2 3 0 1 6 7 4 5 / 3 2 1 0 7 6 5 4 /
4 5 6 7 0 1 2 3 / 5 4 7 6 1 0 3 2 / 6 7 4 5 2 3 0 1 / 7 6 5 4 3 2 1 0
end
tower W levels V4 V8
connect 0 1 2 3 0 1 2 3
end
"""
    t2 = files("t2.twr", v4_ext)
    fam = files("fam.grp", Z2_FAMILY_TEXT)
    code, out, err = invoke(
        ["tower", "distinguish", "--family", fam, t1, t2], capsys
    )
    assert code == 1
    assert "witness\tZ2" in out
    assert "count\tT\t2" in out
    assert "count\tW\t8" in out
    # W's level counts step 4 -> 8, so Z2 is flagged as unstabilized
    assert "not stabilized" in err

    v4fam = files("v4fam.grp",
                  "group V4 order 4 table 0 1 2 3 / 1 0 3 2 / 2 3 0 1 / 3 2 1 0 end\n")
    code, out, _ = invoke(["tower", "surjections", "--family", v4fam, t1], capsys)
    assert code == 0
    assert out == "V4\tfalse\n"
    code, out, _ = invoke(["tower", "surjections", "--family", v4fam, t2], capsys)
    assert out == "V4\ttrue\n"


def test_parse_error_exit_2(files, capsys):
    bad = files("bad.struct", "signature E/2\nstructure a size 2\nE: (0,5)\nend\n")
    code, _, err = invoke(["treewidth", bad], capsys)
    assert code == 2
    assert "line 3" in err


def test_usage_error_exit_2(capsys):
    assert run(["nonsense"]) == 2


def test_byte_identical_reruns(files, capsys):
    a = files("c6.struct", C6_TEXT)
    b = files("2c3.struct", TWO_C3_TEXT)
    outs = []
    for _ in range(2):
        code, out, _ = invoke(["distinguish", "--budget", "3", a, b], capsys)
        outs.append((code, out))
    assert outs[0] == outs[1]


def test_selftest_quick(capsys):
    code, out, _ = invoke(["selftest", "--level", "quick"], capsys)
    assert code == 0
    lines = [l for l in out.strip().split("\n") if l]
    assert len(lines) == 8
    assert all(line.startswith("PASS") for line in lines)
