from klrb.cli import main

HECKE = "values=2,8,1/2,1/8;p=2;q=2"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes_and_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--hecke", HECKE, "--rank", "1")
    code2, out2, _ = run(capsys, "verify", "--hecke", HECKE, "--rank", "1")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.strip().endswith("verdict: PASS")


def test_verify_corrupt_control_exits_1(capsys):
    # the control flips Q, which only enters once sigma generators exist
    code, out, _ = run(capsys, "verify", "--hecke", HECKE, "--rank", "2",
                       "--type-a-rank", "2", "--corrupt-Q")
    assert code == 1
    assert "5.1(c)" in out and "7.1(c)" in out


def test_config_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.quiver"
    bad.write_text("[vertices]\na\n[arrows]\na => b\n")
    code, out, err = run(capsys, "verify", "--quiver", str(bad))
    assert code == 2
    assert "line 4" in err


def test_missing_quiver_exit_2(capsys):
    code, _, err = run(capsys, "gdim", "--nu", "2:1,1/2:1")
    assert code == 2


def test_gdim_report(capsys):
    code, out, _ = run(capsys, "gdim", "--hecke", HECKE, "--nu", "2:1,1/2:1")
    assert code == 0
    assert "[2,1/2] | [2,1/2] : 1 / (1-v^2)^1" in out


def test_character_cross_check(capsys):
    code, out, _ = run(capsys, "character", "--hecke", HECKE, "--nu", "2:1,1/2:1")
    assert code == 0
    assert "MATCH" in out and "MISMATCH" not in out
    assert out.strip().endswith("verdict: PASS")


def test_character_empty_nu_unit(capsys):
    code, out, _ = run(capsys, "character", "--hecke", HECKE, "--nu", "")
    assert code == 0


def test_shuffle_command(capsys):
    code, out, _ = run(capsys, "shuffle", "--hecke", HECKE, "--right", "2")
    assert code == 0
    assert "1/2,2 : 1" in out and "2,1/2 : v" in out


def test_pbw_command(capsys):
    code, out, _ = run(capsys, "pbw", "--hecke", HECKE, "--nu", "2:1,1/2:1",
                       "--samples", "6")
    assert code == 0
    assert "2 x group order 2 = 4" in out.replace("sequences ", "")
    assert out.strip().endswith("verdict: PASS")


def test_crystal_command_outputs(tmp_path, capsys):
    dot = tmp_path / "crystal.dot"
    fig = tmp_path / "crystal.png"
    code, out, _ = run(capsys, "crystal", "--hecke", HECKE, "--depth", "1",
                       "--dot", str(dot), "--fig", str(fig))
    assert code == 0
    assert "4 nodes" in out
    text = dot.read_text()
    assert text.startswith("digraph crystal {")
    assert 'label="2"' in text
    assert fig.exists() and fig.stat().st_size > 0


def test_crystal_deterministic(capsys):
    code1, out1, _ = run(capsys, "crystal", "--hecke", HECKE, "--depth", "1")
    code2, out2, _ = run(capsys, "crystal", "--hecke", HECKE, "--depth", "1")
    assert code1 == code2 == 0 and out1 == out2


def test_hecke_classification_report(capsys):
    code, out, _ = run(capsys, "hecke", "--hecke", HECKE)
    assert code == 0
    assert "X1 = [2]" in out and "T0 = [2]" in out
    assert "X1 = [1/2]" in out and "T0 = [-1/2]" in out
    assert out.strip().endswith("verdict: PASS")


def test_hecke_module_transport_roundtrip(tmp_path, capsys, window_q2, crystal_q2):
    from klrb import fmod
    M = next(w.module for w in crystal_q2.nodes if w.module.m == 1 and w.module.dim() == 2)
    mfile = tmp_path / "m.module"
    mfile.write_text(fmod.module_to_text(M))
    hfile = tmp_path / "h.hecke"
    code, out, _ = run(capsys, "hecke", "--hecke", HECKE,
                       "--module", str(mfile), "--out-module", str(hfile))
    assert code == 0
    assert "restriction compatibility" in out
    from klrb.hecke import hecke_from_text
    H = hecke_from_text(hfile.read_text())
    assert H.dim == 2


def test_hecke_missing_values_exit_2(tmp_path, capsys):
    cfg = tmp_path / "abstract.quiver"
    cfg.write_text("""
[vertices]
a
b
[theta]
a <-> b
[lambda]
a = 1
""")
    mfile = tmp_path / "m.module"
    mfile.write_text("[module]\nnu = a:1,b:1\n[block a]\ndegrees = 0\n")
    code, _, err = run(capsys, "hecke", "--quiver", str(cfg), "--family", "B",
                       "--module", str(mfile))
    assert code == 2


def test_report_written_to_file(tmp_path, capsys):
    out_file = tmp_path / "report.txt"
    code, out, _ = run(capsys, "gdim", "--hecke", HECKE, "--nu", "2:1,1/2:1",
                       "--out", str(out_file))
    assert code == 0 and out == ""
    assert "1 / (1-v^2)^1" in out_file.read_text()


def test_hecke_params_come_from_quiver_file(tmp_path, capsys):
    cfg = tmp_path / "win.quiver"
    cfg.write_text("[hecke]\nfamily = B\nvalues = 2, 8, 1/2, 1/8\np = 2\nq = 2\n")
    code, out, _ = run(capsys, "hecke", "--quiver", str(cfg))
    assert code == 0
    assert "X1 = [2]" in out and out.strip().endswith("verdict: PASS")
