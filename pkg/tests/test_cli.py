import json

import numpy as np

from pqm.cli import dump_state, load_state, main
from pqm.finiteqm import POSITION, random_state

RNG = np.random.default_rng(99)


def _write_state(path, n=6, rep=POSITION, seed=1):
    f = random_state(n, np.random.default_rng(seed), rep=rep)
    dump_state(f, str(path))
    return f


class TestStateFiles:
    def test_round_trip_bit_identical(self, tmp_path):
        p1 = tmp_path / "f.json"
        p2 = tmp_path / "g.json"
        f = _write_state(p1)
        g = load_state(str(p1))
        dump_state(g, str(p2))
        assert p1.read_bytes() == p2.read_bytes()
        assert np.array_equal(f.amplitudes, g.amplitudes)

    def test_metadata_preserved_shape(self, tmp_path):
        p = tmp_path / "f.json"
        dump_state(random_state(3, RNG), str(p), metadata={"seed": 7})
        data = json.loads(p.read_text())
        assert data["metadata"] == {"seed": 7}
        assert data["rep"] == POSITION


class TestFourierCommand:
    def test_good_matches_direct(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=12)
        out_direct = tmp_path / "d.json"
        out_good = tmp_path / "g.json"
        assert main(["fourier", "--n", "12", "--in", str(src), "--out", str(out_direct)]) == 0
        assert (
            main(
                ["fourier", "--n", "12", "--method", "good", "--in", str(src), "--out", str(out_good)]
            )
            == 0
        )
        a = load_state(str(out_direct)).amplitudes
        b = load_state(str(out_good)).amplitudes
        assert np.max(np.abs(a - b)) < 1e-10

    def test_four_applications_identity(self, tmp_path):
        src = tmp_path / "f0.json"
        f = _write_state(src, n=5)
        cur = src
        for i in range(4):
            nxt = tmp_path / f"f{i + 1}.json"
            assert main(["fourier", "--in", str(cur), "--out", str(nxt)]) == 0
            cur = nxt
        back = load_state(str(cur))
        assert back.rep == POSITION
        assert np.max(np.abs(back.amplitudes - f.amplitudes)) < 1e-10

    def test_bad_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["fourier", "--in", str(bad), "--out", str(tmp_path / "o.json")]) == 2

    def test_dimension_mismatch_exits_2(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=6)
        assert main(["fourier", "--n", "7", "--in", str(src), "--out", str(tmp_path / "o.json")]) == 2


class TestWignerCommand:
    def test_table_matches_oracle(self, tmp_path):
        src = tmp_path / "f.json"
        f = _write_state(src, n=2)
        out = tmp_path / "w.csv"
        assert main(["wigner", "--in", str(src), "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "a,b,re,im"
        assert len(lines) == 1 + 2 * 2
        for line in lines[1:]:
            a, b, re, im = line.split(",")
            assert abs(float(im)) <= 1e-12  # Wigner rows are real

    def test_weyl_emits_complex(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=3, seed=5)
        out = tmp_path / "w.csv"
        assert main(["wigner", "--kind", "weyl", "--in", str(src), "--out", str(out)]) == 0
        rows = out.read_text().strip().splitlines()[1:]
        assert any(abs(float(r.split(",")[3])) > 1e-9 for r in rows)

    def test_doubled_grid_row_count(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=4)
        out = tmp_path / "w.csv"
        assert main(["wigner", "--doubled", "--in", str(src), "--out", str(out)]) == 0
        assert len(out.read_text().strip().splitlines()) == 1 + 8 * 4

    def test_doubled_flag_ignored_for_weyl(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=4)
        out = tmp_path / "w.csv"
        assert (
            main(["wigner", "--kind", "weyl", "--doubled", "--in", str(src), "--out", str(out)])
            == 0
        )
        assert len(out.read_text().strip().splitlines()) == 1 + 4 * 4


class TestDisplaceEmbed:
    def test_displace_writes_state(self, tmp_path):
        src = tmp_path / "f.json"
        f = _write_state(src, n=4)
        out = tmp_path / "g.json"
        assert (
            main(["displace", "--in", str(src), "--alpha", "1", "--beta", "2", "--out", str(out)])
            == 0
        )
        g = load_state(str(out))
        assert abs(np.linalg.norm(g.amplitudes) - np.linalg.norm(f.amplitudes)) < 1e-12

    def test_embed_norm_preserving(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=3)
        out = tmp_path / "g.json"
        assert main(["embed", "--from", "3", "--to", "9", "--in", str(src), "--out", str(out)]) == 0
        g = load_state(str(out))
        assert g.n == 9

    def test_embed_divisibility_error(self, tmp_path):
        src = tmp_path / "f.json"
        _write_state(src, n=3)
        assert (
            main(["embed", "--from", "3", "--to", "8", "--in", str(src), "--out", str(tmp_path / "g.json")])
            == 2
        )


class TestPosetPadicCommands:
    def test_width_36(self, capsys):
        assert main(["poset", "--n", "36", "width"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out == {"n": 36, "width": 3}

    def test_topology_12(self, capsys):
        assert main(["poset", "--n", "12", "topology"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["T0"] is True and out["T1"] is False
        m, x = out["T1_witness"]
        assert x % m == 0 and m != x

    def test_partition_covers(self, capsys):
        assert main(["poset", "--n", "12", "partition"]) == 0
        out = json.loads(capsys.readouterr().out)
        covered = sorted(x for c in out["chain_partition"] for x in c)
        assert covered == [2, 3, 4, 6, 12]

    def test_crt(self, capsys):
        assert main(["padic", "crt", "--n", "12", "--mu", "7"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["components"] == [3, 1]

    def test_ord(self, capsys):
        assert main(["padic", "ord", "--p", "2", "--value", "12"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["ord"] == 2 and out["abs"] == "1/4"

    def test_expand_minus_one(self, capsys):
        assert main(["padic", "expand", "--p", "3", "--value", "-1", "--precision", "4"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["digits"] == [2, 2, 2, 2]

    def test_ostrowski(self, capsys):
        assert main(["padic", "ostrowski", "--value", "3/4"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["product"] == "1"

    def test_decompose(self, capsys):
        assert main(["padic", "decompose", "--value", "5/6"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["parts"] == {"2": "1/2", "3": "1/3"}

    def test_length_query(self, capsys):
        assert main(["poset", "--n", "36", "length"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out == {"n": 36, "length": 4}

    def test_expand_rejects_non_integral(self, capsys):
        assert main(["padic", "expand", "--p", "3", "--value", "1/3"]) == 2

    def test_missing_argument_exits_2(self, capsys):
        assert main(["padic", "crt", "--n", "12"]) == 2


class TestVerifyCommand:
    def test_single_suite_passes(self, tmp_path, capsys):
        report = tmp_path / "r.json"
        code = main(
            [
                "verify",
                "--suite",
                "numbers",
                "--suite",
                "poset",
                "--poset-limit",
                "300",
                "--json",
                str(report),
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "OK" in out
        data = json.loads(report.read_text())
        assert data["passed"] is True
        assert {c["suite"] for c in data["checks"]} == {"numbers", "poset"}

    def test_overtight_tolerance_fails(self, capsys):
        code = main(
            ["verify", "--suite", "fourier", "--samples", "2", "--tolerance", "1e-20"]
        )
        out = capsys.readouterr().out
        assert code == 1
        assert "FAIL" in out

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "pqm.cfg"
        cfg.write_text("samples = 2\nseed = 3\nposet_limit = 100\n# comment\n")
        code = main(["verify", "--suite", "poset", "--config", str(cfg)])
        assert code == 0

    def test_bad_config_exits_2(self, tmp_path):
        cfg = tmp_path / "pqm.cfg"
        cfg.write_text("not_a_key = 1\n")
        assert main(["verify", "--suite", "poset", "--config", str(cfg)]) == 2

    def test_report_deterministic(self, tmp_path):
        r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
        for r in (r1, r2):
            assert (
                main(
                    ["verify", "--suite", "hw", "--samples", "2", "--seed", "5", "--json", str(r)]
                )
                == 0
            )
        assert r1.read_bytes() == r2.read_bytes()
