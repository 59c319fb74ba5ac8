import filecmp

import numpy as np
import pytest

from mlcocluster import netio
from mlcocluster.cli import main


@pytest.fixture
def sim(tmp_path):
    out = tmp_path / "sim"
    args = ["simulate", "--nr", "10", "--nc", "12", "--kr", "2", "--kc", "3", "--layers", "2", "--rho", "0.5", "--seed", "7"]
    assert main([*args, "--out", str(out)]) == 0
    return out, args


def test_simulate_round_trip(sim):
    out, _ = sim
    net = netio.load_multiplex_edgelist(out / "network.edges")
    assert (net.n_r, net.n_c, net.L) == (10, 12, 2)
    r, c = netio.load_labels(out / "truth.csv", 2, 3)
    assert r.size == 10 and c.size == 12


def test_simulate_deterministic(sim, tmp_path):
    out, args = sim
    again = tmp_path / "again"
    main([*args, "--out", str(again)])
    for name in ("network.edges", "truth.csv", "params.json"):
        assert filecmp.cmp(out / name, again / name, shallow=False)


def test_simulate_bad_rho(tmp_path, capsys):
    code = main(["simulate", "--nr", "5", "--nc", "5", "--layers", "1", "--rho", "1.5", "--out", str(tmp_path)])
    assert code != 0
    assert "mlcocluster: error:" in capsys.readouterr().err


def test_detect_single_method(sim, tmp_path):
    out, _ = sim
    res = tmp_path / "res"
    code = main(["detect", "--network", str(out / "network.edges"), "--kr", "2", "--kc", "3", "--method", "ncdsos", "--out", str(res)])
    assert code == 0
    lines = (res / "labels_NcDSoS.csv").read_text().splitlines()
    assert len(lines) == 1 + 10 + 12


def test_detect_all(sim, tmp_path):
    out, _ = sim
    res = tmp_path / "res"
    main(["detect", "--network", str(out / "network.edges"), "--kr", "2", "--kc", "3", "--method", "all", "--out", str(res)])
    assert sorted(p.name for p in res.iterdir()) == sorted(
        f"labels_{m}.csv" for m in ("NcDSoS", "NcSoS", "NcSum", "Sum", "SoG", "DSoG")
    )


def test_detect_oracle_recovers_truth(tmp_path, capsys):
    out = tmp_path / "sim"
    main(["simulate", "--nr", "30", "--nc", "40", "--layers", "3", "--rho", "0.8", "--seed", "3", "--out", str(out)])
    res = tmp_path / "res"
    assert main(["detect", "--oracle", str(out / "params.json"), "--out", str(res)]) == 0
    capsys.readouterr()
    main(["eval", "--truth", str(out / "truth.csv"), "--est", str(res / "labels_NcDSoS.csv"), "--kr", "2", "--kc", "3"])
    text = capsys.readouterr().out
    assert "clustering_error=0\n" in text


def test_eval_identical(sim, capsys):
    out, _ = sim
    truth = str(out / "truth.csv")
    assert main(["eval", "--truth", truth, "--est", truth]) == 0
    text = capsys.readouterr().out
    assert "nmi=1\n" in text and "ari=1\n" in text


def test_degrees(sim, tmp_path):
    out, _ = sim
    path = tmp_path / "deg.csv"
    main(["degrees", "--network", str(out / "network.edges"), "--output", str(path)])
    net = netio.load_multiplex_edgelist(out / "network.edges")
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    assert sum(int(r[2]) for r in rows if r[2]) == net.edge_count()


def test_bench_repeatable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["bench", "--preset", "exp3-small", "--replicates", "2", "--seed", "4"]
    assert main([*base, "--output", str(a)]) == 0
    main([*base, "--output", str(b), "--threads", "2"])
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1 + 2 * 6 * 4


def test_ksweep_and_pairwise(tmp_path, capsys):
    path = tmp_path / "sq.edges"
    rng = np.random.default_rng(0)
    with open(path, "w") as fh:
        for l, i, j in np.argwhere(rng.random((2, 15, 15)) < 0.3):
            fh.write(f"{l + 1} {i + 1} {j + 1}\n")
    assert main(["ksweep", "--network", str(path), "--kmin", "2", "--kmax", "4"]) == 0
    assert "best K by NMI (NcDSoS):" in capsys.readouterr().out
    assert main(["pairwise-nmi", "--network", str(path), "--kr", "2", "--kc", "2", "--output", str(tmp_path / "pw")]) == 0
    assert (tmp_path / "pw" / "pairwise_nmi_row.csv").exists()


def test_unknown_method(sim, capsys):
    out, _ = sim
    code = main(["detect", "--network", str(out / "network.edges"), "--kr", "2", "--kc", "3", "--method", "louvain"])
    assert code == 2
    assert "NcDSoS" in capsys.readouterr().err


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MLCOCLUSTER_SEED", "7")
    out = tmp_path / "env"
    main(["simulate", "--nr", "10", "--nc", "12", "--kr", "2", "--kc", "3", "--layers", "2", "--rho", "0.5", "--out", str(out)])
    ref = tmp_path / "ref"
    main(["simulate", "--nr", "10", "--nc", "12", "--kr", "2", "--kc", "3", "--layers", "2", "--rho", "0.5", "--seed", "7", "--out", str(ref)])
    assert filecmp.cmp(out / "network.edges", ref / "network.edges", shallow=False)
