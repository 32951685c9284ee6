import hashlib
import random
import subprocess
import sys

import pytest

from cpdh import dh
from cpdh.cli import main
from cpdh.group import scalar_mul


def run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    fields = dict(line.split(": ", 1) for line in out.splitlines() if ": " in line)
    return rc, fields, err


@pytest.fixture
def toy_file(tmp_path, capsys):
    path = tmp_path / "toy.params"
    rc, _, _ = run(capsys, "params", "--p", 131, "--c1", 13, "--c2", 18, "--c3", 73,
                   "--g", "[126,16,1]", "--out", path)
    assert rc == 0
    return path


def test_params_toy(capsys):
    rc, f, _ = run(capsys, "params", "--p", 131, "--c1", 13, "--c2", 18, "--c3", 73)
    assert rc == 0
    assert f["ell"] == "17293" and f["ell_prime"] == "true"


def test_params_bad_p(capsys):
    rc, f, err = run(capsys, "params", "--p", 4)
    assert rc == 2 and not f and "error" in err


def test_params_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "params", "--p", 1009, "--seed", 7, "--out", a)[0] == 0
    assert run(capsys, "params", "--p", 1009, "--seed", 7, "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_params_reducible_rejected(capsys):
    assert run(capsys, "params", "--p", 7, "--c1", 2, "--c2", 6, "--c3", 2)[0] == 2


def test_dh_local_toy(toy_file, capsys):
    rc, f, _ = run(capsys, "dh", "--params", toy_file, "--secret", 2, "--peer-secret", 5)
    assert rc == 0
    assert f["shared_a"] == f["shared_b"] == "[86,120,1]"
    assert f["digest_a"] == f["digest_b"] == hashlib.sha256(b"[86,120,1]").hexdigest()
    assert f["match"] == "true"


def test_dh_local_seeded(toy_file, capsys):
    a = run(capsys, "dh", "--params", toy_file, "--seed", 3)
    b = run(capsys, "dh", "--params", toy_file, "--seed", 3)
    assert a == b and a[0] == 0


@pytest.mark.parametrize("share", ["[0,0,0]", "[131,5,1]", "[1,0,0]", "CPDH1 SHARE [2,4,2]", "nonsense"])
def test_dh_tampered_share(toy_file, tmp_path, capsys, share):
    path = tmp_path / "share"
    path.write_text(share + "\n")
    rc, _, err = run(capsys, "dh", "--params", toy_file, "--secret", 2, "--peer-share", path)
    assert rc == 2 and "error" in err


def test_dh_peer_share_file(toy_file, tmp_path, capsys):
    path = tmp_path / "share"
    path.write_text("CPDH1 SHARE [11,15,1]\n")  # [3]g
    rc, f, _ = run(capsys, "dh", "--params", toy_file, "--secret", 2, "--peer-share", path)
    assert rc == 0 and f["shared_a"] == "[72,62,1]"  # [6]g


def test_dh_listen_connect(toy_file, capsys):
    proc = subprocess.Popen(
        [sys.executable, "-m", "cpdh", "dh", "--params", str(toy_file), "--mode", "listen", "--secret", "2"],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
    )
    try:
        port = proc.stdout.readline().split(": ")[1].strip()
        rc, f, _ = run(capsys, "dh", "--mode", "connect", "--port", port, "--secret", 5)
        out, _ = proc.communicate(timeout=10)
    finally:
        proc.kill()
    assert rc == 0 and proc.returncode == 0
    assert f["shared"] == "[86,120,1]"
    assert f"digest: {f['digest']}" in out


def test_dh_connect_refused(capsys):
    import socket

    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    assert run(capsys, "dh", "--mode", "connect", "--port", port, "--timeout", 1)[0] == 4


@pytest.mark.parametrize("method", ["brute", "bsgs", "ph", "ext"])
def test_dlog_toy(toy_file, capsys, method):
    rc, f, _ = run(capsys, "dlog", "--params", toy_file, "--target", "[86,120,1]", "--method", method)
    assert rc == 0 and f["n"] == "10"
    rc, f, _ = run(capsys, "dlog", "--params", toy_file, "--base", "[126,16,1]",
                   "--target", "[126,16,1]", "--method", method)
    assert f["n"] == "1"


def test_dlog_roundtrip_1009(tmp_path, capsys):
    path = tmp_path / "p1009"
    run(capsys, "params", "--p", 1009, "--seed", 1, "--out", path)
    s = dh.load_params(path.read_text())
    n = random.Random(2).randrange(1, s.order.ell)
    target = scalar_mul(s.cubic, n, s.generator).encode()
    for method in ("bsgs", "ph", "ext"):
        rc, f, _ = run(capsys, "dlog", "--params", path, "--target", target, "--method", method)
        assert rc == 0 and int(f["n"]) == n


def test_dlog_brute_cap(toy_file, capsys):
    rc, _, err = run(capsys, "dlog", "--params", toy_file, "--target", "[86,120,1]",
                     "--method", "brute", "--cap", 5)
    assert rc == 2 and "no n" in err
    rc, _, _ = run(capsys, "dlog", "--params", toy_file, "--target", "[86,120,1]",
                   "--method", "brute", "--cap", 10**9)
    assert rc == 3


def test_count(capsys):
    rc, f, _ = run(capsys, "count", "--p", 131, "--c1", 13, "--c2", 18, "--c3", 73)
    assert rc == 0 and f["curve_points"] == "0" and f["verdict"] == "PASS"
    rc, f, _ = run(capsys, "count", "--p", 7, "--c1", 2, "--c2", 6, "--c3", 2)
    assert rc == 0 and int(f["curve_points"]) in {9, 15, 21, 8} and f["verdict"] == "PASS"
    assert run(capsys, "count", "--p", 20011, "--c1", 1, "--c2", 1, "--c3", 1)[0] == 3
    assert run(capsys, "count", "--p", 7)[0] == 2


def test_bench(toy_file, capsys):
    rc, f, _ = run(capsys, "bench", "--params", toy_file, "--iters", 1000)
    assert rc == 0
    assert float(f["adds_per_op"]) <= 10 and float(f["muls_per_op"]) <= 15
    rc, f, _ = run(capsys, "bench", "--params", toy_file, "--iters", 0)
    assert f["total_adds"] == f["total_muls"] == "0"


@pytest.mark.slow
def test_bench_64bit_million(capsys):
    p = 18446744073709551557  # largest prime below 2^64
    rc, f, _ = run(capsys, "bench", "--p", p, "--iters", 10**6, "--seed", 1)
    assert rc == 0 and float(f["ops_per_second"]) > 0


def test_ring_order(capsys):
    rc, f, _ = run(capsys, "ring", "order", "--p", 5, "--q", 7, "--seed", 1)
    assert rc == 0 and f["order"] == "1767" and f["cyclic"] == "true"
    rc, f, _ = run(capsys, "ring", "order", "--p", 13, "--q", 61, "--seed", 1)
    assert f["cyclic"] == "false" and f["cyclic_subgroup_order"] == "230763" and f["d"] == "3"
    assert run(capsys, "ring", "order", "--p", 5, "--q", 7, "--c1", 0, "--c2", 0, "--c3", 0)[0] == 2


def test_ring_params_and_dh(tmp_path, capsys):
    path = tmp_path / "ring.params"
    assert run(capsys, "ring", "params", "--p", 5, "--q", 7, "--seed", 4, "--out", path)[0] == 0
    a = run(capsys, "ring", "dh", "--params", path, "--seed", 9)
    b = run(capsys, "ring", "dh", "--params", path, "--seed", 9)
    assert a == b
    rc, f, _ = a
    assert rc == 0 and f["digest_a"] == f["digest_b"] and f["match"] == "true"
    rc, f, _ = run(capsys, "ring", "dh", "--params", path, "--secret", 2, "--peer-secret", 3)
    assert f["shared_a"] == f["shared_b"]


def test_ring_socket(tmp_path, capsys):
    path = tmp_path / "ring.params"
    run(capsys, "ring", "params", "--p", 13, "--q", 61, "--seed", 4, "--out", path)
    proc = subprocess.Popen(
        [sys.executable, "-m", "cpdh", "ring", "dh", "--params", str(path), "--mode", "listen", "--seed", "1"],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
    )
    try:
        port = proc.stdout.readline().split(": ")[1].strip()
        rc, f, _ = run(capsys, "ring", "dh", "--mode", "connect", "--port", port, "--seed", 2)
        out, _ = proc.communicate(timeout=10)
    finally:
        proc.kill()
    assert rc == 0 and proc.returncode == 0
    assert f"digest: {f['digest']}" in out
