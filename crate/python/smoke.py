"""Smoke test for the Python bindings. Run with pytest or directly."""

import json

import k3g16_py as k


def test_chow_numbers():
    assert k.degree_x() == 21
    assert k.chern_t() == [1, 5, 12, 12]


def test_rank_mod_p():
    assert k.rank_mod_p([[1, 2], [2, 4]], 101) == 1
    assert k.rank_mod_p([[1, 2], [3, 4]], 101) == 2
    # 101 divides the determinant 1 * 103 - 2 * 1
    assert k.rank_mod_p([[1, 2], [1, 103]], 101) == 1


def test_small_run_verifies():
    cert = k.run(p=101, seed=1, stages=["syzygy", "chow"])
    data = json.loads(cert)
    ids = {c["id"] for c in data["checks"]}
    assert "syzygy.v8_dim" in ids and "chow.segre" in ids
    for n in (1, 3, 4, 13):
        assert k.criterion_status(cert, n) == "pass", n
    assert all(ok for _, ok, _ in k.verify(cert))
    assert "mandatory checks" in k.report(cert)


if __name__ == "__main__":
    test_chow_numbers()
    test_rank_mod_p()
    test_small_run_verifies()
    print("ok")
