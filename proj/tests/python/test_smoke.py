import numpy as np
import pytest

import migdet


def random_hpd(rng, n, cond=10.0):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    lam = np.exp(np.linspace(0.0, np.log(cond), n))
    return (q * lam) @ q.conj().T


def test_measures_listed():
    assert migdet.measures() == ["AIRM", "LEM", "JBLD", "SKLD"]


def test_scalar_means_equal_two():
    pair = [np.array([[1.0 + 0j]]), np.array([[4.0 + 0j]])]
    for m in migdet.measures():
        assert migdet.geometric_mean(m, pair)[0, 0].real == pytest.approx(2.0, abs=1e-8)


def test_distance_symmetry_and_self():
    rng = np.random.default_rng(3)
    x, y = random_hpd(rng, 4), random_hpd(rng, 4)
    for m in migdet.measures():
        assert migdet.sq_dist(m, x, x) == pytest.approx(0.0, abs=1e-12)
        assert migdet.sq_dist(m, x, y) == pytest.approx(migdet.sq_dist(m, y, x), rel=1e-10)


def test_lem_distance_matches_numpy_logs():
    rng = np.random.default_rng(4)
    x, y = random_hpd(rng, 3), random_hpd(rng, 3)

    def logm(a):
        w, v = np.linalg.eigh(a)
        return (v * np.log(w)) @ v.conj().T

    expected = np.linalg.norm(logm(x) - logm(y)) ** 2
    assert migdet.sq_dist("LEM", x, y) == pytest.approx(expected, rel=1e-10)


def test_dlog_kernel_identity_at_identity():
    l = np.array([[1.0, 2.0 - 1j], [2.0 + 1j, -3.0]])
    assert np.allclose(migdet.dlog_kernel(np.eye(2, dtype=complex), l), l, atol=1e-14)


def test_observation_condition_number_two():
    rng = np.random.default_rng(5)
    x = rng.normal(size=8) + 1j * rng.normal(size=8)
    r = migdet.build_hpd_observation(x)
    w = np.linalg.eigvalsh(r)
    assert w.max() / w.min() == pytest.approx(2.0, rel=1e-10)


def test_steering_unit_norm():
    s = migdet.steering(8, 0.2)
    assert np.linalg.norm(s) == pytest.approx(1.0, abs=1e-14)


def test_learn_projection_orthonormal():
    clutter, target = migdet.gen_training("training.j = 6\ntraining.k = 6\n", seed=9)
    res = migdet.learn_projection("LEM", clutter + target, 3, outer_iterations=5)
    w = res["w"]
    assert w.shape == (8, 3)
    assert np.allclose(w.conj().T @ w, np.eye(3), atol=1e-10)
    assert res["final_variance"] > 0.0


def test_error_types():
    with pytest.raises(ArithmeticError):
        migdet.sq_dist("AIRM", np.eye(2), -np.eye(2))
    with pytest.raises(ValueError):
        migdet.sq_dist("AIRM", np.eye(2), np.eye(3))
    with pytest.raises(migdet.ValidationError):
        migdet.canonical_config("no.such.key = 1\n")


def test_matrix_file_roundtrip(tmp_path):
    rng = np.random.default_rng(6)
    mats = [random_hpd(rng, 3), rng.normal(size=(2, 4)) + 0j]
    path = tmp_path / "stack.migw"
    migdet.write_matrices(str(path), mats)
    back = migdet.read_matrices(str(path))
    assert len(back) == 2
    for a, b in zip(mats, back):
        assert np.array_equal(a, b)


def test_small_sweep(tmp_path):
    cfg = "\n".join(
        [
            "experiment.m = 2",
            "experiment.k_multipliers = 1",
            "experiment.measures = LEM",
            "experiment.scr_db = 0, 20",
            "experiment.trials_threshold = 1000",
            "experiment.trials_pd = 100",
            "training.j = 20",
            "training.k = 20",
            "",
        ]
    )
    res = migdet.run_sweep(cfg, seed=3, out=str(tmp_path))
    assert res["errors"] == []
    names = {(c["detector"], c["measure"]) for c in res["curves"]}
    assert ("mig-proj", "LEM") in names and ("amf", "none") in names
    assert (tmp_path / "manifest.json").exists()
