"""Acceptance gate: ten end-to-end criteria at their stated sizes and time limits.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import json
import math
import time

import numpy as np
import pytest

from conftest import in_hull_moves, random_simplex, sample_forward_pairs, sample_inverse_pairs
from simplexcert import (
    Membership,
    barycentre,
    classify,
    epsilon_net,
    evaluate,
    face_distance_lb,
    inversion_delta,
    linear_perturbation_delta,
    new_simplex,
    opposite_face,
    recoordinate,
    regular_simplex,
    relint_certificate,
    standard_simplex,
    vertex_perturbation_delta,
)
from simplexcert.cli import dumps, run
from simplexcert.oracle import (
    OracleConfig,
    coverage_check,
    distance_oracle,
    margin_oracle,
    sample_hull_ball,
)
from simplexcert.vecnorm import l1_margin

ETA = 1e-9
ROOT = OracleConfig(seed=20250917)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


@pytest.mark.criterion(1, "regular simplex: edges sqrt(2), barycentre on the segment form")
def test_regular_simplex_fidelity():
    with Timer() as t:
        for n in range(1, 9):
            A = regular_simplex(n).vertices
            i, j = np.triu_indices(n + 1, k=1)
            edges = np.linalg.norm(A[i] - A[j], axis=1)
            assert edges.size == math.comb(n + 1, 2)
            assert np.max(np.abs(edges - math.sqrt(2))) < 1e-12
            u = np.ones(n)
            segment_form = A[n] / (n + 1) + (1 - 1 / (n + 1)) * u / n
            b, _ = barycentre(regular_simplex(n))
            assert np.max(np.abs(b - segment_form)) < 1e-12
    assert t.seconds < 1.0


@pytest.mark.criterion(2, "round-trip coordinates, 1e3 simplices x 1e2 affine lambdas")
def test_round_trip_coordinates():
    rng = ROOT.rng(2)
    worst = 0.0
    with Timer() as t:
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            d = int(rng.integers(n, 11))
            s = random_simplex(rng, n, d)
            lam = rng.uniform(-1, 1, (100, n + 1))
            lam -= ((lam.sum(axis=1) - 1) / (n + 1))[:, None]
            X = np.array([evaluate(s.vertices, row) for row in lam])
            back, _ = s.barycentric(X)
            worst = max(worst, float(np.max(np.sum(np.abs(back - lam), axis=1))))
    assert worst < 1e-8
    assert t.seconds < 30.0


@pytest.mark.criterion(3, "moduli soundness, 1e4 pairs per simplex at eps in {1e-2, 1e-1, 1}")
def test_moduli_soundness():
    rng = ROOT.rng(3)
    with Timer() as t:
        for _ in range(20):
            n = int(rng.integers(1, 7))
            s = random_simplex(rng, n, int(rng.integers(n, 11)))
            for eps in (1e-2, 1e-1, 1.0):
                assert sample_forward_pairs(s, eps, rng, 10_000) < eps
                assert sample_inverse_pairs(s, eps, rng, 10_000) < eps
    assert t.seconds < 60.0


@pytest.mark.criterion(4, "interior certificates, 200 instances x 1e3 ball samples")
def test_interior_certificates():
    rng = ROOT.rng(4)
    for trial in range(200):
        n = int(rng.integers(1, 7))
        s = random_simplex(rng, n, int(rng.integers(n, 11)))
        lam = rng.dirichlet(np.ones(n + 1))
        x = evaluate(s.vertices, lam)
        cert = relint_certificate(s, x)
        pts = sample_hull_ball(s, x, cert.radius_r, ROOT.rng(4, trial), 1000)
        verdicts = [classify(s, p).verdict for p in pts]
        assert Membership.CERTIFIED_OUTSIDE not in verdicts

    # n = 1: the explicit segment radius of the one-dimensional argument
    for trial in range(200):
        s = random_simplex(rng, 1, int(rng.integers(1, 6)))
        t_ = float(rng.uniform(0.01, 0.99))
        lam = np.array([t_, 1 - t_])
        x = evaluate(s.vertices, lam)
        ours = relint_certificate(s, x).radius_r
        segment = 0.5 * np.linalg.norm(s.vertices[0] - s.vertices[1]) * min(t_, 1 - t_)
        assert ours == pytest.approx(segment, rel=1e-9)
        for k, r in enumerate((ours, segment)):
            pts = sample_hull_ball(s, x, r, ROOT.rng(40, trial, k), 1000)
            assert all(classify(s, p).verdict is not Membership.CERTIFIED_OUTSIDE for p in pts)


@pytest.mark.criterion(5, "face distance below the distance oracle; zero exactly at lambda_nu <= eta")
def test_face_distance():
    rng = ROOT.rng(5)
    cfg = OracleConfig(seed=ROOT.seed, samples=200)
    on_threshold = [0.0, 0.5 * ETA, ETA, 2 * ETA, 10 * ETA]
    for trial in range(10_000):
        n = int(rng.integers(1, 5))
        s = random_simplex(rng, n, n + int(rng.integers(0, 3)))
        nu = int(rng.integers(0, n + 1))
        lam = rng.dirichlet(np.ones(n + 1))
        if trial % 4 == 0:
            rest = np.delete(lam, nu)
            target = on_threshold[(trial // 4) % len(on_threshold)]
            lam = np.insert(rest / rest.sum() * (1 - target), nu, target)
        bound = face_distance_lb(s, lam, nu)
        assert (bound == 0.0) == (lam[nu] <= ETA)
        est = distance_oracle(evaluate(s.vertices, lam), opposite_face(s, nu), cfg)
        assert bound <= est.value + est.envelope


@pytest.mark.criterion(6, "vertex-perturbation certificate end to end, 200 instances x 50 moves")
def test_perturbation_certificate():
    rng = ROOT.rng(6)
    with Timer() as t:
        for _ in range(200):
            n = int(rng.integers(1, 6))
            s = random_simplex(rng, n, int(rng.integers(n, 9)))
            lam = rng.dirichlet(np.ones(n + 1))
            c = evaluate(s.vertices, lam)
            cert = vertex_perturbation_delta(s, c)
            m = cert.value("m")
            moves = in_hull_moves(s, cert.delta, rng, 50)
            # half the moves push every vertex to just inside the radius
            rim = moves[25:] - s.vertices
            rim *= (cert.delta * (1 - 1e-6) / np.linalg.norm(rim, axis=2))[..., None]
            moves[25:] = s.vertices + rim
            for X in moves:
                new_simplex(X)
                gamma = recoordinate(s, X, lam)
                assert gamma.min() > 0
                assert np.sum(np.abs(gamma - lam)) < m / 2
    assert t.seconds < 300.0


@pytest.mark.criterion(7, "linear margin promise 2n delta under perturbation, 1e3 trials")
def test_margin_promise():
    rng = ROOT.rng(7)
    for trial in range(1000):
        k = int(rng.integers(1, 4))
        V = rng.standard_normal((k, k + int(rng.integers(0, 3))))
        if l1_margin(V) < 0.05:
            V += np.eye(*V.shape)
        delta, promised = linear_perturbation_delta(V)
        if trial % 3 == 0 and k > 1:
            # push against the weakest combination found by the oracle
            lam = _weakest_combination(V)
            w = lam @ V
            w = w / np.linalg.norm(w) if np.linalg.norm(w) > 0 else rng.standard_normal(V.shape[1])
            Y = V - 0.999 * delta * np.sign(lam)[:, None] * w
        else:
            g = rng.standard_normal(V.shape)
            Y = V + g * (0.999 * delta / np.linalg.norm(g, axis=1))[:, None]
        assert np.all(np.linalg.norm(Y - V, axis=1) < delta)
        grid = 200 if k < 3 else 120
        est = margin_oracle(Y, OracleConfig(seed=ROOT.seed, grid_resolution=grid))
        assert est.value >= promised * (1 - 1e-3)


def _weakest_combination(V):
    k = V.shape[0]
    best, arg = math.inf, None
    for signs in np.array(np.meshgrid(*[[1.0, -1.0]] * k)).reshape(k, -1).T:
        # least-squares minimiser of ||lam V|| on the face of the l1 sphere with these signs
        A = np.vstack([V.T, np.sqrt(1e6) * signs])
        b = np.zeros(A.shape[0])
        b[-1] = np.sqrt(1e6)
        lam, *_ = np.linalg.lstsq(A, b, rcond=None)
        if np.all(lam * signs >= 0):
            lam /= np.sum(np.abs(lam))
            val = np.linalg.norm(lam @ V)
            if val < best:
                best, arg = val, lam
    return arg if arg is not None else np.full(k, 1.0 / k)


@pytest.mark.criterion(8, "epsilon-nets cover with 1e5 samples and scale like (1/eps)^n")
def test_epsilon_nets():
    levels = (0.5, 0.25, 0.1)
    for n in (1, 2, 3):
        for s in (standard_simplex(n), regular_simplex(n)):
            sizes = []
            for i, eps in enumerate(levels):
                net = epsilon_net(s, eps)
                ok, worst = coverage_check(net, s, OracleConfig(seed=ROOT.seed + i, samples=100_000))
                assert ok, (n, eps, worst)
                sizes.append(len(net))
            for i in range(len(levels) - 1):
                predicted = (levels[i] / levels[i + 1]) ** n
                assert sizes[i + 1] / sizes[i] <= 4 * predicted, (n, sizes)


@pytest.mark.criterion(9, "inversion radius: det > 1/2 and inverse within eps, 1e4 matrices")
def test_inversion_radius():
    rng = ROOT.rng(9)
    for n in (2, 3, 5):
        for eps in (0.1, 0.01):
            delta = inversion_delta(n, eps)
            inside = delta * (1 - 1e-12)
            E = rng.uniform(-inside, inside, (10_000, n, n))
            # extremal corners: every entry at +-delta
            E[:2000] = inside * rng.choice([-1.0, 1.0], size=(2000, n, n))
            E[0] = -inside
            E[1] = inside
            E[2] = -inside * np.eye(n) + inside * (1 - np.eye(n))
            A = np.eye(n) + E
            assert np.max(np.abs(E)) < delta
            assert np.all(np.linalg.det(A) > 0.5)
            dev = np.max(np.abs(np.linalg.inv(A) - np.eye(n)), axis=(1, 2))
            assert np.all(dev < eps)


@pytest.mark.criterion(10, "CLI goldens and exit codes 0/2/1")
def test_cli_contract(monkeypatch):
    from test_cli import CASES, FIXTURES, GOLDEN, assert_matches

    monkeypatch.chdir(FIXTURES)
    monkeypatch.delenv("SIMPLEX_CERT_SEED", raising=False)
    commands = set()
    for name, (argv, expected_code) in CASES.items():
        code, report = run(argv)
        assert code == expected_code, name
        parsed = json.loads(dumps(report))
        assert_matches(parsed, json.loads((GOLDEN / f"{name}.json").read_text()), name)
        if argv and code != 1:
            commands.add(argv[0])
    assert len(commands) == 10
    _, report = run(["certify-independence", "triangle.json"])
    assert report["values"]["margin_c"] > 0
    _, report = run(["classify", "triangle.json", "--point", "1,1"])
    assert report["status"] == "certified" and report["verdict"] == "outside"
    assert run(["certify-independence", "collinear.json"])[0] == 2
