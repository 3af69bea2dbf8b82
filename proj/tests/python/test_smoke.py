import json
import math

import numpy as np
import pytest

import proteoknight as pk


def test_parse_fasta_and_manifest():
    seqs = pk.parse_fasta(">a desc\nACDX\nEF\n>b\nGG\n")
    assert [s.id for s in seqs] == ["a", "b"]
    assert seqs[0].residues == "ACDEF"
    assert seqs[0].skipped == 1
    with pytest.raises(pk.DataError):
        pk.parse_fasta(">a\nACDX\n", strict=True)
    assert pk.load_manifest("a\tPVP\nb\tnon-PVP\n") == {"a": "PVP", "b": "non-PVP"}


def test_angles_and_displacement():
    assert pk.angle_degrees("G") == 90.0
    assert pk.angle_degrees("C") == 18.0
    dx, dy = pk.displacement("A")
    assert (dx, dy) == (15.0, 0.0)
    assert pk.color("A") == (255, 0, 0)


def test_encode_single_residue():
    img = pk.encode("A")
    assert img.shape == (512, 512, 3) and img.dtype == np.uint8
    assert tuple(img[256, 271]) == (255, 0, 0)
    assert img.sum() == 13 * 255  # one radius-2 disk
    steps = pk.trace_walk("A")
    assert (steps[0].cx, steps[0].cy, steps[0].stamped) == (271, 256, True)


def test_boundary_reset_all_a():
    steps = pk.trace_walk("A" * 30, size=64)
    resets = [i for i, s in enumerate(steps) if s.reset_x]
    assert resets and all(steps[i - 1].x > 64 for i in resets)


def test_png_round_trip(tmp_path):
    img = pk.encode("ACDEFGHIKLMNPQRSTVWY", size=96)
    pk.write_png(img, tmp_path / "x.png")
    assert np.array_equal(pk.read_png(tmp_path / "x.png"), img)


def test_encode_corpus(tmp_path):
    seqs = [pk.ProteinSequence("p1", "ACDE" * 10), pk.ProteinSequence("n1", "MNPQ" * 10)]
    rows, failures = pk.encode_corpus(seqs, tmp_path, {"p1": "PVP"}, size=64, jobs=2)
    assert failures == []
    assert [(r[0], r[2]) for r in rows] == [("p1", "PVP"), ("n1", "unknown")]


def test_dataset_helpers():
    # 501 lengths: 349 and 350 both leave a gap of one; ties go to the smaller
    assert pk.find_equilibrium_delta(list(range(100, 601))) == 349
    assert pk.find_equilibrium_delta([1, 2, 3, 4]) == 2
    assert pk.categorize(350, "PVP") == "PVP-short"
    assert pk.categorize(351, "PVP") == "PVP-long"
    assert pk.categorize(276, "non-PVP") == "nonPVP-long"


def test_metrics():
    assert pk.f1_score(0.83, 0.91) == pytest.approx(0.868160919540229885, abs=1e-15)
    m = pk.compute_metrics(tp=3, tn=4, fp=1, fn=2)
    assert m["f1"] == pytest.approx(2 / 3)
    assert pk.compute_metrics(0, 5, 0, 0)["precision"] is None


def test_uncertainty_statistics():
    assert pk.binary_entropy(0.5) == 1.0
    assert pk.binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-15)
    assert pk.variance([0.3] * 10) == 0.0
    assert pk.variance([0.0] * 5 + [1.0] * 5) == 0.25
    assert pk.expectation([[0.2, 0.8], [0.4, 0.6]]) == pytest.approx([0.3, 0.7])
    assert pk.histogram([0.0, 0.5, 1.0], 2) == [1, 2]


def test_network_train_predict_and_mcd(tmp_path):
    rng = np.random.default_rng(0)
    images = [pk.encode("".join(rng.choice(list("ACDEFGHIKL"), 60)), size=64) for _ in range(6)]
    images += [pk.encode("".join(rng.choice(list("MNPQRSTVWY"), 60)), size=64) for _ in range(6)]
    labels = [1] * 6 + [0] * 6
    net = pk.Network(input_size=16, conv_channels=[4], hidden=8, seed=1)
    losses, acc = net.train(images, labels, epochs=5, batch_size=4, optimizer="adam", learning_rate=0.01)
    assert len(losses) == 6 and losses[-1] < losses[0]
    p = net.predict(images[0])
    assert len(p) == 2 and sum(p) == pytest.approx(1.0)

    passes = net.mc_predict(images[0], passes=20, rate=0.0)
    assert pk.variance([q[1] for q in passes]) == 0.0
    noisy = net.mc_predict(images[0], passes=20, rate=0.5, seed=2)
    assert noisy == net.mc_predict(images[0], passes=20, rate=0.5, seed=2)

    net.save(str(tmp_path / "m.txt"))
    again = pk.Network.load(str(tmp_path / "m.txt"))
    assert again.predict(images[0]) == p

    lines = [
        json.dumps({"id": "s", "category": "PVP-short", "dropout_rate": 0.5, "pass_index": i, "probs": q})
        for i, q in enumerate(noisy)
    ]
    report = pk.report_from_predictions("\n".join(lines) + "\n").splitlines()
    row = report[1].split(",")
    mean = sum(q[1] for q in noisy) / len(noisy)
    assert row[0] == "PVP-short" and float(row[2]) == pytest.approx(mean, abs=1e-12)
    assert not math.isnan(float(row[3]))
