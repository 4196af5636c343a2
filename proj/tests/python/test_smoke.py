import json

import boxdim


def test_group_arithmetic():
    assert boxdim.multiply("u3", [1, 0, 0], [0, 0, 1]) == [1, 1, 1]
    assert boxdim.invert("u3", [0, 1, 0]) == [0, -1, 0]
    assert boxdim.word_length("u3", [0, 1, 0]) == 4
    assert boxdim.ball_size("u3", 2) == 17


def test_chain_queries():
    assert boxdim.chain_index("z", "factorial", 3) == "6"
    assert boxdim.quotient_distance("z", "factorial", 3, [0], [5]) == 1
    assert boxdim.injective_stage("z", "factorial", 2) == 3
    assert boxdim.window_diameters("z", "factorial", 1, 3) == [0, 1, 3]


def test_cover_roundtrip():
    cov = boxdim.synth_cover("zm", m=2, L=8)
    cert = json.loads(boxdim.verify_cover(cov, window_radius=40, R=1))
    assert cert["verdict"] == "pass"


def test_decay_and_dynamics():
    cov = boxdim.synth_cover("zm", m=1, L=8)
    num, den = boxdim.decay_sup_shift(cov, window_radius=40).split("/")
    assert int(den) > int(num) > 0
    assert boxdim.tower_eps("z", "factorial", 1, 3) == "0"
    assert boxdim.growth_translator_count("z2") == 9
    assert boxdim.markers(12, 0, 2) == [0, 3, 6, 9]
