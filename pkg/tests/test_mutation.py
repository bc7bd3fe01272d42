import pytest

from flagdual.mutation import (CertificateError, ExceptionalCollection,
                               MutationWord, Symbol, apply_move, apply_rule,
                               certify_grassmannian_collection,
                               expected_final_labels, load_move_script,
                               replay_proof, serre_rotate, serre_rotate_back,
                               start_collection)


def col_of(*labels):
    return ExceptionalCollection([Symbol.parse(l) for l in labels])


def test_symbol_parse_roundtrip():
    for text in ("O(1,1)", "U2(-2,0)", "Q3d(2,3)", "BlockY"):
        assert Symbol.parse(text).label() == text


def test_rule_mutation_uq():
    c = col_of("O(0,0)", "U2(0,0)")
    c2 = apply_rule(c, {"move": "left", "rule": "mutationUQ", "pos": 0})
    assert c2.labels() == ["Q2(0,0)", "O(0,0)"]
    # and back
    c3 = apply_rule(c2, {"move": "right", "rule": "mutationUQ", "pos": 0})
    assert c3.labels() == c.labels()


def test_rule_extension_q():
    c = col_of("Q3(0,2)", "O(1,1)")
    c2 = apply_rule(c, {"move": "right", "rule": "extension_Q", "pos": 0})
    assert c2.labels() == ["O(1,1)", "Q2(0,2)"]
    c3 = apply_rule(c2, {"move": "left", "rule": "extension_Q", "pos": 0})
    assert c3.labels() == c.labels()


def test_left_then_right_is_identity_everywhere():
    pairs = [("O(1,2)", "U2(1,2)", "mutationUQ"),
             ("O(0,3)", "Q2(0,3)", "cone_Q2"),
             ("O(0,3)", "U3d(1,2)", "dual_extension_U")]
    for a, b, rule in pairs:
        c = col_of(a, b)
        c2 = apply_rule(c, {"move": "left", "rule": rule, "pos": 0})
        c3 = apply_rule(c2, {"move": "right", "rule": rule, "pos": 0})
        assert c3.labels() == [a, b]


def test_rule_pattern_mismatch():
    c = col_of("O(0,0)", "Q3(1,4)")
    with pytest.raises(ValueError):
        apply_rule(c, {"move": "left", "rule": "mutationUQ", "pos": 0})


def test_swap_requires_vanishing():
    c = col_of("O(0,0)", "O(0,0)")
    with pytest.raises(CertificateError):
        apply_move(c, {"move": "swap", "pos": 0})


def test_swap_certified():
    c = col_of("O(0,3)", "O(1,2)")
    c2 = apply_move(c, {"move": "swap", "pos": 0})
    assert c2.labels() == ["O(1,2)", "O(0,3)"]
    cert = c2.log[-1]["certificates"]
    assert cert["forward"] == "certified-zero"
    assert cert["reverse"] == "certified-zero"


def test_normalize_certificate():
    c = col_of("Q3(1,1)")
    c2 = apply_move(c, {"move": "normalize", "pos": 0, "to": "Q3d(1,2)"})
    assert c2.labels() == ["Q3d(1,2)"]
    with pytest.raises(ValueError):
        apply_move(c, {"move": "normalize", "pos": 0, "to": "Q3d(2,2)"})


def test_rotate_full_length_is_twist():
    c = col_of("O(0,0)", "Q3(0,1)", "O(1,1)")
    c2 = serre_rotate(c, 3)
    assert c2.labels() == ["O(2,2)", "Q3(2,3)", "O(3,3)"]


def test_rotate_roundtrip():
    c = col_of("O(0,0)", "Q3(0,1)", "O(1,1)", "Q3(1,2)")
    c2 = serre_rotate_back(serre_rotate(c, 2), 2)
    assert c2.labels() == c.labels()


def test_rotate_conjugates_positions():
    # rotate k then normalize at i == normalize at i+k then rotate k
    c = col_of("O(0,0)", "O(0,1)", "Q3(1,1)", "O(1,2)")
    k, i = 2, 0
    via1 = apply_move(serre_rotate(c, k),
                      {"move": "normalize", "pos": i, "to": "Q3d(1,2)"})
    via2 = serre_rotate(apply_move(c, {"move": "normalize", "pos": i + k,
                                       "to": "Q3d(1,2)"}), k)
    assert via1.labels() == via2.labels()


def test_block_bookkeeping_on_rotate():
    c = ExceptionalCollection([Symbol.parse(x) for x in
                               ("O(0,0)", "Q3(0,0)", "BlockY")])
    c2 = serre_rotate(c, 1)
    assert c2.labels() == ["Q3(0,0)", "O(2,2)", "BlockY"]
    assert c2.block_word.moves == [("R", ("O(2,2)",))]


def test_mutation_word_inverse():
    w = MutationWord([("R", ("a", "b")), ("T", (2, 2)), ("L", ("c",))])
    assert w.compose(w.inverse()).is_identity()
    assert w.inverse().inverse().moves == w.moves


def test_kuznetsov_collections_certified():
    for name in ("kuznetsov25", "kuznetsov35"):
        rep = certify_grassmannian_collection(name)
        assert rep["self_ext_ok"] and rep["orthogonality_ok"], rep["failures"]


def test_start_collection_shape():
    c = start_collection()
    assert len(c) == 21
    assert c.labels()[0] == "O(0,0)" and c.labels()[-1] == "BlockY"


def test_replay_full_proof():
    rep = replay_proof()
    assert rep["ok"]
    assert rep["final_matches_display"]
    assert rep["braid_inverse_identity"]
    assert rep["final_labels"] == expected_final_labels()
    assert rep["start_collection_certified"]["orthogonality_ok"]
    assert rep["final_collection_certified"]["orthogonality_ok"]
    # every move in the log carries a certificate record
    assert all("certificates" in r for r in rep["log"])


def test_replay_aborts_on_corrupted_script():
    moves = load_move_script()
    bad = [dict(moves[0])] + [dict(m) for m in moves]
    bad[1] = {"move": "swap", "pos": 0}      # start: <Q3(0,2), O(0,3)>
    rep = replay_proof(bad)
    assert not rep["ok"]
    assert rep["failed_at"] == 1
