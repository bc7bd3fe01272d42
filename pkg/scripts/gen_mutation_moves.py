#!/usr/bin/env python3
"""Compile the decomposition-transport proof into an elementary move list.

Runs every emitted move through the live certifier, so the shipped JSON is
known-good by construction.  Writes src/flagdual/data/mutation_moves.json.
"""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from flagdual.mutation import (ExceptionalCollection, Symbol, apply_move,
                               expected_final_labels, start_collection)

col = start_collection()
moves: list = []
checkpoints: dict = {}


def emit(mv):
    global col
    col = apply_move(col, mv)
    labels = col.labels()
    assert len(set(labels)) == len(labels), f"duplicate labels after {mv}"
    moves.append(mv)


def pos(label):
    return col.labels().index(label)


def swap_at(i):
    lab = col.labels()
    emit({"move": "swap", "pos": i, "expect": [lab[i], lab[i + 1]]})


def move_left_to_right_of(label, anchor):
    """Bubble `label` leftward until it sits immediately right of `anchor`."""
    while pos(label) > pos(anchor) + 1:
        swap_at(pos(label) - 1)
    assert pos(label) == pos(anchor) + 1


def swap_pair(a, b):
    i = pos(a)
    assert pos(b) == i + 1, (a, b, col.labels())
    swap_at(i)


def rule(kind, name, left, right):
    i = pos(left)
    assert pos(right) == i + 1, (left, right, col.labels())
    emit({"move": kind, "rule": name, "pos": i, "expect": [left, right]})


def normalize(label, to):
    emit({"move": "normalize", "pos": pos(label), "expect": [label], "to": to})


def reorder_to(target):
    cur = [s for s in col.labels()]
    assert sorted(cur) == sorted(target), (cur, target)
    for i, want in enumerate(target):
        j = pos(want)
        assert j >= i
        while j > i:
            swap_at(j - 1)
            j -= 1
    assert col.labels() == target


# --- phase 1: rotate the first five bundles to the end -----------------------
emit({"move": "rotate", "count": 5})
checkpoints["display2"] = col.labels()

# --- phase 2: create Q2(0,2) and Q2(1,3) --------------------------------------
move_left_to_right_of("O(1,1)", "Q3(0,2)")
rule("right", "extension_Q", "Q3(0,2)", "O(1,1)")
move_left_to_right_of("O(2,2)", "Q3(1,3)")
rule("right", "extension_Q", "Q3(1,3)", "O(2,2)")

# --- phase 3: turn Q3(1,1), Q3(2,2) into U3*(1,2), U3*(2,3) -------------------
normalize("Q3(1,1)", "Q3d(1,2)")
rule("right", "dual_mutationUQ", "Q3d(1,2)", "O(1,2)")
normalize("Q3(2,2)", "Q3d(2,3)")
rule("right", "dual_mutationUQ", "Q3d(2,3)", "O(2,3)")

# --- phase 4: create Q2(0,3) and Q2(1,4) --------------------------------------
move_left_to_right_of("O(1,2)", "Q3(0,3)")
rule("right", "extension_Q", "Q3(0,3)", "O(1,2)")
move_left_to_right_of("O(2,3)", "Q3(1,4)")
rule("right", "extension_Q", "Q3(1,4)", "O(2,3)")

# --- phase 5: U2(0,3)/U2*(1,2) and the (1,1)-twisted copy ---------------------
swap_pair("O(0,3)", "O(1,2)")
rule("left", "cone_Q2", "O(0,3)", "Q2(0,3)")
move_left_to_right_of("U3d(1,2)", "O(0,3)")
rule("left", "dual_extension_U", "O(0,3)", "U3d(1,2)")

swap_pair("O(1,4)", "O(2,3)")
rule("left", "cone_Q2", "O(1,4)", "Q2(1,4)")
move_left_to_right_of("U3d(2,3)", "O(1,4)")
rule("left", "dual_extension_U", "O(1,4)", "U3d(2,3)")
checkpoints["display5"] = col.labels()

# --- phase 6: same treatment for Q3(1,2), Q3(0,4) and the twisted copy --------
normalize("Q3(1,2)", "Q3d(1,3)")
rule("right", "dual_mutationUQ", "Q3d(1,3)", "O(1,3)")
rule("right", "extension_Q", "Q3(0,4)", "O(1,3)")
swap_pair("O(0,4)", "O(1,3)")
rule("left", "cone_Q2", "O(0,4)", "Q2(0,4)")
move_left_to_right_of("U3d(1,3)", "O(0,4)")
rule("left", "dual_extension_U", "O(0,4)", "U3d(1,3)")

normalize("Q3(2,3)", "Q3d(2,4)")
rule("right", "dual_mutationUQ", "Q3d(2,4)", "O(2,4)")
rule("right", "extension_Q", "Q3(1,5)", "O(2,4)")
swap_pair("O(1,5)", "O(2,4)")
rule("left", "cone_Q2", "O(1,5)", "Q2(1,5)")
move_left_to_right_of("U3d(2,4)", "O(1,5)")
rule("left", "dual_extension_U", "O(1,5)", "U3d(2,4)")

# --- phase 7: remove the duals ------------------------------------------------
normalize("U2d(1,2)", "U2(2,2)")
normalize("U2d(2,3)", "U2(3,3)")
normalize("U2d(1,3)", "U2(2,3)")
normalize("U2d(2,4)", "U2(3,4)")
checkpoints["display6"] = col.labels()

# --- phase 8: send O(1,1) to the end and order by second twist ----------------
emit({"move": "rotate", "count": 1})
target7 = ["Q2(0,2)", "O(1,2)", "U2(2,2)", "O(2,2)",
           "U2(0,3)", "O(0,3)", "O(1,3)", "U2(2,3)", "Q2(1,3)", "O(2,3)",
           "U2(3,3)", "O(3,3)",
           "U2(0,4)", "O(0,4)", "U2(1,4)", "O(1,4)", "O(2,4)", "U2(3,4)",
           "U2(1,5)", "O(1,5)", "BlockY"]
reorder_to(target7)
checkpoints["display7"] = col.labels()

# --- phase 9: last ten objects to the beginning, order by second twist --------
emit({"move": "rotate_back", "count": 10})
target8 = ["U2(1,1)", "O(1,1)", "U2(-2,2)", "O(-2,2)", "U2(-1,2)", "O(-1,2)",
           "O(0,2)", "U2(1,2)", "Q2(0,2)", "O(1,2)", "U2(2,2)", "O(2,2)",
           "U2(-1,3)", "O(-1,3)", "U2(0,3)", "O(0,3)", "O(1,3)", "U2(2,3)",
           "Q2(1,3)", "O(2,3)", "BlockY"]
reorder_to(target8)
checkpoints["display8"] = col.labels()

# --- phase 10: mutate the two leftover Q2 into U2 -----------------------------
swap_pair("U2(1,2)", "Q2(0,2)")
rule("left", "cone_Q2", "O(0,2)", "Q2(0,2)")
swap_pair("U2(2,3)", "Q2(1,3)")
rule("left", "cone_Q2", "O(1,3)", "Q2(1,3)")

# --- phase 11: rotate the first two to the end and untwist --------------------
emit({"move": "rotate", "count": 2})
emit({"move": "twist_all", "a": -2, "b": -2})

assert col.labels() == expected_final_labels(), col.labels()
print(f"move list OK: {len(moves)} moves, final display matches")
for name, labels in checkpoints.items():
    print(f"  {name}: {len(labels)} symbols")

out = pathlib.Path(__file__).resolve().parents[1] / "src" / "flagdual" / "data"
out.mkdir(exist_ok=True)
with open(out / "mutation_moves.json", "w") as fh:
    json.dump(moves, fh, indent=0)
print("wrote", out / "mutation_moves.json")
