import random

from helpers import col, leaf, mutate, random_tree, row
from resizelens.diff import common_leaves, diff, diff_with_plan
from resizelens.tree import apply_edits, isomorphic


def kinds(script):
    return [op.kind for op in script]


def test_identical_trees_give_empty_script():
    t = col(row(leaf("A"), leaf("B")), leaf("C"))
    assert len(diff(t, t)) == 0


def test_single_leaf_removal_is_exactly_one_remove():
    t1 = row(leaf("A"), leaf("B"), leaf("C"))
    t2 = row(leaf("A"), leaf("C"))
    script = diff(t1, t2)
    assert kinds(script) == ["removeNode"]
    assert isomorphic(apply_edits(t1, script), t2)


def test_wrap_transition_produces_moves_with_bookkeeping():
    t1 = row(leaf("A"), leaf("B"), leaf("C"))
    t2 = col(row(leaf("A"), leaf("B")), leaf("C"))
    script, plan = diff_with_plan(t1, t2)
    assert any(op.kind == "moveNode" for op in script)
    assert isomorphic(apply_edits(t1, script), t2)
    assert len(plan.moves) == 2  # A and B enter the new first row


def test_sibling_row_wrap_is_a_single_move():
    t1 = col(row(leaf("A"), leaf("B"), leaf("C")), leaf("D"))
    t2 = col(row(leaf("A"), leaf("B")), leaf("C"), leaf("D"))
    script, plan = diff_with_plan(t1, t2)
    assert kinds(script) == ["moveNode"]
    assert len(plan.moves) == 1 and plan.moves[0].n1.widget_id == "C"
    assert isomorphic(apply_edits(t1, script), t2)


def test_replace_is_detected_positionally():
    t1 = row(leaf("A"), leaf("B"), leaf("X"))
    t2 = row(leaf("A"), leaf("B"), leaf("Y"))
    script, plan = diff_with_plan(t1, t2)
    assert kinds(script) == ["replaceNode"]
    assert [(a.widget_id, b.widget_id) for a, b in plan.replaces] == [("X", "Y")]


def test_retype_only_for_pivot():
    t1 = row(leaf("A"), leaf("B"))
    t2 = col(leaf("A"), leaf("B"))
    script, plan = diff_with_plan(t1, t2)
    assert kinds(script) == ["changeType"]
    assert len(plan.retypes) == 1


def test_pure_reorder_is_one_order_change():
    t1 = row(leaf("A"), leaf("B"), leaf("C"))
    t2 = row(leaf("C"), leaf("A"), leaf("B"))
    script, plan = diff_with_plan(t1, t2)
    assert kinds(script) == ["changeChildrenOrder"]
    assert len(plan.reorders) == 1
    assert isomorphic(apply_edits(t1, script), t2)


def test_common_leaves():
    assert common_leaves(row(leaf("A"), leaf("B")), col(leaf("B"), leaf("C"))) == 1
    assert common_leaves(row(leaf("A")), row(leaf("Z"))) == 0
    t = row(leaf("A"), leaf("B"))
    assert common_leaves(t, t) == 2


def test_dissolved_row_children_move_before_container_removal():
    t1 = col(row(leaf("A"), leaf("B")), leaf("C"))
    t2 = col(leaf("A"), leaf("B"), leaf("C"))
    script, plan = diff_with_plan(t1, t2)
    ops = kinds(script)
    assert ops.index("removeNode") > max(i for i, k in enumerate(ops) if k == "moveNode")
    assert isomorphic(apply_edits(t1, script), t2)


def test_determinism():
    rng = random.Random(77)
    for _ in range(20):
        t1 = random_tree(rng)
        t2 = mutate(t1, random.Random(99), 3, "f")
        s1 = diff(t1, t2)
        s2 = diff(t1, t2)
        assert s1 == s2


def test_randomized_roundtrip_small():
    rng = random.Random(1234)
    for trial in range(200):
        t1 = random_tree(rng)
        t2 = mutate(t1, rng, rng.randint(0, 5), f"f{trial}_")
        script = diff(t1, t2)
        assert isomorphic(apply_edits(t1, script), t2)
