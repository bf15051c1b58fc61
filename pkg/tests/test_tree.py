import random

import pytest

from helpers import col, leaf, random_tree, row
from resizelens.tree import (MASK64, EditOp, EditScript, InvalidPath,
                             TreeIndex, apply_edits, container, dump_tree,
                             fnv1a64, isomorphic, load_tree, node_at,
                             region_leaf, widget_leaf)


def H(s: str) -> int:
    return fnv1a64(s.encode())


def test_leaf_hash_is_id_hash():
    a = leaf("A")
    assert a.hash_code == H("A")
    assert a.child_hash_code == H("A")


def test_internal_hash_weighted_sum():
    t = row(leaf("A"), leaf("B"))
    expected = (H("Row") + 1 * H("A") + 2 * H("B")) & MASK64
    assert t.hash_code == expected
    assert t.child_hash_code == H("A") ^ H("B")


def test_child_hash_survives_retype_and_permutation():
    assert row(leaf("A"), leaf("B")).child_hash_code == col(leaf("B"), leaf("A")).child_hash_code


def test_region_hashes_on_sorted_ids():
    assert region_leaf(("B", "A")).hash_code == region_leaf(("A", "B")).hash_code


def test_isomorphic_reflexive_and_structural():
    t = col(row(leaf("A"), leaf("B")), leaf("C"))
    assert isomorphic(t, t)
    assert not isomorphic(row(leaf("A"), leaf("B"), leaf("C")), t)


def test_engineered_hash_collision_is_not_isomorphic():
    # Single-child Row chains: hash(chain_k) = k*H("Row") + H("A") (wrapping),
    # so Row[chain_3, chain_1] and Row[chain_1, chain_2] collide on hash_code
    # while being structurally different. The structural check must dominate.
    def chain(k):
        node = leaf("A")
        for _ in range(k):
            node = container("row", [node])
        return node

    t1 = row(chain(3), chain(1))
    t2 = row(chain(1), chain(2))
    assert t1.hash_code == t2.hash_code
    assert not isomorphic(t1, t2)


def test_tree_index_contains_every_node():
    t = col(row(leaf("A"), leaf("B")), leaf("C"))
    idx = TreeIndex(t)
    count = sum(len(v) for v in idx.hash_map.values())
    assert count == 5
    assert idx.path(t.children[0].children[1]) == (0, 1)
    assert idx.parent(t.children[0]) is t


def test_path_consistency():
    rng = random.Random(5)
    for _ in range(20):
        t = random_tree(rng)
        idx = TreeIndex(t)
        for node_id, node in idx.node_of.items():
            assert id(node_at(t, idx.path(node))) == node_id


def test_serialization_round_trip_preserves_isomorphism():
    rng = random.Random(9)
    for _ in range(50):
        t = random_tree(rng)
        again = load_tree(dump_tree(t))
        assert isomorphic(t, again)
        assert t.hash_code == again.hash_code


def test_apply_empty_script_is_identity():
    t = row(leaf("A"), leaf("B"), leaf("C"))
    assert isomorphic(apply_edits(t, EditScript()), t)


def test_apply_remove():
    t = row(leaf("A"), leaf("B"), leaf("C"))
    script = EditScript(ops=(EditOp("removeNode", source_path=(1,)),))
    assert isomorphic(apply_edits(t, script), row(leaf("A"), leaf("C")))


def test_apply_add_then_move_into_container():
    t = row(leaf("A"), leaf("B"))
    script = EditScript(ops=(
        EditOp("addNode", target_path=(0,), payload={"kind": "Column", "children": []}),
        EditOp("moveNode", source_path=(1,), target_path=(0, 0)),
    ))
    assert isomorphic(apply_edits(t, script), row(col(leaf("A")), leaf("B")))


def test_apply_change_type_and_order():
    t = row(leaf("A"), leaf("B"), leaf("C"))
    script = EditScript(ops=(
        EditOp("changeType", source_path=(), to_type="Column"),
        EditOp("changeChildrenOrder", source_path=(), to_order=(2, 0, 1)),
    ))
    assert isomorphic(apply_edits(t, script), col(leaf("C"), leaf("A"), leaf("B")))


def test_apply_invalid_path_reports_step_index():
    t = row(leaf("A"), leaf("B"))
    script = EditScript(ops=(
        EditOp("removeNode", source_path=(1,)),
        EditOp("removeNode", source_path=(5,)),
    ))
    with pytest.raises(InvalidPath, match="step 1"):
        apply_edits(t, script)


def test_script_json_round_trip():
    script = EditScript(ops=(
        EditOp("moveNode", source_path=(0, 1), target_path=(1, 0)),
        EditOp("addNode", target_path=(0,), payload={"kind": "Widget", "id": "X"}),
        EditOp("changeChildrenOrder", source_path=(), to_order=(1, 0)),
    ))
    again = EditScript.load(script.dump())
    assert again == script
