"""Tests for version differencing and analysis scoping."""
from pathlib import Path

import pytest

from regsentry.changes import AnalysisScope, ChangeSet, diff, scope
from regsentry.minic import analyze, parse
from regsentry.shared.errors import EmptyChange

from .program_gen import random_program

STORE = Path(__file__).resolve().parent.parent / "corpus" / "store"


def load(version):
    return analyze(parse((STORE / version / "store.mc").read_text(encoding="utf-8"), path="store.mc"))


def unit(source):
    return analyze(parse(source))


def test_store_change_set():
    base, upgraded = load("base"), load("upgraded")
    change_set = diff(base, upgraded)
    assert change_set.modified == {"is_available"}
    assert not change_set.added and not change_set.removed


def test_store_scope():
    base, upgraded = load("base"), load("upgraded")
    result = scope(diff(base, upgraded), base, upgraded)
    assert result.monitored == {"is_available", "available_products"}
    assert result.entries_for("BASE") == {"available_products"}
    assert result.entries_for("UPGRADED") == {"available_products"}


def test_identical_versions_raise_empty_change():
    base = load("base")
    change_set = diff(base, load("base"))
    assert change_set.is_empty()
    with pytest.raises(EmptyChange):
        scope(change_set, base, base)


def test_formatting_only_change_is_not_a_change():
    base = unit("int f(int x) { return x + 1; }")
    upgraded = unit("// reformatted\nint f(int x)\n{\n    return x + 1;\n}\n")
    assert diff(base, upgraded).is_empty()


def test_record_change_marks_users_modified():
    base = unit("record R { int a; }\nint get(R r) { return r.a; }\nint other(int x) { return x; }")
    upgraded = unit("record R { int a; int b; }\nint get(R r) { return r.a; }\nint other(int x) { return x; }")
    change_set = diff(base, upgraded)
    assert change_set.modified == {"get"}


def test_added_and_removed_functions():
    base = unit(
        "int old_helper(int x) { return x; }\n"
        "int main_a(int x) { return old_helper(x); }\n"
        "int main_b(int x) { return x; }"
    )
    upgraded = unit(
        "int new_helper(int x) { return x * 2; }\n"
        "int main_a(int x) { return x; }\n"
        "int main_b(int x) { return new_helper(x); }"
    )
    change_set = diff(base, upgraded)
    assert change_set.added == {"new_helper"}
    assert change_set.removed == {"old_helper"}
    assert change_set.modified == {"main_a", "main_b"}
    result = scope(change_set, base, upgraded)
    # removed functions are scoped in the base graph, added ones in the upgraded graph
    assert {"old_helper", "new_helper", "main_a", "main_b"} <= result.monitored
    assert "old_helper" not in result.upgraded_entries
    assert "new_helper" not in result.base_entries


def test_uncalled_changed_function_is_its_own_entry():
    base = unit("int lonely(int x) { return x; }")
    upgraded = unit("int lonely(int x) { return x + 1; }")
    result = scope(diff(base, upgraded), base, upgraded)
    assert result.base_entries == {"lonely"}
    assert result.monitored == {"lonely"}


def test_scope_includes_callees():
    base = unit("int leaf(int x) { return x; }\nint mid(int x) { return leaf(x); }\nint top(int x) { return mid(x); }")
    upgraded = unit("int leaf(int x) { return x; }\nint mid(int x) { return leaf(x) + 1; }\nint top(int x) { return mid(x); }")
    result = scope(diff(base, upgraded), base, upgraded)
    assert result.monitored == {"leaf", "mid", "top"}
    assert result.base_entries == {"top"}


def test_change_set_and_scope_serialize():
    base, upgraded = load("base"), load("upgraded")
    change_set = diff(base, upgraded)
    result = scope(change_set, base, upgraded)
    assert ChangeSet.from_dict(change_set.to_dict()) == change_set
    assert AnalysisScope.from_dict(result.to_dict()) == result


def test_local_rename_marks_function_modified():
    base = unit("int f(int x) { int t = x + 1; return t; }\nint g(int x) { return f(x); }")
    upgraded = unit("int f(int x) { int u = x + 1; return u; }\nint g(int x) { return f(x); }")
    change_set = diff(base, upgraded)
    assert change_set.modified == {"f"}
    assert not change_set.added and not change_set.removed


PAIRS = [
    ("int f(int x) { return x; }", "int f(int x) { return x; }\nint g(int x) { return f(x); }"),
    (
        "int a(int x) { return x; }\nint b(int x) { return a(x) + 1; }",
        "int b(int x) { return x + 1; }\nint c(int x) { return b(x); }",
    ),
    ("record R { int a; }\nint get(R r) { return r.a; }", "record R { int a; int b; }\nint get(R r) { return r.b; }"),
]


@pytest.mark.parametrize("left, right", PAIRS)
def test_diff_is_symmetric(left, right):
    a, b = unit(left), unit(right)
    forward, backward = diff(a, b), diff(b, a)
    assert forward.added == backward.removed
    assert forward.removed == backward.added
    assert forward.modified == backward.modified


@pytest.mark.parametrize("seed", range(6))
def test_diff_is_symmetric_on_random_programs(seed):
    a = unit(random_program(seed, functions=3, params=1)[0])
    b = unit(random_program(seed + 100, functions=4, params=1)[0])
    forward, backward = diff(a, b), diff(b, a)
    assert forward.added == backward.removed
    assert forward.removed == backward.added
    assert forward.modified == backward.modified
