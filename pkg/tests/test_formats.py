import pytest
from hypothesis import given

from fcadepth import FormalContext, IngestionError, dumps_cxt, dumps_json, loads_cxt, loads_json
from fcadepth.formats import read_context, write_context

from golden import all_golden, cyclic_triangle
from strategies import contexts


def test_cxt_layout():
    text = dumps_cxt(cyclic_triangle())
    assert text == "B\n\n3\n3\n\ng1\ng2\ng3\nm1\nm2\nm3\nX..\n.X.\n..X\n"


@given(contexts(max_objects=6, max_attributes=6))
def test_cxt_roundtrip(ctx):
    back = loads_cxt(dumps_cxt(ctx))
    assert back == ctx
    assert dumps_cxt(back) == dumps_cxt(ctx)


@given(contexts(max_objects=6, max_attributes=6))
def test_json_roundtrip(ctx):
    assert loads_json(dumps_json(ctx)) == ctx


def test_cxt_tolerates_crlf_and_name_line():
    text = "B\r\nmy context\r\n2\r\n1\r\n\r\na\r\nb\r\nm\r\nx\r\n.\r\n\r\n"
    ctx = loads_cxt(text)
    assert ctx.object_labels == ("a", "b") and ctx.rows == (1, 0)


@pytest.mark.parametrize("text, row", [
    ("C\n", 1),
    ("B\n\n2\n1\n\na\nb\nm\nX\n", None),
    ("B\n\n1\n2\n\na\nm\nn\nX\n", 9),
])
def test_cxt_errors_carry_rows(text, row):
    with pytest.raises(IngestionError) as info:
        loads_cxt(text)
    assert info.value.row == row or row is None


def test_json_errors():
    with pytest.raises(IngestionError):
        loads_json('{"object_labels": ["a"], "attribute_labels": ["m"], "incidence_rows": [[3]]}')
    with pytest.raises(IngestionError):
        loads_json('{"object_labels": ["a"]}')
    with pytest.raises(IngestionError):
        loads_json("{not json")


def test_files_by_suffix(tmp_path):
    for name, ctx in all_golden().items():
        for suffix in (".cxt", ".json"):
            path = tmp_path / f"{name}{suffix}"
            write_context(ctx, path)
            assert read_context(path) == ctx


def test_labels_with_newlines_rejected():
    with pytest.raises(ValueError):
        dumps_cxt(FormalContext(("a\nb",), ("m",), (0,)))
