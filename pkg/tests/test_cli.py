"""Document format and command-line interface: parse/print roundtrips,
report determinism, exit codes, and the documented example invocations."""

import json

import pytest
from click.testing import CliRunner

from twocat.cli import main
from twocat.documents import (
    Document,
    DocumentError,
    Resolver,
    document_for_algebra,
    parse_document,
    print_document,
    serialize_balanced,
    serialize_bimodule,
    serialize_left_module,
    serialize_right_module,
)
from twocat.reltensor import relative_tensor
from twocat.structures import (
    catalog_algebra,
    catalog_entry,
    catalog_names,
    check_balanced,
    check_bimodule,
    check_module,
    regular_bimodule,
    regular_left_module,
    regular_right_module,
    report_passed,
    serialize_fusion_algebra,
)

ALGEBRAS = ["vec", "vec_z2", "vec_z2_omega", "vec_z3", "vec_z2z2",
            "fibonacci"]


def run(*args, doc=None):
    runner = CliRunner()
    if doc is not None:
        args = list(args) + ["--doc", "-"]
    return runner.invoke(main, list(args), input=doc,
                         standalone_mode=False, catch_exceptions=True)


def invoke(*args, doc=None):
    res = run(*args, doc=doc)
    code = res.exit_code
    if isinstance(res.exception, SystemExit):
        code = res.exception.code
    return code, res.output


def machine_section(output):
    text, _, tail = output.partition("---\n")
    assert tail, f"no machine section in {output!r}"
    return text, json.loads(tail)


# document roundtrips ---------------------------------------------------------

@pytest.mark.parametrize("name", sorted(catalog_names()))
def test_catalog_documents_roundtrip(name):
    entry = catalog_entry(name)
    text = json.dumps(entry)
    doc = parse_document(text)
    assert len(doc.entities) == 1
    again = parse_document(print_document(doc))
    assert again == doc
    assert print_document(again) == print_document(doc)


@pytest.mark.parametrize("name", ALGEBRAS)
def test_serialized_algebra_reloads_identically(name):
    alg = catalog_algebra(name)
    doc = document_for_algebra(alg, "A")
    loaded = Resolver(parse_document(print_document(doc))).algebra("A")
    assert loaded == alg


def test_explicit_module_entities_roundtrip():
    alg = catalog_algebra("vec_z2_omega")
    entities = {
        "A": serialize_fusion_algebra(alg),
        "M": serialize_right_module(regular_right_module(alg), "A"),
        "N": serialize_left_module(regular_left_module(alg), "A"),
    }
    doc = parse_document(print_document(Document(alg.A.ambient.field,
                                                 entities)))
    res = Resolver(doc)
    assert report_passed(check_module(res.right_module("M")))
    assert report_passed(check_module(res.left_module("N")))
    assert res.right_module("M") == regular_right_module(res.algebra("A"))


def test_explicit_bimodule_and_balanced_entities_roundtrip():
    alg = catalog_algebra("vec_z2")
    P = regular_bimodule(alg)
    rt = relative_tensor(alg, P.right, P.left)
    entities = {
        "A": serialize_fusion_algebra(alg),
        "M": serialize_right_module(P.right, "A"),
        "N": serialize_left_module(P.left, "A"),
        "P": serialize_bimodule(P, "N", "M"),
        "t": serialize_balanced(rt.t, "M", "N"),
    }
    doc = parse_document(print_document(Document(alg.A.ambient.field,
                                                 entities)))
    res = Resolver(doc)
    assert report_passed(check_bimodule(res.bimodule("P")))
    assert report_passed(check_balanced(res.balanced("t")))


def test_scalar_literal_parses_under_declared_conductor():
    doc = parse_document('{"field": {"kind": "cyclotomic", "conductor": 8},'
                         ' "entities": {}}')
    x = doc.field.parse("1/2*z^3 - 2")
    assert doc.field.format(x) == "-2 + 1/2*z^3"


def test_syntax_error_carries_line_and_column():
    with pytest.raises(DocumentError) as exc:
        parse_document('{\n  "field": oops\n}')
    assert exc.value.line == 2
    assert "column" in str(exc.value)


def test_unresolved_reference_names_the_reference():
    text = json.dumps({
        "field": {"kind": "cyclotomic", "conductor": 1},
        "entities": {"M": {"kind": "bimodule", "preset": "regular",
                           "algebra": "nosuch"}}})
    with pytest.raises(DocumentError, match="nosuch"):
        parse_document(text)


# command examples ------------------------------------------------------------

def test_check_algebra_lists_equations_and_passes():
    code, output = invoke("check", "algebra", "vec_z2")
    assert code == 0
    text, payload = machine_section(output)
    assert "algebraassociativity: pass" in text
    assert "algebraunitality: pass" in text
    assert payload["verdict"] == "pass"


def test_check_algebra_detects_broken_unit_constraint():
    entry = serialize_fusion_algebra(catalog_algebra("vec_z2"))
    entry["unit_constraints"]["lambda"]["g"] = "2"
    code, output = invoke("check", "algebra", "vec_z2",
                          doc=json.dumps(entry))
    assert code == 1
    _, payload = machine_section(output)
    assert payload["verdict"] == "fail"
    assert not all(payload["equations"].values())


def test_separability_dichotomy_exit_codes():
    code, output = invoke("separable", "vec_z2",
                          "--ambient", "2vectg:Z2", "--field", "gf:2")
    assert code == 1
    _, payload = machine_section(output)
    assert payload["verdict"] == "infeasible"
    code, output = invoke("separable", "vec_z2", "--ambient", "2vectg:Z2")
    assert code == 0
    assert machine_section(output)[1]["verdict"] == "pass"


def test_tensor_example_has_rank_two():
    code, output = invoke("tensor", "--over", "vec_z2",
                          "kz2_module", "kz2_module")
    assert code == 0
    _, payload = machine_section(output)
    assert payload["summary"]["rank"] == 2
    assert payload["summary"]["splitting_dims"] == [1, 1]


def test_verify_monad_lists_all_five_equations():
    code, output = invoke("verify-monad", "--over", "fibonacci",
                          "regular:fibonacci", "regular:fibonacci")
    assert code == 0
    _, payload = machine_section(output)
    assert sorted(payload["equations"]) == [
        "monadassociativity", "monadcoassociativity",
        "monadfrobeniusleft", "monadfrobeniusright",
        "monadsplitidempotent"]


def test_center_reports_block_data():
    code, output = invoke("center", "fibonacci")
    assert code == 0
    _, payload = machine_section(output)
    assert payload["summary"]["center_rank"] == 4
    assert payload["summary"]["block_dims"] == [1, 1, 1, 2]


def test_indecomposable_passes_on_catalog():
    code, output = invoke("indecomposable", "vec_z3")
    assert code == 0
    assert machine_section(output)[1]["summary"]["endomorphism_dim"] == 1


def test_ew_roundtrip_command():
    code, output = invoke("ew-roundtrip", "regular:vec_z2")
    assert code == 0
    _, payload = machine_section(output)
    assert payload["equations"]["ewrankpreserved"]


def test_morita_test_certificate_via_document():
    doc = json.dumps({
        "field": {"kind": "cyclotomic", "conductor": 1},
        "entities": {
            "E": {"kind": "fusion_algebra", "preset": "end_rank2"},
            "col": {"kind": "bimodule", "preset": "column",
                    "matrix_algebra": "E", "base_algebra": "vec"},
            "row": {"kind": "bimodule", "preset": "row",
                    "matrix_algebra": "E", "base_algebra": "vec"}}})
    code, output = invoke("morita-test", "col", "row", doc=doc)
    assert code == 0
    _, payload = machine_section(output)
    assert payload["equations"]["certificateverifies"]


def test_unresolved_name_exits_with_error():
    code, output = invoke("check", "algebra", "nosuch")
    assert code == 2


def test_catalog_list_is_sorted_and_complete():
    code, output = invoke("catalog", "list")
    assert code == 0
    _, payload = machine_section(output)
    assert payload["summary"]["entries"] == sorted(catalog_names())
    assert set(ALGEBRAS) <= set(payload["summary"]["entries"])


# determinism -----------------------------------------------------------------

def test_reports_are_byte_identical_across_invocations():
    outputs = [invoke("center", "vec_z2_omega")[1] for _ in range(2)]
    assert outputs[0] == outputs[1]


def test_figures_are_deterministic(tmp_path):
    blobs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        code, _ = invoke("check", "algebra", "fibonacci",
                         "--figures", str(out))
        assert code == 0
        files = sorted(out.iterdir())
        assert [f.name for f in files] == ["check-algebra-fibonacci.png"]
        blobs.append(files[0].read_bytes())
    assert blobs[0] == blobs[1]
