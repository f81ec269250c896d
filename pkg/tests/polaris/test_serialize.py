import pytest
import srsly

from polaris.apartments import apartment, generated_set
from polaris.certificates import extract_certificate
from polaris.errors import DimensionMismatch, PreconditionError
from polaris.grassmann import GrassmannGraph
from polaris.johnson import build_named_graph, polar_johnson_graph
from polaris.polar import build_polar_space
from polaris.search import Pattern, search_embeddings
from polaris.serialize import (
    abstract_export,
    apartment_to_json,
    assign_from_json,
    certificate_from_json,
    certificate_to_json,
    grassmann_export,
    header,
    subspace_from_json,
    subspace_to_json,
    verdict_to_json,
    verify_input_from_json,
    verify_input_to_json,
    search_report_to_json,
)
from polaris.theorems import verify_theorem
from polaris.util import dumps_json


W3 = build_polar_space("symplectic", 3, 2)


def through_text(data):
    return srsly.json_loads(dumps_json(data))


def test_subspaces_are_stored_as_canonical_rows():
    line = apartment(W3, W3.standard_frame(), 1).members[0]
    data = through_text(subspace_to_json(line))
    assert data == {"p": 2, "ambient": 6, "rows": [list(r) for r in line.rows]}
    assert subspace_from_json(W3, data) == line
    assert subspace_from_json(W3, {"p": 2, "ambient": 6, "rows": []}).is_empty

def test_subspace_must_fit_the_space():
    with pytest.raises(DimensionMismatch):
        subspace_from_json(W3, {"p": 3, "ambient": 6, "rows": [[1, 0, 0, 0, 0, 0]]})

def test_assignment_rejects_repeated_vertices():
    item = {"vertex": [1, 2], "subspace": subspace_to_json(W3.empty())}
    with pytest.raises(PreconditionError, match="twice"):
        assign_from_json(W3, [item, item])

def test_apartment_document():
    data = apartment_to_json(apartment(W3, W3.standard_frame(), 1))
    assert (data["k"], data["m"], data["l"]) == (1, 1, 3)
    assert data["base"]["rows"] == []
    assert len(data["members"]) == 12
    assert data["members"][0]["vertex"] == [1, 2]

def test_certificate_survives_a_round_trip():
    W5 = build_polar_space("symplectic", 5, 2)
    a = generated_set(W5, 2, 1, 4)
    certificate = extract_certificate(a.embedding())
    again = certificate_from_json(W5, through_text(certificate_to_json(certificate)))
    assert again.N == certificate.N
    assert again.Q == certificate.Q
    assert again.frame == certificate.frame
    assert again.spanning_table == certificate.spanning_table
    assert again.members(W5) == a.members

def test_verifier_input_survives_a_round_trip():
    f = apartment(W3, W3.standard_frame(), 1).embedding()
    data = through_text(verify_input_to_json(W3, f.image, m=1, l=3, embedding=f))
    polar, params, members, embedding = verify_input_from_json(data)
    assert polar.rank == 3 and polar.kind == "symplectic"
    assert params == {"k": 1, "m": 1, "l": 3}
    assert members == f.image
    assert embedding.assign == f.assign

def test_verifier_input_errors():
    with pytest.raises(ValueError, match="missing"):
        verify_input_from_json({"kind": "symplectic", "n": 3, "p": 2})
    data = verify_input_to_json(W3, apartment(W3, W3.standard_frame(), 1).members)
    with pytest.raises(DimensionMismatch):
        verify_input_from_json(dict(data, k=2))
    f = apartment(W3, W3.standard_frame(), 1).embedding()
    with pytest.raises(ValueError, match="needs l and m"):
        verify_input_from_json(verify_input_to_json(W3, f.image, embedding=f))

def test_verdicts():
    accepted = verify_theorem("thm4.1", W3, xs=apartment(W3, W3.standard_frame(), 2).members)
    data = through_text(verdict_to_json(accepted))
    assert data["accepted"] and data["N_dim"] == -1
    assert set(data["certificate"]) == {"N", "Q", "spanning_table", "l", "m", "k"}
    rejected = verify_theorem("thm4.1", W3, xs=apartment(W3, W3.standard_frame(), 1).members)
    data = verdict_to_json(rejected)
    assert not data["accepted"] and data["clause"] == "hypothesis"
    assert "certificate" not in data

def test_pj_json_export():
    data = abstract_export(polar_johnson_graph(4, 1), "json")
    assert data["name"] == "PJ(4,1)"
    assert len(data["vertices"]) == 24
    assert data["vertices"][0] == "{1,2}"
    assert len(data["edges"]) == 96
    assert {len(v) for v in data["adjacency"].values()} == {8}

def test_dot_export():
    text = abstract_export(build_named_graph("hypercube", 3), "dot")
    assert text.startswith('graph "hypercube(3)" {')
    assert '  0 [label="000"];' in text
    assert text.count(" -- ") == 12
    assert text.endswith("}\n")

def test_grassmann_export_is_stable():
    W2 = build_polar_space("symplectic", 2, 2)
    first = grassmann_export(GrassmannGraph(W2, 0), "dot")
    assert first == grassmann_export(GrassmannGraph(W2, 0), "dot")
    assert first.startswith('graph "Gamma_0(symplectic,2,2)" {')
    assert first.count(" -- ") == 45

def test_search_report_document():
    report = search_embeddings(W3, Pattern("pj", 2, 0), 1, trials=5, seed=1)
    data = through_text(search_report_to_json(report))
    assert data["pattern"] == "PJ(2,0)"
    assert data["attempted"] == 5
    assert len(data["findings"]) == len(report.findings)

def test_header_carries_the_seed():
    assert header("build", 3)["polaris"]["seed"] == 3
    assert header("search")["polaris"]["command"] == "search"
