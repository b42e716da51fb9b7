import json

import pytest

from fastapi.testclient import TestClient

from relcomm.documents import dump_pxm, dump_table_algebra, dump_ring_document
from relcomm.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


@pytest.fixture(scope="module")
def s3_doc(request):
    from relcomm.constructions import build_group
    return dump_table_algebra(build_group("symmetric:3"))


@pytest.fixture(scope="module")
def ring_doc():
    from relcomm.constructions import TruncatedRingSpec
    return dump_ring_document(
        TruncatedRingSpec(p=2, generators=("a",), nil_squares=False,
                          max_degree=3),
        subsets={"Ia2": ["a^2"]})


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_validate_ok(client, s3_doc):
    resp = client.post("/validate", json={"algebra": s3_doc})
    assert resp.status_code == 200
    body = resp.json()
    assert body["command"] == "validate"
    assert body["result"]["valid"] is True
    assert body["result"]["algebra"]["size"] == 6


def test_validate_broken(client, s3_doc):
    doc = json.loads(json.dumps(s3_doc))
    doc["ops"]["inv"]["table"][3] = 3  # a 3-cycle is not self-inverse
    resp = client.post("/validate", json={"algebra": doc})
    assert resp.status_code == 400
    err = resp.json()["error"]
    assert err["type"] in ("GroupAxiomViolation",)
    assert "inverse" in err["reason"] or "unit" in err["reason"]


def test_validate_schema_error_is_422(client):
    resp = client.post("/validate", json={"algebra": {"kind": "table"}})
    assert resp.status_code == 422


def test_satisfies(client, s3_doc):
    resp = client.post("/satisfies", json={"algebra": s3_doc,
                                           "basis": "abelian"})
    assert resp.status_code == 200
    assert resp.json()["result"] is False


def test_commutator_higgins(client, s3_doc):
    resp = client.post("/commutator", json={"algebra": s3_doc,
                                            "higgins": True})
    assert resp.status_code == 200
    body = resp.json()
    assert body["result"]["size"] == 3
    assert body["result"]["indices"] == [0, 3, 4]
    assert body["witnesses"]
    assert body["stats"]["host_size"] == 6


def test_commutator_needs_basis(client, s3_doc):
    resp = client.post("/commutator", json={"algebra": s3_doc})
    assert resp.status_code == 400


def test_commutator_ring_subsets(client, ring_doc):
    resp = client.post("/commutator", json={"algebra": ring_doc,
                                            "left": "Ia2", "right": "all",
                                            "basis": "exp2"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["result"]["size"] == 1  # [ (a^2), R ]_{x^2} is trivial


def test_cvalues_and_image_condition(client, ring_doc):
    resp = client.post("/cvalues", json={"algebra": ring_doc,
                                         "basis": "exp2"})
    assert resp.status_code == 200
    assert resp.json()["result"]["elements"] == ["0", "a^3"]
    resp2 = client.post("/image-condition", json={"algebra": ring_doc,
                                                  "basis": "exp2"})
    assert resp2.json()["result"] is False


def test_central(client, s3_doc):
    doc = dict(s3_doc, subsets={"A3": [3]})
    for direct in (False, True):
        resp = client.post("/central", json={"algebra": doc, "ideal": "A3",
                                             "basis": "abelian",
                                             "direct": direct})
        assert resp.status_code == 200
        assert resp.json()["result"] is False


def test_oracle(client, s3_doc):
    resp = client.post("/oracle", json={"algebra": s3_doc,
                                        "basis": "abelian"})
    assert resp.status_code == 200
    assert resp.json()["result"]["indices"] == [0, 3, 4]


def test_oracle_guard(client):
    from relcomm.constructions import build_group
    doc = dump_table_algebra(build_group("symmetric:4"))
    resp = client.post("/oracle", json={"algebra": doc, "basis": "abelian"})
    assert resp.status_code == 409
    assert resp.json()["error"]["type"] == "SizeGuardExceeded"


def test_reflect(client, s3_doc):
    resp = client.post("/reflect", json={"algebra": s3_doc,
                                         "basis": "abelian"})
    body = resp.json()
    assert body["result"]["algebra"]["size"] == 2
    assert body["result"]["satisfies_basis"] is True
    assert body["result"]["kernel"]["size"] == 3
    assert body["result"]["document"]["size"] == 2


def test_peiffer_endpoint(client):
    from helpers import c4_over_c2_module
    doc = dump_pxm(c4_over_c2_module())
    resp = client.post("/peiffer", json={"module": doc})
    assert resp.status_code == 200
    res = resp.json()["result"]
    assert res["peiffer"]["K"] == [0, 2]
    assert res["is_crossed"] is False
    assert res["crosscheck"] is True


def test_pxm_convert_both_ways(client):
    from helpers import c4_over_c2_module
    doc = dump_pxm(c4_over_c2_module())
    resp = client.post("/pxm-convert", json={"module": doc})
    assert resp.status_code == 200
    carrier_doc = resp.json()["result"]["document"]
    assert carrier_doc["size"] == 8
    assert "d" in carrier_doc["ops"] and "c" in carrier_doc["ops"]
    back = client.post("/pxm-convert", json={"algebra": carrier_doc})
    assert back.status_code == 200
    module_doc = back.json()["result"]["module"]
    assert module_doc["C"]["size"] == 4
    assert module_doc["G"]["size"] == 2
    both = client.post("/pxm-convert", json={"module": doc,
                                             "algebra": carrier_doc})
    assert both.status_code == 400


def test_make_endpoints(client):
    resp = client.post("/make-group", json={"kind": "cyclic:2xcyclic:3"})
    assert resp.status_code == 200
    assert resp.json()["result"]["algebra"]["size"] == 6
    resp = client.post("/make-ring", json={
        "p": 5, "generators": ["a1", "a2", "b"], "nil_squares": True,
        "max_degree": 3, "subsets": {"S": {"ideal_of": ["b"]}}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["result"]["algebra"]["dimension"] == 7
    assert body["result"]["document"]["subsets"]["S"]["ideal_of"] == ["b"]


def test_demo_endpoint_and_unknown(client):
    resp = client.post("/demo/cex2", json={})
    assert resp.status_code == 200
    body = resp.json()
    assert body["result"]["ok"] is True
    assert "a^2" in body["result"]["headline"]
    missing = client.post("/demo/nope", json={})
    assert missing.status_code == 400


def test_engine_options_forwarded(client, s3_doc):
    resp = client.post("/oracle", json={"algebra": s3_doc,
                                        "basis": "abelian",
                                        "options": {"oracle_cap": 2}})
    assert resp.status_code == 409


def test_json_outputs_are_stable(client, ring_doc):
    payload = {"algebra": ring_doc, "basis": "exp2"}
    a = client.post("/commutator", json=payload).content
    b = client.post("/commutator", json=payload).content
    assert a == b  # byte-stable for a fixed configuration
