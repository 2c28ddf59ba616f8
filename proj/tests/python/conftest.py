import json
import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]
DATA = Path(os.environ.get("HCVIZ_TEST_DATA", ROOT / "tests" / "data"))
SCHEMAS = Path(os.environ.get("HCVIZ_SCHEMAS", ROOT / "schemas"))


@pytest.fixture
def data():
    return DATA


@pytest.fixture
def validate():
    jsonschema = pytest.importorskip("jsonschema")
    from referencing import Registry, Resource

    docs = {p.name: json.loads(p.read_text()) for p in SCHEMAS.glob("*.schema.json")}
    registry = Registry().with_resources(
        (doc["$id"], Resource.from_contents(doc)) for doc in docs.values()
    )

    def check(doc, name):
        schema = docs[name + ".schema.json"]
        jsonschema.Draft202012Validator(schema, registry=registry).validate(doc)

    return check
