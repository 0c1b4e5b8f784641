import dataclasses

import pytest

from rbx.algebra import F3, M2, M3
from rbx.campaigns import catalog_checks, verify_catalog
from rbx.catalog import (BLOCK_MINUS, BLOCK_PLUS, F3_CASES, build_catalog, get_entry, m3_entries,
                         primitive_operator)
from rbx.exactlinalg import kernel
from rbx.operators import OperatorMatrix, phi, rb_check


def test_counts():
    cat = build_catalog()
    assert len(m3_entries()) == 36
    assert sum(e.context is F3 and "primed" not in e.tags for e in cat) == 9
    assert sum(e.context is M2 and not e.is_family for e in cat) == 7
    assert sum(e.is_family for e in cat) == 3
    assert len(F3_CASES) == 9


def test_labels_are_unique():
    ids = [e.id for e in build_catalog()]
    assert len(ids) == len(set(ids))


def test_get_entry_accepts_bare_labels():
    assert get_entry("6-IV") is get_entry("M3.6-IV")
    with pytest.raises(KeyError):
        get_entry("9-IX")


def test_primitive_shape():
    R = primitive_operator(3, "a")
    for lab in ("e12", "e13", "e23"):
        assert not any(R.image(lab))
    for lab in ("e21", "e31", "e32"):
        assert R.image(lab) == tuple(-x for x in M3.basis_vector(lab))


@pytest.mark.parametrize("entry", [e for e in build_catalog() if "block-extension" in e.tags],
                         ids=lambda e: e.id)
def test_c_family_preamble(entry):
    ker, kerp = kernel(entry.operator.matrix), kernel(phi(entry.operator).matrix)
    assert all(ker.contains(M3.basis_vector(lab)) for lab in BLOCK_MINUS)
    assert all(kerp.contains(M3.basis_vector(lab)) for lab in BLOCK_PLUS)


def test_family_samples_are_rb():
    for entry in build_catalog():
        if entry.is_family:
            assert len(entry.samples) >= 5
            assert all(rb_check(R) for _, R in entry.instances())


def _corrupt(entry, label):
    """Flip the sign of one coefficient in the image of `label`."""
    R = entry.operator
    i = R.context.index(label)
    img = list(R.image(i))
    k = next(j for j, x in enumerate(img) if x)
    img[k] = -img[k]
    rows = [list(R.matrix.row(r)) for r in range(R.matrix.rows)]
    for r in range(len(rows)):
        rows[r][i] = img[r]
    from rbx.exactlinalg import Mat
    bad = OperatorMatrix(R.context, Mat.from_rows(rows), R.weight, R.name)
    return dataclasses.replace(entry, operator=bad)


def test_corrupt_entry_fails_alone():
    entries = list(build_catalog())
    target = next(i for i, e in enumerate(entries) if e.id == "M3.6-I")
    label = next(lab for lab in M3.basis_labels
                 if any(entries[target].operator.image(lab)) and lab not in ("e11", "e22", "e33"))
    entries[target] = _corrupt(entries[target], label)
    records = catalog_checks(entries)
    failed = [r for r in records if r.status == "fail"]
    assert [r.check for r in failed] == ["rb:M3.6-I"]
    a, b = failed[0].detail["witness"]
    assert a in M3.basis_labels and b in M3.basis_labels


def test_corrupt_expected_value_is_caught():
    entries = list(build_catalog())
    i = next(i for i, e in enumerate(entries) if e.id == "M3.8-I")
    entries[i] = dataclasses.replace(entries[i], expected={"ker_dims": (5, 6)})
    failed = [r.check for r in catalog_checks(entries) if r.status == "fail"]
    assert failed == ["expected:M3.8-I:ker_dims"]


def test_verify_catalog_is_deterministic():
    a, b = verify_catalog(), verify_catalog()
    assert a.green
    assert a.to_json(with_timing=False) == b.to_json(with_timing=False)
