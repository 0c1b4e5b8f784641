import json

import pytest

from rbx.campaigns import CampaignReport, CheckRecord, orbit_report, replay_conjugations
from rbx.replays import DISCREPANCIES, REPLAYS, SEARCH_REPLAYS


@pytest.fixture(scope="module")
def replays():
    return replay_conjugations()


@pytest.fixture(scope="module")
def orbits():
    return orbit_report()


def test_record_status_is_validated():
    with pytest.raises(ValueError):
        CheckRecord("x", "maybe")


def test_green_means_no_fail():
    r = CampaignReport("t", [CheckRecord("a", "pass"), CheckRecord("b", "not-found")])
    assert r.green
    r.records.append(CheckRecord("c", "fail"))
    assert not r.green and r.counts()["fail"] == 1


def test_json_keeps_timing_out_of_the_body():
    r = CampaignReport("t", [CheckRecord("b", "pass"), CheckRecord("a", "pass")], duration=1.5)
    data = json.loads(r.to_json())
    assert set(data) == {"report", "timing"}
    assert [x["check"] for x in data["report"]["records"]] == ["a", "b"]
    assert "timing" not in json.loads(r.to_json(with_timing=False))


def test_replays_green(replays):
    assert replays.green, replays.to_text()
    assert replays.extra["distinct_replays"] == len(REPLAYS) >= 15


def test_search_replays_find_conjugators(replays):
    for sr in SEARCH_REPLAYS:
        rec = replays.record(f"search:{sr.id}")
        assert rec.status == "pass", rec.detail


def test_discrepancies_are_confirmed(replays):
    got = {d["id"]: d["confirmed"] for d in replays.extra["discrepancies"]}
    assert got == {d.id: True for d in DISCREPANCIES}


def test_orbit_report_green(orbits):
    assert orbits.green
    assert orbits.extra["pairs"] == 630 and orbits.extra["unclassified"] == []


@pytest.mark.parametrize("group", "abcdef")
def test_six_tuple_groups(orbits, group):
    assert orbits.record(f"group:{group}").status == "pass"


def test_argued_pair_carries_bounded_search(orbits):
    assert orbits.record("conjugator:3-I|3-II").status == "not-found"
    rec = orbits.record("pair:3-I|3-II")
    assert rec.detail["basis"].startswith("argument")


def test_6iv_6v_separated_by_annihilators(orbits):
    rec = orbits.record("refined:f.ann-ker")
    assert rec.status == "pass"
    assert rec.detail["computed"] == {"6-IV": (0, 0), "6-V": (0, 2)}


def test_orbit_report_is_deterministic(orbits):
    again = orbit_report(conjugator_search=False)
    strip = lambda r: [x for x in r.canonical()["records"] if not x["check"].startswith("conjugator:")]
    assert strip(orbits) == strip(again)
