"""Regenerates the recorded-session fixture used by the replay tests.

Runs three scripted sessions against a service over the housing catalog and
freezes the event logs. The expected statistics are fixed by construction:

    C+S: two sessions, cycles 3 and 3, initial 2 and 1, final 4 and 3
         -> means: cycles 3.0, initial 1.5, final 3.5, increment 2.0
    C:   one session, cycles 1, initial 1, final 1
         -> means: cycles 1.0, initial 1.0, final 1.0, increment 0.0

Usage: python tests/fixtures/make_service_fixture.py
"""

import json
import os
import shutil

from prefsearch.catalog import catalog_to_json
from prefsearch.fixtures import housing_catalog
from prefsearch.service import CritiquingService, ServiceConfig

HERE = os.path.dirname(os.path.abspath(__file__))
TARGET = os.path.join(HERE, "service_replay")


def rel(attr, op, theta=None, weight=3):
    pref = {"attr": attr, "operator": op, "weight": weight}
    if theta is not None:
        pref["theta"] = theta
    return {"op": "add", "preference": pref}


def exchange(entry):
    return {"op": "add", "preference": entry}


def main():
    shutil.rmtree(TARGET, ignore_errors=True)
    service = CritiquingService(data_dir=TARGET, config=ServiceConfig())
    service.add_catalog(catalog_to_json(housing_catalog()), catalog_id="housing")

    # Session 1 (C+S): two initial preferences, then two refinement cycles.
    s1 = service.create_session("housing", "C+S")
    service.update_preferences(s1.id, [
        exchange({"attr": "rent", "variant": "directional",
                  "direction": "smaller_better", "weight": 3}),
        rel("furnished", "=", "no"),
    ])
    service.get_display(s1.id)
    service.update_preferences(s1.id, [rel("distance", "<", 10)])
    service.get_display(s1.id)
    service.update_preferences(s1.id, [rel("type", "=", "studio", weight=2)])
    display = service.get_display(s1.id)
    service.record_final_choice(s1.id, display["candidates"][0]["id"])

    # Session 2 (C): single cycle, choose and leave.
    s2 = service.create_session("housing", "C")
    service.update_preferences(s2.id, [rel("rent", "<", 650, weight=4)])
    display = service.get_display(s2.id)
    service.record_final_choice(s2.id, display["candidates"][0]["id"])

    # Session 3 (C+S): the worked walkthrough ending at o4.
    s3 = service.create_session("housing", "C+S")
    service.update_preferences(s3.id, [
        exchange({"attr": "rent", "variant": "directional",
                  "direction": "smaller_better", "weight": 3})])
    service.get_display(s3.id)
    service.update_preferences(s3.id, [rel("furnished", "=", "no")])
    service.get_display(s3.id)
    service.update_preferences(s3.id, [rel("distance", "<", 10)])
    display = service.get_display(s3.id)
    assert display["candidates"][0]["id"] == "o4"
    service.record_final_choice(s3.id, "o4")

    expected = {
        "modes": {
            "C": {"sessions": 1, "cycles": 1.0, "initial_preferences": 1.0,
                  "final_preferences": 1.0, "increment": 0.0},
            "C+S": {"sessions": 2, "cycles": 3.0, "initial_preferences": 1.5,
                    "final_preferences": 3.5, "increment": 2.0},
        }
    }
    got = service.aggregate_stats()
    assert got == expected, f"stats drifted: {got}"
    with open(os.path.join(TARGET, "expected_stats.json"), "w", encoding="utf-8") as f:
        json.dump(expected, f, indent=2)
    with open(os.path.join(TARGET, "meta.json"), "w", encoding="utf-8") as f:
        json.dump({"criterion": "utility", "strategy": "prob_joint"}, f)
    print(f"fixture written to {TARGET}")


if __name__ == "__main__":
    main()
