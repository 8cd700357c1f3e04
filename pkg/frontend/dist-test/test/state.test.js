import assert from "node:assert/strict";
import test from "node:test";
import { addEdit, describeEntry, displayedIds, entryPreferencePayload, initialState, operatorsFor, sameSlot, validateEntry, withClosed, withDisplay, withError, } from "../src/state.js";
const rent = { name: "rent", kind: "numeric", lo: 400, hi: 800 };
const type = {
    name: "type",
    kind: "qualitative",
    values: ["room", "studio", "apartment"],
};
const entry = (over) => ({
    attr: "rent",
    operator: "<",
    theta: "600",
    weight: 3,
    ...over,
});
test("numeric attributes offer relational and directional operators", () => {
    assert.deepEqual(operatorsFor(rent), ["<", "=", ">", "lowest", "highest"]);
    assert.deepEqual(operatorsFor(type), ["="]);
});
test("validation catches out-of-domain and malformed input", () => {
    assert.equal(validateEntry(rent, entry({})), null);
    assert.match(validateEntry(rent, entry({ theta: "" })), /enter a number/);
    assert.match(validateEntry(rent, entry({ theta: "9001" })), /must lie in/);
    assert.match(validateEntry(rent, entry({ weight: 0 })), /1 to 5/);
    assert.match(validateEntry(undefined, entry({})), /pick an attribute/);
    assert.equal(validateEntry(type, entry({ attr: "type", operator: "=", theta: "studio" })), null);
    assert.match(validateEntry(type, entry({ attr: "type", operator: "=", theta: "castle" })), /pick one of/);
    // directional shortcut needs no reference value
    assert.equal(validateEntry(rent, entry({ operator: "lowest", theta: "" })), null);
});
test("payloads use the relational form, directionals the exchange form", () => {
    assert.deepEqual(entryPreferencePayload(entry({}), rent), {
        attr: "rent",
        operator: "<",
        theta: 600,
        weight: 3,
    });
    assert.deepEqual(entryPreferencePayload(entry({ operator: "lowest" }), rent), {
        attr: "rent",
        variant: "directional",
        direction: "smaller_better",
        weight: 3,
    });
    assert.equal(addEdit(entry({}), rent).op, "add");
});
test("panel slots distinguish polarities but not reference values", () => {
    assert.ok(sameSlot(entry({}), entry({ theta: "500", weight: 1 })));
    assert.ok(!sameSlot(entry({}), entry({ operator: ">" })));
    assert.ok(sameSlot(entry({ operator: "lowest" }), entry({ operator: "highest" })));
    assert.ok(!sameSlot(entry({}), entry({ attr: "distance" })));
});
test("transitions only record what the service answered", () => {
    const base = initialState("http://service");
    const display = {
        cycle: 1,
        candidates: [{ id: "o1", values: { rent: 400 } }],
        suggestions: [{ id: "o4", values: { rent: 600 } }],
    };
    const shown = withDisplay(base, display, [entry({})]);
    assert.equal(shown.status, "displayed");
    assert.deepEqual([...displayedIds(shown)].sort(), ["o1", "o4"]);
    const summary = {
        session_id: "s",
        catalog_id: "housing",
        mode: "C+S",
        cycles: 3,
        initial_preferences: 1,
        final_preferences: 3,
        increment: 2,
        final_choice: "o4",
        closed: true,
    };
    const closed = withClosed(shown, summary);
    assert.equal(closed.status, "closed");
    assert.equal(closed.summary?.final_choice, "o4");
    const failed = withError(shown, "boom");
    assert.equal(failed.error, "boom");
    assert.equal(failed.status, "displayed"); // no state loss on errors
});
test("entries describe themselves for the panel list", () => {
    assert.equal(describeEntry(entry({})), "rent < 600 (importance 3)");
    assert.equal(describeEntry(entry({ operator: "lowest" })), "rent: lowest preferred (importance 3)");
});
