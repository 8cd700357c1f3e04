/** End-to-end walkthrough against a live service process.
 *
 * Recreates the worked narrative: state "cheapest rent" and see o1 on top;
 * add "unfurnished" and see o3; add "distance under 10" and the target o4
 * leads the display; choose it. Three critiquing cycles in total.
 */
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { after, before, test } from "node:test";
import { ServiceClient } from "../src/api.js";
import { addEdit } from "../src/state.js";
const HOUSING = {
    id: "housing",
    schema: [
        { name: "rent", kind: "numeric", lo: 400, hi: 800 },
        { name: "type", kind: "qualitative", values: ["room", "studio", "apartment"] },
        { name: "distance", kind: "numeric", lo: 2, hi: 32 },
        { name: "furnished", kind: "qualitative", values: ["yes", "no"] },
    ],
    options: [
        { id: "o1", values: { rent: 400, type: "room", distance: 17, furnished: "yes" } },
        { id: "o2", values: { rent: 500, type: "room", distance: 32, furnished: "yes" } },
        { id: "o3", values: { rent: 600, type: "apartment", distance: 14, furnished: "no" } },
        { id: "o4", values: { rent: 600, type: "studio", distance: 5, furnished: "no" } },
        { id: "o5", values: { rent: 650, type: "apartment", distance: 32, furnished: "no" } },
        { id: "o6", values: { rent: 700, type: "studio", distance: 2, furnished: "yes" } },
        { id: "o7", values: { rent: 800, type: "apartment", distance: 7, furnished: "no" } },
    ],
};
let child;
let dataDir;
let baseUrl;
before(async () => {
    dataDir = mkdtempSync(join(tmpdir(), "prefsearch-ui-"));
    child = spawn("python3", ["-m", "prefsearch.cli", "serve", "--port", "0",
        "--data-dir", dataDir], { stdio: ["ignore", "pipe", "inherit"] });
    baseUrl = await new Promise((resolve, reject) => {
        const timer = setTimeout(() => reject(new Error("service did not start")), 15000);
        child.stdout.on("data", (chunk) => {
            const match = chunk.toString().match(/serving on (http:\/\/[^\s]+)/);
            if (match) {
                clearTimeout(timer);
                resolve(match[1]);
            }
        });
        child.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
    });
});
after(() => {
    child.kill();
    rmSync(dataDir, { recursive: true, force: true });
});
const schemaOf = (name) => HOUSING.schema.find((a) => a.name === name);
const panelEntry = (over) => ({ theta: "", weight: 3, ...over });
test("scripted walkthrough reaches the target in three critique cycles", async () => {
    const client = new ServiceClient(baseUrl);
    await client.addCatalog(HOUSING);
    const catalogs = await client.listCatalogs();
    assert.ok(catalogs.catalogs.some((c) => c.id === "housing" && c.n === 7));
    const session = await client.createSession("housing", "C+S");
    assert.equal(session.mode, "C+S");
    // Cycle 1: only "cheapest rent" stated; the cheapest option leads.
    await client.updatePreferences(session.session_id, [
        addEdit(panelEntry({ attr: "rent", operator: "lowest" }), schemaOf("rent")),
    ]);
    const first = await client.getDisplay(session.session_id);
    assert.equal(first.cycle, 1);
    assert.equal(first.candidates[0].id, "o1");
    assert.equal(first.candidates.length, 3);
    assert.equal(first.suggestions.length, 3);
    // Cycle 2: she wants it unfurnished; o3 takes the top spot.
    await client.updatePreferences(session.session_id, [
        addEdit(panelEntry({ attr: "furnished", operator: "=", theta: "no" }), schemaOf("furnished")),
    ]);
    const second = await client.getDisplay(session.session_id);
    assert.equal(second.cycle, 2);
    assert.equal(second.candidates[0].id, "o3");
    // Cycle 3: under ten minutes to the university; the target o4 surfaces.
    await client.updatePreferences(session.session_id, [
        addEdit(panelEntry({ attr: "distance", operator: "<", theta: "10" }), schemaOf("distance")),
    ]);
    const third = await client.getDisplay(session.session_id);
    assert.equal(third.cycle, 3);
    assert.equal(third.candidates[0].id, "o4");
    const summary = await client.recordChoice(session.session_id, "o4");
    assert.equal(summary.final_choice, "o4");
    assert.equal(summary.cycles, 3);
    assert.equal(summary.increment, 2); // one initial preference, two volunteered
    assert.equal(summary.closed, true);
});
test("service rejects stale choices after the display moved on", async () => {
    const client = new ServiceClient(baseUrl);
    const session = await client.createSession("housing", "C+S");
    await client.updatePreferences(session.session_id, [
        addEdit(panelEntry({ attr: "rent", operator: "lowest" }), schemaOf("rent")),
    ]);
    await client.getDisplay(session.session_id);
    await assert.rejects(client.recordChoice(session.session_id, "o7"), (err) => err.code === "not_displayed");
});
test("stats reflect the recorded walkthrough", async () => {
    const client = new ServiceClient(baseUrl);
    const stats = await client.getStats("C+S");
    assert.ok(stats.modes["C+S"].sessions >= 1);
    assert.ok(stats.modes["C+S"].cycles >= 1);
});
