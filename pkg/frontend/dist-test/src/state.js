/** View-state construction, client-side validation, and edit payloads.
 *
 * The client never derives model state itself: every transition here only
 * records what the service answered, so replaying the service's event log
 * reproduces exactly what the user saw.
 */
export const WEIGHTS = [1, 2, 3, 4, 5];
export function initialState(baseUrl) {
    return {
        baseUrl,
        catalogs: [],
        catalogId: null,
        schema: [],
        mode: "C+S",
        sessionId: null,
        panel: [],
        draft: { attr: "", operator: "=", theta: "", weight: 3 },
        display: null,
        summary: null,
        status: "setup",
        busy: false,
        error: null,
    };
}
export function operatorsFor(schema) {
    return schema.kind === "numeric" ? ["<", "=", ">", "lowest", "highest"] : ["="];
}
/** Validate a panel entry against the catalog schema; null when acceptable. */
export function validateEntry(schema, entry) {
    if (!schema) {
        return "pick an attribute";
    }
    if (!operatorsFor(schema).includes(entry.operator)) {
        return `${schema.name}: operator ${entry.operator} does not apply`;
    }
    if (entry.weight < 1 || entry.weight > 5 || !Number.isInteger(entry.weight)) {
        return "importance must be a whole number from 1 to 5";
    }
    if (entry.operator === "lowest" || entry.operator === "highest") {
        return null; // no reference value involved
    }
    if (schema.kind === "numeric") {
        const value = Number(entry.theta);
        if (entry.theta.trim() === "" || Number.isNaN(value)) {
            return `${schema.name}: enter a number`;
        }
        if (schema.lo !== undefined && schema.hi !== undefined && (value < schema.lo || value > schema.hi)) {
            return `${schema.name}: value must lie in [${schema.lo}, ${schema.hi}]`;
        }
        return null;
    }
    if (!schema.values || !schema.values.includes(entry.theta)) {
        return `${schema.name}: pick one of ${schema.values?.join(", ")}`;
    }
    return null;
}
/** The wire payload of one panel entry: relational form for <, =, >, the
 * exchange form for the directional shortcuts. */
export function entryPreferencePayload(entry, schema) {
    if (entry.operator === "lowest" || entry.operator === "highest") {
        return {
            attr: entry.attr,
            variant: "directional",
            direction: entry.operator === "lowest" ? "smaller_better" : "larger_better",
            weight: entry.weight,
        };
    }
    const theta = schema.kind === "numeric" ? Number(entry.theta) : entry.theta;
    return { attr: entry.attr, operator: entry.operator, theta, weight: entry.weight };
}
export function addEdit(entry, schema) {
    return { op: "add", preference: entryPreferencePayload(entry, schema) };
}
export function removeEdit(entry, schema) {
    return { op: "remove", preference: entryPreferencePayload(entry, schema) };
}
export function changeEdit(entry, schema) {
    return { op: "change", preference: entryPreferencePayload(entry, schema) };
}
/** Two entries occupy the same panel slot when attribute and shape agree. */
export function sameSlot(a, b) {
    if (a.attr !== b.attr) {
        return false;
    }
    const shape = (e) => e.operator === "lowest" || e.operator === "highest" ? "directional" : e.operator;
    return shape(a) === shape(b);
}
export function describeEntry(entry) {
    switch (entry.operator) {
        case "lowest":
            return `${entry.attr}: lowest preferred (importance ${entry.weight})`;
        case "highest":
            return `${entry.attr}: highest preferred (importance ${entry.weight})`;
        default:
            return `${entry.attr} ${entry.operator} ${entry.theta} (importance ${entry.weight})`;
    }
}
// --- transitions (all fed by service responses) ---------------------------
export function withDisplay(state, display, panel) {
    return { ...state, display, panel, status: "displayed", error: null, busy: false };
}
export function withClosed(state, summary) {
    return { ...state, summary, status: "closed", error: null, busy: false };
}
export function withError(state, message) {
    return { ...state, error: message, busy: false };
}
export function displayedIds(state) {
    if (!state.display) {
        return new Set();
    }
    return new Set([...state.display.candidates, ...state.display.suggestions].map((o) => o.id));
}
