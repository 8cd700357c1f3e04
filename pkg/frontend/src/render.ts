/** Pure rendering: ViewState in, HTML string out. No DOM reads, no state. */

import { describeEntry, operatorsFor, WEIGHTS } from "./state.js";
import type { AttributeSchema, DisplayOption, PanelEntry, ViewState } from "./types.js";

function esc(value: unknown): string {
  return String(value)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function optionCard(option: DisplayOption, schema: AttributeSchema[], kind: "candidate" | "suggestion"): string {
  const rows = schema
    .map((a) => `<tr><th>${esc(a.name)}</th><td>${esc(option.values[a.name])}</td></tr>`)
    .join("");
  const badge = kind === "suggestion" ? '<span class="badge">suggestion</span>' : "";
  return `
    <article class="option ${kind}" data-option="${esc(option.id)}">
      <header><strong>${esc(option.id)}</strong>${badge}</header>
      <table>${rows}</table>
      <button class="choose" data-choose="${esc(option.id)}">choose ${esc(option.id)}</button>
    </article>`;
}

function panelList(panel: PanelEntry[]): string {
  if (!panel.length) {
    return '<p class="hint">No preferences stated yet.</p>';
  }
  const items = panel
    .map(
      (entry, i) => `
      <li>
        <span>${esc(describeEntry(entry))}</span>
        <button data-remove="${i}" title="remove this preference">remove</button>
      </li>`,
    )
    .join("");
  return `<ul class="panel-list">${items}</ul>`;
}

function draftForm(state: ViewState): string {
  const schema = state.schema;
  const current = schema.find((a) => a.name === state.draft.attr);
  const attrOptions = ['<option value="">attribute…</option>']
    .concat(schema.map((a) => `<option value="${esc(a.name)}" ${a.name === state.draft.attr ? "selected" : ""}>${esc(a.name)}</option>`))
    .join("");
  const ops = current ? operatorsFor(current) : [];
  const opOptions = ops
    .map((op) => `<option value="${esc(op)}" ${op === state.draft.operator ? "selected" : ""}>${esc(op)}</option>`)
    .join("");
  const needsTheta = state.draft.operator !== "lowest" && state.draft.operator !== "highest";
  let thetaField = "";
  if (current && needsTheta) {
    if (current.kind === "qualitative") {
      const valueOptions = (current.values ?? [])
        .map((v) => `<option value="${esc(v)}" ${v === state.draft.theta ? "selected" : ""}>${esc(v)}</option>`)
        .join("");
      thetaField = `<select id="draft-theta"><option value="">value…</option>${valueOptions}</select>`;
    } else {
      thetaField = `<input id="draft-theta" type="number" placeholder="${current.lo}–${current.hi}"
        value="${esc(state.draft.theta)}">`;
    }
  }
  const weightOptions = WEIGHTS.map(
    (w) => `<option value="${w}" ${w === state.draft.weight ? "selected" : ""}>${w}</option>`,
  ).join("");
  return `
    <form id="draft-form">
      <select id="draft-attr">${attrOptions}</select>
      <select id="draft-operator" ${current ? "" : "disabled"}>${opOptions}</select>
      ${thetaField}
      <label>importance <select id="draft-weight">${weightOptions}</select></label>
      <button id="draft-add" type="submit" ${state.busy ? "disabled" : ""}>state preference</button>
    </form>`;
}

function displaySection(state: ViewState): string {
  if (!state.display) {
    return '<p class="hint">State a preference, then search.</p>';
  }
  const cards = (options: DisplayOption[], kind: "candidate" | "suggestion") =>
    options.map((o) => optionCard(o, state.schema, kind)).join("");
  const suggestions = state.display.suggestions.length
    ? `<h3>Suggestions — worth a look</h3>
       <div class="options suggestions">${cards(state.display.suggestions, "suggestion")}</div>`
    : "";
  return `
    <p class="cycle">critiquing cycle ${state.display.cycle}</p>
    <h3>Best matches</h3>
    <div class="options candidates">${cards(state.display.candidates, "candidate")}</div>
    ${suggestions}`;
}

function summarySection(state: ViewState): string {
  const s = state.summary;
  if (!s) {
    return "";
  }
  return `
    <section class="summary">
      <h2>Session finished</h2>
      <p>You chose <strong>${esc(s.final_choice)}</strong> after ${s.cycles} critiquing
      cycle${s.cycles === 1 ? "" : "s"}.</p>
      <table>
        <tr><th>initial preferences</th><td>${s.initial_preferences}</td></tr>
        <tr><th>final preferences</th><td>${s.final_preferences}</td></tr>
        <tr><th>preferences added along the way</th><td>${s.increment}</td></tr>
      </table>
    </section>`;
}

function setupSection(state: ViewState): string {
  const catalogOptions = state.catalogs
    .map(
      (c) => `<option value="${esc(c.id)}" ${c.id === state.catalogId ? "selected" : ""}>
        ${esc(c.id)} (${c.n} options)</option>`,
    )
    .join("");
  return `
    <form id="setup-form">
      <label>service <input id="base-url" value="${esc(state.baseUrl)}"></label>
      <label>catalog <select id="setup-catalog">${catalogOptions}</select></label>
      <label>interface
        <select id="setup-mode">
          <option value="C+S" ${state.mode === "C+S" ? "selected" : ""}>candidates + suggestions</option>
          <option value="C" ${state.mode === "C" ? "selected" : ""}>candidates only</option>
        </select>
      </label>
      <button id="setup-start" type="submit">start session</button>
    </form>`;
}

export function renderApp(state: ViewState): string {
  const error = state.error ? `<div class="error" role="alert">${esc(state.error)}</div>` : "";
  if (state.status === "setup") {
    return `<h1>Find your option</h1>${error}${setupSection(state)}`;
  }
  if (state.status === "closed") {
    return `<h1>Find your option</h1>${error}${summarySection(state)}
      <button id="restart">start over</button>`;
  }
  const searchLabel = state.display ? "update results" : "search";
  return `
    <h1>Find your option</h1>
    ${error}
    <div class="layout">
      <aside class="panel">
        <h2>Your preferences</h2>
        ${panelList(state.panel)}
        ${draftForm(state)}
        <button id="search" ${state.busy || !state.panel.length ? "disabled" : ""}>
          ${searchLabel}</button>
      </aside>
      <main class="results">${displaySection(state)}</main>
    </div>`;
}
