/** Browser bootstrap: wires events to service calls and re-renders.
 *
 * One request at a time: every action is funnelled through `perform`, which
 * sets the busy flag, so critique buttons stay disabled while the service
 * answers.
 */

import { ServiceApiError, ServiceClient } from "./api.js";
import { renderApp } from "./render.js";
import {
  addEdit,
  displayedIds,
  initialState,
  removeEdit,
  sameSlot,
  validateEntry,
  withClosed,
  withDisplay,
  withError,
} from "./state.js";
import type { PanelEntry, ViewState } from "./types.js";

const DEFAULT_BASE = "http://127.0.0.1:8000";

let state: ViewState = initialState(DEFAULT_BASE);
let client = new ServiceClient(DEFAULT_BASE);
const root = document.getElementById("app")!;

function setState(next: ViewState): void {
  state = next;
  root.innerHTML = renderApp(state);
  bind();
}

async function perform(action: () => Promise<ViewState>): Promise<void> {
  if (state.busy) {
    return;
  }
  setState({ ...state, busy: true, error: null });
  try {
    setState(await action());
  } catch (err) {
    const message = err instanceof ServiceApiError ? err.message : `service unreachable: ${err}`;
    setState(withError(state, message));
  }
}

async function refreshCatalogs(): Promise<void> {
  try {
    const { catalogs } = await client.listCatalogs();
    setState({ ...state, catalogs, catalogId: state.catalogId ?? catalogs[0]?.id ?? null });
  } catch (err) {
    setState(withError(state, `cannot reach ${state.baseUrl}: ${err}`));
  }
}

function readDraft(): PanelEntry {
  const attr = (document.getElementById("draft-attr") as HTMLSelectElement | null)?.value ?? "";
  const operator = ((document.getElementById("draft-operator") as HTMLSelectElement | null)
    ?.value ?? "=") as PanelEntry["operator"];
  const theta = (document.getElementById("draft-theta") as HTMLInputElement | null)?.value ?? "";
  const weight = Number(
    (document.getElementById("draft-weight") as HTMLSelectElement | null)?.value ?? 3,
  );
  return { attr, operator, theta, weight };
}

async function startSession(): Promise<ViewState> {
  const baseUrl = (document.getElementById("base-url") as HTMLInputElement).value || DEFAULT_BASE;
  const catalogId = (document.getElementById("setup-catalog") as HTMLSelectElement).value;
  const mode = (document.getElementById("setup-mode") as HTMLSelectElement).value as "C" | "C+S";
  client = new ServiceClient(baseUrl);
  const { schema } = await client.getCatalog(catalogId);
  const session = await client.createSession(catalogId, mode);
  return {
    ...state,
    baseUrl,
    catalogId,
    mode,
    schema,
    sessionId: session.session_id,
    panel: [],
    display: null,
    summary: null,
    status: "editing",
    busy: false,
    error: null,
  };
}

async function submitDraft(): Promise<ViewState> {
  const entry = readDraft();
  const schema = state.schema.find((a) => a.name === entry.attr);
  const problem = validateEntry(schema, entry);
  if (problem) {
    return withError(state, problem);
  }
  const slotTaken = state.panel.some((p) => sameSlot(p, entry));
  if (slotTaken) {
    return withError(state, `${entry.attr}: that preference is already stated — remove it first`);
  }
  await client.updatePreferences(state.sessionId!, [addEdit(entry, schema!)]);
  return {
    ...state,
    panel: [...state.panel, entry],
    draft: { ...state.draft, theta: "" },
    busy: false,
    error: null,
  };
}

async function removeEntry(index: number): Promise<ViewState> {
  const entry = state.panel[index];
  const schema = state.schema.find((a) => a.name === entry.attr)!;
  await client.updatePreferences(state.sessionId!, [removeEdit(entry, schema)]);
  const panel = state.panel.filter((_, i) => i !== index);
  return { ...state, panel, busy: false, error: null };
}

async function search(): Promise<ViewState> {
  if (!state.panel.length) {
    return withError(state, "state at least one preference first");
  }
  const display = await client.getDisplay(state.sessionId!);
  return withDisplay(state, display, state.panel);
}

async function choose(optionId: string): Promise<ViewState> {
  if (!displayedIds(state).has(optionId)) {
    return withError(state, `${optionId} is not on display`);
  }
  const summary = await client.recordChoice(state.sessionId!, optionId);
  return withClosed(state, summary);
}

function bind(): void {
  document.getElementById("setup-form")?.addEventListener("submit", (e) => {
    e.preventDefault();
    void perform(startSession);
  });
  document.getElementById("base-url")?.addEventListener("change", () => {
    const url = (document.getElementById("base-url") as HTMLInputElement).value;
    client = new ServiceClient(url);
    state = { ...state, baseUrl: url };
    void refreshCatalogs();
  });
  document.getElementById("draft-form")?.addEventListener("submit", (e) => {
    e.preventDefault();
    void perform(submitDraft);
  });
  document.getElementById("draft-attr")?.addEventListener("change", () => {
    const entry = readDraft();
    const schema = state.schema.find((a) => a.name === entry.attr);
    const operator = schema?.kind === "qualitative" ? "=" : entry.operator;
    setState({ ...state, draft: { ...entry, operator, theta: "" } });
  });
  document.getElementById("draft-operator")?.addEventListener("change", () => {
    setState({ ...state, draft: readDraft() });
  });
  document.getElementById("search")?.addEventListener("click", () => {
    void perform(search);
  });
  document.getElementById("restart")?.addEventListener("click", () => {
    setState({ ...initialState(state.baseUrl), catalogs: state.catalogs, catalogId: state.catalogId });
    void refreshCatalogs();
  });
  root.querySelectorAll("[data-remove]").forEach((button) => {
    button.addEventListener("click", () => {
      const index = Number((button as HTMLElement).dataset.remove);
      void perform(() => removeEntry(index));
    });
  });
  root.querySelectorAll("[data-choose]").forEach((button) => {
    button.addEventListener("click", () => {
      const id = (button as HTMLElement).dataset.choose!;
      void perform(() => choose(id));
    });
  });
}

setState(state);
void refreshCatalogs();
