/** Wire types of the critiquing service plus the client's view state. */

export type AttributeKind = "qualitative" | "numeric";

export interface AttributeSchema {
  name: string;
  kind: AttributeKind;
  lo?: number;
  hi?: number;
  discrete?: boolean;
  values?: string[];
}

export interface CatalogSchema {
  schema: AttributeSchema[];
  options: { id: string; values: Record<string, string | number> }[];
}

export interface CatalogSummary {
  id: string;
  n: number;
  k: number;
}

export interface DisplayOption {
  id: string;
  values: Record<string, string | number>;
}

export interface Display {
  cycle: number;
  candidates: DisplayOption[];
  suggestions: DisplayOption[];
}

export interface SessionSummary {
  session_id: string;
  catalog_id: string;
  mode: string;
  cycles: number;
  initial_preferences: number;
  final_preferences: number;
  increment: number;
  final_choice: string | null;
  closed: boolean;
}

export interface ApiError {
  error: string;
  detail: string;
  field?: string;
}

/** Operators offered by the preference panel. Relational ones map onto the
 * service's relational form; lowest/highest become directional preferences. */
export type PanelOperator = "<" | "=" | ">" | "lowest" | "highest";

export interface PanelEntry {
  attr: string;
  operator: PanelOperator;
  theta: string; // raw input; validated against the schema before submission
  weight: number; // importance 1..5
}

export type EditOp = "add" | "change" | "remove";

export interface PreferenceEdit {
  op: EditOp;
  preference: Record<string, unknown>;
}

export type Status = "setup" | "editing" | "displayed" | "closed";

export interface ViewState {
  baseUrl: string;
  catalogs: CatalogSummary[];
  catalogId: string | null;
  schema: AttributeSchema[];
  mode: "C" | "C+S";
  sessionId: string | null;
  panel: PanelEntry[]; // preferences currently stated on the service
  draft: PanelEntry; // the entry being edited
  display: Display | null;
  summary: SessionSummary | null;
  status: Status;
  busy: boolean;
  error: string | null;
}
